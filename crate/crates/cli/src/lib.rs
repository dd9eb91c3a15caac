//! Commands behind the `simul-latency` binary. Each command returns its
//! rendered output so the binary only deals with files and exit codes.

use std::fs::File;
use std::io::{BufReader, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use simul_latency::io::{
    correspondence_tsv, read_traces, report_to_json, report_to_tsv, sweep_to_csv, ParseError,
};
use simul_latency::metrics::EvalError;
use simul_latency::{
    assign_ca_times, assign_nca_times, atd, corpus_aggregate, derive_chunks, evaluate_session,
    sweep, validate_trace, Case, EvalOptions, MetricError, MetricReport, PolicyError, PolicyKind,
    SentenceOutcome, SessionTrace, TimeModel, TimeUnit, TraceError,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("configuration conflict: {0}")]
    ConfigConflict(String),
    #[error("input file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("line {line}: invalid trace: {source}")]
    InvalidTrace { line: usize, source: TraceError },
    #[error("no sessions to evaluate")]
    EmptyCorpus,
    #[error("no session with id `{0}`")]
    IdNotFound(String),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },
}

impl CliError {
    /// 1 for usage and configuration problems, 2 for data problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::ConfigConflict(_) | CliError::Policy(_) => 1,
            _ => 2,
        }
    }

    fn io(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> CliError {
        let context = context.into();
        move |source| CliError::Io { context, source }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Tsv,
}

#[derive(Debug, Clone)]
pub struct EvalConfig {
    pub input: PathBuf,
    pub options: EvalOptions,
    pub format: OutputFormat,
    pub jobs: usize,
    pub skip_bad: bool,
}

impl EvalConfig {
    pub fn new(input: impl Into<PathBuf>) -> Self {
        Self {
            input: input.into(),
            options: EvalOptions::default(),
            format: OutputFormat::Json,
            jobs: 1,
            skip_bad: false,
        }
    }
}

#[derive(Debug)]
pub struct Evaluation {
    pub report: MetricReport,
    pub rendered: String,
    /// Lines moved to the sidecar file under `--skip-bad`.
    pub quarantined: usize,
    pub sidecar: Option<PathBuf>,
}

/// Where `--skip-bad` puts rejected lines.
pub fn sidecar_path(input: &Path) -> PathBuf {
    let mut name = input.as_os_str().to_owned();
    name.push(".rejected.jsonl");
    PathBuf::from(name)
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    match File::open(path) {
        Ok(f) => Ok(BufReader::new(f)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            Err(CliError::FileNotFound(path.to_path_buf()))
        }
        Err(e) => Err(CliError::io(format!("reading {}", path.display()))(e)),
    }
}

/// Parses and validates every line. Bad lines are returned separately when
/// `skip_bad` is set, otherwise the first one aborts.
fn load(path: &Path, skip_bad: bool) -> Result<(Vec<SessionTrace>, Vec<String>), CliError> {
    let lines = read_traces(open(path)?).map_err(CliError::io(format!("reading {}", path.display())))?;
    let mut traces = Vec::with_capacity(lines.len());
    let mut rejected = Vec::new();
    for (line, text, parsed) in lines {
        let checked = parsed
            .map_err(CliError::from)
            .and_then(|t| validate_trace(t).map_err(|source| CliError::InvalidTrace { line, source }));
        match checked {
            Ok(trace) => traces.push(trace),
            Err(e) if skip_bad => {
                eprintln!("skipping {e}");
                rejected.push(text);
            }
            Err(e) => return Err(e),
        }
    }
    Ok((traces, rejected))
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    if jobs == 0 {
        return Err(CliError::Usage("--jobs must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} worker threads: {e}")))
}

pub fn cmd_evaluate(config: &EvalConfig) -> Result<Evaluation, CliError> {
    let (traces, rejected) = load(&config.input, config.skip_bad)?;
    let sidecar = if rejected.is_empty() {
        None
    } else {
        let path = sidecar_path(&config.input);
        let mut f = File::create(&path).map_err(CliError::io(format!("creating {}", path.display())))?;
        for line in &rejected {
            writeln!(f, "{line}").map_err(CliError::io(format!("writing {}", path.display())))?;
        }
        Some(path)
    };

    let opts = &config.options;
    let results: Vec<Result<SentenceOutcome, CliError>> = pool(config.jobs)?.install(|| {
        traces
            .par_iter()
            .map(|trace| match evaluate_session(trace, opts) {
                Ok(m) => Ok(SentenceOutcome {
                    id: trace.id.clone(),
                    result: Ok(m),
                }),
                Err(EvalError::Trace(e @ TraceError::MissingTimestamps { .. })) => {
                    Err(CliError::ConfigConflict(format!(
                        "session `{}`: computation-aware evaluation but {e}",
                        trace.id
                    )))
                }
                Err(e) => Ok(SentenceOutcome {
                    id: trace.id.clone(),
                    result: Err(e.to_string()),
                }),
            })
            .collect()
    });
    let outcomes = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let report = corpus_aggregate(outcomes).map_err(|e| match e {
        MetricError::EmptyCorpus => CliError::EmptyCorpus,
        other => CliError::Usage(other.to_string()),
    })?;
    let unit = match opts.time_model {
        TimeModel::Nca => TimeUnit::Step,
        TimeModel::Ca => TimeUnit::Millisecond,
    };
    let rendered = match config.format {
        OutputFormat::Json => report_to_json(&report, unit),
        OutputFormat::Tsv => report_to_tsv(&report),
    };
    Ok(Evaluation {
        report,
        rendered,
        quarantined: rejected.len(),
        sidecar,
    })
}

/// Accepts `A..B`, `A..=B` (both inclusive) or a single value.
pub fn parse_range(text: &str) -> Result<RangeInclusive<usize>, CliError> {
    let bad = || CliError::Usage(format!("invalid range `{text}`, expected A..B"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    match text.split_once("..") {
        Some((a, b)) => Ok(num(a)?..=num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = num(text)?;
            Ok(v..=v)
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimulateConfig {
    pub case: Case,
    pub policies: Vec<PolicyKind>,
    pub range: RangeInclusive<usize>,
    /// Adds AP and CW columns.
    pub extra: bool,
}

pub fn cmd_simulate(config: &SimulateConfig) -> Result<String, CliError> {
    let result = sweep(config.case, &config.policies, config.range.clone())?;
    Ok(sweep_to_csv(&result, config.extra))
}

#[derive(Debug, Clone)]
pub struct InspectConfig {
    pub input: PathBuf,
    pub id: String,
    pub time_model: TimeModel,
    pub seg_ms: f64,
}

/// Per-token correspondence table of one session.
pub fn cmd_inspect(config: &InspectConfig) -> Result<String, CliError> {
    let lines = read_traces(open(&config.input)?)
        .map_err(CliError::io(format!("reading {}", config.input.display())))?;
    for (line, _, parsed) in lines {
        let trace = parsed?;
        if trace.id != config.id {
            continue;
        }
        let trace = validate_trace(trace).map_err(|source| CliError::InvalidTrace { line, source })?;
        let chunked = derive_chunks(&trace)
            .subsegment_speech(config.seg_ms)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let timed = match config.time_model {
            TimeModel::Nca => assign_nca_times::<f64>(&chunked),
            TimeModel::Ca => assign_ca_times::<f64>(&chunked)
                .map_err(|e| CliError::ConfigConflict(format!("session `{}`: {e}", trace.id)))?,
        };
        let result = atd(&timed).map_err(|e| CliError::Usage(format!("session `{}`: {e}", trace.id)))?;
        return Ok(correspondence_tsv(&result));
    }
    Err(CliError::IdNotFound(config.id.clone()))
}
