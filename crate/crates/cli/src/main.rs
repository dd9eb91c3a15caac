use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use simul_latency::trace::DEFAULT_SEGMENT_MS;
use simul_latency::{Case, EvalOptions, LatencyRatioMode, Metric, PolicyKind, TimeModel};
use simul_latency_cli::{
    cmd_evaluate, cmd_inspect, cmd_simulate, parse_range, CliError, EvalConfig, InspectConfig,
    OutputFormat, SimulateConfig,
};

#[derive(Parser)]
#[command(name = "simul-latency", version, about = "Latency metrics for simultaneous translation traces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score a JSONL file of session traces.
    Evaluate(EvaluateArgs),
    /// Run a synthetic wait-k / chunk-k sweep and write CSV.
    Simulate(SimulateArgs),
    /// Print the per-token delay table of one session.
    Inspect(InspectArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum TimeModelArg {
    Nca,
    Ca,
}

impl From<TimeModelArg> for TimeModel {
    fn from(v: TimeModelArg) -> Self {
        match v {
            TimeModelArg::Nca => TimeModel::Nca,
            TimeModelArg::Ca => TimeModel::Ca,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RatioArg {
    Output,
    Reference,
    Laal,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Tsv,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "nca")]
    time_model: TimeModelArg,
    /// Length ratio used for the AL column.
    #[arg(long, value_enum, default_value = "output")]
    ratio: RatioArg,
    /// Comma-separated subset of al,laal,ap,cw,atd.
    #[arg(long, value_delimiter = ',', default_value = "al,ap,cw,atd")]
    metrics: Vec<Metric>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Speech sub-segment length in milliseconds.
    #[arg(long, default_value_t = DEFAULT_SEGMENT_MS)]
    seg_ms: f64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Move malformed lines to `<input>.rejected.jsonl` instead of failing.
    #[arg(long)]
    skip_bad: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    case: Case,
    /// Policies for case1-3; ignored by case4/case5 (chunk-20).
    #[arg(long, value_delimiter = ',', default_value = "wait,chunk")]
    policies: Vec<PolicyKind>,
    /// Parameter range A..B: k for case1-3, L1 / L2 for case4 / case5.
    #[arg(long, alias = "k", alias = "L1", alias = "L2")]
    range: Option<String>,
    /// Also emit AP and CW columns.
    #[arg(long)]
    extra: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InspectArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    id: String,
    #[arg(long, value_enum, default_value = "nca")]
    time_model: TimeModelArg,
    #[arg(long, default_value_t = DEFAULT_SEGMENT_MS)]
    seg_ms: f64,
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            context: format!("writing {}", path.display()),
            source,
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                context: "writing stdout".into(),
                source,
            }),
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Evaluate(args) => {
            let config = EvalConfig {
                input: args.input,
                options: EvalOptions {
                    time_model: args.time_model.into(),
                    ratio: match args.ratio {
                        RatioArg::Output => LatencyRatioMode::Output,
                        RatioArg::Reference => LatencyRatioMode::Reference,
                        RatioArg::Laal => LatencyRatioMode::Laal,
                    },
                    metrics: args.metrics,
                    seg_ms: args.seg_ms,
                },
                format: match args.format {
                    FormatArg::Json => OutputFormat::Json,
                    FormatArg::Tsv => OutputFormat::Tsv,
                },
                jobs: args.jobs,
                skip_bad: args.skip_bad,
            };
            let evaluation = cmd_evaluate(&config)?;
            if let Some(path) = &evaluation.sidecar {
                eprintln!(
                    "{} malformed line(s) written to {}",
                    evaluation.quarantined,
                    path.display()
                );
            }
            emit(&evaluation.rendered, args.out.as_ref())
        }
        Command::Simulate(args) => {
            let range = match &args.range {
                Some(text) => parse_range(text)?,
                None => args.case.default_range(),
            };
            let csv = cmd_simulate(&SimulateConfig {
                case: args.case,
                policies: args.policies,
                range,
                extra: args.extra,
            })?;
            emit(&csv, args.out.as_ref())
        }
        Command::Inspect(args) => {
            let table = cmd_inspect(&InspectConfig {
                input: args.input,
                id: args.id,
                time_model: args.time_model.into(),
                seg_ms: args.seg_ms,
            })?;
            emit(&table, None)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
