use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use super::{
    atd, average_cw, average_lagging, average_proportion, LatencyRatioMode, MetricError,
    SentenceMetrics,
};
use crate::trace::{
    assign_ca_times, assign_nca_times, derive_chunks, SessionTrace, TraceError,
    DEFAULT_SEGMENT_MS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Metric {
    #[serde(rename = "AL")]
    Al,
    #[serde(rename = "LAAL")]
    Laal,
    #[serde(rename = "AP")]
    Ap,
    #[serde(rename = "CW")]
    Cw,
    #[serde(rename = "ATD")]
    Atd,
}

impl Metric {
    /// Column order used by every report.
    pub const ALL: [Metric; 5] = [Metric::Al, Metric::Laal, Metric::Ap, Metric::Cw, Metric::Atd];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Al => "AL",
            Metric::Laal => "LAAL",
            Metric::Ap => "AP",
            Metric::Cw => "CW",
            Metric::Atd => "ATD",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "al" => Ok(Metric::Al),
            "laal" => Ok(Metric::Laal),
            "ap" => Ok(Metric::Ap),
            "cw" => Ok(Metric::Cw),
            "atd" => Ok(Metric::Atd),
            other => Err(format!("unknown metric `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeModel {
    /// Step clock, computation ignored.
    #[default]
    Nca,
    /// Wall-clock timestamps.
    Ca,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalOptions {
    pub time_model: TimeModel,
    /// Ratio used for the AL column. LAAL is always computed in LAAL mode.
    pub ratio: LatencyRatioMode,
    pub metrics: Vec<Metric>,
    pub seg_ms: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            time_model: TimeModel::Nca,
            ratio: LatencyRatioMode::Output,
            metrics: vec![Metric::Al, Metric::Ap, Metric::Cw, Metric::Atd],
            seg_ms: DEFAULT_SEGMENT_MS,
        }
    }
}

impl EvalOptions {
    pub fn wants(&self, metric: Metric) -> bool {
        self.metrics.contains(&metric)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error("{metric}: {source}")]
    Metric { metric: Metric, source: MetricError },
}

/// Evaluates the requested metrics on one validated trace, in `f64`.
pub fn evaluate_session(
    trace: &SessionTrace,
    opts: &EvalOptions,
) -> Result<SentenceMetrics, EvalError> {
    let chunked = derive_chunks(trace).subsegment_speech(opts.seg_ms)?;
    let tag = |metric: Metric| move |source: MetricError| EvalError::Metric { metric, source };
    let mut out = SentenceMetrics::default();
    if opts.wants(Metric::Al) {
        out.al = Some(average_lagging(&chunked, opts.ratio).map_err(tag(Metric::Al))?);
    }
    if opts.wants(Metric::Laal) {
        out.laal = Some(average_lagging(&chunked, LatencyRatioMode::Laal).map_err(tag(Metric::Laal))?);
    }
    if opts.wants(Metric::Ap) {
        out.ap = Some(average_proportion(&chunked).map_err(tag(Metric::Ap))?);
    }
    if opts.wants(Metric::Cw) {
        out.cw = Some(average_cw(&chunked).map_err(tag(Metric::Cw))?);
    }
    if opts.wants(Metric::Atd) {
        let timed = match opts.time_model {
            TimeModel::Nca => assign_nca_times::<f64>(&chunked),
            TimeModel::Ca => assign_ca_times::<f64>(&chunked)?,
        };
        let result = atd(&timed).map_err(tag(Metric::Atd))?;
        out.delays = Some(result.delays());
        out.atd = Some(result.value);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{Event, Modality};

    #[test]
    fn wait3_al_and_atd() {
        let trace = SessionTrace::from_actions("w3", "RRRWRWRWRWRWWW");
        let m = evaluate_session(&trace, &EvalOptions::default()).unwrap();
        assert_eq!(m.al, Some(3.0));
        assert_eq!(m.atd, Some(3.0));
        assert_eq!(m.cw, Some(1.4));
        assert_eq!(m.delays.as_deref(), Some(&[3.0; 7][..]));
        assert_eq!(m.laal, None);
    }

    #[test]
    fn laal_needs_reference() {
        let opts = EvalOptions {
            metrics: vec![Metric::Laal],
            ..EvalOptions::default()
        };
        let trace = SessionTrace::from_actions("x", "RRWW");
        assert_eq!(
            evaluate_session(&trace, &opts),
            Err(EvalError::Metric {
                metric: Metric::Laal,
                source: MetricError::MissingReference
            })
        );
        let trace = trace.with_reference(vec!["a".into(), "b".into(), "c".into(), "d".into()]);
        // g = [2,2], r = 4/2: (2 - 0) + (2 - 1/2) over 1 step (cutoff at τ = 1)
        assert_eq!(evaluate_session(&trace, &opts).unwrap().laal, Some(2.0));
    }

    #[test]
    fn ca_requires_timestamps() {
        let opts = EvalOptions {
            time_model: TimeModel::Ca,
            ..EvalOptions::default()
        };
        let trace = SessionTrace::from_actions("x", "RW");
        assert!(matches!(
            evaluate_session(&trace, &opts),
            Err(EvalError::Trace(TraceError::MissingTimestamps { .. }))
        ));
    }

    #[test]
    fn nca_speech_counts_sub_segments() {
        let trace = SessionTrace::new(
            "sp",
            Modality::Speech,
            Modality::Text,
            vec![Event::read_ms(900.0), Event::write("a"), Event::write("b"), Event::write("c")],
        );
        let m = evaluate_session(&trace, &EvalOptions::default()).unwrap();
        // three 300 ms slices, read-all-then-write on the step clock
        assert_eq!(m.atd, Some(3.0));
        assert_eq!(m.al, Some(3.0));
    }

    #[test]
    fn metric_names_parse() {
        assert_eq!("LaAl".parse::<Metric>(), Ok(Metric::Laal));
        assert!("bleu".parse::<Metric>().is_err());
    }
}
