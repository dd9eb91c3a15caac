//! Latency metrology for simultaneous (streaming) translation.
//!
//! Sessions are READ/WRITE event traces. They are regrouped into paired
//! input/output chunks ([`trace::ChunkedSession`]), optionally cut into fixed
//! speech sub-segments, and assigned end times under a step clock
//! ([`trace::assign_nca_times`]) or a wall-clock model
//! ([`trace::assign_ca_times`]). The [`metrics`] module computes average
//! consecutive wait, average proportion, average lagging (three length-ratio
//! variants) and average token delay; [`policy`] generates synthetic wait-k /
//! chunk-k traces and runs the parameter sweeps.
//!
//! All metric arithmetic is generic over [`Scalar`]; the aliases below fix
//! the two instantiations used in practice.

pub mod io;
pub mod metrics;
pub mod policy;
pub mod scalar;
pub mod trace;

pub use metrics::{
    atd, average_cw, average_lagging, average_proportion, corpus_aggregate, evaluate_session,
    AtdResult, EvalOptions, LatencyRatioMode, Metric, MetricError, MetricReport, SentenceMetrics,
    SentenceOutcome, TimeModel, TokenCorrespondence,
};
pub use policy::{oracle_timeline_atd, sweep, Case, PolicyError, PolicyKind, PolicySpec, SweepResult};
pub use scalar::Scalar;
pub use trace::{
    assign_ca_times, assign_nca_times, derive_chunks, validate_trace, Action, ChunkedSession,
    Event, Modality, Payload, SessionTrace, TimeUnit, TimedSession, TraceError,
};

/// Exact rational scalar.
pub type Rational = num_rational::Rational64;

pub type TimedSessionF64 = TimedSession<f64>;
pub type ExactTimedSession = TimedSession<Rational>;
pub type AtdResultF64 = AtdResult<f64>;
pub type ExactAtdResult = AtdResult<Rational>;
pub type TokenCorrespondenceF64 = TokenCorrespondence<f64>;
