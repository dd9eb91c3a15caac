//! Per-sentence latency metrics.
//!
//! CW, AP and AL only look at the delay function g(τ) of a chunked session;
//! ATD additionally needs the end times of a [`TimedSession`].

mod eval;
mod report;

pub use eval::{evaluate_session, EvalError, EvalOptions, Metric, TimeModel};
pub use report::{
    corpus_aggregate, CorpusSummary, ExcludedSentence, MetricReport, SentenceMetrics,
    SentenceOutcome, SentenceRecord,
};

use serde::Serialize;
use thiserror::Error;

use crate::trace::{ChunkedSession, TimedSession};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("source or target side is empty")]
    EmptySide,
    #[error("output is empty")]
    EmptyOutput,
    #[error("no output step follows a read, average consecutive wait is undefined")]
    DivisionByZero,
    #[error("length ratio needs a reference translation")]
    MissingReference,
    #[error("reference translation is empty")]
    EmptyReference,
    #[error("no sentences to aggregate")]
    EmptyCorpus,
}

/// Which length governs the ideal-policy slope in average lagging.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LatencyRatioMode {
    /// r = |y| / |x|
    #[default]
    Output,
    /// r = |y_ref| / |x|
    Reference,
    /// r = max(|y|, |y_ref|) / |x|
    Laal,
}

/// |x| divided by the number of output steps at which new input was read.
pub fn average_cw<T: Scalar>(chunked: &ChunkedSession) -> Result<T, MetricError> {
    let waits = chunked
        .chunks
        .iter()
        .filter(|c| !c.input.is_empty() && !c.output.is_empty())
        .count();
    if waits == 0 {
        return Err(MetricError::DivisionByZero);
    }
    Ok(T::from_count(chunked.src_len()) / T::from_count(waits))
}

pub fn average_proportion<T: Scalar>(chunked: &ChunkedSession) -> Result<T, MetricError> {
    let (src_len, tgt_len) = (chunked.src_len(), chunked.tgt_len());
    if src_len == 0 || tgt_len == 0 {
        return Err(MetricError::EmptySide);
    }
    let total: usize = chunked.delay_function_g().iter().sum();
    Ok(T::from_count(total) / (T::from_count(src_len) * T::from_count(tgt_len)))
}

/// Average lagging behind the ideal policy, summed up to the first output
/// produced after the whole source was read. When the source is never fully
/// read before the last output, the sum runs over all outputs.
pub fn average_lagging<T: Scalar>(
    chunked: &ChunkedSession,
    mode: LatencyRatioMode,
) -> Result<T, MetricError> {
    let (src_len, tgt_len) = (chunked.src_len(), chunked.tgt_len());
    if src_len == 0 || tgt_len == 0 {
        return Err(MetricError::EmptySide);
    }
    let ratio_len = match mode {
        LatencyRatioMode::Output => tgt_len,
        LatencyRatioMode::Reference => chunked.reference_len.ok_or(MetricError::MissingReference)?,
        LatencyRatioMode::Laal => chunked
            .reference_len
            .ok_or(MetricError::MissingReference)?
            .max(tgt_len),
    };
    if ratio_len == 0 {
        return Err(MetricError::EmptyReference);
    }
    let g = chunked.delay_function_g();
    let cutoff = g
        .iter()
        .position(|&v| v == src_len)
        .map_or(tgt_len, |i| i + 1);
    // (τ - 1) / r  ==  (τ - 1) * |x| / ratio_len
    let x = T::from_count(src_len);
    let n = T::from_count(ratio_len);
    let sum = g[..cutoff]
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (i, &gi)| {
            acc + T::from_count(gi) - T::from_count(i) * x / n
        });
    Ok(sum / T::from_count(cutoff))
}

/// How output sub-segment `t` lines up with the input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TokenCorrespondence<T> {
    /// 1-based output index.
    pub t: usize,
    /// 1-based chunk number.
    pub chunk: usize,
    pub s: usize,
    /// Corresponding input index; 0 only inside a chunk with no input.
    pub a: usize,
    pub out_end: T,
    pub in_end: T,
    pub delay: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtdResult<T> {
    pub value: T,
    pub correspondences: Vec<TokenCorrespondence<T>>,
}

impl<T: Scalar> AtdResult<T> {
    pub fn delays(&self) -> Vec<T> {
        self.correspondences.iter().map(|c| c.delay).collect()
    }
}

/// Average token delay: mean over outputs of T(y_t) - T(x_{a(t)}).
///
/// The output index is pulled back by however far the previous outputs ran
/// ahead of the previous inputs, and clamped to the input available to the
/// output's own chunk.
pub fn atd<T: Scalar>(timed: &TimedSession<T>) -> Result<AtdResult<T>, MetricError> {
    let chunked = &timed.chunking;
    if chunked.tgt_len() == 0 {
        return Err(MetricError::EmptyOutput);
    }
    let cum_in = chunked.cum_in();
    let cum_out = chunked.cum_out();
    let mut correspondences = Vec::with_capacity(chunked.tgt_len());
    let mut total = T::zero();
    for (t0, chunk) in chunked.output_chunk_index().into_iter().enumerate() {
        let t = t0 + 1;
        let lead = cum_out[chunk - 1].saturating_sub(cum_in[chunk - 1]);
        let s = t - lead;
        let a = s.min(cum_in[chunk]);
        let out_end = timed.out_end[t0];
        let in_end = timed.input_end(a);
        let delay = out_end - in_end;
        total = total + delay;
        correspondences.push(TokenCorrespondence {
            t,
            chunk,
            s,
            a,
            out_end,
            in_end,
            delay,
        });
    }
    Ok(AtdResult {
        value: total / T::from_count(correspondences.len()),
        correspondences,
    })
}
