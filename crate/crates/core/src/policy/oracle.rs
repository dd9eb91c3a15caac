//! Brute-force ATD on the step clock, used to cross-check the closed form.
//!
//! Works straight off the action stream: a clock loop releases one input per
//! step and lets the writer emit at most one output per step once the output's
//! gating input has ended, and an explicit cursor walks the inputs to find each
//! output's partner. Nothing here goes through the chunk bookkeeping used by
//! [`crate::metrics::atd`].

use crate::trace::{validate_trace, Action, Payload, SessionTrace, TraceError};

struct PendingWrite {
    /// Inputs that must have ended before this output may start.
    gate: usize,
    partner: usize,
}

pub fn oracle_timeline_atd(trace: &SessionTrace) -> Result<f64, TraceError> {
    let trace = validate_trace(trace.clone())?;
    let mut actions = Vec::new();
    for e in &trace.events {
        let n = match &e.payload {
            Payload::Tokens(t) => t.len(),
            Payload::DurationMs(_) => 1,
        };
        actions.extend(std::iter::repeat(e.action).take(n));
    }
    oracle_atd_from_actions(&actions).ok_or(TraceError::EmptyTrace)
}

/// Same oracle on a bare action sequence (one sub-segment per action).
/// `None` when there is no output.
pub fn oracle_atd_from_actions(actions: &[Action]) -> Option<f64> {
    // Partner assignment. At each chunk start the cursor sits at the outputs
    // emitted so far, pulled back to the input frontier of the previous chunk
    // if those outputs overran it; every output then advances the
    // cursor by one, never past the inputs read for its own chunk.
    let mut writes: Vec<PendingWrite> = Vec::new();
    let mut reads = 0usize;
    let mut cursor = 0usize;
    let mut reads_at_chunk_start = 0usize;
    let mut prev = None;
    for &action in actions {
        match action {
            Action::Read => reads += 1,
            Action::Write => {
                if prev != Some(Action::Write) {
                    cursor = writes.len().min(reads_at_chunk_start);
                    reads_at_chunk_start = reads;
                }
                cursor += 1;
                writes.push(PendingWrite {
                    gate: reads,
                    partner: cursor.min(reads),
                });
            }
        }
        prev = Some(action);
    }
    if writes.is_empty() {
        return None;
    }
    let total_inputs = reads;

    // Clock loop. Input i ends at step i. The writer is single-lane.
    let mut step = 0usize;
    let mut ended_inputs = 0usize;
    let mut next = 0usize;
    let mut delay_sum = 0usize;
    while next < writes.len() {
        step += 1;
        // what had ended by the start of this step
        let available = ended_inputs;
        if writes[next].gate <= available {
            // output ends at the end of this step; the partner input ended at step `partner`
            delay_sum += step - writes[next].partner;
            next += 1;
        }
        ended_inputs = (ended_inputs + 1).min(total_inputs);
    }
    Some(delay_sum as f64 / writes.len() as f64)
}
