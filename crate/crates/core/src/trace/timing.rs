use serde::Serialize;

use super::{ChunkedSession, Modality, TraceError, Unit};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeUnit {
    Step,
    #[serde(rename = "ms")]
    Millisecond,
}

/// End time of every input and output sub-segment, index 0 = first sub-segment.
#[derive(Debug, Clone, PartialEq)]
pub struct TimedSession<T> {
    pub in_end: Vec<T>,
    pub out_end: Vec<T>,
    pub unit: TimeUnit,
    pub chunking: ChunkedSession,
}

impl<T: Scalar> TimedSession<T> {
    /// T(x_i) with the convention T(x_0) = 0.
    pub fn input_end(&self, i: usize) -> T {
        if i == 0 {
            T::zero()
        } else {
            self.in_end[i - 1]
        }
    }

    /// Strictly increasing on the step clock, non-decreasing in milliseconds.
    pub fn is_ordered(&self) -> bool {
        let ok = |v: &[T]| match self.unit {
            TimeUnit::Step => v.windows(2).all(|w| w[0] < w[1]),
            TimeUnit::Millisecond => v.windows(2).all(|w| w[0] <= w[1]),
        };
        ok(&self.in_end) && ok(&self.out_end)
    }
}

/// Step clock that ignores computation: every sub-segment takes one step,
/// the source streams unconditionally, and output of chunk c waits for the
/// last input of chunk c while reading continues in parallel.
pub fn assign_nca_times<T: Scalar>(chunked: &ChunkedSession) -> TimedSession<T> {
    let in_end = (1..=chunked.src_len()).map(T::from_count).collect();
    let cum_in = chunked.cum_in();
    let mut out_end = Vec::with_capacity(chunked.tgt_len());
    let mut prev = 0usize;
    for (c, chunk) in chunked.chunks.iter().enumerate() {
        for _ in &chunk.output {
            prev = prev.max(cum_in[c + 1]) + 1;
            out_end.push(T::from_count(prev));
        }
    }
    TimedSession {
        in_end,
        out_end,
        unit: TimeUnit::Step,
        chunking: chunked.clone(),
    }
}

fn stamp(unit: &Unit, what: &'static str) -> Result<f64, TraceError> {
    unit.ts_ms.ok_or(TraceError::MissingTimestamps { what })
}

/// Wall-clock model in milliseconds.
///
/// * speech source: input sub-segments end at their cumulative audio offset;
/// * text source: the Read event's timestamp;
/// * text target: the Write event's timestamp (output duration ignored);
/// * speech target: playback of a chunk starts at the later of its emission
///   time (last Write timestamp in the chunk) and the end of the previous
///   chunk's playback, then runs sub-segment by sub-segment.
pub fn assign_ca_times<T: Scalar>(chunked: &ChunkedSession) -> Result<TimedSession<T>, TraceError> {
    let inputs = chunked
        .chunks
        .iter()
        .flat_map(|c| c.input.iter())
        .chain(chunked.trailing.iter());
    let in_end = match chunked.src {
        Modality::Speech => {
            let mut offset = 0.0;
            inputs
                .map(|u| {
                    offset += u.duration_ms.unwrap_or(0.0);
                    T::from_ms(offset)
                })
                .collect()
        }
        Modality::Text => inputs
            .map(|u| stamp(u, "text read").map(T::from_ms))
            .collect::<Result<Vec<_>, _>>()?,
    };

    let mut out_end = Vec::with_capacity(chunked.tgt_len());
    match chunked.tgt {
        Modality::Text => {
            for unit in chunked.chunks.iter().flat_map(|c| c.output.iter()) {
                out_end.push(T::from_ms(stamp(unit, "write")?));
            }
        }
        Modality::Speech => {
            let mut playback_end = 0.0f64;
            for chunk in &chunked.chunks {
                if chunk.output.is_empty() {
                    continue;
                }
                let mut emitted = 0.0f64;
                for unit in &chunk.output {
                    emitted = emitted.max(stamp(unit, "write")?);
                }
                let mut t = emitted.max(playback_end);
                for unit in &chunk.output {
                    t += unit.duration_ms.unwrap_or(0.0);
                    out_end.push(T::from_ms(t));
                }
                playback_end = t;
            }
        }
    }

    Ok(TimedSession {
        in_end,
        out_end,
        unit: TimeUnit::Millisecond,
        chunking: chunked.clone(),
    })
}
