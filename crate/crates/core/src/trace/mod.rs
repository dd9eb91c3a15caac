//! Session traces: READ/WRITE event sequences, their chunk structure and
//! the time models that assign an end time to every sub-segment.

mod chunk;
mod timing;

pub use chunk::{derive_chunks, Chunk, ChunkedSession, Unit, DEFAULT_SEGMENT_MS};
pub use timing::{assign_ca_times, assign_nca_times, TimeUnit, TimedSession};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    #[error("trace has no events")]
    EmptyTrace,
    #[error("timestamp of event {index} ({ts} ms) is earlier than a preceding timestamp")]
    NonMonotonicTimestamps { index: usize, ts: f64 },
    #[error("event {index} carries {found} on a {side:?} side")]
    MixedUnits {
        index: usize,
        side: Modality,
        found: &'static str,
    },
    #[error("event {index} has an invalid duration or timestamp: {value}")]
    InvalidValue { index: usize, value: f64 },
    #[error("event {index} has an empty token payload")]
    EmptyToken { index: usize },
    #[error("computation-aware timing needs a timestamp on every {what}")]
    MissingTimestamps { what: &'static str },
    #[error("sub-segment length must be positive, got {0}")]
    NonPositiveSegmentLength(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modality {
    Text,
    Speech,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Read,
    Write,
}

/// What an event carries: token strings on a text side, a duration on a speech side.
#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Tokens(Vec<String>),
    DurationMs(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub action: Action,
    pub payload: Payload,
    /// Wall-clock end time of the event.
    pub ts_ms: Option<f64>,
}

impl Event {
    pub fn read(tok: impl Into<String>) -> Self {
        Self {
            action: Action::Read,
            payload: Payload::Tokens(vec![tok.into()]),
            ts_ms: None,
        }
    }

    pub fn write(tok: impl Into<String>) -> Self {
        Self {
            action: Action::Write,
            payload: Payload::Tokens(vec![tok.into()]),
            ts_ms: None,
        }
    }

    pub fn read_ms(ms: f64) -> Self {
        Self {
            action: Action::Read,
            payload: Payload::DurationMs(ms),
            ts_ms: None,
        }
    }

    /// Speech output: `ms` is the playback duration of the emitted audio.
    pub fn write_ms(ms: f64) -> Self {
        Self {
            action: Action::Write,
            payload: Payload::DurationMs(ms),
            ts_ms: None,
        }
    }

    pub fn at(mut self, ts_ms: f64) -> Self {
        self.ts_ms = Some(ts_ms);
        self
    }
}

/// One sentence worth of READ/WRITE actions.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionTrace {
    pub id: String,
    pub src: Modality,
    pub tgt: Modality,
    pub events: Vec<Event>,
    /// Target-side reference tokens, used by the reference-ratio AL variants.
    pub reference: Option<Vec<String>>,
}

impl SessionTrace {
    pub fn new(id: impl Into<String>, src: Modality, tgt: Modality, events: Vec<Event>) -> Self {
        Self {
            id: id.into(),
            src,
            tgt,
            events,
            reference: None,
        }
    }

    pub fn text(id: impl Into<String>, events: Vec<Event>) -> Self {
        Self::new(id, Modality::Text, Modality::Text, events)
    }

    pub fn with_reference(mut self, reference: Vec<String>) -> Self {
        self.reference = Some(reference);
        self
    }

    pub fn side(&self, action: Action) -> Modality {
        match action {
            Action::Read => self.src,
            Action::Write => self.tgt,
        }
    }

    pub fn has_timestamps(&self) -> bool {
        self.events.iter().all(|e| e.ts_ms.is_some())
    }

    /// Builds a text/text trace from a compact action string such as `"RRRWWRW"`.
    /// Tokens are positional placeholders (`s1.. / t1..`).
    pub fn from_actions(id: impl Into<String>, actions: &str) -> Self {
        let (mut reads, mut writes) = (0usize, 0usize);
        let events = actions
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'R' | 'r' => {
                    reads += 1;
                    Event::read(format!("s{reads}"))
                }
                'W' | 'w' => {
                    writes += 1;
                    Event::write(format!("t{writes}"))
                }
                other => panic!("unexpected action character {other:?}"),
            })
            .collect();
        Self::text(id, events)
    }

    /// Action sequence as `R`/`W` characters, one per event.
    pub fn action_string(&self) -> String {
        self.events
            .iter()
            .map(|e| match e.action {
                Action::Read => 'R',
                Action::Write => 'W',
            })
            .collect()
    }
}

/// Checks a raw trace and returns its canonical form: one token per text
/// event, multi-token events split in order with the original timestamp
/// carried by every piece.
pub fn validate_trace(raw: SessionTrace) -> Result<SessionTrace, TraceError> {
    if raw.events.is_empty() {
        return Err(TraceError::EmptyTrace);
    }
    let mut last_ts: Option<f64> = None;
    let mut events = Vec::with_capacity(raw.events.len());
    for (index, event) in raw.events.iter().enumerate() {
        if let Some(ts) = event.ts_ms {
            if !ts.is_finite() || ts < 0.0 {
                return Err(TraceError::InvalidValue { index, value: ts });
            }
            if last_ts.is_some_and(|prev| ts < prev) {
                return Err(TraceError::NonMonotonicTimestamps { index, ts });
            }
            last_ts = Some(ts);
        }
        let side = raw.side(event.action);
        match (&event.payload, side) {
            (Payload::Tokens(toks), Modality::Text) => {
                let pieces: Vec<&str> = toks.iter().flat_map(|t| t.split_whitespace()).collect();
                if pieces.is_empty() {
                    return Err(TraceError::EmptyToken { index });
                }
                events.extend(pieces.into_iter().map(|tok| Event {
                    action: event.action,
                    payload: Payload::Tokens(vec![tok.to_string()]),
                    ts_ms: event.ts_ms,
                }));
            }
            (Payload::DurationMs(ms), Modality::Speech) => {
                if !ms.is_finite() || *ms < 0.0 {
                    return Err(TraceError::InvalidValue { index, value: *ms });
                }
                events.push(event.clone());
            }
            (Payload::Tokens(_), Modality::Speech) => {
                return Err(TraceError::MixedUnits {
                    index,
                    side,
                    found: "tokens",
                })
            }
            (Payload::DurationMs(_), Modality::Text) => {
                return Err(TraceError::MixedUnits {
                    index,
                    side,
                    found: "a duration",
                })
            }
        }
    }
    Ok(SessionTrace { events, ..raw })
}
