use std::io::BufRead;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::trace::{Action, Event, Modality, Payload, SessionTrace};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based line number.
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawSide {
    modality: Modality,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawEvent {
    a: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tok: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ts: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawSession {
    id: String,
    src: RawSide,
    tgt: RawSide,
    events: Vec<RawEvent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reference: Option<Vec<String>>,
}

fn convert_event(raw: RawEvent, index: usize) -> Result<Event, String> {
    let action = match raw.a.as_str() {
        "r" | "R" | "read" => Action::Read,
        "w" | "W" | "write" => Action::Write,
        other => return Err(format!("event {index}: unknown action {other:?}")),
    };
    let payload = match (raw.tok, raw.ms) {
        (Some(tok), None) => Payload::Tokens(vec![tok]),
        (None, Some(ms)) => Payload::DurationMs(ms),
        (Some(_), Some(_)) => return Err(format!("event {index}: both \"tok\" and \"ms\" given")),
        (None, None) => return Err(format!("event {index}: needs \"tok\" or \"ms\"")),
    };
    Ok(Event {
        action,
        payload,
        ts_ms: raw.ts,
    })
}

/// Parses one JSONL line into a (not yet validated) trace.
pub fn parse_trace_line(text: &str, line: usize) -> Result<SessionTrace, ParseError> {
    let err = |message: String| ParseError { line, message };
    let raw: RawSession = serde_json::from_str(text).map_err(|e| err(e.to_string()))?;
    let events = raw
        .events
        .into_iter()
        .enumerate()
        .map(|(i, e)| convert_event(e, i))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    Ok(SessionTrace {
        id: raw.id,
        src: raw.src.modality,
        tgt: raw.tgt.modality,
        events,
        reference: raw.reference,
    })
}

/// Reads every non-blank line. Each entry pairs the 1-based line number and
/// raw text with its parse result.
pub fn read_traces<R: BufRead>(
    reader: R,
) -> std::io::Result<Vec<(usize, String, Result<SessionTrace, ParseError>)>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed = parse_trace_line(&line, i + 1);
        out.push((i + 1, line, parsed));
    }
    Ok(out)
}

/// Serialises a trace to one JSONL line. Multi-token events are joined with spaces.
pub fn trace_to_json_line(trace: &SessionTrace) -> String {
    let events = trace
        .events
        .iter()
        .map(|e| {
            let (tok, ms) = match &e.payload {
                Payload::Tokens(t) => (Some(t.join(" ")), None),
                Payload::DurationMs(ms) => (None, Some(*ms)),
            };
            RawEvent {
                a: match e.action {
                    Action::Read => "r".into(),
                    Action::Write => "w".into(),
                },
                tok,
                ms,
                ts: e.ts_ms,
            }
        })
        .collect();
    let raw = RawSession {
        id: trace.id.clone(),
        src: RawSide { modality: trace.src },
        tgt: RawSide { modality: trace.tgt },
        events,
        reference: trace.reference.clone(),
    };
    serde_json::to_string(&raw).expect("trace serialises")
}
