//! Synthetic read/write policies and the simulation sweeps built on them.

mod oracle;
mod sweep;

pub use oracle::{oracle_atd_from_actions, oracle_timeline_atd};
pub use sweep::{sweep, Case, SweepResult, SweepRow};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::trace::{Event, SessionTrace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolicyError {
    #[error("k must be at least 1")]
    InvalidK,
    #[error("invalid lengths: {0}")]
    InvalidLengths(String),
    #[error("invalid range: {0}")]
    InvalidRange(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolicyKind {
    Wait,
    Chunk,
}

impl PolicyKind {
    pub fn label(self) -> &'static str {
        match self {
            PolicyKind::Wait => "wait",
            PolicyKind::Chunk => "chunk",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for PolicyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "wait" | "wait-k" => Ok(PolicyKind::Wait),
            "chunk" | "chunk-k" => Ok(PolicyKind::Chunk),
            other => Err(format!("unknown policy `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicySpec {
    WaitK {
        k: usize,
        src_len: usize,
        tgt_len: usize,
    },
    ChunkK {
        k: usize,
        src_len: usize,
        tgt_len: usize,
    },
    TwoSegment {
        in_lens: [usize; 2],
        out_lens: [usize; 2],
    },
}

impl PolicySpec {
    pub fn generate(&self) -> Result<SessionTrace, PolicyError> {
        match *self {
            PolicySpec::WaitK { k, src_len, tgt_len } => gen_wait_k(src_len, tgt_len, k),
            PolicySpec::ChunkK { k, src_len, tgt_len } => gen_chunk_k(src_len, tgt_len, k),
            PolicySpec::TwoSegment { in_lens, out_lens } => gen_two_segment(in_lens, out_lens),
        }
    }
}

/// Appends placeholder events while counting positions.
struct TraceBuilder {
    events: Vec<Event>,
    reads: usize,
    writes: usize,
}

impl TraceBuilder {
    fn new() -> Self {
        Self {
            events: Vec::new(),
            reads: 0,
            writes: 0,
        }
    }

    fn read(&mut self, n: usize) {
        for _ in 0..n {
            self.reads += 1;
            self.events.push(Event::read(format!("s{}", self.reads)));
        }
    }

    fn write(&mut self, n: usize) {
        for _ in 0..n {
            self.writes += 1;
            self.events.push(Event::write(format!("t{}", self.writes)));
        }
    }

    fn finish(self, id: String) -> SessionTrace {
        SessionTrace::text(id, self.events)
    }
}

fn check_lengths(src_len: usize, tgt_len: usize, k: usize) -> Result<(), PolicyError> {
    if k == 0 {
        return Err(PolicyError::InvalidK);
    }
    if src_len == 0 || tgt_len == 0 {
        return Err(PolicyError::InvalidLengths(format!(
            "source and target lengths must be positive (got {src_len}/{tgt_len})"
        )));
    }
    Ok(())
}

/// Reads k tokens, then alternates one write and one read; g(τ) = min(τ + k - 1, |x|).
/// Extra outputs after the source runs out are written back to back, and
/// extra inputs after the last output trail.
pub fn gen_wait_k(src_len: usize, tgt_len: usize, k: usize) -> Result<SessionTrace, PolicyError> {
    check_lengths(src_len, tgt_len, k)?;
    let mut b = TraceBuilder::new();
    for tau in 1..=tgt_len {
        let g = (tau + k - 1).min(src_len);
        b.read(g - b.reads);
        b.write(1);
    }
    b.read(src_len - b.reads);
    Ok(b.finish(format!("wait-{k}_{src_len}-{tgt_len}")))
}

/// Alternates k reads and k writes. The last input chunk holds the residue
/// of the source, and every output left once the source is exhausted goes
/// into that final chunk.
pub fn gen_chunk_k(src_len: usize, tgt_len: usize, k: usize) -> Result<SessionTrace, PolicyError> {
    check_lengths(src_len, tgt_len, k)?;
    let mut b = TraceBuilder::new();
    while b.writes < tgt_len {
        b.read(k.min(src_len - b.reads));
        if b.reads == src_len {
            b.write(tgt_len - b.writes);
        } else {
            b.write(k.min(tgt_len - b.writes));
        }
    }
    b.read(src_len - b.reads);
    Ok(b.finish(format!("chunk-{k}_{src_len}-{tgt_len}")))
}

/// Two input segments, each followed by its output segment.
pub fn gen_two_segment(in_lens: [usize; 2], out_lens: [usize; 2]) -> Result<SessionTrace, PolicyError> {
    if in_lens.contains(&0) {
        return Err(PolicyError::InvalidLengths(format!(
            "input segment lengths must be positive (got {in_lens:?})"
        )));
    }
    if out_lens == [0, 0] {
        return Err(PolicyError::InvalidLengths(
            "at least one output segment must be non-empty".into(),
        ));
    }
    let mut b = TraceBuilder::new();
    for (&i, &o) in in_lens.iter().zip(&out_lens) {
        b.read(i);
        b.write(o);
    }
    Ok(b.finish(format!(
        "two-seg_{}+{}-{}+{}",
        in_lens[0], in_lens[1], out_lens[0], out_lens[1]
    )))
}
