use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use super::{gen_chunk_k, gen_two_segment, gen_wait_k, PolicyError, PolicyKind};
use crate::metrics::{atd, average_cw, average_lagging, average_proportion, LatencyRatioMode};
use crate::trace::{assign_nca_times, derive_chunks, SessionTrace};

/// Simulation settings. Cases 1-3 sweep k for wait-k / chunk-k on a fixed
/// sentence pair; cases 4-5 split a 20+20 input and sweep the length of one
/// output segment under chunk-20.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    /// 40 inputs, 40 outputs.
    Case1,
    /// 40 inputs, 100 outputs.
    Case2,
    /// 40 inputs, 20 outputs.
    Case3,
    /// (20+20) inputs, (L1+20) outputs.
    Case4,
    /// (20+20) inputs, (20+L2) outputs.
    Case5,
}

impl Case {
    pub fn lengths(self) -> Option<(usize, usize)> {
        match self {
            Case::Case1 => Some((40, 40)),
            Case::Case2 => Some((40, 100)),
            Case::Case3 => Some((40, 20)),
            Case::Case4 | Case::Case5 => None,
        }
    }

    pub fn default_range(self) -> RangeInclusive<usize> {
        match self {
            Case::Case1 | Case::Case2 | Case::Case3 => 1..=40,
            Case::Case4 | Case::Case5 => 1..=60,
        }
    }

    fn trace(self, policy: PolicyKind, param: usize) -> Result<SessionTrace, PolicyError> {
        match (self, self.lengths()) {
            (_, Some((src, tgt))) => match policy {
                PolicyKind::Wait => gen_wait_k(src, tgt, param),
                PolicyKind::Chunk => gen_chunk_k(src, tgt, param),
            },
            (Case::Case4, None) => gen_two_segment([20, 20], [param, 20]),
            _ => gen_two_segment([20, 20], [20, param]),
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Case::Case1 => "case1",
            Case::Case2 => "case2",
            Case::Case3 => "case3",
            Case::Case4 => "case4",
            Case::Case5 => "case5",
        };
        f.write_str(s)
    }
}

impl FromStr for Case {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "case1" | "1" | "40-40" => Ok(Case::Case1),
            "case2" | "2" | "40-100" => Ok(Case::Case2),
            "case3" | "3" | "40-20" => Ok(Case::Case3),
            "case4" | "4" => Ok(Case::Case4),
            "case5" | "5" => Ok(Case::Case5),
            other => Err(format!("unknown case `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub param: usize,
    pub policy: String,
    pub al: f64,
    pub atd: f64,
    pub ap: f64,
    pub cw: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub case: Case,
    /// Parameter-major; within one policy the parameters strictly increase.
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn rows_for<'a>(&'a self, policy: &'a str) -> impl Iterator<Item = &'a SweepRow> + 'a {
        self.rows.iter().filter(move |r| r.policy == policy)
    }
}

/// Label used for the policy column of cases 4 and 5.
pub const TWO_SEGMENT_LABEL: &str = "chunk-20";

/// Generates one trace per (parameter, policy) and evaluates AL (output
/// ratio), step-clock ATD, AP and CW on it.
pub fn sweep(
    case: Case,
    policies: &[PolicyKind],
    range: RangeInclusive<usize>,
) -> Result<SweepResult, PolicyError> {
    let (lo, hi) = (*range.start(), *range.end());
    if lo == 0 || lo > hi {
        return Err(PolicyError::InvalidRange(format!(
            "{lo}..{hi}: bounds must satisfy 1 <= start <= end"
        )));
    }
    let labelled: Vec<(PolicyKind, String)> = match case.lengths() {
        Some((src, _)) => {
            if hi > src {
                return Err(PolicyError::InvalidRange(format!(
                    "k up to {hi} exceeds the source length {src}"
                )));
            }
            if policies.is_empty() {
                return Err(PolicyError::InvalidRange("no policies selected".into()));
            }
            policies.iter().map(|&p| (p, p.label().to_string())).collect()
        }
        None => vec![(PolicyKind::Chunk, TWO_SEGMENT_LABEL.to_string())],
    };

    let mut rows = Vec::with_capacity((hi - lo + 1) * labelled.len());
    for param in range {
        for (policy, label) in &labelled {
            let trace = case.trace(*policy, param)?;
            let chunked = derive_chunks(&trace);
            let expect = "generated traces always have gated output";
            rows.push(SweepRow {
                param,
                policy: label.clone(),
                al: average_lagging(&chunked, LatencyRatioMode::Output).expect(expect),
                atd: atd(&assign_nca_times::<f64>(&chunked)).expect(expect).value,
                ap: average_proportion(&chunked).expect(expect),
                cw: average_cw(&chunked).expect(expect),
            });
        }
    }
    Ok(SweepResult { case, rows })
}
