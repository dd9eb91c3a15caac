//! File formats: JSONL session traces, metric reports (JSON / TSV) and
//! sweep CSV.

mod jsonl;
mod report;

pub use jsonl::{parse_trace_line, read_traces, trace_to_json_line, ParseError};
pub use report::{
    correspondence_tsv, report_to_json, report_to_tsv, sweep_to_csv, TSV_HEADER,
};

/// Fixed six-decimal rendering; exact ties round half to even.
pub fn fmt6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}
