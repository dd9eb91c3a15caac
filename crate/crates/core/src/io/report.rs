use serde_json::{json, Map, Value};

use super::fmt6;
use crate::metrics::{AtdResult, Metric, MetricReport, SentenceMetrics};
use crate::policy::SweepResult;
use crate::trace::TimeUnit;

pub const TSV_HEADER: &str = "id\tAL\tLAAL\tAP\tCW\tATD";

/// Number rounded the same way as the text formats.
fn num(x: f64) -> Value {
    let rounded: f64 = fmt6(x).parse().expect("formatted float parses");
    json!(rounded)
}

fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

fn sentence_json(id: &str, m: &SentenceMetrics) -> Value {
    let mut obj = Map::new();
    obj.insert("id".into(), json!(id));
    for metric in Metric::ALL {
        obj.insert(metric.name().into(), opt_num(m.get(metric)));
    }
    if let Some(delays) = &m.delays {
        obj.insert("delays".into(), Value::Array(delays.iter().map(|&d| num(d)).collect()));
    }
    Value::Object(obj)
}

/// `{"corpus": {...}, "sentences": [...], "excluded": [...], "time_unit": ...}`
pub fn report_to_json(report: &MetricReport, time_unit: TimeUnit) -> String {
    let mut corpus = Map::new();
    for metric in Metric::ALL {
        corpus.insert(metric.name().into(), opt_num(report.corpus.get(metric)));
    }
    corpus.insert("n".into(), json!(report.corpus.n));
    corpus.insert("excluded".into(), json!(report.corpus.excluded));
    let doc = json!({
        "corpus": corpus,
        "sentences": report
            .sentences
            .iter()
            .map(|s| sentence_json(&s.id, &s.metrics))
            .collect::<Vec<_>>(),
        "excluded": report
            .excluded
            .iter()
            .map(|e| json!({"id": e.id, "error": e.error}))
            .collect::<Vec<_>>(),
        "time_unit": time_unit,
    });
    let mut out = serde_json::to_string_pretty(&doc).expect("report serialises");
    out.push('\n');
    out
}

fn cell(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), fmt6)
}

/// One row per evaluated sentence; metrics that were not requested print `-`.
pub fn report_to_tsv(report: &MetricReport) -> String {
    let mut out = String::from(TSV_HEADER);
    out.push('\n');
    for s in &report.sentences {
        out.push_str(&s.id);
        for metric in Metric::ALL {
            out.push('\t');
            out.push_str(&cell(s.metrics.get(metric)));
        }
        out.push('\n');
    }
    out
}

/// `param,policy,AL,ATD[,AP,CW]`
pub fn sweep_to_csv(result: &SweepResult, extra: bool) -> String {
    let mut out = String::from("param,policy,AL,ATD");
    if extra {
        out.push_str(",AP,CW");
    }
    out.push('\n');
    for row in &result.rows {
        out.push_str(&format!("{},{},{},{}", row.param, row.policy, fmt6(row.al), fmt6(row.atd)));
        if extra {
            out.push_str(&format!(",{},{}", fmt6(row.ap), fmt6(row.cw)));
        }
        out.push('\n');
    }
    out
}

/// Per-token table `t c s a T_y T_x delay`.
pub fn correspondence_tsv(result: &AtdResult<f64>) -> String {
    let mut out = String::from("t\tc\ts\ta\tT_y\tT_x\tdelay\n");
    for c in &result.correspondences {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            c.t,
            c.chunk,
            c.s,
            c.a,
            fmt6(c.out_end),
            fmt6(c.in_end),
            fmt6(c.delay)
        ));
    }
    out
}
