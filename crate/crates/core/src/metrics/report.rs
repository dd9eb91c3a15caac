use super::{Metric, MetricError};
use crate::scalar::mean;

/// Metric values for one sentence; `None` where the metric was not requested.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SentenceMetrics {
    pub al: Option<f64>,
    pub laal: Option<f64>,
    pub ap: Option<f64>,
    pub cw: Option<f64>,
    pub atd: Option<f64>,
    /// Per-output-token delays behind the ATD value.
    pub delays: Option<Vec<f64>>,
}

impl SentenceMetrics {
    pub fn get(&self, metric: Metric) -> Option<f64> {
        match metric {
            Metric::Al => self.al,
            Metric::Laal => self.laal,
            Metric::Ap => self.ap,
            Metric::Cw => self.cw,
            Metric::Atd => self.atd,
        }
    }
}

/// Evaluation result of one sentence, successful or not.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceOutcome {
    pub id: String,
    pub result: Result<SentenceMetrics, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SentenceRecord {
    pub id: String,
    pub metrics: SentenceMetrics,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExcludedSentence {
    pub id: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CorpusSummary {
    pub al: Option<f64>,
    pub laal: Option<f64>,
    pub ap: Option<f64>,
    pub cw: Option<f64>,
    pub atd: Option<f64>,
    pub n: usize,
    pub excluded: usize,
}

impl CorpusSummary {
    pub fn get(&self, metric: Metric) -> Option<f64> {
        match metric {
            Metric::Al => self.al,
            Metric::Laal => self.laal,
            Metric::Ap => self.ap,
            Metric::Cw => self.cw,
            Metric::Atd => self.atd,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    /// Successful sentences in input order.
    pub sentences: Vec<SentenceRecord>,
    pub excluded: Vec<ExcludedSentence>,
    pub corpus: CorpusSummary,
}

/// Unweighted per-sentence means. Sentences that errored are left out of
/// every mean and counted in `excluded`.
pub fn corpus_aggregate(outcomes: Vec<SentenceOutcome>) -> Result<MetricReport, MetricError> {
    if outcomes.is_empty() {
        return Err(MetricError::EmptyCorpus);
    }
    let mut sentences = Vec::new();
    let mut excluded = Vec::new();
    for outcome in outcomes {
        match outcome.result {
            Ok(metrics) => sentences.push(SentenceRecord {
                id: outcome.id,
                metrics,
            }),
            Err(error) => excluded.push(ExcludedSentence {
                id: outcome.id,
                error,
            }),
        }
    }
    let column = |metric: Metric| -> Option<f64> {
        let values: Vec<f64> = sentences
            .iter()
            .filter_map(|s| s.metrics.get(metric))
            .collect();
        mean(&values)
    };
    let corpus = CorpusSummary {
        al: column(Metric::Al),
        laal: column(Metric::Laal),
        ap: column(Metric::Ap),
        cw: column(Metric::Cw),
        atd: column(Metric::Atd),
        n: sentences.len(),
        excluded: excluded.len(),
    };
    Ok(MetricReport {
        sentences,
        excluded,
        corpus,
    })
}
