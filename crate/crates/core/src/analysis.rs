//! Post-scoring diagnostics: improvement-item histograms and dominance
//! consistency audits.

use std::collections::BTreeMap;

use crate::data::Dataset;
use crate::measures::{MeasureResult, Model};
use crate::real::Real;

/// Distribution of DMUs by how many coordinates their projection changes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImprovementHistogram {
    /// Model the scored results came from; `None` for an empty result set.
    pub model: Option<Model>,
    /// `number of improvement items → number of DMUs`.
    pub counts: BTreeMap<usize, usize>,
}

/// Count DMUs by the size of their improvement-item list.
pub fn improvement_histogram<T: Real>(results: &[MeasureResult<T>]) -> ImprovementHistogram {
    let mut counts = BTreeMap::new();
    for result in results {
        *counts.entry(result.improvement_items.len()).or_insert(0) += 1;
    }
    ImprovementHistogram { model: results.first().map(|r| r.model), counts }
}

/// Whether a dominance pair respects strong monotonicity of a score.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// The dominating unit scores strictly higher.
    Consistent,
    /// The dominating unit scores no higher than the unit it dominates.
    Violation,
}

/// One ordered dominance pair checked against one model's scores.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityFinding<T> {
    pub model: Model,
    pub dominating: String,
    pub dominated: String,
    pub dominating_score: T,
    pub dominated_score: T,
    pub verdict: Verdict,
}

/// Check every ordered dominance pair of the dataset against every score
/// vector: a unit that weakly dominates another (no worse everywhere,
/// different somewhere) should score strictly higher under a strongly
/// monotonic measure.
///
/// Each `scores` entry pairs a model with its per-DMU scores in dataset
/// order.
pub fn dominance_audit<T: Real>(
    dataset: &Dataset<T>,
    scores: &[(Model, Vec<T>)],
) -> Vec<MonotonicityFinding<T>> {
    let n = dataset.len();
    let mut findings = Vec::new();
    for (model, values) in scores {
        debug_assert_eq!(values.len(), n);
        for j in 0..n {
            for k in 0..n {
                if j == k || !dataset.point(j).dominates(&dataset.point(k)) {
                    continue;
                }
                let verdict = if values[j] > values[k] { Verdict::Consistent } else { Verdict::Violation };
                findings.push(MonotonicityFinding {
                    model: *model,
                    dominating: dataset.id(j).to_string(),
                    dominated: dataset.id(k).to_string(),
                    dominating_score: values[j],
                    dominated_score: values[k],
                    verdict,
                });
            }
        }
    }
    findings
}
