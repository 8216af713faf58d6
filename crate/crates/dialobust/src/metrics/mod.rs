//! Evaluation metrics: disfluency span F1s, exact-match accuracies,
//! off-domain detection F1, ranking precision@k, inverse-frequency class
//! weights and Pearson correlation, plus uniform report rendering.

mod corr;
mod rank;
mod score;
mod simple;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use corr::{class_weights, pearson};
pub use rank::{precision_at_k, ScoredCandidate};
pub use score::{
    score_disfluency, score_disfluency_with, DisfluencyScore, ScoreOptions,
};
pub use simple::{api_call_accuracy, ood_f1, per_utterance_accuracy};

/// Errors raised by metric computations.
#[derive(Clone, Debug, PartialEq, Error)]
pub enum MetricError {
    /// Gold and prediction disagree in length (stream, utterance or tuple
    /// count).
    #[error("shape mismatch: expected {expected} items, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    /// An API call id present on one side is missing on the other.
    #[error("api call for dialogue {0} is missing on one side")]
    MissingApiCall(String),
    /// The same dialogue id appears twice on one side.
    #[error("duplicate api call for dialogue {0}")]
    DuplicateApiCall(String),
    /// Precision@k needs k >= 1.
    #[error("k = {0} is not a valid cut-off")]
    InvalidK(usize),
    /// A candidate tuple is shorter than the cut-off.
    #[error("tuple {tuple} has {len} candidates, fewer than k = {k}")]
    TooFewCandidates { tuple: usize, len: usize, k: usize },
    /// A candidate score is NaN or infinite.
    #[error("tuple {tuple}, candidate {index}: score is not finite")]
    NonFiniteScore { tuple: usize, index: usize },
    /// A class count of zero cannot be inverted into a weight.
    #[error("class {0} has zero count")]
    ZeroCount(usize),
    /// The weighting exponent must be finite and non-negative.
    #[error("gamma = {0} is not a valid weighting exponent")]
    InvalidGamma(f64),
    /// The input does not determine the statistic (too short, zero
    /// variance).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
}

/// Pooled confusion counts of one binary decision family.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub true_positive: u64,
    pub false_positive: u64,
    pub false_negative: u64,
}

impl Counts {
    pub(crate) fn observe(&mut self, gold: bool, pred: bool) {
        match (gold, pred) {
            (true, true) => self.true_positive += 1,
            (false, true) => self.false_positive += 1,
            (true, false) => self.false_negative += 1,
            (false, false) => {}
        }
    }

    /// Micro-averaged F1; 0.0 when there is nothing to find and nothing was
    /// claimed.
    pub fn f1(&self) -> f64 {
        let denom =
            2 * self.true_positive + self.false_positive + self.false_negative;
        if denom == 0 {
            0.0
        } else {
            2.0 * self.true_positive as f64 / denom as f64
        }
    }

    /// Number of gold positives (the support of the F1 row).
    pub fn support(&self) -> u64 {
        self.true_positive + self.false_negative
    }

    pub(crate) fn extras(&self) -> BTreeMap<String, f64> {
        BTreeMap::from([
            ("tp".to_string(), self.true_positive as f64),
            ("fp".to_string(), self.false_positive as f64),
            ("fn".to_string(), self.false_negative as f64),
        ])
    }
}

/// One named metric value with its support and auxiliary numbers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub name: String,
    pub value: f64,
    pub support: u64,
    pub extras: BTreeMap<String, f64>,
}

/// Render reports as a fixed-width text table (four decimal places, name
/// column sized to the longest name, minimum six).
pub fn render_text(reports: &[MetricReport]) -> String {
    let w = reports
        .iter()
        .map(|r| r.name.len())
        .max()
        .unwrap_or(0)
        .max(6);
    let mut out = format!("{:<w$} {:>10} {:>10}\n", "metric", "value", "support");
    for r in reports {
        out.push_str(&format!(
            "{:<w$} {:>10.4} {:>10}\n",
            r.name, r.value, r.support
        ));
    }
    out
}
