//! Ranking quality: precision at a cut-off.

use std::collections::BTreeMap;

use super::{MetricError, MetricReport};

/// One ranked candidate: its model score and whether it is a true match.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScoredCandidate {
    pub score: f64,
    pub relevant: bool,
}

/// Mean precision@k over candidate tuples.
///
/// Each tuple is ranked by score, descending, with ties kept in input order
/// (stable sort), and the fraction of relevant candidates among the top `k`
/// is averaged over tuples. Scores must be finite and every tuple must hold
/// at least `k` candidates.
pub fn precision_at_k(
    tuples: &[Vec<ScoredCandidate>],
    k: usize,
) -> Result<MetricReport, MetricError> {
    if k == 0 {
        return Err(MetricError::InvalidK(0));
    }
    if tuples.is_empty() {
        return Err(MetricError::ShapeMismatch {
            expected: 1,
            got: 0,
        });
    }
    let mut sum = 0.0;
    for (tuple, candidates) in tuples.iter().enumerate() {
        if candidates.len() < k {
            return Err(MetricError::TooFewCandidates {
                tuple,
                len: candidates.len(),
                k,
            });
        }
        if let Some(index) =
            candidates.iter().position(|c| !c.score.is_finite())
        {
            return Err(MetricError::NonFiniteScore { tuple, index });
        }
        let mut order: Vec<usize> = (0..candidates.len()).collect();
        order.sort_by(|&a, &b| {
            candidates[b]
                .score
                .partial_cmp(&candidates[a].score)
                .expect("scores are finite")
        });
        let relevant = order
            .iter()
            .take(k)
            .filter(|&&i| candidates[i].relevant)
            .count();
        sum += relevant as f64 / k as f64;
    }
    Ok(MetricReport {
        name: "precision_at_k".to_string(),
        value: sum / tuples.len() as f64,
        support: tuples.len() as u64,
        extras: BTreeMap::from([("k".to_string(), k as f64)]),
    })
}
