//! Exact-match accuracies and off-domain detection F1.

use std::collections::BTreeMap;

use super::{Counts, MetricError, MetricReport};

/// Fraction of predicted action strings that equal the gold string exactly
/// (including whitespace). Extras carry the raw number of correct items.
pub fn per_utterance_accuracy(
    gold: &[String],
    pred: &[String],
) -> Result<MetricReport, MetricError> {
    if gold.len() != pred.len() {
        return Err(MetricError::ShapeMismatch {
            expected: gold.len(),
            got: pred.len(),
        });
    }
    let correct = gold.iter().zip(pred).filter(|(g, p)| g == p).count();
    let value = if gold.is_empty() {
        0.0
    } else {
        correct as f64 / gold.len() as f64
    };
    Ok(MetricReport {
        name: "per_utterance_accuracy".to_string(),
        value,
        support: gold.len() as u64,
        extras: BTreeMap::from([("correct".to_string(), correct as f64)]),
    })
}

fn normalize_call(call: &str) -> String {
    call.to_lowercase()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

fn call_map(
    pairs: &[(String, String)],
) -> Result<BTreeMap<&String, &String>, MetricError> {
    let mut map = BTreeMap::new();
    for (id, call) in pairs {
        if map.insert(id, call).is_some() {
            return Err(MetricError::DuplicateApiCall(id.clone()));
        }
    }
    Ok(map)
}

/// Fraction of dialogues whose final API call matches gold after
/// normalization (lowercasing and whitespace collapsing — capitalization
/// and spacing are presentation details of a call, not content).
///
/// Both sides are `(dialogue id, call)` pairs in any order; the id sets
/// must coincide and contain no duplicates.
pub fn api_call_accuracy(
    gold: &[(String, String)],
    pred: &[(String, String)],
) -> Result<MetricReport, MetricError> {
    let gold_map = call_map(gold)?;
    let pred_map = call_map(pred)?;
    for id in gold_map.keys() {
        if !pred_map.contains_key(*id) {
            return Err(MetricError::MissingApiCall((*id).clone()));
        }
    }
    for id in pred_map.keys() {
        if !gold_map.contains_key(*id) {
            return Err(MetricError::MissingApiCall((*id).clone()));
        }
    }
    let correct = gold_map
        .iter()
        .filter(|(id, call)| {
            normalize_call(call) == normalize_call(pred_map[*id])
        })
        .count();
    let value = if gold_map.is_empty() {
        0.0
    } else {
        correct as f64 / gold_map.len() as f64
    };
    Ok(MetricReport {
        name: "api_call_accuracy".to_string(),
        value,
        support: gold_map.len() as u64,
        extras: BTreeMap::from([("correct".to_string(), correct as f64)]),
    })
}

/// F1 of recognizing off-domain turns, where a turn counts as off-domain
/// exactly when its action equals the fallback action string.
///
/// Extras carry the confusion counts plus precision and recall; support is
/// the number of gold off-domain turns.
pub fn ood_f1(
    gold: &[String],
    pred: &[String],
    fallback: &str,
) -> Result<MetricReport, MetricError> {
    if gold.len() != pred.len() {
        return Err(MetricError::ShapeMismatch {
            expected: gold.len(),
            got: pred.len(),
        });
    }
    let mut counts = Counts::default();
    for (g, p) in gold.iter().zip(pred) {
        counts.observe(g == fallback, p == fallback);
    }
    let ratio = |num: u64, denom: u64| {
        if denom == 0 {
            0.0
        } else {
            num as f64 / denom as f64
        }
    };
    let mut extras = counts.extras();
    extras.insert(
        "precision".to_string(),
        ratio(counts.true_positive, counts.true_positive + counts.false_positive),
    );
    extras.insert(
        "recall".to_string(),
        ratio(counts.true_positive, counts.true_positive + counts.false_negative),
    );
    Ok(MetricReport {
        name: "ood_f1".to_string(),
        value: counts.f1(),
        support: counts.support(),
        extras,
    })
}
