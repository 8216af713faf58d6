//! Corpus statistics and length-outlier filtering.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Corpus, CorpusError, Speaker};
use crate::augment::TRACE_KINDS;

/// Summary counts plus, per augmentation phenomenon, the fraction of user
/// turns carrying at least one trace of that kind. Every known phenomenon
/// key is always present.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub dialogue_count: usize,
    pub turn_count: usize,
    pub user_turn_count: usize,
    pub avg_turns_per_dialogue: Option<f64>,
    pub phenomenon_fractions: BTreeMap<String, f64>,
    pub action_label_count: usize,
}

pub fn corpus_stats(corpus: &Corpus) -> StatsReport {
    let dialogue_count = corpus.dialogues.len();
    let mut turn_count = 0usize;
    let mut user_turn_count = 0usize;
    let mut action_label_count = 0usize;
    let mut touched: BTreeMap<&'static str, usize> =
        TRACE_KINDS.iter().map(|&k| (k, 0)).collect();
    for dialogue in &corpus.dialogues {
        for turn in &dialogue.turns {
            turn_count += 1;
            if turn.action_label.is_some() {
                action_label_count += 1;
            }
            if turn.speaker != Speaker::User {
                continue;
            }
            user_turn_count += 1;
            for kind in TRACE_KINDS {
                if turn.traces.iter().any(|t| t.kind_name() == kind) {
                    *touched.get_mut(kind).unwrap() += 1;
                }
            }
        }
    }
    let phenomenon_fractions = touched
        .into_iter()
        .map(|(kind, n)| {
            let fraction = if user_turn_count == 0 {
                0.0
            } else {
                n as f64 / user_turn_count as f64
            };
            (kind.to_string(), fraction)
        })
        .collect();
    StatsReport {
        dialogue_count,
        turn_count,
        user_turn_count,
        avg_turns_per_dialogue: if dialogue_count == 0 {
            None
        } else {
            Some(turn_count as f64 / dialogue_count as f64)
        },
        phenomenon_fractions,
        action_label_count,
    }
}

/// Drop dialogues shorter than `min_turns` or at/above the length cutoff,
/// where the cutoff is the `length_percentile`-th percentile of dialogue
/// lengths (nearest-rank: the value at rank `ceil(p * n / 100)`, 1-based,
/// over the sorted lengths of THIS corpus).
///
/// The cutoff is recomputed from whatever corpus is passed in, so filtering
/// an already-filtered corpus can tighten it further; callers wanting a
/// fixpoint should keep the original cutoff corpus.
pub fn filter_outliers(
    corpus: &Corpus,
    min_turns: usize,
    length_percentile: f64,
) -> Result<Corpus, CorpusError> {
    if !length_percentile.is_finite() || length_percentile <= 0.0 || length_percentile > 100.0 {
        return Err(CorpusError::InvalidPercentile(length_percentile));
    }
    let mut lengths: Vec<usize> = corpus.dialogues.iter().map(|d| d.turns.len()).collect();
    if lengths.is_empty() {
        return Ok(Corpus::default());
    }
    lengths.sort_unstable();
    let n = lengths.len();
    let rank = ((length_percentile * n as f64) / 100.0).ceil() as usize;
    let cutoff = lengths[rank.clamp(1, n) - 1];
    let dialogues = corpus
        .dialogues
        .iter()
        .filter(|d| d.turns.len() >= min_turns && d.turns.len() < cutoff)
        .cloned()
        .collect();
    Ok(Corpus { dialogues })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Dialogue, Turn};

    fn corpus_with_lengths(lengths: &[usize]) -> Corpus {
        let dialogues = lengths
            .iter()
            .enumerate()
            .map(|(i, &len)| Dialogue {
                id: format!("d{i}"),
                rating: None,
                kb_rows: Vec::new(),
                turns: (0..len)
                    .map(|_| Turn::user(vec!["hi".to_string()]))
                    .collect(),
            })
            .collect();
        Corpus { dialogues }
    }

    #[test]
    fn empty_corpus_filters_to_empty() {
        let out = filter_outliers(&Corpus::default(), 3, 95.0).unwrap();
        assert!(out.dialogues.is_empty());
    }

    #[test]
    fn tiny_percentile_clamps_to_the_shortest_dialogue() {
        let corpus = corpus_with_lengths(&[5, 6, 7]);
        // rank ceil(0.1*3/100) = 1 -> cutoff 5 -> nothing survives `< 5`
        let out = filter_outliers(&corpus, 1, 0.1).unwrap();
        assert!(out.dialogues.is_empty());
    }

    #[test]
    fn order_is_preserved() {
        let corpus = corpus_with_lengths(&[9, 2, 5, 8, 3]);
        let out = filter_outliers(&corpus, 3, 100.0).unwrap();
        let lens: Vec<usize> = out.dialogues.iter().map(|d| d.turns.len()).collect();
        assert_eq!(lens, vec![5, 8, 3]);
    }
}
