//! Context/response pair extraction for training response rankers.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Corpus, CorpusError, Speaker, Turn};

/// How a dialogue's quality score is derived.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankTarget {
    /// Min-max normalized dialogue length (turn count); a corpus of
    /// all-equal lengths scores 0.5 everywhere.
    Length,
    /// User rating mapped from `[1, 5]` onto `[0, 1]`; unrated dialogues
    /// are skipped.
    Rating,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
}

/// One training pair: up to six turns of context, the system response that
/// followed, the dialogue's quality target, and its polarity class.
#[derive(Clone, Debug, PartialEq)]
pub struct RankerPairLabel {
    pub context: Vec<Turn>,
    pub response: Turn,
    pub target: f64,
    pub polarity: Polarity,
}

/// Extract one pair per system turn of every dialogue whose quality target
/// clears `upper` (positive) or falls at/below `lower` (negative), then
/// balance the classes by seeded downsampling of the majority (emission
/// order is preserved; if one class is empty the other is kept whole).
pub fn build_ranker_dataset(
    corpus: &Corpus,
    lower: f64,
    upper: f64,
    target: RankTarget,
    seed: u64,
) -> Result<Vec<RankerPairLabel>, CorpusError> {
    let in_range = (0.0..=1.0).contains(&lower) && (0.0..=1.0).contains(&upper);
    if !in_range || lower >= upper {
        return Err(CorpusError::BadThresholds { lower, upper });
    }

    let scores: Vec<Option<f64>> = match target {
        RankTarget::Length => {
            let lengths: Vec<usize> = corpus.dialogues.iter().map(|d| d.turns.len()).collect();
            let min = lengths.iter().copied().min().unwrap_or(0);
            let max = lengths.iter().copied().max().unwrap_or(0);
            lengths
                .iter()
                .map(|&len| {
                    Some(if max == min {
                        0.5
                    } else {
                        (len - min) as f64 / (max - min) as f64
                    })
                })
                .collect()
        }
        RankTarget::Rating => {
            if corpus.dialogues.iter().all(|d| d.rating.is_none()) {
                return Err(CorpusError::NoRatedDialogues);
            }
            corpus
                .dialogues
                .iter()
                .map(|d| d.rating.map(|r| ((r - 1.0) / 4.0).clamp(0.0, 1.0)))
                .collect()
        }
    };

    let mut pairs = Vec::new();
    for (dialogue, score) in corpus.dialogues.iter().zip(scores) {
        let Some(score) = score else { continue };
        let polarity = if score >= upper {
            Polarity::Positive
        } else if score <= lower {
            Polarity::Negative
        } else {
            continue;
        };
        for (j, turn) in dialogue.turns.iter().enumerate() {
            if j == 0 || turn.speaker != Speaker::System {
                continue;
            }
            pairs.push(RankerPairLabel {
                context: dialogue.turns[j.saturating_sub(6)..j].to_vec(),
                response: turn.clone(),
                target: score,
                polarity,
            });
        }
    }

    Ok(balance(pairs, seed))
}

/// Downsample the majority class to the minority's size with a seeded
/// draw, keeping survivors in their original order.
fn balance(pairs: Vec<RankerPairLabel>, seed: u64) -> Vec<RankerPairLabel> {
    let positives = pairs
        .iter()
        .filter(|p| p.polarity == Polarity::Positive)
        .count();
    let negatives = pairs.len() - positives;
    if positives == 0 || negatives == 0 || positives == negatives {
        return pairs;
    }
    let (majority, keep) = if positives > negatives {
        (Polarity::Positive, negatives)
    } else {
        (Polarity::Negative, positives)
    };
    let majority_indices: Vec<usize> = pairs
        .iter()
        .enumerate()
        .filter(|(_, p)| p.polarity == majority)
        .map(|(i, _)| i)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = rand::seq::index::sample(&mut rng, majority_indices.len(), keep).into_vec();
    chosen.sort_unstable();
    let mut keep_flags = vec![false; pairs.len()];
    for (i, p) in pairs.iter().enumerate() {
        if p.polarity != majority {
            keep_flags[i] = true;
        }
    }
    for c in chosen {
        keep_flags[majority_indices[c]] = true;
    }
    pairs
        .into_iter()
        .zip(keep_flags)
        .filter(|(_, k)| *k)
        .map(|(p, _)| p)
        .collect()
}
