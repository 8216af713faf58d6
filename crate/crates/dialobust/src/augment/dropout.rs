//! Turn dropout: replace user utterances with sampled noise.
//!
//! A dropped turn keeps its features but its tokens are replaced by a
//! random-length mixture of the unknown token and vocabulary draws; the
//! system turn that answers it is relabelled with the fallback action. The
//! original tokens, tags and follow-up action are stored in the trace so the
//! operation can be reversed.

use rand::Rng;
use rayon::prelude::*;

use crate::corpus::{Corpus, Speaker};
use crate::seed::dialogue_rng;

use super::{AugmentError, AugmentationTrace, DropoutConfig};

/// Replace a sampled fraction of user turns with noise utterances.
///
/// Eligible turns are user turns that are not themselves inserted material
/// (no `OodTurn`/`Counterfeit` trace). Replacement lengths are uniform over
/// `[min_len, max_len]`; bounds default to the shortest and longest user
/// utterance of the input corpus. Each replacement position is the unknown
/// token with probability one half, otherwise a uniform draw from `vocab`.
/// Randomness is per dialogue, so the result is independent of thread
/// count.
pub fn turn_dropout(
    corpus: &Corpus,
    cfg: &DropoutConfig,
    vocab: &[String],
    seed: u64,
) -> Result<Corpus, AugmentError> {
    cfg.validate()?;
    if vocab.is_empty() {
        return Err(AugmentError::EmptyVocab);
    }
    // Derive missing length bounds from the input corpus's user turns.
    let user_lens = corpus.dialogues.iter().flat_map(|d| {
        d.turns
            .iter()
            .filter(|t| t.speaker == Speaker::User)
            .map(|t| t.tokens.len())
    });
    let (derived_min, derived_max) = user_lens
        .fold(None, |acc: Option<(usize, usize)>, len| match acc {
            None => Some((len, len)),
            Some((lo, hi)) => Some((lo.min(len), hi.max(len))),
        })
        .unwrap_or((1, 1));
    let min_len = cfg.min_len.unwrap_or(derived_min.max(1));
    let max_len = cfg.max_len.unwrap_or(derived_max.max(min_len));
    if min_len > max_len {
        return Err(AugmentError::BadLengthBounds {
            min: min_len,
            max: max_len,
        });
    }

    let dialogues = corpus
        .dialogues
        .par_iter()
        .enumerate()
        .map(|(idx, dialogue)| {
            let mut rng = dialogue_rng(seed, idx);
            let mut out = dialogue.clone();
            for i in 0..out.turns.len() {
                let eligible = out.turns[i].speaker == Speaker::User
                    && !out.turns[i].traces.iter().any(|t| {
                        matches!(
                            t,
                            AugmentationTrace::OodTurn
                                | AugmentationTrace::Counterfeit
                        )
                    });
                if !eligible || !rng.random_bool(cfg.turn_dropout_ratio) {
                    continue;
                }
                let len = rng.random_range(min_len..=max_len);
                let mut noise = Vec::with_capacity(len);
                for _ in 0..len {
                    if rng.random_bool(0.5) {
                        noise.push(cfg.unk_token.clone());
                    } else {
                        noise.push(vocab[rng.random_range(0..vocab.len())].clone());
                    }
                }
                // Relabel the system turn that answers this user turn and
                // remember its previous label for reversal.
                let next_system = out.turns[i + 1..]
                    .iter()
                    .position(|t| t.speaker == Speaker::System)
                    .map(|offset| i + 1 + offset);
                let original_next_action = next_system
                    .and_then(|j| out.turns[j].action_label.clone());
                if let Some(j) = next_system {
                    out.turns[j].action_label =
                        Some(cfg.fallback_action.clone());
                }
                let turn = &mut out.turns[i];
                let original_tokens =
                    std::mem::replace(&mut turn.tokens, noise);
                let original_tags = turn.tags.take();
                turn.traces.push(AugmentationTrace::TurnDropout {
                    original_tokens,
                    original_tags,
                    original_next_action,
                });
            }
            out
        })
        .collect();
    Ok(Corpus { dialogues })
}
