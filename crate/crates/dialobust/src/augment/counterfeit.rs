//! Counterfeit off-domain turns: near-domain distractors built from other
//! utterances of the same dialogue.
//!
//! Unlike pool-based injection, counterfeit turns reuse in-domain wording,
//! so detectors cannot rely on surface vocabulary. Each inserted turn
//! borrows the features of the turn it precedes and carries a
//! reconstruction score sampled from a configured band.

use rand::Rng;
use rayon::prelude::*;

use crate::corpus::{Corpus, Speaker, Turn, TurnFeatures};
use crate::seed::dialogue_rng;

use super::{AugmentError, AugmentationTrace, CounterfeitConfig};

/// Insert counterfeit user turns ahead of sampled insertion points.
///
/// For each original turn (or each original user turn when
/// `user_turns_only` is set), with probability `rho` a counterfeit turn is
/// inserted before it. Its utterance is drawn uniformly from the other user
/// utterances of the same dialogue — never from the turn at the insertion
/// point itself — its features copy the context features and action mask of
/// that turn, and its reconstruction score is uniform in `[alpha, beta]`.
/// Dialogues with fewer than two user turns are returned unchanged (with a
/// warning). Randomness is per dialogue, so the result is independent of
/// thread count.
pub fn counterfeit_ood(
    corpus: &Corpus,
    cfg: &CounterfeitConfig,
    seed: u64,
) -> Result<Corpus, AugmentError> {
    cfg.validate()?;
    let dialogues = corpus
        .dialogues
        .par_iter()
        .enumerate()
        .map(|(idx, dialogue)| {
            let mut out = dialogue.clone();
            let user_indices: Vec<usize> = out
                .turns
                .iter()
                .enumerate()
                .filter(|(_, t)| t.speaker == Speaker::User)
                .map(|(i, _)| i)
                .collect();
            if user_indices.len() < 2 {
                log::warn!(
                    "dialogue {} has fewer than two user turns; \
                     skipping counterfeit insertion",
                    out.id
                );
                return out;
            }
            let mut rng = dialogue_rng(seed, idx);
            let mut turns: Vec<Turn> = Vec::with_capacity(out.turns.len());
            for (i, turn) in out.turns.iter().enumerate() {
                let eligible =
                    !cfg.user_turns_only || turn.speaker == Speaker::User;
                if eligible && rng.random_bool(cfg.rho) {
                    // Borrow wording from other user turns of this dialogue;
                    // never duplicate the turn we are inserting before.
                    let candidates: Vec<usize> = user_indices
                        .iter()
                        .copied()
                        .filter(|&j| j != i)
                        .collect();
                    let source =
                        candidates[rng.random_range(0..candidates.len())];
                    let score = rng.random_range(cfg.alpha..=cfg.beta);
                    let (context_features, action_mask) = turn
                        .features
                        .as_ref()
                        .map(|f| {
                            (f.context_features.clone(), f.action_mask.clone())
                        })
                        .unwrap_or_default();
                    turns.push(Turn {
                        speaker: Speaker::User,
                        tokens: dialogue.turns[source].tokens.clone(),
                        action_label: Some(cfg.fallback_action.clone()),
                        tags: None,
                        features: Some(TurnFeatures {
                            context_features,
                            action_mask,
                            reconstruction_score: Some(score),
                        }),
                        traces: vec![AugmentationTrace::Counterfeit],
                    });
                }
                turns.push(turn.clone());
            }
            out.turns = turns;
            out
        })
        .collect();
    Ok(Corpus { dialogues })
}
