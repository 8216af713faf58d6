//! Off-domain exchange injection.
//!
//! Before each original user turn, a geometric run of off-domain exchanges
//! may be inserted: an off-domain user request drawn from the turn pool,
//! answered by the system's fallback reply. The in-domain user turn that
//! resumes the task is prefixed with an interjection segment drawn from the
//! segment pool.

use rayon::prelude::*;

use rand::Rng;

use crate::corpus::{Corpus, Speaker, Turn};
use crate::disfluency::DisfluencyTag;
use crate::seed::dialogue_rng;

use super::{AugmentError, AugmentationTrace, OodConfig};

/// Insert off-domain user/system exchanges into every dialogue.
///
/// For each original user turn, with probability `p_ood_start` a run of
/// exchanges is inserted before it; after every exchange the run continues
/// with probability `p_ood_cont` (run lengths are geometric with mean
/// `1 / (1 - p_ood_cont)`). Inserted turns carry an `OodTurn` trace; the
/// resumed user turn receives an interjection prefix recorded as an
/// `OodSegment` span. Randomness is per dialogue, so the result is
/// independent of thread count.
pub fn ood_augment(
    corpus: &Corpus,
    cfg: &OodConfig,
    seed: u64,
) -> Result<Corpus, AugmentError> {
    cfg.validate()?;
    let dialogues = corpus
        .dialogues
        .par_iter()
        .enumerate()
        .map(|(idx, dialogue)| {
            let mut rng = dialogue_rng(seed, idx);
            let mut out = dialogue.clone();
            let mut turns: Vec<Turn> = Vec::with_capacity(out.turns.len());
            for mut turn in out.turns.drain(..) {
                if turn.speaker == Speaker::User
                    && rng.random_bool(cfg.p_ood_start)
                {
                    loop {
                        let pick =
                            rng.random_range(0..cfg.turn_pool.len());
                        turns.push(Turn {
                            speaker: Speaker::User,
                            tokens: cfg.turn_pool[pick].clone(),
                            action_label: None,
                            tags: None,
                            features: None,
                            traces: vec![AugmentationTrace::OodTurn],
                        });
                        turns.push(Turn {
                            speaker: Speaker::System,
                            tokens: cfg
                                .fallback_action
                                .split_whitespace()
                                .map(str::to_string)
                                .collect(),
                            action_label: Some(cfg.fallback_action.clone()),
                            tags: None,
                            features: None,
                            traces: vec![AugmentationTrace::OodTurn],
                        });
                        if !rng.random_bool(cfg.p_ood_cont) {
                            break;
                        }
                    }
                    let pick = rng.random_range(0..cfg.segment_pool.len());
                    let segment = cfg.segment_pool[pick].clone();
                    let m = segment.len();
                    let mut tokens = segment;
                    tokens.extend(turn.tokens.drain(..));
                    turn.tokens = tokens;
                    if let Some(tags) = turn.tags.take() {
                        let mut new_tags = vec![DisfluencyTag::Fluent; m];
                        new_tags.extend(tags);
                        turn.tags = Some(new_tags);
                    }
                    for trace in turn.traces.iter_mut() {
                        trace.shift_span(0, m);
                    }
                    turn.traces
                        .push(AugmentationTrace::OodSegment { span: 0..m });
                }
                turns.push(turn);
            }
            out.turns = turns;
            out
        })
        .collect();
    Ok(Corpus { dialogues })
}
