//! Reversal of all augmentation pipelines via provenance traces.

use crate::corpus::{Corpus, Speaker};

use super::AugmentationTrace;

/// Undo every traced augmentation and return the reconstructed corpus.
///
/// Reversal proceeds in three passes per dialogue:
///
/// 1. drop inserted turns (`OodTurn`, `Counterfeit`);
/// 2. undo turn dropout in reverse turn order, restoring the recorded
///    tokens, tags and follow-up system action — last-applied first, so
///    stacked dropouts and shared system turns unwind correctly;
/// 3. remove inserted token spans (`Hesitation`, `Restart`, `Correction`,
///    `OodSegment`) from each turn in descending span order, then clear
///    traces and tags.
///
/// Turns without traces are returned bit-for-bit unchanged. The
/// reconstruction restores the pre-augmentation corpus exactly when the
/// source corpus carried no disfluency tags of its own (augmentation inputs
/// are untagged; tags produced by augmentation are discarded along with the
/// material they describe).
pub fn strip_augmentations(corpus: &Corpus) -> Corpus {
    let mut out = corpus.clone();
    for dialogue in &mut out.dialogues {
        // Pass 1: remove inserted turns.
        dialogue.turns.retain(|t| {
            !t.traces.iter().any(|tr| {
                matches!(
                    tr,
                    AugmentationTrace::OodTurn | AugmentationTrace::Counterfeit
                )
            })
        });

        // Pass 2: undo dropouts, newest first.
        for i in (0..dialogue.turns.len()).rev() {
            loop {
                let last_dropout = dialogue.turns[i]
                    .traces
                    .iter()
                    .rposition(|t| {
                        matches!(t, AugmentationTrace::TurnDropout { .. })
                    });
                let Some(pos) = last_dropout else { break };
                let AugmentationTrace::TurnDropout {
                    original_tokens,
                    original_tags,
                    original_next_action,
                } = dialogue.turns[i].traces.remove(pos)
                else {
                    unreachable!("rposition matched a dropout trace");
                };
                dialogue.turns[i].tokens = original_tokens;
                dialogue.turns[i].tags = original_tags;
                if let Some(j) = dialogue.turns[i + 1..]
                    .iter()
                    .position(|t| t.speaker == Speaker::System)
                    .map(|offset| i + 1 + offset)
                {
                    dialogue.turns[j].action_label = original_next_action;
                }
            }
        }

        // Pass 3: remove inserted token spans.
        for turn in &mut dialogue.turns {
            if turn.traces.is_empty() {
                continue;
            }
            let mut spans: Vec<std::ops::Range<usize>> = turn
                .traces
                .iter()
                .filter_map(AugmentationTrace::token_span)
                .cloned()
                .collect();
            spans.sort_by(|a, b| b.start.cmp(&a.start));
            for span in spans {
                turn.tokens.drain(span.clone());
                if let Some(tags) = &mut turn.tags {
                    tags.drain(span);
                }
            }
            turn.traces.clear();
            turn.tags = None;
        }
    }
    out
}
