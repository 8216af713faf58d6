//! Provenance records attached to every augmented turn. Traces carry enough
//! information to invert each transformation, which is what
//! [`strip_augmentations`](super::strip_augmentations) relies on.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::disfluency::DisfluencyTag;

/// The trace kinds reported by corpus statistics, in declaration order.
pub const TRACE_KINDS: [&str; 7] = [
    "hesitation",
    "correction",
    "restart",
    "ood_turn",
    "ood_segment",
    "turn_dropout",
    "counterfeit",
];

/// One augmentation event. Span-carrying variants address the inserted
/// token range within the turn they annotate; spans of distinct traces on
/// one turn never overlap, and later insertions shift earlier spans so they
/// keep addressing the same tokens.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AugmentationTrace {
    /// Filler tokens inserted at a token boundary.
    Hesitation { span: Range<usize> },
    /// False-start copies (and optional interregnum) inserted at the restart
    /// point.
    Restart { span: Range<usize> },
    /// Wrong phrase plus correction marker inserted before the corrected
    /// phrase.
    Correction { span: Range<usize> },
    /// A whole inserted off-domain turn (user request or fallback reply).
    OodTurn,
    /// An off-domain interjection prefixed to an in-domain user turn.
    OodSegment { span: Range<usize> },
    /// The turn's utterance was replaced by noise; the original content and
    /// the action label of the following system turn are kept for reversal.
    TurnDropout {
        original_tokens: Vec<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        original_tags: Option<Vec<DisfluencyTag>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        original_next_action: Option<String>,
    },
    /// A whole inserted counterfeit turn built from another utterance of the
    /// same dialogue.
    Counterfeit,
}

impl AugmentationTrace {
    /// Stable snake_case name of the phenomenon, matching the JSON `kind`
    /// discriminator and the keys of corpus statistics.
    pub fn kind_name(&self) -> &'static str {
        match self {
            AugmentationTrace::Hesitation { .. } => "hesitation",
            AugmentationTrace::Correction { .. } => "correction",
            AugmentationTrace::Restart { .. } => "restart",
            AugmentationTrace::OodTurn => "ood_turn",
            AugmentationTrace::OodSegment { .. } => "ood_segment",
            AugmentationTrace::TurnDropout { .. } => "turn_dropout",
            AugmentationTrace::Counterfeit => "counterfeit",
        }
    }

    /// The inserted token range within the turn, for variants that insert
    /// tokens in place.
    pub fn token_span(&self) -> Option<&Range<usize>> {
        match self {
            AugmentationTrace::Hesitation { span }
            | AugmentationTrace::Restart { span }
            | AugmentationTrace::Correction { span }
            | AugmentationTrace::OodSegment { span } => Some(span),
            _ => None,
        }
    }

    /// Shift the token span right by `by` if it starts at or after `at`
    /// (insertions never land strictly inside an existing span).
    pub(crate) fn shift_span(&mut self, at: usize, by: usize) {
        match self {
            AugmentationTrace::Hesitation { span }
            | AugmentationTrace::Restart { span }
            | AugmentationTrace::Correction { span }
            | AugmentationTrace::OodSegment { span } => {
                if span.start >= at {
                    span.start += by;
                    span.end += by;
                }
            }
            _ => {}
        }
    }
}
