//! Repair-tag algebra for spoken-language disfluencies.
//!
//! Every token of a user utterance carries one tag. Fluent tokens are
//! `<f/>`, edit tokens (fillers, discourse markers, interregna) are `<e/>`,
//! and a repair structure is announced at the first token of its repair
//! region by a retrace marker `<rm-N/>` fused with a qualifier:
//!
//! - `<rm-N/><rpEndSub/>` — one-token substitution repair reaching back `N`
//!   tokens;
//! - `<rm-N/><rpEndDel/>` — deletion: the reparandum is abandoned and
//!   nothing replaces it;
//! - `<rm-N/><rpMid/>` — a multi-token substitution repair opens here and
//!   runs until the bare closer `<rpEndSub>`.
//!
//! The standard inventory caps the retrace depth at 8, giving 27 labels
//! (2 + 8×3 + 1). Deeper retraces are representable through
//! [`DisfluencyTag::repair_onset_extended`] and parse fine; only the capped
//! constructor and the fixed inventory enforce the limit.

mod baseline;
mod repair;
mod tracker;
mod validate;

pub use baseline::{baseline_repetition_tagger, RepetitionTagger};
pub use repair::{cleanup_tokens, extract_repairs, RepairKind, RepairStructure};
pub use tracker::{IncrementalTracker, OpenRepair, TrackerError, TrackerState};
pub use validate::{validate_sequence, InvalidSequence, Violation};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::augment::AugmentationTrace;

/// Deepest retrace representable in the fixed 27-label inventory.
pub const MAX_RETRACE: usize = 8;

/// How a repair region relates to its reparandum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RepairQualifier {
    /// Single-token substitution; the onset token is the whole repair.
    EndSub,
    /// Deletion; the reparandum is dropped and nothing replaces it.
    EndDel,
    /// Multi-token substitution; the repair stays open until a bare
    /// `<rpEndSub>` closes it.
    Mid,
}

/// One per-token disfluency label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DisfluencyTag {
    /// `<f/>` — ordinary fluent token.
    Fluent,
    /// `<e/>` — filler, discourse marker, or interregnum token.
    Edit,
    /// `<rm-N/>` fused with a qualifier — first token of a repair region,
    /// retracing `N` tokens.
    RepairOnset {
        retrace: usize,
        qualifier: RepairQualifier,
    },
    /// `<rpEndSub>` — bare closer of an open multi-token repair.
    RepairEndSub,
}

/// Errors from tag parsing and construction.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TagError {
    #[error("unrecognized tag `{0}`")]
    UnknownTag(String),
    #[error("retrace depth must be at least 1")]
    ZeroRetrace,
    #[error("retrace depth {0} exceeds the inventory cap of {MAX_RETRACE}")]
    RetraceTooDeep(usize),
}

impl DisfluencyTag {
    /// Repair onset within the fixed inventory (`1 ..= 8`).
    pub fn repair_onset(retrace: usize, qualifier: RepairQualifier) -> Result<Self, TagError> {
        if retrace == 0 {
            return Err(TagError::ZeroRetrace);
        }
        if retrace > MAX_RETRACE {
            return Err(TagError::RetraceTooDeep(retrace));
        }
        Ok(DisfluencyTag::RepairOnset { retrace, qualifier })
    }

    /// Repair onset of any depth `>= 1`, for corpora that need deeper
    /// retraces than the standard inventory.
    pub fn repair_onset_extended(
        retrace: usize,
        qualifier: RepairQualifier,
    ) -> Result<Self, TagError> {
        if retrace == 0 {
            return Err(TagError::ZeroRetrace);
        }
        Ok(DisfluencyTag::RepairOnset { retrace, qualifier })
    }

    /// Surface form of the tag, the inverse of [`parse_tag`].
    pub fn render(&self) -> String {
        match self {
            DisfluencyTag::Fluent => "<f/>".to_string(),
            DisfluencyTag::Edit => "<e/>".to_string(),
            DisfluencyTag::RepairOnset { retrace, qualifier } => {
                let q = match qualifier {
                    RepairQualifier::EndSub => "<rpEndSub/>",
                    RepairQualifier::EndDel => "<rpEndDel/>",
                    RepairQualifier::Mid => "<rpMid/>",
                };
                format!("<rm-{retrace}/>{q}")
            }
            DisfluencyTag::RepairEndSub => "<rpEndSub>".to_string(),
        }
    }
}

/// Parse one surface tag. Accepts any retrace depth `>= 1`; the bare closer
/// is `<rpEndSub>` without the slash, and `<rpEndSub/>` on its own is not a
/// tag.
pub fn parse_tag(s: &str) -> Result<DisfluencyTag, TagError> {
    match s {
        "<f/>" => return Ok(DisfluencyTag::Fluent),
        "<e/>" => return Ok(DisfluencyTag::Edit),
        "<rpEndSub>" => return Ok(DisfluencyTag::RepairEndSub),
        _ => {}
    }
    if let Some(rest) = s.strip_prefix("<rm-") {
        if let Some((digits, qualifier)) = rest.split_once("/>") {
            if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                let retrace: usize = digits
                    .parse()
                    .map_err(|_| TagError::UnknownTag(s.to_string()))?;
                if retrace == 0 {
                    return Err(TagError::ZeroRetrace);
                }
                let qualifier = match qualifier {
                    "<rpEndSub/>" => RepairQualifier::EndSub,
                    "<rpEndDel/>" => RepairQualifier::EndDel,
                    "<rpMid/>" => RepairQualifier::Mid,
                    _ => return Err(TagError::UnknownTag(s.to_string())),
                };
                return Ok(DisfluencyTag::RepairOnset { retrace, qualifier });
            }
        }
    }
    Err(TagError::UnknownTag(s.to_string()))
}

/// The fixed 27-label inventory: `<f/>`, `<e/>`, all onsets up to depth 8,
/// and the bare closer.
pub fn tag_inventory() -> Vec<DisfluencyTag> {
    let mut out = vec![DisfluencyTag::Fluent, DisfluencyTag::Edit];
    for retrace in 1..=MAX_RETRACE {
        for qualifier in [
            RepairQualifier::EndSub,
            RepairQualifier::EndDel,
            RepairQualifier::Mid,
        ] {
            out.push(DisfluencyTag::RepairOnset { retrace, qualifier });
        }
    }
    out.push(DisfluencyTag::RepairEndSub);
    out
}

impl Serialize for DisfluencyTag {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.render())
    }
}

impl<'de> Deserialize<'de> for DisfluencyTag {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_tag(&s).map_err(D::Error::custom)
    }
}

/// A tokenized utterance with its tag sequence and the augmentation
/// provenance that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct TaggedUtterance {
    pub tokens: Vec<String>,
    pub tags: Vec<DisfluencyTag>,
    pub provenance: Vec<AugmentationTrace>,
}

impl TaggedUtterance {
    /// The fluent rendition: validation followed by removal of edit tokens,
    /// reparanda, and deletion repairs.
    pub fn cleanup(&self) -> Result<Vec<String>, InvalidSequence> {
        cleanup_tokens(&self.tokens, &self.tags)
    }
}
