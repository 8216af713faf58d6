//! Seeded, provenance-tracked corpus transformations.
//!
//! Five pipelines operate on a [`Corpus`](crate::corpus::Corpus):
//!
//! * [`augment_corpus`] — injects hesitations, self-corrections and restarts
//!   into user turns, tagging every edit;
//! * [`ood_augment`] — splices off-domain user/system exchanges in front of
//!   in-domain user turns and prefixes the resumed turn with an interjection;
//! * [`turn_dropout`] — replaces user utterances with sampled noise while
//!   keeping their features, relabelling the following system action;
//! * [`counterfeit_ood`] — inserts near-domain distractor turns built from
//!   other utterances of the same dialogue, with a bounded reconstruction
//!   score;
//! * [`strip_augmentations`] — inverts all of the above using the attached
//!   [`AugmentationTrace`]s.
//!
//! Every pipeline derives one RNG per dialogue from `(seed, dialogue index)`
//! (see [`crate::seed`]), so outputs are byte-identical for a given seed
//! regardless of thread count.

mod counterfeit;
mod disfl;
mod dropout;
mod ood;
mod strip;
mod trace;

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::disfluency::DisfluencyTag;

pub use counterfeit::counterfeit_ood;
pub use disfl::{
    augment_correction, augment_corpus, augment_hesitation, augment_restart,
    detect_slot_spans, SlotSpan,
};
pub use dropout::turn_dropout;
pub use ood::ood_augment;
pub use strip::strip_augmentations;
pub use trace::{AugmentationTrace, TRACE_KINDS};

/// Errors raised by augmentation configuration checks and by per-utterance
/// operations that cannot apply to their input.
#[derive(Clone, Debug, PartialEq, Error)]
pub enum AugmentError {
    /// A probability-like knob is outside its valid range.
    #[error("parameter {name} = {value} is not a valid probability")]
    InvalidProbability { name: &'static str, value: f64 },
    /// A template list is empty (or contains an empty template).
    #[error("template list {0} must contain at least one non-empty template")]
    EmptyTemplates(&'static str),
    /// Counterfeit score bounds do not satisfy `alpha < beta`.
    #[error("invalid score bounds: alpha = {alpha} must be < beta = {beta}")]
    InvalidBounds { alpha: f64, beta: f64 },
    /// Dropout length bounds do not satisfy `min <= max`.
    #[error("invalid length bounds: min = {min} must be <= max = {max}")]
    BadLengthBounds { min: usize, max: usize },
    /// Prepositional restart requested but no usable preposition exists.
    #[error("utterance contains no usable preposition for a restart")]
    NoPrepositionFound,
    /// No boundary exists at which a restart could be inserted.
    #[error("utterance has no usable restart point")]
    NoRestartPoint,
    /// No slot with at least two lexicon values occurs in the utterance.
    #[error("utterance contains no correctable slot value")]
    NoEligibleSlot,
    /// An off-domain pool needed by the configuration is empty.
    #[error("pool {0} must not be empty")]
    EmptyPool(&'static str),
    /// Turn dropout was given an empty replacement vocabulary.
    #[error("dropout vocabulary must not be empty")]
    EmptyVocab,
    /// Restart repetition count must be at least one.
    #[error("restart repeat count must be at least 1")]
    InvalidRepeats,
}

fn check_probability(
    name: &'static str,
    value: f64,
    allow_one: bool,
) -> Result<(), AugmentError> {
    let ok = value.is_finite()
        && value >= 0.0
        && if allow_one { value <= 1.0 } else { value < 1.0 };
    if ok {
        Ok(())
    } else {
        Err(AugmentError::InvalidProbability { name, value })
    }
}

fn check_templates(
    name: &'static str,
    templates: &[Vec<String>],
) -> Result<(), AugmentError> {
    if templates.is_empty() || templates.iter().any(|t| t.is_empty()) {
        Err(AugmentError::EmptyTemplates(name))
    } else {
        Ok(())
    }
}

/// Where a restart re-enters the utterance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RestartKind {
    /// Restart from the beginning of the utterance.
    Clausal,
    /// Restart from a preposition, repeating the prepositional phrase head.
    PP,
}

/// Configuration for the disfluency pipeline ([`augment_corpus`]) and the
/// per-utterance operations it is built from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DisflAugConfig {
    /// Per-user-turn probability of inserting a hesitation.
    pub p_hesitation: f64,
    /// Per-user-turn probability of inserting a self-correction.
    pub p_correction: f64,
    /// Per-user-turn probability of inserting a restart.
    pub p_restart: f64,
    /// Restart flavour used by the pipeline.
    pub restart_kind: RestartKind,
    /// Filler sequences for hesitations.
    pub hesitation_templates: Vec<Vec<String>>,
    /// Editing-term sequences placed before the final restart copy.
    pub interregnum_templates: Vec<Vec<String>>,
    /// Editing-term sequences placed between wrong and corrected phrase.
    pub correction_marker_templates: Vec<Vec<String>>,
    /// Slot type -> surface values; values may be multi-token.
    pub slot_lexicon: BTreeMap<String, BTreeSet<String>>,
    /// Maximum number of operations applied to a single turn.
    pub max_per_turn: usize,
    /// Probability that a correction spans the surrounding phrase instead of
    /// just the slot value.
    pub p_long_correction: f64,
    /// Probability that a restart carries an interregnum before its final
    /// copy.
    pub p_restart_interregnum: f64,
    /// Number of false-start copies a restart inserts.
    pub restart_repeats: usize,
    /// Tokens treated as prepositions (phrase heads) by restarts and long
    /// corrections.
    pub prepositions: BTreeSet<String>,
}

fn default_slot_lexicon() -> BTreeMap<String, BTreeSet<String>> {
    let entry = |values: &[&str]| -> BTreeSet<String> {
        values.iter().map(|v| v.to_string()).collect()
    };
    BTreeMap::from([
        (
            "cuisine".to_string(),
            entry(&["british", "french", "indian", "italian", "spanish"]),
        ),
        (
            "location".to_string(),
            entry(&["bombay", "london", "madrid", "paris", "rome"]),
        ),
        ("number".to_string(), entry(&["two", "four", "six", "eight"])),
        (
            "price".to_string(),
            entry(&["cheap", "moderate", "expensive"]),
        ),
    ])
}

fn templates(raw: &[&[&str]]) -> Vec<Vec<String>> {
    raw.iter()
        .map(|t| t.iter().map(|w| w.to_string()).collect())
        .collect()
}

impl Default for DisflAugConfig {
    fn default() -> Self {
        DisflAugConfig {
            p_hesitation: 0.40,
            p_correction: 0.21,
            p_restart: 0.05,
            restart_kind: RestartKind::Clausal,
            hesitation_templates: templates(&[&["uhm"], &["uh"], &["um"]]),
            interregnum_templates: templates(&[
                &["um"],
                &["uh"],
                &["uhm", "yeah"],
            ]),
            correction_marker_templates: templates(&[
                &["oh", "no"],
                &["no", "sorry"],
                &["uhm", "sorry"],
                &["sorry"],
            ]),
            slot_lexicon: default_slot_lexicon(),
            max_per_turn: 3,
            p_long_correction: 0.5,
            p_restart_interregnum: 0.5,
            restart_repeats: 1,
            prepositions: ["in", "with", "for", "to", "at", "on"]
                .into_iter()
                .map(str::to_string)
                .collect(),
        }
    }
}

impl DisflAugConfig {
    /// Check all knobs; every pipeline entry point calls this first.
    pub fn validate(&self) -> Result<(), AugmentError> {
        check_probability("p_hesitation", self.p_hesitation, true)?;
        check_probability("p_correction", self.p_correction, true)?;
        check_probability("p_restart", self.p_restart, true)?;
        check_probability("p_long_correction", self.p_long_correction, true)?;
        check_probability(
            "p_restart_interregnum",
            self.p_restart_interregnum,
            true,
        )?;
        check_templates("hesitation_templates", &self.hesitation_templates)?;
        check_templates("interregnum_templates", &self.interregnum_templates)?;
        check_templates(
            "correction_marker_templates",
            &self.correction_marker_templates,
        )?;
        if self.restart_repeats == 0 {
            return Err(AugmentError::InvalidRepeats);
        }
        Ok(())
    }
}

fn default_fallback_action() -> String {
    "sorry i didn't catch that could you please repeat".to_string()
}

fn split_utterances(raw: &[&str]) -> Vec<Vec<String>> {
    raw.iter()
        .map(|u| u.split_whitespace().map(str::to_string).collect())
        .collect()
}

/// Configuration for [`ood_augment`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OodConfig {
    /// Probability that an off-domain run starts before a given user turn.
    pub p_ood_start: f64,
    /// Probability that a started run continues with another exchange.
    /// Strictly below 1 so runs terminate.
    pub p_ood_cont: f64,
    /// Off-domain user utterances inserted as whole turns.
    pub turn_pool: Vec<Vec<String>>,
    /// Interjections prefixed to the resumed in-domain user turn.
    pub segment_pool: Vec<Vec<String>>,
    /// Action label (and utterance) of the system's fallback reply.
    pub fallback_action: String,
}

impl Default for OodConfig {
    fn default() -> Self {
        OodConfig {
            p_ood_start: 0.2,
            p_ood_cont: 0.4,
            turn_pool: split_utterances(&[
                "may i have a flight to london",
                "what's the weather like today",
                "play some jazz music",
                "tell me a joke",
                "what time is it",
                "how do i get to the station",
                "set an alarm for seven",
                "what's the latest news",
            ]),
            segment_pool: split_utterances(&[
                "so sorry man",
                "anyway",
                "ok back to business",
                "sorry about that",
                "right then",
                "as i was saying",
            ]),
            fallback_action: default_fallback_action(),
        }
    }
}

impl OodConfig {
    /// Check pools and probabilities (`p_ood_cont` must be < 1).
    pub fn validate(&self) -> Result<(), AugmentError> {
        check_probability("p_ood_start", self.p_ood_start, false)?;
        check_probability("p_ood_cont", self.p_ood_cont, false)?;
        if self.turn_pool.is_empty() || self.turn_pool.iter().any(|t| t.is_empty()) {
            return Err(AugmentError::EmptyPool("turn_pool"));
        }
        if self.segment_pool.is_empty()
            || self.segment_pool.iter().any(|t| t.is_empty())
        {
            return Err(AugmentError::EmptyPool("segment_pool"));
        }
        Ok(())
    }
}

/// Configuration for [`turn_dropout`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DropoutConfig {
    /// Probability that an eligible user turn is replaced with noise.
    pub turn_dropout_ratio: f64,
    /// Token emitted for masked positions.
    pub unk_token: String,
    /// Minimum replacement length; derived from the corpus when `None`.
    pub min_len: Option<usize>,
    /// Maximum replacement length; derived from the corpus when `None`.
    pub max_len: Option<usize>,
    /// Action label written onto the system turn that follows a dropped
    /// user turn.
    pub fallback_action: String,
}

impl Default for DropoutConfig {
    fn default() -> Self {
        DropoutConfig {
            turn_dropout_ratio: 0.4,
            unk_token: "<unk>".to_string(),
            min_len: None,
            max_len: None,
            fallback_action: default_fallback_action(),
        }
    }
}

impl DropoutConfig {
    /// Check the ratio and any explicit length bounds.
    pub fn validate(&self) -> Result<(), AugmentError> {
        check_probability("turn_dropout_ratio", self.turn_dropout_ratio, true)?;
        if let (Some(min), Some(max)) = (self.min_len, self.max_len) {
            if min > max {
                return Err(AugmentError::BadLengthBounds { min, max });
            }
        }
        Ok(())
    }
}

/// Configuration for [`counterfeit_ood`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CounterfeitConfig {
    /// Per-turn probability of inserting a counterfeit turn before it.
    pub rho: f64,
    /// Inclusive lower bound of the sampled reconstruction score.
    pub alpha: f64,
    /// Inclusive upper bound of the sampled reconstruction score.
    pub beta: f64,
    /// Restrict insertion points to positions before user turns.
    pub user_turns_only: bool,
    /// Action label attached to inserted counterfeit turns.
    pub fallback_action: String,
}

impl Default for CounterfeitConfig {
    fn default() -> Self {
        CounterfeitConfig {
            rho: 0.15,
            alpha: 0.0,
            beta: 30.0,
            user_turns_only: false,
            fallback_action: default_fallback_action(),
        }
    }
}

impl CounterfeitConfig {
    /// Check `rho` and the score bounds (`alpha < beta`).
    pub fn validate(&self) -> Result<(), AugmentError> {
        check_probability("rho", self.rho, true)?;
        if !(self.alpha.is_finite() && self.beta.is_finite() && self.alpha < self.beta)
        {
            return Err(AugmentError::InvalidBounds {
                alpha: self.alpha,
                beta: self.beta,
            });
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Shared span bookkeeping used by the insertion operations.
// ---------------------------------------------------------------------------

/// Token positions that must not be re-sampled or re-used: everything inside
/// a repair structure (reparandum through repair) or inside a provenance
/// span.
pub(crate) fn blocked_positions(
    tags: &[DisfluencyTag],
    traces: &[AugmentationTrace],
) -> Vec<bool> {
    let mut blocked = vec![false; tags.len()];
    let structures = crate::disfluency::extract_repairs(tags);
    for s in &structures {
        for i in s.reparandum.start..s.repair.end.min(blocked.len()) {
            blocked[i] = true;
        }
    }
    for trace in traces {
        if let Some(span) = trace.token_span() {
            for i in span.start..span.end.min(blocked.len()) {
                blocked[i] = true;
            }
        }
    }
    blocked
}

/// Whether inserting at boundary `b` (between tokens `b - 1` and `b`) would
/// split a repair structure or a provenance span.
pub(crate) fn boundary_blocked(
    b: usize,
    tags: &[DisfluencyTag],
    traces: &[AugmentationTrace],
) -> bool {
    let inside = |span: &Range<usize>| span.start < b && b < span.end;
    crate::disfluency::extract_repairs(tags)
        .iter()
        .any(|s| inside(&(s.reparandum.start..s.repair.end)))
        || traces
            .iter()
            .filter_map(AugmentationTrace::token_span)
            .any(inside)
}

/// Positions removed by cleanup under the current tags: fillers, reparanda
/// and deletion-type repairs.
pub(crate) fn removed_positions(tags: &[DisfluencyTag]) -> Vec<bool> {
    let mut removed: Vec<bool> = tags
        .iter()
        .map(|t| matches!(t, DisfluencyTag::Edit))
        .collect();
    for s in crate::disfluency::extract_repairs(tags) {
        for i in s.reparandum.clone() {
            removed[i] = true;
        }
        if s.kind == crate::disfluency::RepairKind::Deletion {
            for i in s.repair.clone() {
                removed[i] = true;
            }
        }
    }
    removed
}

/// Splice `new_tokens`/`new_tags` into the utterance at boundary `at` and
/// shift provenance spans that start at or after the boundary.
pub(crate) fn splice(
    tokens: &mut Vec<String>,
    tags: &mut Vec<DisfluencyTag>,
    traces: &mut [AugmentationTrace],
    at: usize,
    new_tokens: Vec<String>,
    new_tags: Vec<DisfluencyTag>,
) {
    debug_assert_eq!(new_tokens.len(), new_tags.len());
    let by = new_tokens.len();
    tokens.splice(at..at, new_tokens);
    tags.splice(at..at, new_tags);
    for trace in traces.iter_mut() {
        trace.shift_span(at, by);
    }
}
