//! Dialogue data model, storage formats, statistics, filtering, and
//! ranker-pair extraction.

mod babi;
mod jsonl;
mod ranker;
mod stats;

pub use babi::{parse_babi, write_babi};
pub use jsonl::{parse_jsonl, write_jsonl};
pub use ranker::{build_ranker_dataset, Polarity, RankTarget, RankerPairLabel};
pub use stats::{corpus_stats, filter_outliers, StatsReport};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::augment::AugmentationTrace;
use crate::disfluency::DisfluencyTag;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Speaker {
    User,
    System,
}

/// Optional per-turn feature block carried by featurized corpora.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TurnFeatures {
    pub context_features: Vec<f64>,
    /// Per-action feasibility mask; entries are 0 or 1.
    pub action_mask: Vec<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reconstruction_score: Option<f64>,
}

/// One turn: a tokenized utterance plus the optional action label, gold
/// disfluency tags, features, and augmentation provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Turn {
    pub speaker: Speaker,
    pub tokens: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub action_label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tags: Option<Vec<DisfluencyTag>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub features: Option<TurnFeatures>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub traces: Vec<AugmentationTrace>,
}

impl Turn {
    /// An untagged user turn.
    pub fn user(tokens: Vec<String>) -> Self {
        Turn {
            speaker: Speaker::User,
            tokens,
            action_label: None,
            tags: None,
            features: None,
            traces: Vec::new(),
        }
    }

    /// A system turn whose action label is its own text.
    pub fn system(tokens: Vec<String>) -> Self {
        let action_label = Some(tokens.join(" "));
        Turn {
            speaker: Speaker::System,
            tokens,
            action_label,
            tags: None,
            features: None,
            traces: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dialogue {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rating: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub kb_rows: Vec<Vec<String>>,
    pub turns: Vec<Turn>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Corpus {
    pub dialogues: Vec<Dialogue>,
}

impl Corpus {
    /// Sorted, deduplicated union of every token in the corpus.
    pub fn vocab(&self) -> Vec<String> {
        let set: BTreeSet<&String> = self
            .dialogues
            .iter()
            .flat_map(|d| d.turns.iter())
            .flat_map(|t| t.tokens.iter())
            .collect();
        set.into_iter().cloned().collect()
    }
}

/// Errors from parsing, writing, filtering, and ranker extraction.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum CorpusError {
    #[error("line {0}: malformed line")]
    MalformedLine(usize),
    #[error("line {0}: turn index does not increase")]
    NonMonotonicIndex(usize),
    #[error("dialogue `{0}` has no turns")]
    EmptyDialogue(String),
    #[error("line {line}: schema violation at {path}")]
    SchemaViolation { line: usize, path: String },
    #[error("{0}")]
    UnrepresentableTurn(String),
    #[error("line {line}: duplicate dialogue id `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error("percentile {0} is outside (0, 100]")]
    InvalidPercentile(f64),
    #[error("thresholds lower={lower} upper={upper} must satisfy 0 <= lower < upper <= 1")]
    BadThresholds { lower: f64, upper: f64 },
    #[error("rating-based extraction needs at least one rated dialogue")]
    NoRatedDialogues,
}
