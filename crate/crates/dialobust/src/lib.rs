//! Deterministic robustness toolkit for goal-oriented dialogue corpora.
//!
//! The crate covers four areas:
//!
//! - [`corpus`]: the dialogue data model, two storage formats (a line-oriented
//!   text format and JSON lines), corpus statistics, outlier filtering, and
//!   ranker-pair extraction.
//! - [`disfluency`]: the repair-tag inventory for spoken-language
//!   disfluencies, sequence validation, repair-structure extraction, cleanup,
//!   incremental tracking, and a lexical repetition baseline tagger.
//! - [`augment`]: seeded, provenance-tracked corpus transformations that
//!   inject hesitations, self-corrections, restarts, off-domain exchanges,
//!   corrupted turns, and counterfeit turns — every one reversible via
//!   [`augment::strip_augmentations`].
//! - [`metrics`]: micro-averaged span F1 scores for taggers, accuracy and
//!   detection metrics for dialogue policies, precision@k for rankers, and
//!   small numeric helpers.
//!
//! All randomized behaviour derives from a single `u64` seed through
//! [`seed::dialogue_rng`], which hands each dialogue an independent stream so
//! results are identical no matter how work is scheduled across threads.

pub mod augment;
pub mod corpus;
pub mod disfluency;
pub mod metrics;
pub mod seed;

pub use corpus::{Corpus, Dialogue, Speaker, Turn};
pub use disfluency::{DisfluencyTag, TaggedUtterance};

/// Crate version, embedded in run manifests.
pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");
