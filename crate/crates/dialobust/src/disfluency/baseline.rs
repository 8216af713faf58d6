//! Lexical baseline tagger: fillers become edit tokens, and repeated token
//! runs become repair structures.

use std::collections::BTreeSet;

use super::{DisfluencyTag, RepairQualifier};

/// Rule-based tagger detecting fillers by lexicon lookup and repairs by
/// repeated-run matching over the filler-free projection of the utterance.
///
/// Repetition matching walks the projection left to right; at each position
/// it looks for the longest run (bounded by the available prefix) that
/// exactly repeats the run immediately before it, emitting a one-token
/// substitution for single repeats and an open/close pair for longer ones.
/// Retrace depths count original token positions, so fillers sitting inside
/// the retraced region are spanned correctly. The output always validates.
#[derive(Clone, Debug)]
pub struct RepetitionTagger {
    fillers: BTreeSet<String>,
}

impl Default for RepetitionTagger {
    fn default() -> Self {
        Self::new()
    }
}

impl RepetitionTagger {
    /// The standard filler lexicon: `uh`, `uhm`, `um`.
    pub fn new() -> Self {
        Self {
            fillers: ["uh", "uhm", "um"].iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn with_fillers(fillers: BTreeSet<String>) -> Self {
        Self { fillers }
    }

    pub fn tag(&self, tokens: &[String]) -> Vec<DisfluencyTag> {
        let mut tags = vec![DisfluencyTag::Fluent; tokens.len()];
        for (i, token) in tokens.iter().enumerate() {
            if self.fillers.contains(token) {
                tags[i] = DisfluencyTag::Edit;
            }
        }
        // positions of non-filler tokens in original coordinates
        let orig: Vec<usize> = (0..tokens.len())
            .filter(|&i| tags[i] != DisfluencyTag::Edit)
            .collect();
        let clean_len = orig.len();
        let mut j = 1;
        while j < clean_len {
            let max_k = j.min(clean_len - j);
            let mut matched = 0;
            for k in (1..=max_k).rev() {
                let repeats = (0..k).all(|d| tokens[orig[j - k + d]] == tokens[orig[j + d]]);
                if repeats {
                    matched = k;
                    break;
                }
            }
            if matched == 0 {
                j += 1;
                continue;
            }
            let k = matched;
            let onset = orig[j];
            let retrace = orig[j] - orig[j - k];
            let qualifier = if k == 1 {
                RepairQualifier::EndSub
            } else {
                RepairQualifier::Mid
            };
            tags[onset] = DisfluencyTag::repair_onset_extended(retrace, qualifier)
                .expect("retrace over a non-empty prefix is at least 1");
            if k > 1 {
                tags[orig[j + k - 1]] = DisfluencyTag::RepairEndSub;
            }
            j += k;
        }
        tags
    }
}

/// Tag with the standard filler lexicon.
pub fn baseline_repetition_tagger(tokens: &[String]) -> Vec<DisfluencyTag> {
    RepetitionTagger::new().tag(tokens)
}
