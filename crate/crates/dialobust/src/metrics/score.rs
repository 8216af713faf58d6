//! Disfluency tagging quality: three pooled F1 families over aligned gold
//! and predicted tag sequences.
//!
//! * `f_e` — per-token detection of edit (filler) tokens;
//! * `f_rm` — exact repair-onset matches (retrace depth and qualifier must
//!   both agree);
//! * `f_rps` — per-token membership in a repair structure (reparandum or
//!   repair; optionally also the interregnum), with structures recovered by
//!   the total extraction rules of
//!   [`extract_repairs`](crate::disfluency::extract_repairs).

use crate::disfluency::{extract_repairs, DisfluencyTag, TaggedUtterance};

use super::{Counts, MetricError, MetricReport};

/// Options for [`score_disfluency_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScoreOptions {
    /// Count interregnum tokens as part of the structure for `f_rps`.
    /// Excluded by default: filler-like editing terms are already measured
    /// by `f_e`, and crediting them twice inflates structure recall.
    pub include_interregnum_in_rps: bool,
}

/// The three pooled F1 values with their raw confusion counts.
#[derive(Clone, Debug, PartialEq)]
pub struct DisfluencyScore {
    pub f_e: f64,
    pub f_rm: f64,
    pub f_rps: f64,
    pub edit_counts: Counts,
    pub onset_counts: Counts,
    pub structure_counts: Counts,
}

impl DisfluencyScore {
    /// The score as three renderable rows (`f_e`, `f_rm`, `f_rps`), each
    /// carrying its raw counts in the extras.
    pub fn reports(&self) -> Vec<MetricReport> {
        let row = |name: &str, value: f64, counts: &Counts| MetricReport {
            name: name.to_string(),
            value,
            support: counts.support(),
            extras: counts.extras(),
        };
        vec![
            row("f_e", self.f_e, &self.edit_counts),
            row("f_rm", self.f_rm, &self.onset_counts),
            row("f_rps", self.f_rps, &self.structure_counts),
        ]
    }
}

fn membership(tags: &[DisfluencyTag], include_interregnum: bool) -> Vec<bool> {
    let mut member = vec![false; tags.len()];
    for s in extract_repairs(tags) {
        for i in s.reparandum.clone() {
            member[i] = true;
        }
        for i in s.repair.clone() {
            member[i] = true;
        }
        if include_interregnum {
            for i in s.interregnum.clone() {
                member[i] = true;
            }
        }
    }
    member
}

/// Score predicted tag sequences against gold with default options.
pub fn score_disfluency(
    gold: &[TaggedUtterance],
    pred: &[Vec<DisfluencyTag>],
) -> Result<DisfluencyScore, MetricError> {
    score_disfluency_with(gold, pred, &ScoreOptions::default())
}

/// Score predicted tag sequences against gold.
///
/// `pred` must contain one tag sequence per gold utterance, each exactly as
/// long as the utterance. Counts are pooled over all utterances before the
/// F1s are computed (micro averaging).
pub fn score_disfluency_with(
    gold: &[TaggedUtterance],
    pred: &[Vec<DisfluencyTag>],
    options: &ScoreOptions,
) -> Result<DisfluencyScore, MetricError> {
    if gold.len() != pred.len() {
        return Err(MetricError::ShapeMismatch {
            expected: gold.len(),
            got: pred.len(),
        });
    }
    let mut edits = Counts::default();
    let mut onsets = Counts::default();
    let mut structures = Counts::default();
    for (g, p) in gold.iter().zip(pred) {
        if g.tags.len() != p.len() {
            return Err(MetricError::ShapeMismatch {
                expected: g.tags.len(),
                got: p.len(),
            });
        }
        for (gt, pt) in g.tags.iter().zip(p) {
            edits.observe(
                *gt == DisfluencyTag::Edit,
                *pt == DisfluencyTag::Edit,
            );
            let gold_onset = matches!(gt, DisfluencyTag::RepairOnset { .. });
            let pred_onset = matches!(pt, DisfluencyTag::RepairOnset { .. });
            // Onsets must match exactly; a disagreeing pair is both a miss
            // and a false claim.
            if gold_onset && pred_onset && gt == pt {
                onsets.observe(true, true);
            } else {
                onsets.observe(gold_onset, false);
                onsets.observe(false, pred_onset);
            }
        }
        let gm = membership(&g.tags, options.include_interregnum_in_rps);
        let pm = membership(p, options.include_interregnum_in_rps);
        for (g_in, p_in) in gm.into_iter().zip(pm) {
            structures.observe(g_in, p_in);
        }
    }
    Ok(DisfluencyScore {
        f_e: edits.f1(),
        f_rm: onsets.f1(),
        f_rps: structures.f1(),
        edit_counts: edits,
        onset_counts: onsets,
        structure_counts: structures,
    })
}
