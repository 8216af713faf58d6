//! Repair-structure extraction and fluent cleanup.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::{validate_sequence, DisfluencyTag, InvalidSequence, RepairQualifier};

/// What happens to the reparandum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepairKind {
    /// The repair region replaces the reparandum.
    Substitution,
    /// The reparandum is abandoned; the repair range is a one-token
    /// placeholder at the onset and is removed by cleanup.
    Deletion,
}

/// One extracted repair: reparandum, interregnum, and repair regions as
/// half-open token ranges. Regions within one structure never overlap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairStructure {
    pub reparandum: Range<usize>,
    pub interregnum: Range<usize>,
    pub repair: Range<usize>,
    pub kind: RepairKind,
}

/// Extract every repair structure. Total on arbitrary tag sequences — the
/// lenient reading is:
///
/// - a retrace deeper than the available prefix is clamped to the onset
///   position;
/// - the interregnum is the maximal run of edit tokens immediately before
///   the onset, clipped to the retraced region; the reparandum is what the
///   retrace covers before the interregnum starts;
/// - an onset arriving while a multi-token repair is open closes the open
///   repair just before itself;
/// - a bare closer with no open repair is ignored;
/// - a repair still open at the end of the sequence closes at the last
///   token.
pub fn extract_repairs(tags: &[DisfluencyTag]) -> Vec<RepairStructure> {
    let mut out = Vec::new();
    // an open multi-token repair: (onset, reparandum, interregnum)
    let mut open: Option<(usize, Range<usize>, Range<usize>)> = None;
    for (i, tag) in tags.iter().enumerate() {
        match tag {
            DisfluencyTag::RepairOnset { retrace, qualifier } => {
                if let Some((onset, reparandum, interregnum)) = open.take() {
                    out.push(RepairStructure {
                        reparandum,
                        interregnum,
                        repair: onset..i,
                        kind: RepairKind::Substitution,
                    });
                }
                let n_eff = (*retrace).min(i);
                let retrace_start = i - n_eff;
                let mut int_start = i;
                while int_start > retrace_start && tags[int_start - 1] == DisfluencyTag::Edit {
                    int_start -= 1;
                }
                let reparandum = retrace_start..int_start;
                let interregnum = int_start..i;
                match qualifier {
                    RepairQualifier::Mid => open = Some((i, reparandum, interregnum)),
                    RepairQualifier::EndSub | RepairQualifier::EndDel => {
                        out.push(RepairStructure {
                            reparandum,
                            interregnum,
                            repair: i..i + 1,
                            kind: if *qualifier == RepairQualifier::EndDel {
                                RepairKind::Deletion
                            } else {
                                RepairKind::Substitution
                            },
                        });
                    }
                }
            }
            DisfluencyTag::RepairEndSub => {
                if let Some((onset, reparandum, interregnum)) = open.take() {
                    out.push(RepairStructure {
                        reparandum,
                        interregnum,
                        repair: onset..i + 1,
                        kind: RepairKind::Substitution,
                    });
                }
            }
            DisfluencyTag::Fluent | DisfluencyTag::Edit => {}
        }
    }
    if let Some((onset, reparandum, interregnum)) = open {
        out.push(RepairStructure {
            reparandum,
            interregnum,
            repair: onset..tags.len(),
            kind: RepairKind::Substitution,
        });
    }
    out
}

/// The fluent rendition of a tagged utterance: validates, then removes edit
/// tokens, reparanda, and deletion repairs, keeping substitution repairs.
pub fn cleanup_tokens(
    tokens: &[String],
    tags: &[DisfluencyTag],
) -> Result<Vec<String>, InvalidSequence> {
    debug_assert_eq!(tokens.len(), tags.len());
    let violations = validate_sequence(tags);
    if !violations.is_empty() {
        return Err(InvalidSequence(violations));
    }
    let mut removed = vec![false; tokens.len()];
    for (i, tag) in tags.iter().enumerate() {
        if *tag == DisfluencyTag::Edit {
            removed[i] = true;
        }
    }
    for structure in extract_repairs(tags) {
        for i in structure.reparandum {
            removed[i] = true;
        }
        if structure.kind == RepairKind::Deletion {
            for i in structure.repair {
                removed[i] = true;
            }
        }
    }
    Ok(tokens
        .iter()
        .zip(&removed)
        .filter(|(_, &r)| !r)
        .map(|(t, _)| t.clone())
        .collect())
}
