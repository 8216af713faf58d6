//! Well-formedness checking for tag sequences.

use super::{DisfluencyTag, RepairQualifier};

/// One well-formedness defect, addressed by token position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// An onset at `index` retraces `retrace` tokens, reaching before the
    /// start of the utterance.
    RetracePastStart { index: usize, retrace: usize },
    /// An onset appears at `index` while another repair is still open.
    NestedRepair { index: usize },
    /// The multi-token repair opened at `onset` never closes.
    UnclosedMid { onset: usize },
    /// A bare closer at `index` with no open repair.
    DanglingRepairEnd { index: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::RetracePastStart { index, retrace } => write!(
                f,
                "retrace of {retrace} at position {index} reaches past the utterance start"
            ),
            Violation::NestedRepair { index } => {
                write!(f, "repair onset at position {index} nests inside an open repair")
            }
            Violation::UnclosedMid { onset } => {
                write!(f, "repair opened at position {onset} never closes")
            }
            Violation::DanglingRepairEnd { index } => {
                write!(f, "closer at position {index} has no open repair")
            }
        }
    }
}

/// A tag sequence rejected by [`validate_sequence`]; carries every violation
/// found.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid tag sequence: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct InvalidSequence(pub Vec<Violation>);

/// Collect every well-formedness violation in scan order (an unclosed repair
/// is reported last). An empty result means the sequence is valid.
///
/// A nested onset is reported but does not disturb the already-open repair,
/// so one stray tag yields one violation rather than a cascade.
pub fn validate_sequence(tags: &[DisfluencyTag]) -> Vec<Violation> {
    let mut violations = Vec::new();
    let mut open_mid: Option<usize> = None;
    for (i, tag) in tags.iter().enumerate() {
        match tag {
            DisfluencyTag::Fluent | DisfluencyTag::Edit => {}
            DisfluencyTag::RepairOnset { retrace, qualifier } => {
                if *retrace > i {
                    violations.push(Violation::RetracePastStart {
                        index: i,
                        retrace: *retrace,
                    });
                }
                if open_mid.is_some() {
                    violations.push(Violation::NestedRepair { index: i });
                } else if *qualifier == RepairQualifier::Mid {
                    open_mid = Some(i);
                }
            }
            DisfluencyTag::RepairEndSub => {
                if open_mid.take().is_none() {
                    violations.push(Violation::DanglingRepairEnd { index: i });
                }
            }
        }
    }
    if let Some(onset) = open_mid {
        violations.push(Violation::UnclosedMid { onset });
    }
    violations
}
