//! Token-by-token repair tracking for incremental (left-to-right) consumers.

use super::{DisfluencyTag, RepairKind, RepairQualifier, RepairStructure};

/// A multi-token repair currently open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenRepair {
    /// Token position of the onset.
    pub onset: usize,
    /// Retrace depth announced at the onset.
    pub retrace: usize,
}

/// Snapshot after one step (or after `finish`).
#[derive(Clone, Debug, PartialEq)]
pub struct TrackerState {
    /// The repair currently open, if any.
    pub open_repair: Option<OpenRepair>,
    /// Fluent rendition of everything consumed so far; an open repair is
    /// provisionally treated as closing at the current end.
    pub cleaned_prefix: Vec<String>,
    /// Whether this step completed at least one repair structure.
    pub closed_structure: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TrackerError {
    #[error("tracker already finished; feed order is token order")]
    OutOfOrder,
}

/// Incremental counterpart of repair extraction and cleanup. Feeding the
/// whole utterance and finishing yields the same fluent rendition as the
/// batch cleanup (the tracker is lenient: malformed sequences are consumed
/// under the same total rules as extraction).
#[derive(Clone, Debug, Default)]
pub struct IncrementalTracker {
    tokens: Vec<String>,
    tags: Vec<DisfluencyTag>,
    completed: Vec<RepairStructure>,
    open: Option<OpenRepair>,
    finished: bool,
}

impl IncrementalTracker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Consume the next token and its tag.
    pub fn feed(&mut self, token: &str, tag: DisfluencyTag) -> Result<TrackerState, TrackerError> {
        if self.finished {
            return Err(TrackerError::OutOfOrder);
        }
        let i = self.tokens.len();
        self.tokens.push(token.to_string());
        self.tags.push(tag);
        let mut closed = false;
        match tag {
            DisfluencyTag::Fluent | DisfluencyTag::Edit => {}
            DisfluencyTag::RepairOnset { retrace, qualifier } => {
                if let Some(open) = self.open.take() {
                    self.completed.push(self.close_at(&open, i));
                    closed = true;
                }
                match qualifier {
                    RepairQualifier::Mid => {
                        self.open = Some(OpenRepair { onset: i, retrace });
                    }
                    RepairQualifier::EndSub | RepairQualifier::EndDel => {
                        let open = OpenRepair { onset: i, retrace };
                        let mut structure = self.close_at(&open, i + 1);
                        if qualifier == RepairQualifier::EndDel {
                            structure.kind = RepairKind::Deletion;
                        }
                        self.completed.push(structure);
                        closed = true;
                    }
                }
            }
            DisfluencyTag::RepairEndSub => {
                if let Some(open) = self.open.take() {
                    self.completed.push(self.close_at(&open, i + 1));
                    closed = true;
                }
            }
        }
        Ok(self.state(closed))
    }

    /// Declare the utterance complete, closing any still-open repair at the
    /// last token.
    pub fn finish(&mut self) -> Result<TrackerState, TrackerError> {
        if self.finished {
            return Err(TrackerError::OutOfOrder);
        }
        self.finished = true;
        let closed = if let Some(open) = self.open.take() {
            let end = self.tags.len();
            self.completed.push(self.close_at(&open, end));
            true
        } else {
            false
        };
        Ok(self.state(closed))
    }

    /// Build the structure for a repair spanning `onset .. end`, using the
    /// same clamping and interregnum rules as batch extraction.
    fn close_at(&self, open: &OpenRepair, end: usize) -> RepairStructure {
        let i = open.onset;
        let n_eff = open.retrace.min(i);
        let retrace_start = i - n_eff;
        let mut int_start = i;
        while int_start > retrace_start && self.tags[int_start - 1] == DisfluencyTag::Edit {
            int_start -= 1;
        }
        RepairStructure {
            reparandum: retrace_start..int_start,
            interregnum: int_start..i,
            repair: i..end,
            kind: RepairKind::Substitution,
        }
    }

    fn state(&self, closed_structure: bool) -> TrackerState {
        let mut removed = vec![false; self.tokens.len()];
        for (i, tag) in self.tags.iter().enumerate() {
            if *tag == DisfluencyTag::Edit {
                removed[i] = true;
            }
        }
        let provisional = self
            .open
            .as_ref()
            .map(|open| self.close_at(open, self.tags.len()));
        for structure in self.completed.iter().chain(provisional.iter()) {
            for i in structure.reparandum.clone() {
                removed[i] = true;
            }
            if structure.kind == RepairKind::Deletion {
                for i in structure.repair.clone() {
                    removed[i] = true;
                }
            }
        }
        let cleaned_prefix = self
            .tokens
            .iter()
            .zip(&removed)
            .filter(|(_, &r)| !r)
            .map(|(t, _)| t.clone())
            .collect();
        TrackerState {
            open_repair: self.open.clone(),
            cleaned_prefix,
            closed_structure,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::DisfluencyTag as T;
    use super::super::RepairQualifier as Q;
    use super::*;

    #[test]
    fn open_repair_hides_the_reparandum_provisionally() {
        let mut tracker = IncrementalTracker::new();
        tracker.feed("can", T::Fluent).unwrap();
        tracker.feed("you", T::Fluent).unwrap();
        let state = tracker
            .feed("can", T::repair_onset(2, Q::Mid).unwrap())
            .unwrap();
        assert_eq!(state.open_repair, Some(OpenRepair { onset: 2, retrace: 2 }));
        assert_eq!(state.cleaned_prefix, vec!["can"]);
        assert!(!state.closed_structure);
        let state = tracker.feed("you", T::RepairEndSub).unwrap();
        assert!(state.closed_structure);
        assert_eq!(state.cleaned_prefix, vec!["can", "you"]);
        let state = tracker.finish().unwrap();
        assert!(!state.closed_structure);
        assert_eq!(state.cleaned_prefix, vec!["can", "you"]);
    }

    #[test]
    fn finish_closes_a_dangling_repair() {
        let mut tracker = IncrementalTracker::new();
        tracker.feed("a", T::Fluent).unwrap();
        tracker
            .feed("b", T::repair_onset(1, Q::Mid).unwrap())
            .unwrap();
        let state = tracker.finish().unwrap();
        assert!(state.closed_structure);
        assert_eq!(state.cleaned_prefix, vec!["b"]);
        assert!(matches!(tracker.finish(), Err(TrackerError::OutOfOrder)));
    }
}
