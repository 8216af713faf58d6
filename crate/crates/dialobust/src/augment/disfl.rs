//! Disfluency injection: hesitations, self-corrections and restarts.
//!
//! Each operation inserts tokens at a boundary that does not split an
//! existing repair structure or provenance span, writes repair tags that
//! make cleanup remove exactly the inserted material (minus what a repair
//! keeps), and records a provenance span covering the insertion. The
//! cleanup of an augmented utterance therefore always equals the cleanup of
//! its source.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;

use rand::Rng;
use rayon::prelude::*;

use crate::corpus::{Corpus, Speaker};
use crate::disfluency::{DisfluencyTag, RepairQualifier, TaggedUtterance};
use crate::seed::dialogue_rng;

use super::{
    blocked_positions, boundary_blocked, removed_positions, splice,
    AugmentError, AugmentationTrace, DisflAugConfig, RestartKind,
};

/// A detected slot-value occurrence: the token range and the slot type it
/// belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotSpan {
    pub range: Range<usize>,
    pub slot_type: String,
}

/// Find slot-value occurrences by leftmost-longest lexicon matching.
///
/// Lexicon values may be multi-token (whitespace-separated). Scanning is
/// left to right; at each position the longest matching value wins, with
/// ties between slot types broken by lexicographic slot-type order. Matches
/// never overlap.
pub fn detect_slot_spans(
    tokens: &[String],
    lexicon: &BTreeMap<String, BTreeSet<String>>,
) -> Vec<SlotSpan> {
    // Pre-split values once; BTreeMap order makes tie-breaking stable.
    let split: Vec<(&String, Vec<Vec<&str>>)> = lexicon
        .iter()
        .map(|(slot, values)| {
            (
                slot,
                values
                    .iter()
                    .map(|v| v.split_whitespace().collect())
                    .collect(),
            )
        })
        .collect();
    let mut spans = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let mut best: Option<(usize, &String)> = None; // (length, slot type)
        for (slot, values) in &split {
            for value in values {
                let n = value.len();
                if n == 0 || i + n > tokens.len() {
                    continue;
                }
                if value.iter().zip(&tokens[i..i + n]).all(|(v, t)| *v == t)
                    && best.map_or(true, |(len, _)| n > len)
                {
                    best = Some((n, slot));
                }
            }
        }
        if let Some((len, slot)) = best {
            spans.push(SlotSpan {
                range: i..i + len,
                slot_type: slot.clone(),
            });
            i += len;
        } else {
            i += 1;
        }
    }
    spans
}

/// Mutable working state of one utterance while operations are applied.
struct UttState {
    tokens: Vec<String>,
    tags: Vec<DisfluencyTag>,
    traces: Vec<AugmentationTrace>,
}

impl UttState {
    fn fluent(tokens: &[String]) -> Self {
        UttState {
            tokens: tokens.to_vec(),
            tags: vec![DisfluencyTag::Fluent; tokens.len()],
            traces: Vec::new(),
        }
    }

    fn into_tagged(self) -> TaggedUtterance {
        TaggedUtterance {
            tokens: self.tokens,
            tags: self.tags,
            provenance: self.traces,
        }
    }

    fn splice(&mut self, at: usize, new_tokens: Vec<String>, new_tags: Vec<DisfluencyTag>) {
        splice(
            &mut self.tokens,
            &mut self.tags,
            &mut self.traces,
            at,
            new_tokens,
            new_tags,
        );
    }

    /// Insert one filler template at a safe boundary. Applies to any
    /// non-empty utterance (the end is always a safe boundary).
    fn hesitation(&mut self, cfg: &DisflAugConfig, rng: &mut impl Rng) {
        if self.tokens.is_empty() {
            return;
        }
        let template = cfg.hesitation_templates
            [rng.random_range(0..cfg.hesitation_templates.len())]
        .clone();
        let len = self.tokens.len();
        let eligible: Vec<usize> = (1..len)
            .filter(|&b| !boundary_blocked(b, &self.tags, &self.traces))
            .collect();
        let b = if eligible.is_empty() {
            len
        } else {
            eligible[rng.random_range(0..eligible.len())]
        };
        let m = template.len();
        self.splice(b, template, vec![DisfluencyTag::Edit; m]);
        self.traces.push(AugmentationTrace::Hesitation { span: b..b + m });
    }

    /// Insert a wrong phrase plus correction marker before an eligible slot
    /// phrase and tag the original phrase as the repair.
    fn correction(
        &mut self,
        spans: &[SlotSpan],
        cfg: &DisflAugConfig,
        rng: &mut impl Rng,
    ) -> Result<(), AugmentError> {
        let blocked = blocked_positions(&self.tags, &self.traces);
        let usable = |range: &Range<usize>| {
            range
                .clone()
                .all(|i| self.tags[i] == DisfluencyTag::Fluent && !blocked[i])
        };
        let eligible: Vec<&SlotSpan> = spans
            .iter()
            .filter(|s| {
                usable(&s.range)
                    && cfg
                        .slot_lexicon
                        .get(&s.slot_type)
                        .is_some_and(|values| values.len() >= 2)
            })
            .collect();
        if eligible.is_empty() {
            return Err(AugmentError::NoEligibleSlot);
        }
        let slot = eligible[rng.random_range(0..eligible.len())];

        let true_value = self.tokens[slot.range.clone()].join(" ");
        let alternatives: Vec<&String> = cfg.slot_lexicon[&slot.slot_type]
            .iter()
            .filter(|v| **v != true_value)
            .collect();
        let wrong: Vec<String> = alternatives
            [rng.random_range(0..alternatives.len())]
        .split_whitespace()
        .map(str::to_string)
        .collect();
        let marker = cfg.correction_marker_templates
            [rng.random_range(0..cfg.correction_marker_templates.len())]
        .clone();
        let long = rng.random_bool(cfg.p_long_correction);

        // The corrected phrase: optionally pull in a preposition head on the
        // left (within three positions) and one trailing content token.
        let mut phrase = slot.range.clone();
        if long {
            let lo = slot.range.start.saturating_sub(3);
            for q in (lo..slot.range.start).rev() {
                if cfg.prepositions.contains(&self.tokens[q])
                    && usable(&(q..slot.range.start))
                {
                    phrase.start = q;
                    break;
                }
            }
            let next = slot.range.end;
            if next < self.tokens.len()
                && usable(&(next..next + 1))
                && !cfg.prepositions.contains(&self.tokens[next])
            {
                phrase.end = next + 1;
            }
        }

        // Wrong phrase = phrase content with the slot value swapped out.
        let mut wrong_phrase: Vec<String> = Vec::new();
        wrong_phrase.extend_from_slice(&self.tokens[phrase.start..slot.range.start]);
        wrong_phrase.extend(wrong);
        wrong_phrase.extend_from_slice(&self.tokens[slot.range.end..phrase.end]);

        let inserted_len = wrong_phrase.len() + marker.len();
        let mut new_tokens = wrong_phrase.clone();
        new_tokens.extend(marker.iter().cloned());
        let mut new_tags = vec![DisfluencyTag::Fluent; wrong_phrase.len()];
        new_tags.extend(vec![DisfluencyTag::Edit; marker.len()]);

        let phrase_len = phrase.end - phrase.start;
        let at = phrase.start;
        self.splice(at, new_tokens, new_tags);

        // Tag the original phrase as the repair of the inserted material.
        let onset = at + inserted_len;
        if phrase_len == 1 {
            self.tags[onset] =
                DisfluencyTag::repair_onset_extended(inserted_len, RepairQualifier::EndSub)
                    .expect("inserted block is non-empty");
        } else {
            self.tags[onset] =
                DisfluencyTag::repair_onset_extended(inserted_len, RepairQualifier::Mid)
                    .expect("inserted block is non-empty");
            self.tags[onset + phrase_len - 1] = DisfluencyTag::RepairEndSub;
        }
        self.traces
            .push(AugmentationTrace::Correction { span: at..at + inserted_len });
        Ok(())
    }

    /// Insert false-start copies (and optionally an interregnum) at a
    /// restart point, tagging each copy as a repair of what precedes it.
    fn restart(
        &mut self,
        kind: RestartKind,
        cfg: &DisflAugConfig,
        rng: &mut impl Rng,
    ) -> Result<(), AugmentError> {
        let len = self.tokens.len();
        let blocked = blocked_positions(&self.tags, &self.traces);
        let removed = removed_positions(&self.tags);
        // A boundary r restarts the span [p..r): it must not split anything
        // and the re-spoken (fluent) part of the span must be non-empty.
        let eligible_rs = |p: usize| -> Vec<usize> {
            (p + 1..len)
                .filter(|&r| {
                    !boundary_blocked(r, &self.tags, &self.traces)
                        && (p..r).any(|i| !removed[i])
                })
                .collect()
        };

        let p = match kind {
            RestartKind::Clausal => 0,
            RestartKind::PP => {
                let candidates: Vec<usize> = (0..len)
                    .filter(|&q| {
                        cfg.prepositions.contains(&self.tokens[q])
                            && self.tags[q] == DisfluencyTag::Fluent
                            && !blocked[q]
                            && !eligible_rs(q).is_empty()
                    })
                    .collect();
                if candidates.is_empty() {
                    return Err(AugmentError::NoPrepositionFound);
                }
                candidates[rng.random_range(0..candidates.len())]
            }
        };
        let rs = eligible_rs(p);
        if rs.is_empty() {
            return Err(AugmentError::NoRestartPoint);
        }
        let r = rs[rng.random_range(0..rs.len())];

        let with_interregnum = rng.random_bool(cfg.p_restart_interregnum);
        let interregnum: Vec<String> = if with_interregnum {
            cfg.interregnum_templates
                [rng.random_range(0..cfg.interregnum_templates.len())]
            .clone()
        } else {
            Vec::new()
        };

        // The copy re-speaks only the fluent content of [p..r).
        let copy: Vec<String> = (p..r)
            .filter(|&i| !removed[i])
            .map(|i| self.tokens[i].clone())
            .collect();
        let c = copy.len();
        let m = interregnum.len();
        let fs = cfg.restart_repeats;

        let mut new_tokens: Vec<String> = Vec::new();
        let mut new_tags: Vec<DisfluencyTag> = Vec::new();
        let push_copy = |retrace: usize,
                             new_tokens: &mut Vec<String>,
                             new_tags: &mut Vec<DisfluencyTag>| {
            new_tokens.extend(copy.iter().cloned());
            if c == 1 {
                new_tags.push(
                    DisfluencyTag::repair_onset_extended(retrace, RepairQualifier::EndSub)
                        .expect("retrace >= 1"),
                );
            } else {
                new_tags.push(
                    DisfluencyTag::repair_onset_extended(retrace, RepairQualifier::Mid)
                        .expect("retrace >= 1"),
                );
                new_tags.extend(vec![DisfluencyTag::Fluent; c - 2]);
                new_tags.push(DisfluencyTag::RepairEndSub);
            }
        };

        for k in 1..=fs {
            let last = k == fs;
            if last && m > 0 {
                new_tokens.extend(interregnum.iter().cloned());
                new_tags.extend(vec![DisfluencyTag::Edit; m]);
            }
            // The first copy retraces the original span; later copies
            // retrace the previous copy, plus the interregnum when present.
            let retrace = if k == 1 {
                (r - p) + if last { m } else { 0 }
            } else {
                c + if last { m } else { 0 }
            };
            push_copy(retrace, &mut new_tokens, &mut new_tags);
        }

        let total = new_tokens.len();
        self.splice(r, new_tokens, new_tags);
        self.traces
            .push(AugmentationTrace::Restart { span: r..r + total });
        Ok(())
    }
}

/// Insert one hesitation (filler template) into `tokens` at a uniformly
/// chosen safe boundary, tagging the fillers as edits.
pub fn augment_hesitation(
    tokens: &[String],
    cfg: &DisflAugConfig,
    rng: &mut impl Rng,
) -> TaggedUtterance {
    let mut state = UttState::fluent(tokens);
    state.hesitation(cfg, rng);
    state.into_tagged()
}

/// Insert one self-correction before a slot value found in `spans`.
///
/// The wrong value is drawn uniformly from the other lexicon values of the
/// slot's type; a correction marker follows it as the editing term, and the
/// original phrase is tagged as the repair.
pub fn augment_correction(
    tokens: &[String],
    spans: &[SlotSpan],
    cfg: &DisflAugConfig,
    rng: &mut impl Rng,
) -> Result<TaggedUtterance, AugmentError> {
    let mut state = UttState::fluent(tokens);
    state.correction(spans, cfg, rng)?;
    Ok(state.into_tagged())
}

/// Insert one restart (false-start copies of the span from the restart
/// origin to a uniformly chosen break point).
pub fn augment_restart(
    tokens: &[String],
    cfg: &DisflAugConfig,
    rng: &mut impl Rng,
) -> Result<TaggedUtterance, AugmentError> {
    let mut state = UttState::fluent(tokens);
    state.restart(cfg.restart_kind, cfg, rng)?;
    Ok(state.into_tagged())
}

/// Apply the disfluency pipeline to every user turn of the corpus.
///
/// Per user turn, independent Bernoulli draws decide whether to attempt a
/// hesitation, a correction and a restart (in that order, capped at
/// `max_per_turn` applied operations). Operations that cannot apply to the
/// turn are skipped; a prepositional restart falls back to a clausal one
/// when no preposition is usable. Turns that end up untouched are returned
/// bit-for-bit unchanged; touched turns carry full tag sequences and
/// provenance. System turns are never modified.
///
/// Randomness is derived per dialogue from `(seed, dialogue index)`, so the
/// result does not depend on thread count.
pub fn augment_corpus(
    corpus: &Corpus,
    cfg: &DisflAugConfig,
    seed: u64,
) -> Result<Corpus, AugmentError> {
    cfg.validate()?;
    let dialogues = corpus
        .dialogues
        .par_iter()
        .enumerate()
        .map(|(idx, dialogue)| {
            let mut rng = dialogue_rng(seed, idx);
            let mut out = dialogue.clone();
            for turn in &mut out.turns {
                if turn.speaker != Speaker::User {
                    continue;
                }
                let want_hesitation = rng.random_bool(cfg.p_hesitation);
                let want_correction = rng.random_bool(cfg.p_correction);
                let want_restart = rng.random_bool(cfg.p_restart);
                if !(want_hesitation || want_correction || want_restart) {
                    continue;
                }
                let mut state = UttState {
                    tokens: turn.tokens.clone(),
                    tags: turn
                        .tags
                        .clone()
                        .unwrap_or_else(|| {
                            vec![DisfluencyTag::Fluent; turn.tokens.len()]
                        }),
                    traces: turn.traces.clone(),
                };
                let mut applied = 0usize;
                if want_hesitation && applied < cfg.max_per_turn {
                    state.hesitation(cfg, &mut rng);
                    applied += 1;
                }
                if want_correction && applied < cfg.max_per_turn {
                    let spans =
                        detect_slot_spans(&state.tokens, &cfg.slot_lexicon);
                    if state.correction(&spans, cfg, &mut rng).is_ok() {
                        applied += 1;
                    }
                }
                if want_restart && applied < cfg.max_per_turn {
                    let outcome = state.restart(cfg.restart_kind, cfg, &mut rng);
                    match outcome {
                        Ok(()) => applied += 1,
                        Err(AugmentError::NoPrepositionFound) => {
                            if state
                                .restart(RestartKind::Clausal, cfg, &mut rng)
                                .is_ok()
                            {
                                applied += 1;
                            }
                        }
                        Err(_) => {}
                    }
                }
                if applied > 0 {
                    turn.tokens = state.tokens;
                    turn.tags = Some(state.tags);
                    turn.traces = state.traces;
                }
            }
            out
        })
        .collect();
    Ok(Corpus { dialogues })
}
