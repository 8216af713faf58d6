//! The JSON-lines format: one dialogue object per line, carrying the full
//! data model (tags, features, ratings, knowledge-base rows, provenance).
//!
//! Reading skips blank lines and `#` comment lines and validates the schema
//! line by line; writing emits compact canonical JSON, one dialogue per
//! line, so `write(parse(x))` is a fixpoint on canonical input.

use std::collections::BTreeSet;

use super::{Corpus, CorpusError, Dialogue};

fn violation(line: usize, path: impl Into<String>) -> CorpusError {
    CorpusError::SchemaViolation {
        line,
        path: path.into(),
    }
}

fn validate_dialogue(dialogue: &Dialogue, line: usize) -> Result<(), CorpusError> {
    if dialogue.turns.is_empty() {
        return Err(CorpusError::EmptyDialogue(dialogue.id.clone()));
    }
    if let Some(rating) = dialogue.rating {
        if !(1.0..=5.0).contains(&rating) {
            return Err(violation(line, "rating"));
        }
    }
    for (i, turn) in dialogue.turns.iter().enumerate() {
        for (j, token) in turn.tokens.iter().enumerate() {
            let bad = token.is_empty()
                || token.chars().any(|c| c.is_whitespace() || c.is_uppercase());
            if bad {
                return Err(violation(line, format!("turns[{i}].tokens[{j}]")));
            }
        }
        if let Some(tags) = &turn.tags {
            if tags.len() != turn.tokens.len() {
                return Err(violation(line, format!("turns[{i}].tags")));
            }
        }
        if let Some(features) = &turn.features {
            if features.action_mask.iter().any(|&m| m > 1) {
                return Err(violation(line, format!("turns[{i}].features.action_mask")));
            }
        }
    }
    Ok(())
}

/// Parse JSON lines into a corpus, validating tokens (lowercase, no
/// whitespace), tag-sequence lengths, action masks, rating ranges, and
/// dialogue-id uniqueness.
pub fn parse_jsonl(input: &str) -> Result<Corpus, CorpusError> {
    let mut dialogues = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for (line_no, raw) in input.lines().enumerate() {
        let line_no = line_no + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let dialogue: Dialogue =
            serde_json::from_str(line).map_err(|e| violation(line_no, e.to_string()))?;
        if !seen.insert(dialogue.id.clone()) {
            return Err(CorpusError::DuplicateId {
                line: line_no,
                id: dialogue.id,
            });
        }
        validate_dialogue(&dialogue, line_no)?;
        dialogues.push(dialogue);
    }
    Ok(Corpus { dialogues })
}

/// Write canonical JSON lines; the empty corpus is the empty string.
pub fn write_jsonl(corpus: &Corpus) -> String {
    let mut out = String::new();
    for dialogue in &corpus.dialogues {
        out.push_str(
            &serde_json::to_string(dialogue).expect("dialogue serialization is infallible"),
        );
        out.push('\n');
    }
    out
}
