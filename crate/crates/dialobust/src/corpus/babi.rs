//! The line-oriented text format: numbered `user<TAB>system` exchange lines,
//! standalone `api_call` lines, and a blank line after every dialogue.
//!
//! Reading is lenient — comment lines starting with `#` are skipped, repeated
//! blank lines collapse, input is lowercased, and a missing trailing blank
//! line is tolerated. Writing is canonical, so `write(parse(x))` is a
//! fixpoint on any accepted input. The format carries no tags, features,
//! ratings, or provenance; those belong to the JSON-lines format.

use super::{Corpus, CorpusError, Dialogue, Speaker, Turn};

fn tokenize(s: &str) -> Vec<String> {
    s.split_whitespace().map(|t| t.to_string()).collect()
}

/// Parse the text format. Dialogue ids are generated as `d1`, `d2`, … in
/// order of appearance. Line indices must start at 1 and increment by one
/// within each dialogue; blank lines end a dialogue and reset the counter.
pub fn parse_babi(input: &str) -> Result<Corpus, CorpusError> {
    let mut dialogues = Vec::new();
    let mut turns: Vec<Turn> = Vec::new();
    let mut last_index = 0usize;

    let flush = |turns: &mut Vec<Turn>, dialogues: &mut Vec<Dialogue>| {
        if !turns.is_empty() {
            dialogues.push(Dialogue {
                id: format!("d{}", dialogues.len() + 1),
                rating: None,
                kb_rows: Vec::new(),
                turns: std::mem::take(turns),
            });
        }
    };

    for (line_no, raw) in input.lines().enumerate() {
        let line_no = line_no + 1;
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            flush(&mut turns, &mut dialogues);
            last_index = 0;
            continue;
        }
        let line = line.to_lowercase();
        let (index_str, rest) = line
            .split_once(char::is_whitespace)
            .ok_or(CorpusError::MalformedLine(line_no))?;
        let index: usize = index_str
            .parse()
            .map_err(|_| CorpusError::MalformedLine(line_no))?;
        if index != last_index + 1 {
            return Err(CorpusError::NonMonotonicIndex(line_no));
        }
        last_index = index;
        match rest.split_once('\t') {
            Some((user_text, system_text)) => {
                let user_tokens = tokenize(user_text);
                let system_tokens = tokenize(system_text);
                if user_tokens.is_empty() || system_tokens.is_empty() {
                    return Err(CorpusError::MalformedLine(line_no));
                }
                turns.push(Turn::user(user_tokens));
                turns.push(Turn::system(system_tokens));
            }
            None => {
                // a line without a tab is legal only for standalone api calls
                if !rest.starts_with("api_call") {
                    return Err(CorpusError::MalformedLine(line_no));
                }
                turns.push(Turn::system(tokenize(rest)));
            }
        }
    }
    flush(&mut turns, &mut dialogues);
    Ok(Corpus { dialogues })
}

/// Write the canonical text form. Errors when a dialogue is empty or a turn
/// cannot be expressed: an unpaired user turn, a standalone system turn that
/// is not an api call, an action label diverging from the system text, or a
/// labelled user turn. Tags, features, ratings, and provenance are not
/// representable and are silently omitted.
pub fn write_babi(corpus: &Corpus) -> Result<String, CorpusError> {
    let mut out = String::new();
    for dialogue in &corpus.dialogues {
        if dialogue.turns.is_empty() {
            return Err(CorpusError::EmptyDialogue(dialogue.id.clone()));
        }
        let mut index = 1usize;
        let mut i = 0usize;
        while i < dialogue.turns.len() {
            let turn = &dialogue.turns[i];
            match turn.speaker {
                Speaker::User => {
                    if turn.action_label.is_some() {
                        return Err(CorpusError::UnrepresentableTurn(
                            dialogue.id.clone(),
                        ));
                    }
                    let system = dialogue.turns.get(i + 1);
                    let system = match system {
                        Some(s) if s.speaker == Speaker::System => s,
                        _ => {
                            return Err(CorpusError::UnrepresentableTurn(
                                dialogue.id.clone(),
                            ))
                        }
                    };
                    let system_text = system.tokens.join(" ");
                    if let Some(label) = &system.action_label {
                        if *label != system_text {
                            return Err(CorpusError::UnrepresentableTurn(
                                dialogue.id.clone(),
                            ));
                        }
                    }
                    if turn.tokens.is_empty() || system.tokens.is_empty() {
                        return Err(CorpusError::UnrepresentableTurn(
                            dialogue.id.clone(),
                        ));
                    }
                    out.push_str(&format!(
                        "{index} {}\t{system_text}\n",
                        turn.tokens.join(" ")
                    ));
                    i += 2;
                }
                Speaker::System => {
                    if turn.tokens.first().map(String::as_str) != Some("api_call") {
                        return Err(CorpusError::UnrepresentableTurn(
                            dialogue.id.clone(),
                        ));
                    }
                    let text = turn.tokens.join(" ");
                    if let Some(label) = &turn.action_label {
                        if *label != text {
                            return Err(CorpusError::UnrepresentableTurn(
                                dialogue.id.clone(),
                            ));
                        }
                    }
                    out.push_str(&format!("{index} {text}\n"));
                    i += 1;
                }
            }
            index += 1;
        }
        out.push('\n');
    }
    Ok(out)
}
