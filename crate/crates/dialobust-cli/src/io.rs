//! Input/output plumbing: stdin/stdout via `-`, corpus format dispatch, and
//! the small line-oriented file formats used by `eval` and pool overrides.

use std::fs;
use std::io::{Read, Write};

use dialobust::corpus::{parse_babi, parse_jsonl, write_babi, write_jsonl, Corpus};

use crate::{CliError, Format};

/// Read a whole input, `-` meaning stdin.
pub fn read_input(path: &str) -> Result<Vec<u8>, CliError> {
    if path == "-" {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        fs::read(path).map_err(|e| CliError::Io(format!("{path}: {e}")))
    }
}

/// Read a whole input as UTF-8 text.
pub fn read_text(path: &str) -> Result<String, CliError> {
    let bytes = read_input(path)?;
    String::from_utf8(bytes).map_err(|_| CliError::Data(format!("{path}: not valid UTF-8")))
}

/// Write a whole output, `-` meaning stdout.
pub fn write_output(path: &str, bytes: &[u8]) -> Result<(), CliError> {
    if path == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(bytes)
            .and_then(|_| out.flush())
            .map_err(|e| CliError::Io(format!("stdout: {e}")))
    } else {
        fs::write(path, bytes).map_err(|e| CliError::Io(format!("{path}: {e}")))
    }
}

/// Parse corpus text in the given storage format.
pub fn parse_corpus(text: &str, format: Format, origin: &str) -> Result<Corpus, CliError> {
    let parsed = match format {
        Format::Babi => parse_babi(text),
        Format::Jsonl => parse_jsonl(text),
    };
    parsed.map_err(|e| CliError::Data(format!("{origin}: {e}")))
}

/// Render a corpus in the given storage format.
pub fn render_corpus(corpus: &Corpus, format: Format) -> Result<String, CliError> {
    match format {
        Format::Babi => write_babi(corpus).map_err(|e| {
            CliError::Data(format!(
                "dialogue `{e}` cannot be represented in the text format; \
                 write it as json lines instead"
            ))
        }),
        Format::Jsonl => Ok(write_jsonl(corpus)),
    }
}

/// Read one label per line, preserving interior whitespace.
pub fn read_label_lines(path: &str) -> Result<Vec<String>, CliError> {
    Ok(read_text(path)?
        .lines()
        .map(|l| l.trim_end_matches('\r').to_string())
        .collect())
}

/// Read tab-separated `<id>\t<call>` pairs, one per line.
pub fn read_call_pairs(path: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut pairs = Vec::new();
    for (idx, line) in read_text(path)?.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let (id, call) = line.split_once('\t').ok_or_else(|| {
            CliError::Data(format!("{path}: line {}: expected <id>\t<call>", idx + 1))
        })?;
        pairs.push((id.to_string(), call.to_string()));
    }
    Ok(pairs)
}

/// Read pool/template override files: one utterance per line, lowercased and
/// whitespace-tokenized, blank lines skipped.
pub fn read_utterance_file(path: &str) -> Result<Vec<Vec<String>>, CliError> {
    Ok(read_text(path)?
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.to_lowercase()
                .split_whitespace()
                .map(str::to_string)
                .collect()
        })
        .collect())
}
