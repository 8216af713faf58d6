#![allow(dead_code)]

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use dialobust::corpus::{write_babi, Corpus, Dialogue, Turn};

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_dialobust")
}

pub struct RunResult {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(args: &[&str]) -> RunResult {
    run_with_stdin(args, None)
}

pub fn run_with_stdin(args: &[&str], stdin: Option<&str>) -> RunResult {
    let mut cmd = Command::new(bin());
    cmd.args(args);
    let output: Output = if let Some(input) = stdin {
        cmd.stdin(Stdio::piped());
        cmd.stdout(Stdio::piped());
        cmd.stderr(Stdio::piped());
        let mut child = cmd.spawn().expect("spawn dialobust");
        child
            .stdin
            .as_mut()
            .unwrap()
            .write_all(input.as_bytes())
            .unwrap();
        child.wait_with_output().unwrap()
    } else {
        cmd.output().expect("spawn dialobust")
    };
    RunResult {
        status: output.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&output.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&output.stderr).into_owned(),
    }
}

pub fn toks(s: &str) -> Vec<String> {
    s.split_whitespace().map(|t| t.to_string()).collect()
}

/// A small restaurant-booking corpus in the line-oriented text format,
/// slot values drawn from the default lexicon so every pipeline applies.
pub fn sample_corpus(n: usize) -> Corpus {
    let locations = ["paris", "london", "madrid", "rome", "bombay"];
    let cuisines = ["french", "spanish", "indian", "italian", "british"];
    let numbers = ["two", "four", "six", "eight"];
    let prices = ["cheap", "moderate", "expensive"];
    let dialogues = (0..n)
        .map(|i| {
            let loc = locations[i % locations.len()];
            let cui = cuisines[i % cuisines.len()];
            let num = numbers[i % numbers.len()];
            let price = prices[i % prices.len()];
            Dialogue {
                id: format!("d{}", i + 1),
                turns: vec![
                    Turn::user(toks(&format!("good morning i need a table in {loc}"))),
                    Turn::system(toks("i'm on it")),
                    Turn::user(toks(&format!("book a table with {cui} cuisine please"))),
                    Turn::system(toks("how many people would that be")),
                    Turn::user(toks(&format!("we will be {num}"))),
                    Turn::system(toks("which price range are you looking for")),
                    Turn::user(toks(&format!("i am looking for a {price} restaurant"))),
                    Turn::system(toks("ok let me look into some options for you")),
                    Turn::system(toks(&format!("api_call {cui} {loc} {num} {price}"))),
                ],
                rating: None,
                kb_rows: vec![],
            }
        })
        .collect();
    Corpus { dialogues }
}

pub fn write_sample_babi(path: &Path, n: usize) {
    std::fs::write(path, write_babi(&sample_corpus(n)).unwrap()).unwrap();
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
