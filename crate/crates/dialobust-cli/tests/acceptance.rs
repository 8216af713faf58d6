//! Acceptance gate, command level: repeated runs with the same seed, inputs,
//! and config are byte-identical, independent of worker count. Prints one
//! `[PASS]`/`[FAIL]` line (run with `--nocapture` to see it).

mod common;

use std::fs;
use std::path::Path;

use common::*;

fn check(name: &str, cond: bool, detail: String) {
    if cond {
        println!("[PASS] {name}: {detail}");
    } else {
        println!("[FAIL] {name}: {detail}");
        panic!("[FAIL] {name}: {detail}");
    }
}

fn manifest_without_wall_time(path: &str) -> serde_json::Value {
    let mut v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("wall_time_ms");
    v
}

#[test]
fn acceptance_7_repeated_runs_are_byte_identical() {
    let name = "7 same seed and inputs reproduce byte-identical outputs";
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("input.babi");
    write_sample_babi(&input, 200);
    let input = input.to_str().unwrap();

    let mut compared = 0usize;
    for sub in ["augment-disfluency", "augment-ood", "turn-dropout", "counterfeit"] {
        let mut outputs: Vec<(Vec<u8>, serde_json::Value)> = Vec::new();
        for (run_idx, jobs) in [(0, "8"), (1, "8"), (2, "1")] {
            let out = dir
                .path()
                .join(format!("{sub}-{run_idx}.jsonl"))
                .to_str()
                .unwrap()
                .to_string();
            let r = run(&[
                sub, "--input", input, "--output", &out, "--seed", "42", "--jobs", jobs,
            ]);
            assert_eq!(r.status, 0, "{sub} failed: {}", r.stderr);
            outputs.push((
                fs::read(&out).unwrap(),
                manifest_without_wall_time(&format!("{out}.manifest.json")),
            ));
        }
        let (bytes0, manifest0) = &outputs[0];
        for (bytes, manifest) in &outputs[1..] {
            assert_eq!(bytes, bytes0, "{sub} output differs between runs");
            assert_eq!(manifest, manifest0, "{sub} manifest differs between runs");
            compared += 1;
        }

        // the frozen-at-first-green golden catches drift across code changes
        let golden = Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/fixtures")
            .join(format!("golden_{sub}_seed42.jsonl"));
        if golden.exists() {
            assert_eq!(
                fs::read(&golden).unwrap(),
                *bytes0,
                "{sub} drifted from committed golden output"
            );
        } else {
            fs::create_dir_all(golden.parent().unwrap()).unwrap();
            fs::write(&golden, bytes0).unwrap();
        }
    }

    // eval is deterministic too
    let gold = dir.path().join("gold.txt");
    let pred = dir.path().join("pred.txt");
    fs::write(&gold, "a\nb\nc\n").unwrap();
    fs::write(&pred, "a\nx\nc\n").unwrap();
    let args = [
        "eval",
        "--metric",
        "per-utterance-accuracy",
        "--gold",
        gold.to_str().unwrap(),
        "--pred",
        pred.to_str().unwrap(),
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status, 0);
    assert_eq!(a.stdout, b.stdout);

    check(
        name,
        compared == 8,
        format!("{compared} repeat/thread-count comparisons across 4 transforms, plus eval"),
    );
}
