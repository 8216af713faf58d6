//! Acceptance gate for the library: one test per criterion, each printing a
//! single `[PASS]`/`[FAIL]` line (run with `--nocapture` to see them).
//! Command-level determinism is exercised in the CLI crate's acceptance test.

mod common;

use std::time::Instant;

use common::*;
use dialobust::augment::{
    augment_correction, augment_corpus, augment_hesitation, augment_restart, counterfeit_ood,
    detect_slot_spans, ood_augment, AugmentationTrace, CounterfeitConfig, DisflAugConfig,
    OodConfig,
};
use dialobust::corpus::{corpus_stats, parse_babi, parse_jsonl, write_babi, write_jsonl, Speaker};
use dialobust::disfluency::{
    baseline_repetition_tagger, parse_tag, tag_inventory, validate_sequence, DisfluencyTag,
    TaggedUtterance,
};
use dialobust::metrics::{
    api_call_accuracy, ood_f1, per_utterance_accuracy, precision_at_k, score_disfluency,
    ScoredCandidate,
};
use rand::Rng;

fn check(name: &str, cond: bool, detail: String) {
    if cond {
        println!("[PASS] {name}: {detail}");
    } else {
        println!("[FAIL] {name}: {detail}");
        panic!("[FAIL] {name}: {detail}");
    }
}

#[test]
fn acceptance_1_pipeline_round_trips() {
    let name = "1 disfluency pipelines recover originals under cleanup";
    let cfg = DisflAugConfig::default();
    let mut rng = seeded(1001);
    let mut total = 0usize;
    let mut recovered = 0usize;
    let start = Instant::now();

    // single operations
    for _ in 0..4000 {
        let tokens = random_fluent_utterance(&mut rng);
        let out = augment_hesitation(&tokens, &cfg, &mut rng);
        total += 1;
        if out.cleanup().ok().as_deref() == Some(&tokens[..]) {
            recovered += 1;
        }
    }
    for _ in 0..3000 {
        let mut tokens = random_fluent_utterance(&mut rng);
        while tokens.len() < 2 {
            tokens = random_fluent_utterance(&mut rng);
        }
        let out = augment_restart(&tokens, &cfg, &mut rng).unwrap();
        total += 1;
        if out.cleanup().ok().as_deref() == Some(&tokens[..]) {
            recovered += 1;
        }
    }
    let mut corrected = 0usize;
    while corrected < 3000 {
        let tokens = random_fluent_utterance(&mut rng);
        let spans = detect_slot_spans(&tokens, &cfg.slot_lexicon);
        if spans.is_empty() {
            continue;
        }
        let out = augment_correction(&tokens, &spans, &cfg, &mut rng).unwrap();
        corrected += 1;
        total += 1;
        if out.cleanup().ok().as_deref() == Some(&tokens[..]) {
            recovered += 1;
        }
    }

    // compositions of up to three operations on the same utterance
    let base = task1_corpus(1000, 1002);
    let all = DisflAugConfig {
        p_hesitation: 1.0,
        p_correction: 1.0,
        p_restart: 1.0,
        ..DisflAugConfig::default()
    };
    let out = augment_corpus(&base, &all, 1003).unwrap();
    for (original, tagged) in touched_turns(&base, &out) {
        total += 1;
        if validate_sequence(&tagged.tags).is_empty()
            && tagged.cleanup().ok().as_deref() == Some(&original[..])
        {
            recovered += 1;
        }
    }

    let elapsed = start.elapsed();
    check(
        name,
        total >= 10_000 && recovered == total && elapsed.as_secs_f64() < 10.0,
        format!(
            "{recovered}/{total} recovered in {:.2}s",
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn acceptance_2_default_rates_on_synthetic_corpus() {
    let name = "2 default augmentation rates land at 21/40/5 percent";
    let base = task1_corpus(3998, 2001);
    let out = augment_corpus(&base, &DisflAugConfig::default(), 2002).unwrap();
    let stats = corpus_stats(&out);
    let c = stats.phenomenon_fractions["correction"];
    let h = stats.phenomenon_fractions["hesitation"];
    let r = stats.phenomenon_fractions["restart"];
    check(
        name,
        (c - 0.21).abs() <= 0.03 && (h - 0.40).abs() <= 0.03 && (r - 0.05).abs() <= 0.03,
        format!("correction {c:.4}, hesitation {h:.4}, restart {r:.4} over 3998 dialogues"),
    );
}

#[test]
fn acceptance_3_ood_run_length() {
    let name = "3 mean off-domain run length is 1/(1-p_cont)";
    let base = task1_corpus(10_000, 3001);
    let cfg = OodConfig {
        p_ood_start: 0.2,
        p_ood_cont: 0.4,
        ..OodConfig::default()
    };
    let out = ood_augment(&base, &cfg, 3002).unwrap();
    let (mean, runs) = mean_ood_run_length(&out);
    check(
        name,
        runs > 1000 && (mean - 1.667).abs() <= 0.05,
        format!("mean {mean:.4} over {runs} runs in 10000 dialogues"),
    );
}

#[test]
fn acceptance_4_counterfeit_rate_scores_and_sources() {
    let name = "4 counterfeit turns hit the rate, score range, and source pool";
    let base = task1_corpus(10_000, 4001);
    let cfg = CounterfeitConfig {
        rho: 0.15,
        alpha: 0.0,
        beta: 30.0,
        ..CounterfeitConfig::default()
    };
    let out = counterfeit_ood(&base, &cfg, 4002).unwrap();
    let mut original_turns = 0usize;
    let mut inserted = 0usize;
    let mut scores_ok = 0usize;
    let mut sources_ok = 0usize;
    for (d0, d1) in base.dialogues.iter().zip(&out.dialogues) {
        original_turns += d0.turns.len();
        let user_utts: Vec<&Vec<String>> = d0
            .turns
            .iter()
            .filter(|t| t.speaker == Speaker::User)
            .map(|t| &t.tokens)
            .collect();
        for (i, t) in d1.turns.iter().enumerate() {
            if !t.traces.contains(&AugmentationTrace::Counterfeit) {
                continue;
            }
            inserted += 1;
            let score = t
                .features
                .as_ref()
                .and_then(|ft| ft.reconstruction_score)
                .unwrap_or(f64::NAN);
            if (0.0..=30.0).contains(&score) {
                scores_ok += 1;
            }
            let next = &d1.turns[i + 1];
            let from_pool = user_utts.iter().any(|u| *u == &t.tokens);
            let distinct = next.speaker != Speaker::User || next.tokens != t.tokens;
            if from_pool && distinct {
                sources_ok += 1;
            }
        }
    }
    let frac = inserted as f64 / original_turns as f64;
    check(
        name,
        (frac - 0.15).abs() <= 0.01 && scores_ok == inserted && sources_ok == inserted,
        format!(
            "fraction {frac:.4}, {scores_ok}/{inserted} scores in [0,30], {sources_ok}/{inserted} sourced in-dialogue"
        ),
    );
}

#[test]
fn acceptance_5_metrics_match_brute_force_oracles() {
    let name = "5 metrics agree exactly with brute-force oracles";
    let mut rng = seeded(5001);
    let mut fixtures = 0usize;
    let mut perfect_checked = 0usize;

    // disfluency span scores
    for _ in 0..100 {
        let n = rng.random_range(1..=5);
        let mut gold = Vec::new();
        let mut gold_tags = Vec::new();
        let mut pred = Vec::new();
        for _ in 0..n {
            let len = rng.random_range(1..=12);
            let g = random_valid_tags(len, &mut rng);
            let p = random_valid_tags(len, &mut rng);
            gold.push(TaggedUtterance {
                tokens: (0..len).map(|i| format!("t{i}")).collect(),
                tags: g.clone(),
                provenance: vec![],
            });
            gold_tags.push(g);
            pred.push(p);
        }
        let s = score_disfluency(&gold, &pred).unwrap();
        let ((oe, orm, orps), _) = oracle_score(&gold_tags, &pred, false);
        assert_eq!((s.f_e, s.f_rm, s.f_rps), (oe, orm, orps));
        // Perfect prediction scores 1.0 everywhere, provided every stream has
        // at least one positive instance (zero-denominator F1 is 0 by
        // definition); either way it must agree with the oracle on itself.
        let perfect = score_disfluency(&gold, &gold_tags).unwrap();
        let ((pe, prm, prps), _) = oracle_score(&gold_tags, &gold_tags, false);
        assert_eq!((perfect.f_e, perfect.f_rm, perfect.f_rps), (pe, prm, prps));
        let has_edit = gold_tags
            .iter()
            .flatten()
            .any(|t| matches!(t, DisfluencyTag::Edit));
        let has_onset = gold_tags
            .iter()
            .flatten()
            .any(|t| matches!(t, DisfluencyTag::RepairOnset { .. }));
        if has_edit && has_onset {
            assert_eq!((perfect.f_e, perfect.f_rm, perfect.f_rps), (1.0, 1.0, 1.0));
            perfect_checked += 1;
        }
        fixtures += 1;
    }
    assert!(
        perfect_checked >= 50,
        "too few fixtures exercised the perfect-prediction invariant: {perfect_checked}"
    );

    // per-utterance accuracy
    for _ in 0..100 {
        let n = rng.random_range(1..=50);
        let gold: Vec<String> = (0..n).map(|_| format!("a{}", rng.random_range(0..4))).collect();
        let pred: Vec<String> = (0..n).map(|_| format!("a{}", rng.random_range(0..4))).collect();
        let correct = gold.iter().zip(&pred).filter(|(g, p)| g == p).count();
        let r = per_utterance_accuracy(&gold, &pred).unwrap();
        assert_eq!(r.value, correct as f64 / n as f64);
        assert_eq!(per_utterance_accuracy(&gold, &gold).unwrap().value, 1.0);
        fixtures += 1;
    }

    // api-call accuracy, plus the pinned 100% and 28% fixtures
    for _ in 0..100 {
        let n = rng.random_range(1..=30);
        let gold: Vec<(String, String)> = (0..n)
            .map(|i| (format!("d{i}"), format!("api_call v{}", rng.random_range(0..3))))
            .collect();
        let mut pred = gold.clone();
        let mut correct = n;
        for item in pred.iter_mut() {
            if rng.random_bool(0.4) {
                item.1.push_str(" broken");
                correct -= 1;
            }
        }
        let r = api_call_accuracy(&gold, &pred).unwrap();
        assert_eq!(r.value, correct as f64 / n as f64);
        fixtures += 1;
    }
    let gold: Vec<(String, String)> = (0..25)
        .map(|i| (format!("d{i}"), format!("api_call c{i}")))
        .collect();
    assert_eq!(api_call_accuracy(&gold, &gold).unwrap().value, 1.0);
    let mut pred = gold.clone();
    for item in pred.iter_mut().skip(7) {
        item.1.push_str(" x");
    }
    assert_eq!(api_call_accuracy(&gold, &pred).unwrap().value, 0.28);

    // ood detection f1
    for _ in 0..100 {
        let n = rng.random_range(1..=60);
        let fb = "fallback";
        let mk = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<String> {
            (0..n)
                .map(|_| {
                    if rng.random_bool(0.3) {
                        fb.to_string()
                    } else {
                        format!("a{}", rng.random_range(0..3))
                    }
                })
                .collect()
        };
        let gold = mk(&mut rng);
        let pred = mk(&mut rng);
        let (mut tp, mut fp, mut fneg) = (0u64, 0u64, 0u64);
        for (g, p) in gold.iter().zip(&pred) {
            match (g == fb, p == fb) {
                (true, true) => tp += 1,
                (false, true) => fp += 1,
                (true, false) => fneg += 1,
                _ => {}
            }
        }
        assert_eq!(ood_f1(&gold, &pred, fb).unwrap().value, oracle_f1(tp, fp, fneg));
        assert_eq!(ood_f1(&gold, &gold, fb).unwrap().value, if tp + fneg == 0 { 0.0 } else { 1.0 });
        fixtures += 1;
    }

    // precision@k
    for _ in 0..100 {
        let k = rng.random_range(1..=4);
        let raw: Vec<Vec<(f64, bool)>> = (0..rng.random_range(1..=8))
            .map(|_| {
                (0..rng.random_range(k..=k + 8))
                    .map(|_| (rng.random_range(0.0..1.0), rng.random_bool(0.5)))
                    .collect()
            })
            .collect();
        let tuples: Vec<Vec<ScoredCandidate>> = raw
            .iter()
            .map(|t| {
                t.iter()
                    .map(|&(score, relevant)| ScoredCandidate { score, relevant })
                    .collect()
            })
            .collect();
        let r = precision_at_k(&tuples, k).unwrap();
        assert_eq!(r.value, oracle_precision_at_k(&raw, k));
        fixtures += 1;
    }
    let all_rel = vec![vec![
        ScoredCandidate { score: 0.9, relevant: true },
        ScoredCandidate { score: 0.1, relevant: true },
    ]];
    assert_eq!(precision_at_k(&all_rel, 2).unwrap().value, 1.0);

    check(name, fixtures >= 500, format!("{fixtures} random fixtures across 5 metric families"));
}

#[test]
fn acceptance_6_baseline_tagger_recovers_lexical_disfluencies() {
    let name = "6 repetition baseline is exact on restarts+hesitations";
    // restart+hesitation corpora over pairwise-distinct vocabularies, with
    // interregna drawn from the filler lexicon
    let mut exact = true;
    let mut scored = 0usize;
    for repeats in [1usize, 2] {
        let cfg = DisflAugConfig {
            p_hesitation: 0.5,
            p_correction: 0.0,
            p_restart: 0.5,
            restart_repeats: repeats,
            interregnum_templates: vec![toks("um"), toks("uh")],
            ..DisflAugConfig::default()
        };
        let base = distinct_corpus(400, 6000 + repeats as u64);
        let out = augment_corpus(&base, &cfg, 6002).unwrap();
        let mut gold = Vec::new();
        let mut pred = Vec::new();
        for d in &out.dialogues {
            for t in &d.turns {
                if t.speaker != Speaker::User {
                    continue;
                }
                let tags = t
                    .tags
                    .clone()
                    .unwrap_or_else(|| vec![DisfluencyTag::Fluent; t.tokens.len()]);
                pred.push(baseline_repetition_tagger(&t.tokens));
                gold.push(TaggedUtterance {
                    tokens: t.tokens.clone(),
                    tags,
                    provenance: vec![],
                });
            }
        }
        scored += gold.len();
        let s = score_disfluency(&gold, &pred).unwrap();
        if s.f_e != 1.0 || s.f_rm != 1.0 {
            exact = false;
        }
    }

    // mixed corpus: restrict edit-token F1 to positions the hesitation
    // provenance marks; those fillers stay lexicon-detectable
    let mixed = augment_corpus(&task1_corpus(400, 6003), &DisflAugConfig::default(), 6004).unwrap();
    let (mut tp, mut fp, mut fneg) = (0u64, 0u64, 0u64);
    for d in &mixed.dialogues {
        for t in &d.turns {
            if t.speaker != Speaker::User || t.tags.is_none() {
                continue;
            }
            let tags = t.tags.as_ref().unwrap();
            let pred = baseline_repetition_tagger(&t.tokens);
            for tr in &t.traces {
                if let AugmentationTrace::Hesitation { span } = tr {
                    for i in span.clone() {
                        match (tags[i] == DisfluencyTag::Edit, pred[i] == DisfluencyTag::Edit) {
                            (true, true) => tp += 1,
                            (false, true) => fp += 1,
                            (true, false) => fneg += 1,
                            _ => {}
                        }
                    }
                }
            }
        }
    }
    let f_e_hes = oracle_f1(tp, fp, fneg);
    check(
        name,
        exact && scored > 1000 && f_e_hes >= 0.95,
        format!("exact on {scored} utterances; hesitation-token F_e {f_e_hes:.4} on mixed corpus"),
    );
}

#[test]
fn acceptance_8_byte_identical_format_round_trips() {
    let name = "8 storage formats round-trip byte for byte";
    let babi_text = include_str!("fixtures/golden.babi");
    let jsonl_text = include_str!("fixtures/golden.jsonl");
    let babi_ok = write_babi(&parse_babi(babi_text).unwrap()).unwrap() == babi_text;
    let jsonl_ok = write_jsonl(&parse_jsonl(jsonl_text).unwrap()) == jsonl_text;
    let mut labels_ok = true;
    let inventory = tag_inventory();
    for tag in &inventory {
        if parse_tag(&tag.render()).as_ref() != Ok(tag) {
            labels_ok = false;
        }
    }
    check(
        name,
        babi_ok && jsonl_ok && labels_ok && inventory.len() == 27,
        format!(
            "babi {babi_ok}, jsonl {jsonl_ok}, {} labels round-trip {labels_ok}",
            inventory.len()
        ),
    );
}
