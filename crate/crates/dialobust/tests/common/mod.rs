//! Shared helpers for the integration-test suites: corpus generators, tag
//! shorthands, and independent brute-force metric oracles.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::ops::Range;

use dialobust::corpus::{Corpus, Dialogue, Turn};
use dialobust::disfluency::{DisfluencyTag, RepairQualifier, TaggedUtterance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// Tag shorthands
// ---------------------------------------------------------------------------

pub fn f() -> DisfluencyTag {
    DisfluencyTag::Fluent
}

pub fn e() -> DisfluencyTag {
    DisfluencyTag::Edit
}

pub fn end() -> DisfluencyTag {
    DisfluencyTag::RepairEndSub
}

pub fn rm(n: usize, q: RepairQualifier) -> DisfluencyTag {
    DisfluencyTag::repair_onset_extended(n, q).unwrap()
}

pub fn sub(n: usize) -> DisfluencyTag {
    rm(n, RepairQualifier::EndSub)
}

pub fn del(n: usize) -> DisfluencyTag {
    rm(n, RepairQualifier::EndDel)
}

pub fn mid(n: usize) -> DisfluencyTag {
    rm(n, RepairQualifier::Mid)
}

// ---------------------------------------------------------------------------
// Token / turn helpers
// ---------------------------------------------------------------------------

pub fn toks(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

pub fn user(s: &str) -> Turn {
    Turn::user(toks(s))
}

pub fn system(s: &str) -> Turn {
    Turn::system(toks(s))
}

// ---------------------------------------------------------------------------
// Corpus generators
// ---------------------------------------------------------------------------

pub const CUISINES: &[&str] = &["british", "french", "indian", "italian", "spanish"];
pub const LOCATIONS: &[&str] = &["bombay", "london", "madrid", "paris", "rome"];
pub const NUMBERS: &[&str] = &["two", "four", "six", "eight"];
pub const PRICES: &[&str] = &["cheap", "moderate", "expensive"];

fn pick<'a>(rng: &mut ChaCha8Rng, xs: &[&'a str]) -> &'a str {
    xs[rng.random_range(0..xs.len())]
}

/// A restaurant-booking-flavored corpus: every user turn contains at least one
/// slot value from the default slot lexicon, has >= 2 tokens, no immediate
/// token repetitions, and no filler words, so every disfluency phenomenon is
/// applicable to every user turn. Each dialogue has 5 user turns, 5 paired
/// system turns, and a final standalone api_call system turn (11 turns).
pub fn task1_corpus(n: usize, seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dialogues = Vec::with_capacity(n);
    for i in 0..n {
        let cuisine = pick(&mut rng, CUISINES);
        let location = pick(&mut rng, LOCATIONS);
        let number = pick(&mut rng, NUMBERS);
        let price = pick(&mut rng, PRICES);
        let alt_location = pick(&mut rng, LOCATIONS);
        let turns = vec![
            user(&format!("good morning i need a table in {location}")),
            system("hello what can i help you with today"),
            user(&format!("book a table with {cuisine} cuisine please")),
            system("i'm on it"),
            user(&format!("we will be {number}")),
            system("how many people would be in your party"),
            user(&format!("i am looking for a {price} restaurant")),
            system("which price range are you looking for"),
            user(&format!("actually make it {alt_location} instead")),
            system("ok let me look into some options for you"),
            system(&format!("api_call {cuisine} {location} {number} {price}")),
        ];
        dialogues.push(Dialogue {
            id: format!("d{}", i + 1),
            turns,
            rating: None,
            kb_rows: vec![],
        });
    }
    Corpus { dialogues }
}

/// A corpus whose user turns consist of tokens that are pairwise distinct
/// within each turn and never collide with filler words or slot values, so
/// a repetition-based tagger sees exactly the repetitions an augmenter
/// inserted and nothing else. Shape: u s u s u s.
pub fn distinct_corpus(n: usize, seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dialogues = Vec::with_capacity(n);
    for i in 0..n {
        let mut turns = Vec::with_capacity(6);
        for _ in 0..3 {
            let len = rng.random_range(4..=9);
            let tokens: Vec<String> = (0..len)
                .map(|j| format!("w{}x{}", j, rng.random_range(0..50)))
                .collect();
            turns.push(Turn::user(tokens));
            turns.push(system("ok"));
        }
        dialogues.push(Dialogue {
            id: format!("d{}", i + 1),
            turns,
            rating: None,
            kb_rows: vec![],
        });
    }
    Corpus { dialogues }
}

/// A corpus with an exact dialogue-length profile: `n22` dialogues of 22
/// turns and `n23` of 23 turns (11 user/system pairs, plus a standalone
/// api_call turn on the longer ones).
pub fn fixed_length_corpus(n22: usize, n23: usize) -> Corpus {
    let mut dialogues = Vec::with_capacity(n22 + n23);
    for i in 0..(n22 + n23) {
        let mut turns = Vec::new();
        for _ in 0..11 {
            turns.push(user("hello there"));
            turns.push(system("hi how can i help"));
        }
        if i >= n22 {
            turns.push(system("api_call french paris four cheap"));
        }
        dialogues.push(Dialogue {
            id: format!("d{}", i + 1),
            turns,
            rating: None,
            kb_rows: vec![],
        });
    }
    Corpus { dialogues }
}

/// Random fluent utterance: lowercase pseudo-words, with a slot value from
/// the default lexicon embedded with probability ~0.7 and no immediate
/// repetitions. Length in [2, 12].
pub fn random_fluent_utterance(rng: &mut ChaCha8Rng) -> Vec<String> {
    let len = rng.random_range(2..=12);
    let mut tokens: Vec<String> = (0..len)
        .map(|j| format!("t{}q{}", j, rng.random_range(0..40)))
        .collect();
    if rng.random_bool(0.7) {
        let pool = match rng.random_range(0..4) {
            0 => CUISINES,
            1 => LOCATIONS,
            2 => NUMBERS,
            _ => PRICES,
        };
        let v = pick(rng, pool).to_string();
        let at = rng.random_range(0..tokens.len());
        tokens[at] = v;
    }
    tokens
}

/// Random corpus expressible in the dialog text format: user/system pairs
/// with canonical action labels, plus optional standalone api_call turns.
pub fn random_babi_corpus(rng: &mut ChaCha8Rng) -> Corpus {
    let nd = rng.random_range(1..=5);
    let mut dialogues = Vec::with_capacity(nd);
    for i in 0..nd {
        let mut turns = Vec::new();
        let pairs = rng.random_range(1..=4);
        for _ in 0..pairs {
            turns.push(Turn::user(random_fluent_utterance(rng)));
            turns.push(Turn::system(random_fluent_utterance(rng)));
        }
        if rng.random_bool(0.5) {
            let mut t = toks("api_call");
            t.extend(random_fluent_utterance(rng));
            turns.push(Turn::system(t));
        }
        dialogues.push(Dialogue {
            id: format!("d{}", i + 1),
            turns,
            rating: None,
            kb_rows: vec![],
        });
    }
    Corpus { dialogues }
}

/// Random syntactically valid tag sequence of the given length: fluent/edit
/// noise plus non-nested repair structures placed left to right.
pub fn random_valid_tags(len: usize, rng: &mut ChaCha8Rng) -> Vec<DisfluencyTag> {
    let mut tags: Vec<DisfluencyTag> = (0..len)
        .map(|_| if rng.random_bool(0.15) { e() } else { f() })
        .collect();
    let mut i = 1usize;
    while i < len {
        if rng.random_bool(0.3) {
            let n = rng.random_range(1..=i.min(8));
            match rng.random_range(0..3) {
                0 => {
                    tags[i] = sub(n);
                    i += 1;
                }
                1 => {
                    tags[i] = del(n);
                    i += 1;
                }
                _ => {
                    if i + 1 < len {
                        let close = i + 1 + rng.random_range(0..(len - i - 1).min(3));
                        tags[i] = mid(n);
                        tags[close] = end();
                        i = close + 1;
                    } else {
                        tags[i] = sub(n);
                        i += 1;
                    }
                }
            }
        } else {
            i += 1;
        }
    }
    tags
}

/// Random full-featured corpus for JSON-lines round-trip testing: ratings,
/// kb rows, tags, features, reconstruction scores, and provenance traces.
pub fn random_fullfat_corpus(rng: &mut ChaCha8Rng) -> Corpus {
    use dialobust::augment::AugmentationTrace;
    use dialobust::corpus::TurnFeatures;
    let nd = rng.random_range(1..=4);
    let mut dialogues = Vec::with_capacity(nd);
    for i in 0..nd {
        let mut turns = Vec::new();
        for _ in 0..rng.random_range(1..=3) {
            let tokens = random_fluent_utterance(rng);
            let mut u = Turn::user(tokens.clone());
            if rng.random_bool(0.5) {
                u.tags = Some(random_valid_tags(tokens.len(), rng));
            }
            if rng.random_bool(0.3) {
                u.traces.push(AugmentationTrace::Hesitation {
                    span: 0..tokens.len().min(2),
                });
            }
            if rng.random_bool(0.3) {
                u.features = Some(TurnFeatures {
                    context_features: vec![0.5, 1.0, rng.random_range(0..8) as f64 * 0.25],
                    action_mask: vec![1, 0, 1],
                    reconstruction_score: if rng.random_bool(0.5) { Some(12.5) } else { None },
                });
            }
            turns.push(u);
            turns.push(Turn::system(random_fluent_utterance(rng)));
        }
        let rating = if rng.random_bool(0.5) {
            Some(rng.random_range(1..=5) as f64)
        } else {
            None
        };
        let kb_rows = if rng.random_bool(0.4) {
            vec![vec![
                "resto_1".to_string(),
                "r_cuisine".to_string(),
                "spanish".to_string(),
            ]]
        } else {
            vec![]
        };
        dialogues.push(Dialogue {
            id: format!("d{}", i + 1),
            turns,
            rating,
            kb_rows,
        });
    }
    Corpus { dialogues }
}

// ---------------------------------------------------------------------------
// Independent brute-force metric oracles
// ---------------------------------------------------------------------------

pub fn oracle_f1(tp: u64, fp: u64, fn_: u64) -> f64 {
    let denom = 2 * tp + fp + fn_;
    if denom == 0 {
        0.0
    } else {
        2.0 * tp as f64 / denom as f64
    }
}

/// Naive confusion counting over two boolean streams.
pub fn oracle_counts(gold: &[bool], pred: &[bool]) -> (u64, u64, u64) {
    let mut tp = 0;
    let mut fp = 0;
    let mut fn_ = 0;
    for (&g, &p) in gold.iter().zip(pred) {
        if g && p {
            tp += 1;
        } else if !g && p {
            fp += 1;
        } else if g && !p {
            fn_ += 1;
        }
    }
    (tp, fp, fn_)
}

/// Independent reimplementation of the documented total repair-structure
/// extraction rules, returning (reparandum, interregnum, repair) ranges.
pub fn oracle_extract(
    tags: &[DisfluencyTag],
) -> Vec<(Range<usize>, Range<usize>, Range<usize>)> {
    let mut out = Vec::new();
    // (onset index, reparandum, interregnum) of an open multi-token repair
    let mut open: Option<(usize, Range<usize>, Range<usize>)> = None;
    for i in 0..tags.len() {
        match &tags[i] {
            DisfluencyTag::RepairOnset { retrace, qualifier } => {
                if let Some((onset, rep, int)) = open.take() {
                    out.push((rep, int, onset..i));
                }
                let n_eff = (*retrace).min(i);
                let mut int_start = i;
                while int_start > i - n_eff && tags[int_start - 1] == DisfluencyTag::Edit {
                    int_start -= 1;
                }
                let rep = (i - n_eff)..int_start;
                let int = int_start..i;
                match qualifier {
                    RepairQualifier::EndSub | RepairQualifier::EndDel => {
                        out.push((rep, int, i..i + 1));
                    }
                    RepairQualifier::Mid => {
                        open = Some((i, rep, int));
                    }
                }
            }
            DisfluencyTag::RepairEndSub => {
                if let Some((onset, rep, int)) = open.take() {
                    out.push((rep, int, onset..i + 1));
                }
            }
            _ => {}
        }
    }
    if let Some((onset, rep, int)) = open.take() {
        out.push((rep, int, onset..tags.len()));
    }
    out
}

/// Token indices belonging to any repair structure (reparandum and repair
/// spans; interregnum included only when asked).
pub fn oracle_membership(tags: &[DisfluencyTag], include_interregnum: bool) -> BTreeSet<usize> {
    let mut set = BTreeSet::new();
    for (rep, int, repair) in oracle_extract(tags) {
        set.extend(rep);
        set.extend(repair);
        if include_interregnum {
            set.extend(int);
        }
    }
    set
}

/// Brute-force disfluency scoring: returns ((f_e, f_rm, f_rps), raw counts).
#[allow(clippy::type_complexity)]
pub fn oracle_score(
    gold: &[Vec<DisfluencyTag>],
    pred: &[Vec<DisfluencyTag>],
    include_interregnum: bool,
) -> ((f64, f64, f64), [(u64, u64, u64); 3]) {
    let (mut e_tp, mut e_fp, mut e_fn) = (0, 0, 0);
    let (mut o_tp, mut o_fp, mut o_fn) = (0, 0, 0);
    let (mut s_tp, mut s_fp, mut s_fn) = (0, 0, 0);
    for (g, p) in gold.iter().zip(pred) {
        for (gt, pt) in g.iter().zip(p) {
            let ge = *gt == DisfluencyTag::Edit;
            let pe = *pt == DisfluencyTag::Edit;
            if ge && pe {
                e_tp += 1;
            } else if pe {
                e_fp += 1;
            } else if ge {
                e_fn += 1;
            }
            let go = matches!(gt, DisfluencyTag::RepairOnset { .. });
            let po = matches!(pt, DisfluencyTag::RepairOnset { .. });
            if go && po && gt == pt {
                o_tp += 1;
            } else {
                if po {
                    o_fp += 1;
                }
                if go {
                    o_fn += 1;
                }
            }
        }
        let gm = oracle_membership(g, include_interregnum);
        let pm = oracle_membership(p, include_interregnum);
        for i in 0..g.len() {
            let g_in = gm.contains(&i);
            let p_in = pm.contains(&i);
            if g_in && p_in {
                s_tp += 1;
            } else if p_in {
                s_fp += 1;
            } else if g_in {
                s_fn += 1;
            }
        }
    }
    (
        (
            oracle_f1(e_tp, e_fp, e_fn),
            oracle_f1(o_tp, o_fp, o_fn),
            oracle_f1(s_tp, s_fp, s_fn),
        ),
        [(e_tp, e_fp, e_fn), (o_tp, o_fp, o_fn), (s_tp, s_fp, s_fn)],
    )
}

/// Naive top-k selection with stable tie order, averaged over tuples.
pub fn oracle_precision_at_k(tuples: &[Vec<(f64, bool)>], k: usize) -> f64 {
    let mut sum = 0.0;
    for cands in tuples {
        let mut taken = vec![false; cands.len()];
        let mut relevant = 0u64;
        for _ in 0..k {
            let mut best: Option<usize> = None;
            for (i, (score, _)) in cands.iter().enumerate() {
                if taken[i] {
                    continue;
                }
                match best {
                    None => best = Some(i),
                    Some(b) => {
                        if *score > cands[b].0 {
                            best = Some(i);
                        }
                    }
                }
            }
            let b = best.unwrap();
            taken[b] = true;
            if cands[b].1 {
                relevant += 1;
            }
        }
        sum += relevant as f64 / k as f64;
    }
    sum / tuples.len() as f64
}

// ---------------------------------------------------------------------------
// Misc helpers
// ---------------------------------------------------------------------------

/// Mean length (in inserted exchanges) of maximal consecutive blocks of
/// OOD-traced turns across the corpus, together with the number of such
/// blocks; each exchange is a (user, system) pair.
pub fn mean_ood_run_length(corpus: &Corpus) -> (f64, usize) {
    use dialobust::augment::AugmentationTrace;
    let mut runs: Vec<usize> = Vec::new();
    for d in &corpus.dialogues {
        let mut cur = 0usize;
        for t in &d.turns {
            let is_ood = t
                .traces
                .iter()
                .any(|tr| matches!(tr, AugmentationTrace::OodTurn));
            if is_ood {
                cur += 1;
            } else if cur > 0 {
                runs.push(cur);
                cur = 0;
            }
        }
        if cur > 0 {
            runs.push(cur);
        }
    }
    assert!(!runs.is_empty(), "no OOD runs found");
    assert!(
        runs.iter().all(|r| r % 2 == 0),
        "OOD runs must be whole (user, system) exchanges"
    );
    let total: usize = runs.iter().map(|r| r / 2).sum();
    (total as f64 / runs.len() as f64, runs.len())
}

/// Collect (tokens-before, TaggedUtterance-after) pairs for every user turn
/// the augmenter touched, matching turns positionally. Panics if the corpora
/// have different shapes (the disfluency pipeline never adds or drops turns).
pub fn touched_turns(before: &Corpus, after: &Corpus) -> Vec<(Vec<String>, TaggedUtterance)> {
    let mut out = Vec::new();
    for (db, da) in before.dialogues.iter().zip(&after.dialogues) {
        assert_eq!(db.turns.len(), da.turns.len());
        for (tb, ta) in db.turns.iter().zip(&da.turns) {
            if ta.tags.is_some() {
                out.push((
                    tb.tokens.clone(),
                    TaggedUtterance {
                        tokens: ta.tokens.clone(),
                        tags: ta.tags.clone().unwrap(),
                        provenance: ta.traces.clone(),
                    },
                ));
            }
        }
    }
    out
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
