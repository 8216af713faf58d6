//! `dialobust` — command-line front door for the dialogue robustness toolkit.
//!
//! One binary, eight subcommands: four seeded corpus transforms
//! (`augment-disfluency`, `augment-ood`, `turn-dropout`, `counterfeit`),
//! `clean` to undo disfluency insertions, `validate` and `stats` for corpus
//! inspection, and `eval` for every metric. Transforms write a run manifest
//! next to file outputs; all randomness derives from `--seed`, and output
//! bytes are identical for any `--jobs` value.

mod io;
mod manifest;

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dialobust::augment::{
    augment_corpus, counterfeit_ood, ood_augment, strip_augmentations, turn_dropout,
    AugmentationTrace, CounterfeitConfig, DisflAugConfig, DropoutConfig, OodConfig,
};
use dialobust::corpus::{corpus_stats, Corpus};
use dialobust::disfluency::{
    extract_repairs, parse_tag, validate_sequence, DisfluencyTag, RepairKind, TaggedUtterance,
};
use dialobust::metrics::{
    api_call_accuracy, ood_f1, per_utterance_accuracy, precision_at_k, render_text,
    score_disfluency_with, ScoreOptions, ScoredCandidate,
};

use crate::manifest::{config_digest, content_command, sha256_hex, RunManifest};

// ---------------------------------------------------------------------------
// errors and exit codes
// ---------------------------------------------------------------------------

/// Error classes carrying the documented exit codes: unreadable or unwritable
/// streams are I/O errors (2), unusable configs or flag combinations are
/// configuration errors (3), and well-formed files holding invalid content
/// are data errors (4).
#[derive(Debug)]
pub enum CliError {
    Io(String),
    Config(String),
    Data(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 2,
            CliError::Config(_) => 3,
            CliError::Data(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Io(m) | CliError::Config(m) | CliError::Data(m) => m,
        }
    }
}

fn config_error(err: impl std::fmt::Display) -> CliError {
    CliError::Config(err.to_string())
}

fn data_error(err: impl std::fmt::Display) -> CliError {
    CliError::Data(err.to_string())
}

// ---------------------------------------------------------------------------
// command line
// ---------------------------------------------------------------------------

/// Corpus storage formats.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Line-oriented text: `N user-tokens<TAB>system-tokens`, blank line
    /// between dialogues. Carries no tags, features, or provenance.
    Babi,
    /// One dialogue as a JSON object per line; carries the full data model.
    Jsonl,
}

#[derive(Parser)]
#[command(
    name = "dialobust",
    version,
    about = "Deterministic robustness toolkit for goal-oriented dialogue corpora",
    after_help = "Exit codes: 0 success, 2 I/O error, 3 configuration/usage error, 4 data validation error."
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Insert hesitations, self-corrections, and restarts into user turns
    AugmentDisfluency(DisfluencyArgs),
    /// Insert off-domain exchanges and prefix interjection segments
    AugmentOod(OodArgs),
    /// Replace user turns with noise and relabel the following system action
    TurnDropout(DropoutArgs),
    /// Insert counterfeit turns copied from other user utterances
    Counterfeit(CounterfeitArgs),
    /// Undo disfluency insertions: drop edit tokens, reparanda, and tags
    Clean(CleanArgs),
    /// Report tag-sequence violations, addressed by dialogue and turn
    Validate(InspectArgs),
    /// Print corpus statistics as JSON
    Stats(InspectArgs),
    /// Score predictions against gold data
    Eval(EvalArgs),
}

/// Flags shared by every command that reads and writes a corpus.
#[derive(Args)]
struct CorpusIo {
    /// Input corpus path; `-` reads stdin
    #[arg(long, default_value = "-")]
    input: String,
    /// Output path; `-` writes stdout, a file also gets `<output>.manifest.json`
    #[arg(long, default_value = "-")]
    output: String,
    /// Input storage format
    #[arg(long, value_enum, default_value_t = Format::Babi)]
    format: Format,
    /// Output storage format
    #[arg(long, value_enum, default_value_t = Format::Jsonl)]
    output_format: Format,
}

/// Flags shared by the seeded transforms.
#[derive(Args)]
struct TransformOpts {
    /// JSON config file; omitted fields keep their documented defaults
    #[arg(long)]
    config: Option<String>,
    /// Master seed; every random choice derives from it
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; every value produces byte-identical output
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct DisfluencyArgs {
    #[command(flatten)]
    io: CorpusIo,
    #[command(flatten)]
    opts: TransformOpts,
    /// Hesitation filler override: one lowercased utterance per line
    #[arg(long, value_name = "FILE")]
    hesitation_templates: Option<String>,
    /// Restart editing-term override: one lowercased utterance per line
    #[arg(long, value_name = "FILE")]
    interregnum_templates: Option<String>,
    /// Correction marker override: one lowercased utterance per line
    #[arg(long, value_name = "FILE")]
    correction_markers: Option<String>,
}

#[derive(Args)]
struct OodArgs {
    #[command(flatten)]
    io: CorpusIo,
    #[command(flatten)]
    opts: TransformOpts,
    /// Off-domain turn pool override: one lowercased utterance per line
    #[arg(long, value_name = "FILE")]
    turn_pool: Option<String>,
    /// Interjection segment pool override: one lowercased utterance per line
    #[arg(long, value_name = "FILE")]
    segment_pool: Option<String>,
}

#[derive(Args)]
struct DropoutArgs {
    #[command(flatten)]
    io: CorpusIo,
    #[command(flatten)]
    opts: TransformOpts,
}

#[derive(Args)]
struct CounterfeitArgs {
    #[command(flatten)]
    io: CorpusIo,
    #[command(flatten)]
    opts: TransformOpts,
}

#[derive(Args)]
struct CleanArgs {
    #[command(flatten)]
    io: CorpusIo,
    /// Also remove inserted off-domain/counterfeit turns and restore
    /// dropped-out turns from their provenance records
    #[arg(long)]
    strip: bool,
}

#[derive(Args)]
struct InspectArgs {
    /// Input corpus path; `-` reads stdin
    #[arg(long, default_value = "-")]
    input: String,
    /// Input storage format
    #[arg(long, value_enum, default_value_t = Format::Babi)]
    format: Format,
}

#[derive(Args)]
struct EvalArgs {
    /// Which measure to compute
    #[arg(long, value_enum)]
    metric: Metric,
    /// Gold file: labels (one per line), `<id>\t<call>` pairs, a json-lines
    /// corpus (disfluency), or json candidate arrays (precision-at-k)
    #[arg(long)]
    gold: String,
    /// Prediction file; not used by precision-at-k
    #[arg(long)]
    pred: Option<String>,
    /// Label marking off-domain turns; required by ood-f1
    #[arg(long)]
    fallback: Option<String>,
    /// Ranking cut-off; required by precision-at-k
    #[arg(long)]
    k: Option<usize>,
    /// Count interregnum tokens as part of the repair span for f_rps
    #[arg(long)]
    include_interregnum: bool,
    /// Print reports as JSON lines instead of the text table
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Metric {
    /// Fraction of exactly matching action labels
    PerUtteranceAccuracy,
    /// Fraction of matching calls after case/whitespace normalization
    ApiCallAccuracy,
    /// F1 over fallback-labelled turns
    OodF1,
    /// Micro-averaged F_e / F_rm / F_rps over tagged turns
    Disfluency,
    /// Mean precision among the k highest-scored candidates
    PrecisionAtK,
}

// ---------------------------------------------------------------------------
// entry point
// ---------------------------------------------------------------------------

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = err.print();
            return code;
        }
    };
    let outcome = match &cli.command {
        Cmd::AugmentDisfluency(args) => cmd_augment_disfluency(args),
        Cmd::AugmentOod(args) => cmd_augment_ood(args),
        Cmd::TurnDropout(args) => cmd_turn_dropout(args),
        Cmd::Counterfeit(args) => cmd_counterfeit(args),
        Cmd::Clean(args) => cmd_clean(args),
        Cmd::Validate(args) => cmd_validate(args),
        Cmd::Stats(args) => cmd_stats(args),
        Cmd::Eval(args) => cmd_eval(args),
    };
    let code = match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {}", err.message());
            err.exit_code()
        }
    };
    let _ = std::io::stdout().flush();
    code
}

// ---------------------------------------------------------------------------
// shared plumbing
// ---------------------------------------------------------------------------

fn init_jobs(jobs: Option<usize>) -> Result<(), CliError> {
    if let Some(n) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--jobs: {e}")))?;
    }
    Ok(())
}

/// Read and parse the input corpus, returning it with its content digest
/// keyed by the input argument (so stdin records under `-`).
fn load_corpus(io_args: &CorpusIo) -> Result<(BTreeMap<String, String>, Corpus), CliError> {
    let text = io::read_text(&io_args.input)?;
    let corpus = io::parse_corpus(&text, io_args.format, &io_args.input)?;
    let mut digests = BTreeMap::new();
    digests.insert(io_args.input.clone(), sha256_hex(text.as_bytes()));
    Ok((digests, corpus))
}

/// Deserialize the config file, or take defaults when `--config` is absent.
fn load_config<T: serde::de::DeserializeOwned + Default>(
    path: &Option<String>,
) -> Result<T, CliError> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = io::read_text(p)?;
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{p}: {e}")))
        }
    }
}

/// Render and write the result; file outputs also get a run manifest.
fn write_result(
    io_args: &CorpusIo,
    corpus: &Corpus,
    seed: Option<u64>,
    config_sha256: Option<String>,
    input_sha256: BTreeMap<String, String>,
    start: Instant,
) -> Result<i32, CliError> {
    let rendered = io::render_corpus(corpus, io_args.output_format)?;
    io::write_output(&io_args.output, rendered.as_bytes())?;
    if io_args.output != "-" {
        RunManifest {
            command: content_command(),
            toolkit_version: dialobust::TOOLKIT_VERSION.to_string(),
            seed,
            config_sha256,
            input_sha256,
            output_sha256: sha256_hex(rendered.as_bytes()),
            wall_time_ms: start.elapsed().as_millis() as u64,
        }
        .write_next_to(&io_args.output)?;
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// transforms
// ---------------------------------------------------------------------------

fn cmd_augment_disfluency(args: &DisfluencyArgs) -> Result<i32, CliError> {
    init_jobs(args.opts.jobs)?;
    let start = Instant::now();
    let (digests, corpus) = load_corpus(&args.io)?;
    let mut cfg: DisflAugConfig = load_config(&args.opts.config)?;
    if let Some(path) = &args.hesitation_templates {
        cfg.hesitation_templates = io::read_utterance_file(path)?;
    }
    if let Some(path) = &args.interregnum_templates {
        cfg.interregnum_templates = io::read_utterance_file(path)?;
    }
    if let Some(path) = &args.correction_markers {
        cfg.correction_marker_templates = io::read_utterance_file(path)?;
    }
    let digest = config_digest(&cfg);
    let out = augment_corpus(&corpus, &cfg, args.opts.seed).map_err(config_error)?;
    write_result(
        &args.io,
        &out,
        Some(args.opts.seed),
        Some(digest),
        digests,
        start,
    )
}

fn cmd_augment_ood(args: &OodArgs) -> Result<i32, CliError> {
    init_jobs(args.opts.jobs)?;
    let start = Instant::now();
    let (digests, corpus) = load_corpus(&args.io)?;
    let mut cfg: OodConfig = load_config(&args.opts.config)?;
    if let Some(path) = &args.turn_pool {
        cfg.turn_pool = io::read_utterance_file(path)?;
    }
    if let Some(path) = &args.segment_pool {
        cfg.segment_pool = io::read_utterance_file(path)?;
    }
    let digest = config_digest(&cfg);
    let out = ood_augment(&corpus, &cfg, args.opts.seed).map_err(config_error)?;
    write_result(
        &args.io,
        &out,
        Some(args.opts.seed),
        Some(digest),
        digests,
        start,
    )
}

fn cmd_turn_dropout(args: &DropoutArgs) -> Result<i32, CliError> {
    init_jobs(args.opts.jobs)?;
    let start = Instant::now();
    let (digests, corpus) = load_corpus(&args.io)?;
    let cfg: DropoutConfig = load_config(&args.opts.config)?;
    let digest = config_digest(&cfg);
    // Noise tokens come from the input corpus vocabulary, so the run depends
    // only on the input bytes, the config, and the seed.
    let vocab = corpus.vocab();
    let out = turn_dropout(&corpus, &cfg, &vocab, args.opts.seed).map_err(config_error)?;
    write_result(
        &args.io,
        &out,
        Some(args.opts.seed),
        Some(digest),
        digests,
        start,
    )
}

fn cmd_counterfeit(args: &CounterfeitArgs) -> Result<i32, CliError> {
    init_jobs(args.opts.jobs)?;
    let start = Instant::now();
    let (digests, corpus) = load_corpus(&args.io)?;
    let cfg: CounterfeitConfig = load_config(&args.opts.config)?;
    let digest = config_digest(&cfg);
    let out = counterfeit_ood(&corpus, &cfg, args.opts.seed).map_err(config_error)?;
    write_result(
        &args.io,
        &out,
        Some(args.opts.seed),
        Some(digest),
        digests,
        start,
    )
}

// ---------------------------------------------------------------------------
// clean
// ---------------------------------------------------------------------------

fn cmd_clean(args: &CleanArgs) -> Result<i32, CliError> {
    if args.io.format != Format::Jsonl {
        return Err(CliError::Config(
            "clean needs --format jsonl: the line-oriented text format carries no tags to clean"
                .to_string(),
        ));
    }
    let start = Instant::now();
    let (digests, corpus) = load_corpus(&args.io)?;
    let cleaned = if args.strip {
        strip_augmentations(&corpus)
    } else {
        clean_corpus(&corpus)?
    };
    write_result(&args.io, &cleaned, None, None, digests, start)
}

/// Undo disfluency insertions on every tagged turn: edit tokens, reparanda,
/// and deletion repairs are removed (mirroring `cleanup_tokens`), tags are
/// dropped, token-level disfluency provenance (hesitation, correction,
/// restart) disappears, and surviving span-carrying provenance is remapped
/// through the removals. Untagged turns pass through unchanged.
fn clean_corpus(corpus: &Corpus) -> Result<Corpus, CliError> {
    let mut out = corpus.clone();
    for dialogue in &mut out.dialogues {
        for (turn_idx, turn) in dialogue.turns.iter_mut().enumerate() {
            let Some(tags) = turn.tags.take() else {
                continue;
            };
            if let Some(violation) = validate_sequence(&tags).into_iter().next() {
                return Err(CliError::Data(format!(
                    "{} turn {turn_idx}: {violation}",
                    dialogue.id
                )));
            }
            let mut removed = vec![false; tags.len()];
            for (i, tag) in tags.iter().enumerate() {
                if *tag == DisfluencyTag::Edit {
                    removed[i] = true;
                }
            }
            for structure in extract_repairs(&tags) {
                for i in structure.reparandum.clone() {
                    removed[i] = true;
                }
                if structure.kind == RepairKind::Deletion {
                    for i in structure.repair.clone() {
                        removed[i] = true;
                    }
                }
            }
            // Old position -> position after removals, for span remapping.
            let mut new_index = vec![0usize; removed.len() + 1];
            let mut kept = 0usize;
            for (i, &gone) in removed.iter().enumerate() {
                new_index[i] = kept;
                if !gone {
                    kept += 1;
                }
            }
            new_index[removed.len()] = kept;
            turn.tokens = turn
                .tokens
                .iter()
                .zip(&removed)
                .filter(|(_, &gone)| !gone)
                .map(|(t, _)| t.clone())
                .collect();
            turn.traces.retain(|t| {
                !matches!(
                    t,
                    AugmentationTrace::Hesitation { .. }
                        | AugmentationTrace::Correction { .. }
                        | AugmentationTrace::Restart { .. }
                )
            });
            for trace in &mut turn.traces {
                if let AugmentationTrace::OodSegment { span } = trace {
                    *span = new_index[span.start]..new_index[span.end];
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// validate and stats
// ---------------------------------------------------------------------------

fn cmd_validate(args: &InspectArgs) -> Result<i32, CliError> {
    let text = io::read_text(&args.input)?;
    let corpus = io::parse_corpus(&text, args.format, &args.input)?;
    let mut violations = 0usize;
    let mut tagged_turns = 0usize;
    for dialogue in &corpus.dialogues {
        for (i, turn) in dialogue.turns.iter().enumerate() {
            let Some(tags) = &turn.tags else { continue };
            tagged_turns += 1;
            for violation in validate_sequence(tags) {
                println!("{} turn {i}: {violation}", dialogue.id);
                violations += 1;
            }
        }
    }
    if violations > 0 {
        println!(
            "{violations} violation(s) across {} dialogues",
            corpus.dialogues.len()
        );
        Ok(4)
    } else {
        println!(
            "ok: {} dialogues, {tagged_turns} tagged turns, no violations",
            corpus.dialogues.len()
        );
        Ok(0)
    }
}

fn cmd_stats(args: &InspectArgs) -> Result<i32, CliError> {
    let text = io::read_text(&args.input)?;
    let corpus = io::parse_corpus(&text, args.format, &args.input)?;
    let report = corpus_stats(&corpus);
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("stats report serializes")
    );
    Ok(0)
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

fn cmd_eval(args: &EvalArgs) -> Result<i32, CliError> {
    let reports = match args.metric {
        Metric::PerUtteranceAccuracy => {
            let gold = io::read_label_lines(&args.gold)?;
            let pred = io::read_label_lines(required_pred(args)?)?;
            vec![per_utterance_accuracy(&gold, &pred).map_err(data_error)?]
        }
        Metric::ApiCallAccuracy => {
            let gold = io::read_call_pairs(&args.gold)?;
            let pred = io::read_call_pairs(required_pred(args)?)?;
            vec![api_call_accuracy(&gold, &pred).map_err(data_error)?]
        }
        Metric::OodF1 => {
            let fallback = args.fallback.as_deref().ok_or_else(|| {
                CliError::Config(
                    "ood-f1 needs --fallback <label>, the label that marks off-domain turns"
                        .to_string(),
                )
            })?;
            let gold = io::read_label_lines(&args.gold)?;
            let pred = io::read_label_lines(required_pred(args)?)?;
            vec![ood_f1(&gold, &pred, fallback).map_err(data_error)?]
        }
        Metric::Disfluency => {
            let gold = read_tagged_gold(&args.gold)?;
            let pred = read_tag_lines(required_pred(args)?)?;
            let options = ScoreOptions {
                include_interregnum_in_rps: args.include_interregnum,
            };
            score_disfluency_with(&gold, &pred, &options)
                .map_err(data_error)?
                .reports()
        }
        Metric::PrecisionAtK => {
            let k = args.k.ok_or_else(|| {
                CliError::Config("precision-at-k needs --k <n>, the ranking cut-off".to_string())
            })?;
            let tuples = read_candidate_tuples(&args.gold)?;
            vec![precision_at_k(&tuples, k).map_err(data_error)?]
        }
    };
    if args.json {
        for report in &reports {
            println!(
                "{}",
                serde_json::to_string(report).expect("report serializes")
            );
        }
    } else {
        print!("{}", render_text(&reports));
    }
    Ok(0)
}

fn required_pred(args: &EvalArgs) -> Result<&str, CliError> {
    args.pred
        .as_deref()
        .ok_or_else(|| CliError::Config("this metric needs --pred <file>".to_string()))
}

/// Gold utterances for the disfluency metric: the tagged turns of a
/// json-lines corpus, in corpus order.
fn read_tagged_gold(path: &str) -> Result<Vec<TaggedUtterance>, CliError> {
    let text = io::read_text(path)?;
    let corpus = io::parse_corpus(&text, Format::Jsonl, path)?;
    Ok(corpus
        .dialogues
        .iter()
        .flat_map(|d| d.turns.iter())
        .filter_map(|turn| {
            turn.tags.as_ref().map(|tags| TaggedUtterance {
                tokens: turn.tokens.clone(),
                tags: tags.clone(),
                provenance: turn.traces.clone(),
            })
        })
        .collect())
}

/// Predicted tag sequences: one line of space-separated tag surfaces per
/// gold utterance; blank lines are skipped.
fn read_tag_lines(path: &str) -> Result<Vec<Vec<DisfluencyTag>>, CliError> {
    let text = io::read_text(path)?;
    let mut sequences = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut tags = Vec::new();
        for surface in line.split_whitespace() {
            tags.push(
                parse_tag(surface)
                    .map_err(|e| CliError::Data(format!("{path}: line {}: {e}", idx + 1)))?,
            );
        }
        sequences.push(tags);
    }
    Ok(sequences)
}

/// Candidate tuples for precision-at-k: one JSON array of
/// `{"score": float, "relevant": bool}` objects per line.
fn read_candidate_tuples(path: &str) -> Result<Vec<Vec<ScoredCandidate>>, CliError> {
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct CandidateIn {
        score: f64,
        relevant: bool,
    }

    let text = io::read_text(path)?;
    let mut tuples = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parsed: Vec<CandidateIn> = serde_json::from_str(line)
            .map_err(|e| CliError::Data(format!("{path}: line {}: {e}", idx + 1)))?;
        tuples.push(
            parsed
                .into_iter()
                .map(|c| ScoredCandidate {
                    score: c.score,
                    relevant: c.relevant,
                })
                .collect(),
        );
    }
    Ok(tuples)
}
