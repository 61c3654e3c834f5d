//! The `emogru` command line.
//!
//! [`run_from`] is the whole program minus process plumbing: it takes the
//! argument list and the three standard streams and returns the exit code,
//! so tests can drive it in memory.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure
//! (including a failed gradient check).
//!
//! Every subcommand accepts `--config FILE` with flat `key=value` lines,
//! where keys are long flag names without the dashes. Flags given on the
//! command line win over the file; unknown keys are usage errors.

use std::collections::{BTreeMap, HashSet};
use std::ffi::OsString;
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, CommandFactory, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::baseline::{
    eval_logreg, featurize, train_logreg, BowFeatureSpace, LogRegConfig, SparseVector,
};
use crate::corpus::{
    examples_from_records, load_lexicon, load_tsv, wang_curate, wang_normalize, BinaryDataset,
    EncodedDataset, Example,
};
use crate::embed::{build_matrix, detect_dim, load_vectors, WordVectors};
use crate::eval::{
    evaluate_binary, evaluate_cross, report_table, Classifier, CrossOptions, EmotionMetrics,
    EvalReport, LabelMapping, TextScorer,
};
use crate::nn::{gradient_check, GradCheckConfig, Problem};
use crate::train::{
    load_checkpoint, prepare, save_checkpoint, train_classifier, Checkpoint, EpochRecord,
    TrainConfig,
};
use crate::{Emotion, Error, ErrorKind, Result};

#[derive(Debug, Parser)]
#[command(
    name = "emogru",
    version,
    about = "Bidirectional-GRU emotion classifiers for short texts"
)]
struct Cli {
    /// Flat `key=value` file of default flag values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Label raw tweets by their final hashtag and drop low-quality ones.
    #[command(args_override_self = true)]
    Curate(CurateArgs),
    /// Train one binary classifier per emotion.
    #[command(args_override_self = true)]
    Train(TrainArgs),
    /// Evaluate checkpoints on a labeled dataset.
    #[command(args_override_self = true)]
    Eval(EvalArgs),
    /// Score lines from standard input with one or more checkpoints.
    #[command(args_override_self = true)]
    Predict(PredictArgs),
    /// Compare analytic and finite-difference gradients on random models.
    #[command(args_override_self = true)]
    Gradcheck(GradcheckArgs),
    /// Train and evaluate the bag-of-n-grams logistic-regression baseline.
    #[command(args_override_self = true)]
    Baseline(BaselineArgs),
}

#[derive(Debug, Args)]
struct CurateArgs {
    /// One tweet per line; if a line has a tab, the text after it is used.
    #[arg(long)]
    input: PathBuf,
    /// `#hashtag<TAB>emotion` lines.
    #[arg(long)]
    lexicon: PathBuf,
    /// Curated `label<TAB>text` output.
    #[arg(long)]
    output: PathBuf,
    /// Also normalize mentions, hash signs and character repeats.
    #[arg(long)]
    wang_normalize: bool,
}

#[derive(Debug, Args)]
struct HyperArgs {
    #[arg(long, default_value_t = 20)]
    epochs: usize,
    #[arg(long, default_value_t = 250)]
    batch_size: usize,
    #[arg(long, default_value_t = 0.001)]
    learning_rate: f64,
    #[arg(long, default_value_t = 0.9)]
    adam_beta1: f64,
    #[arg(long, default_value_t = 0.999)]
    adam_beta2: f64,
    #[arg(long, default_value_t = 1e-8)]
    adam_eps: f64,
    /// GRU hidden size per direction.
    #[arg(long, default_value_t = crate::nn::DEFAULT_HIDDEN)]
    hidden: usize,
    #[arg(long, default_value_t = crate::nn::DEFAULT_DENSE)]
    dense: usize,
    #[arg(long, default_value_t = 35)]
    seq_len: usize,
    #[arg(long, default_value_t = 0.5)]
    dropout: f64,
    /// Run the recurrence over padding positions too.
    #[arg(long)]
    no_mask: bool,
}

#[derive(Debug, Args)]
struct TrainArgs {
    /// `label<TAB>text` training corpus.
    #[arg(long)]
    data: PathBuf,
    #[arg(long, required_unless_present = "all", conflicts_with = "all")]
    emotion: Option<Emotion>,
    /// Train all seven classifiers; `--out` is then a directory.
    #[arg(long)]
    all: bool,
    /// Text-format word vectors.
    #[arg(long)]
    embeddings: PathBuf,
    /// Checkpoint stem, or directory with `--all`.
    #[arg(long)]
    out: PathBuf,
    /// Vocabulary size; defaults to the emotion's usual cap.
    #[arg(long)]
    vocab_cap: Option<usize>,
    /// Classifiers trained concurrently.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    hyper: HyperArgs,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Checkpoint stem; repeat for several classifiers.
    #[arg(long = "checkpoint", required = true)]
    checkpoints: Vec<PathBuf>,
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    embeddings: PathBuf,
    /// `source=emotion` lines; switches to cross-dataset evaluation.
    #[arg(long)]
    mapping: Option<PathBuf>,
    /// Discard records whose label has no mapping.
    #[arg(long, requires = "mapping")]
    drop_unmapped: bool,
    /// Rebuild each classifier's training split and score its test part.
    #[arg(long, conflicts_with = "mapping")]
    heldout: bool,
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    /// Earlier report JSON to compare against.
    #[arg(long)]
    baseline: Option<PathBuf>,
    /// Write the report JSON here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PredictArgs {
    #[arg(long = "checkpoint", required = true)]
    checkpoints: Vec<PathBuf>,
    #[arg(long)]
    embeddings: PathBuf,
}

#[derive(Debug, Args)]
struct GradcheckArgs {
    #[arg(long, default_value_t = 8)]
    embed_dim: usize,
    #[arg(long, default_value_t = 5)]
    hidden: usize,
    #[arg(long, default_value_t = crate::nn::DEFAULT_DENSE)]
    dense: usize,
    #[arg(long, default_value_t = 7)]
    seq_len: usize,
    #[arg(long, default_value_t = 12)]
    vocab_rows: usize,
    /// Number of random problems, seeded `seed, seed+1, …`.
    #[arg(long, default_value_t = 5)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-5)]
    step: f64,
    #[arg(long, default_value_t = 1e-4)]
    tolerance: f64,
    /// Check at most this many scalars per tensor.
    #[arg(long)]
    samples: Option<usize>,
    /// Inject a deliberate gradient bug.
    #[arg(long)]
    corrupt: bool,
}

#[derive(Debug, Args)]
struct BaselineArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long, required_unless_present = "all", conflicts_with = "all")]
    emotion: Option<Emotion>,
    #[arg(long)]
    all: bool,
    /// Largest n-gram order.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    ngram: u8,
    /// Split seed; matches `train --seed`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-3)]
    l2: f64,
    #[arg(long, default_value_t = 0.5)]
    learning_rate: f64,
    #[arg(long, default_value_t = 300)]
    epochs: usize,
    /// Directory for `<emotion>.json` weight dumps.
    #[arg(long)]
    dump: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

struct Io<'a> {
    stdin: &'a mut dyn BufRead,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Io<'_> {
    fn out(&mut self, text: &str) -> Result<()> {
        self.stdout
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e))
    }

    fn note(&mut self, text: &str) {
        let _ = writeln!(self.stderr, "{text}");
    }
}

/// Runs the program on `args` (including the program name) and returns the
/// exit code.
pub fn run_from<I, T>(
    args: I,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match parse(args) {
        Ok(cli) => cli,
        Err(ParseFailure::Clap(e)) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                1
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
        Err(ParseFailure::Config(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            return 1;
        }
    };
    let mut io = Io {
        stdin,
        stdout,
        stderr,
    };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(e) => {
            io.note(&format!("error: {e}"));
            match e.kind() {
                ErrorKind::Usage => 1,
                ErrorKind::Data => 2,
                ErrorKind::Numeric => 3,
            }
        }
    }
}

enum ParseFailure {
    Clap(clap::Error),
    Config(Error),
}

fn parse(mut args: Vec<OsString>) -> std::result::Result<Cli, ParseFailure> {
    let cli = Cli::try_parse_from(&args).map_err(ParseFailure::Clap)?;
    let Some(path) = cli.config.clone() else {
        return Ok(cli);
    };
    let name = subcommand_name(&cli.command);
    let extra = config_args(&path, name, &args).map_err(ParseFailure::Config)?;
    args.extend(extra);
    Cli::try_parse_from(&args).map_err(ParseFailure::Clap)
}

fn subcommand_name(command: &Command) -> &'static str {
    match command {
        Command::Curate(_) => "curate",
        Command::Train(_) => "train",
        Command::Eval(_) => "eval",
        Command::Predict(_) => "predict",
        Command::Gradcheck(_) => "gradcheck",
        Command::Baseline(_) => "baseline",
    }
}

/// Parses `key=value` lines (`#` starts a comment).
fn parse_config(content: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, line) in content.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("config line {}: expected key=value", n + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Translates config entries into flags for `subcommand`, skipping any
/// flag already present in `given`.
fn config_args(path: &Path, subcommand: &str, given: &[OsString]) -> Result<Vec<OsString>> {
    let content =
        fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let root = Cli::command();
    let cmd = root
        .find_subcommand(subcommand)
        .expect("parsed subcommand exists");
    let present: HashSet<String> = given
        .iter()
        .filter_map(|a| a.to_str())
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a).to_string())
        .collect();
    let mut out = Vec::new();
    for (key, value) in parse_config(&content)? {
        let arg = cmd
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()) && key != "config" && key != "help")
            .ok_or_else(|| Error::Config(format!("unknown config key {key:?} for {subcommand}")))?;
        if present.contains(&key) {
            continue;
        }
        match arg.get_action() {
            ArgAction::SetTrue => match value.as_str() {
                "true" => out.push(format!("--{key}").into()),
                "false" => {}
                _ => {
                    return Err(Error::Config(format!(
                        "config key {key:?} takes true or false"
                    )))
                }
            },
            _ => {
                out.push(format!("--{key}").into());
                out.push(value.into());
            }
        }
    }
    Ok(out)
}

fn dispatch(command: Command, io: &mut Io) -> Result<i32> {
    match command {
        Command::Curate(a) => cmd_curate(a, io),
        Command::Train(a) => cmd_train(a, io),
        Command::Eval(a) => cmd_eval(a, io),
        Command::Predict(a) => cmd_predict(a, io),
        Command::Gradcheck(a) => cmd_gradcheck(a, io),
        Command::Baseline(a) => cmd_baseline(a, io),
    }
    .map(|()| 0)
}

/// `1234567` → `1,234,567`.
pub fn thousands(n: u64) -> String {
    let digits = n.to_string();
    let mut out = String::new();
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(c);
    }
    out
}

/// Per-emotion counts with a `Total` row.
pub fn count_table(counts: &BTreeMap<Emotion, u64>) -> String {
    let mut out = format!("{:<14} {:>12}\n", "Emotion", "Tweets");
    for e in Emotion::ALL {
        out.push_str(&format!(
            "{:<14} {:>12}\n",
            e.as_str(),
            thousands(counts.get(&e).copied().unwrap_or(0))
        ));
    }
    out.push_str(&format!(
        "{:<14} {:>12}\n",
        "Total",
        thousands(counts.values().sum())
    ));
    out
}

fn cmd_curate(a: CurateArgs, io: &mut Io) -> Result<()> {
    let lexicon = load_lexicon(&a.lexicon)?;
    let input = fs::read_to_string(&a.input).map_err(|e| Error::io(&a.input, e))?;
    let mut counts = BTreeMap::new();
    let mut out = String::new();
    let mut read = 0;
    for line in input.lines().filter(|l| !l.trim().is_empty()) {
        read += 1;
        let text = line.split_once('\t').map_or(line, |(_, t)| t);
        let Some((kept, emotion)) = wang_curate(text, &lexicon) else {
            continue;
        };
        let kept = if a.wang_normalize {
            wang_normalize(&kept)
        } else {
            kept
        };
        if kept.trim().is_empty() {
            continue;
        }
        *counts.entry(emotion).or_insert(0u64) += 1;
        out.push_str(&format!("{emotion}\t{kept}\n"));
    }
    fs::write(&a.output, out).map_err(|e| Error::io(&a.output, e))?;
    let kept: u64 = counts.values().sum();
    io.note(&format!(
        "read {read}, kept {kept}, dropped {}",
        read - kept
    ));
    io.out(&count_table(&counts))
}

fn load_examples(path: &Path, io: &mut Io) -> Result<Vec<Example>> {
    let records = load_tsv(path)?;
    let (examples, skipped) = examples_from_records(&records);
    if skipped > 0 {
        io.note(&format!(
            "{}: skipped {skipped} records without an emotion label or tokens",
            path.display()
        ));
    }
    Ok(examples)
}

fn load_word_vectors(path: &Path) -> Result<WordVectors> {
    load_vectors(path, detect_dim(path)?)
}

fn train_config(seed: u64, h: &HyperArgs) -> TrainConfig {
    TrainConfig {
        batch_size: h.batch_size,
        epochs: h.epochs,
        learning_rate: h.learning_rate,
        adam_beta1: h.adam_beta1,
        adam_beta2: h.adam_beta2,
        adam_eps: h.adam_eps,
        seed,
        hidden_size: h.hidden,
        dense_size: h.dense,
        seq_len: h.seq_len,
        dropout: h.dropout,
        mask_aware: !h.no_mask,
    }
}

fn epoch_line(emotion: Emotion, epoch: usize, epochs: usize, r: &EpochRecord) -> String {
    format!(
        "{emotion} epoch {:>2}/{epochs} train_loss {:.4} dev_loss {:.4} dev_acc {:.4} dev_f1 {:.4}\n",
        epoch + 1,
        r.train_loss,
        r.dev_loss,
        r.dev_accuracy,
        r.dev_f1
    )
}

/// Full pipeline for one emotion; returns the checkpoint and its test
/// metrics. `log` receives each progress line.
fn train_one(
    examples: &[Example],
    vectors: &WordVectors,
    emotion: Emotion,
    cap: usize,
    config: &TrainConfig,
    mut log: impl FnMut(String),
) -> Result<(Checkpoint, EmotionMetrics)> {
    config.validate()?;
    let prepared = prepare(examples, emotion, config.seed, cap, config.seq_len)?;
    let emb = build_matrix(&prepared.vocab, vectors, config.seed);
    log(format!(
        "{emotion} train {} dev {} test {} vocab {} coverage {:.3}\n",
        prepared.encoded.train.len(),
        prepared.encoded.dev.len(),
        prepared.encoded.test.len(),
        prepared.vocab.size(),
        emb.coverage()
    ));
    let checkpoint = train_classifier(&prepared.encoded, &prepared.vocab, &emb, config, |e, r| {
        log(epoch_line(emotion, e, config.epochs, r))
    })?;
    let classifier = Classifier::new(checkpoint, emb)?;
    let metrics = evaluate_binary(&classifier, &prepared.encoded.test, 0.5)?;
    log(format!(
        "{emotion} test f1 {:.4} accuracy {:.4}\n",
        metrics.f1,
        metrics.counts.accuracy()
    ));
    Ok((classifier.checkpoint().clone(), metrics))
}

fn cmd_train(a: TrainArgs, io: &mut Io) -> Result<()> {
    let config = train_config(a.seed, &a.hyper);
    config.validate()?;
    if a.jobs == 0 {
        return Err(Error::Config("jobs must be at least 1".into()));
    }
    let examples = load_examples(&a.data, io)?;
    let vectors = load_word_vectors(&a.embeddings)?;
    let targets: Vec<(Emotion, PathBuf)> = match a.emotion {
        Some(e) => vec![(e, a.out.clone())],
        None => Emotion::ALL
            .iter()
            .map(|&e| (e, a.out.join(e.as_str())))
            .collect(),
    };
    let cap = |e: Emotion| a.vocab_cap.unwrap_or_else(|| e.default_vocab_cap());

    let mut metrics = BTreeMap::new();
    if a.jobs == 1 {
        for (emotion, stem) in &targets {
            let mut lines = Vec::new();
            let (ck, m) = train_one(&examples, &vectors, *emotion, cap(*emotion), &config, |l| {
                lines.push(l)
            })?;
            io.out(&lines.concat())?;
            save_checkpoint(&ck, stem)?;
            metrics.insert(*emotion, m);
        }
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(a.jobs)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        let results: Vec<Result<(String, Checkpoint, EmotionMetrics)>> = pool.install(|| {
            targets
                .par_iter()
                .map(|(emotion, _)| {
                    let mut log = String::new();
                    let (ck, m) =
                        train_one(&examples, &vectors, *emotion, cap(*emotion), &config, |l| {
                            log.push_str(&l)
                        })?;
                    Ok((log, ck, m))
                })
                .collect()
        });
        for ((emotion, stem), result) in targets.iter().zip(results) {
            let (log, ck, m) = result?;
            io.out(&log)?;
            save_checkpoint(&ck, stem)?;
            metrics.insert(*emotion, m);
        }
    }
    if metrics.len() > 1 {
        io.out(&report_table(&EvalReport::new(metrics), None))?;
    }
    Ok(())
}

fn load_classifiers(stems: &[PathBuf], vectors: &WordVectors) -> Result<Vec<Classifier>> {
    let mut seen = HashSet::new();
    stems
        .iter()
        .map(|stem| {
            let ck = load_checkpoint(stem)?;
            if !seen.insert(ck.emotion) {
                return Err(Error::Data(format!("two checkpoints for {}", ck.emotion)));
            }
            Classifier::from_vectors(ck, vectors)
        })
        .collect()
}

fn binary_test_set(
    classifier: &Classifier,
    examples: &[Example],
    heldout: bool,
) -> Result<EncodedDataset> {
    let ck = classifier.checkpoint();
    if heldout {
        let prepared = prepare(
            examples,
            ck.emotion,
            ck.config.seed,
            ck.vocab.cap(),
            ck.config.seq_len,
        )?;
        if prepared.vocab.fingerprint() != ck.vocab.fingerprint() {
            return Err(Error::Data(format!(
                "{}: data does not reproduce the training vocabulary; is this the training corpus?",
                ck.emotion
            )));
        }
        return Ok(prepared.encoded.test);
    }
    let data = BinaryDataset {
        target: ck.emotion,
        examples: examples
            .iter()
            .map(|e| (e.tokens().to_vec(), u8::from(e.label() == ck.emotion)))
            .collect(),
    };
    Ok(EncodedDataset::encode(&data, &ck.vocab, ck.config.seq_len))
}

fn cmd_eval(a: EvalArgs, io: &mut Io) -> Result<()> {
    let vectors = load_word_vectors(&a.embeddings)?;
    let classifiers = load_classifiers(&a.checkpoints, &vectors)?;
    let report = match &a.mapping {
        Some(path) => {
            let mapping = LabelMapping::load(path)?;
            let records = load_tsv(&a.data)?;
            let scorers: Vec<&dyn TextScorer> =
                classifiers.iter().map(|c| c as &dyn TextScorer).collect();
            let opts = CrossOptions {
                threshold: a.threshold,
                drop_unmapped: a.drop_unmapped,
            };
            evaluate_cross(&scorers, &records, &mapping, opts)?
        }
        None => {
            let examples = load_examples(&a.data, io)?;
            let mut per_emotion = BTreeMap::new();
            for c in &classifiers {
                let test = binary_test_set(c, &examples, a.heldout)?;
                per_emotion.insert(
                    c.checkpoint().emotion,
                    evaluate_binary(c, &test, a.threshold)?,
                );
            }
            EvalReport::new(per_emotion)
        }
    };
    let baseline = match &a.baseline {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            Some(serde_json::from_str::<EvalReport>(&text)?)
        }
        None => None,
    };
    if let Some(path) = &a.report {
        fs::write(path, report.to_json()).map_err(|e| Error::io(path, e))?;
    }
    io.out(&report_table(&report, baseline.as_ref()))
}

#[derive(Serialize)]
struct Prediction<'a> {
    text: &'a str,
    scores: BTreeMap<Emotion, f64>,
}

fn cmd_predict(a: PredictArgs, io: &mut Io) -> Result<()> {
    let vectors = load_word_vectors(&a.embeddings)?;
    let classifiers = load_classifiers(&a.checkpoints, &vectors)?;
    let mut line = String::new();
    loop {
        line.clear();
        if io
            .stdin
            .read_line(&mut line)
            .map_err(|e| Error::io("<stdin>", e))?
            == 0
        {
            return Ok(());
        }
        let text = line.trim_end_matches(['\n', '\r']);
        if text.trim().is_empty() {
            continue;
        }
        let scores = classifiers
            .iter()
            .map(|c| Ok((c.checkpoint().emotion, c.score(text)?)))
            .collect::<Result<_>>()?;
        let json = serde_json::to_string(&Prediction { text, scores })?;
        io.out(&format!("{json}\n"))?;
    }
}

fn cmd_gradcheck(a: GradcheckArgs, io: &mut Io) -> Result<()> {
    let mut all_passed = true;
    for seed in a.seed..a.seed + a.seeds {
        let cfg = GradCheckConfig {
            embed_dim: a.embed_dim,
            hidden: a.hidden,
            dense: a.dense,
            seq_len: a.seq_len,
            vocab_rows: a.vocab_rows,
            seed,
            step: a.step,
            tolerance: a.tolerance,
            samples_per_tensor: a.samples,
            corrupt: a.corrupt,
        };
        let report = gradient_check(&Problem::random(&cfg), &cfg)?;
        let verdict = if report.passed() { "PASS" } else { "FAIL" };
        let mut out = format!(
            "seed {seed}: max relative error {:.3e} {verdict}\n",
            report.max_rel_error
        );
        for t in &report.tensors {
            out.push_str(&format!(
                "  {:<14} {:>6} checked  max {:.3e}\n",
                t.name, t.checked, t.max_rel_error
            ));
        }
        io.out(&out)?;
        all_passed &= report.passed();
    }
    if all_passed {
        Ok(())
    } else {
        Err(Error::Numeric(format!(
            "gradient check failed at tolerance {:e}",
            a.tolerance
        )))
    }
}

fn bow_xy(
    data: &BinaryDataset<Vec<String>>,
    space: &BowFeatureSpace,
) -> (Vec<SparseVector>, Vec<u8>) {
    data.examples
        .iter()
        .map(|(t, y)| (featurize(t, space), *y))
        .unzip()
}

fn cmd_baseline(a: BaselineArgs, io: &mut Io) -> Result<()> {
    let config = LogRegConfig {
        l2: a.l2,
        learning_rate: a.learning_rate,
        epochs: a.epochs,
        seed: a.seed,
    };
    let examples = load_examples(&a.data, io)?;
    let targets: Vec<Emotion> = a.emotion.map_or_else(|| Emotion::ALL.to_vec(), |e| vec![e]);
    let mut per_emotion = BTreeMap::new();
    for emotion in targets {
        let p = prepare(&examples, emotion, a.seed, emotion.default_vocab_cap(), 1)?;
        let space = BowFeatureSpace::build(
            p.split.train.examples.iter().map(|(t, _)| t.as_slice()),
            a.ngram.into(),
        );
        let (xs, ys) = bow_xy(&p.split.train, &space);
        let model = train_logreg(&xs, &ys, space.size(), &config)?;
        let (xt, yt) = bow_xy(&p.split.test, &space);
        let metrics = eval_logreg(&model, &xt, &yt, 0.5)?;
        io.note(&format!(
            "{emotion}: {} features, test f1 {:.4}",
            space.size(),
            metrics.f1
        ));
        if let Some(dir) = &a.dump {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            let path = dir.join(format!("{emotion}.json"));
            fs::write(&path, model.to_json(&space)).map_err(|e| Error::io(&path, e))?;
        }
        per_emotion.insert(emotion, metrics);
    }
    let report = EvalReport::new(per_emotion);
    if let Some(path) = &a.report {
        fs::write(path, report.to_json()).map_err(|e| Error::io(path, e))?;
    }
    io.out(&report_table(&report, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thousands_separators() {
        assert_eq!(thousands(0), "0");
        assert_eq!(thousands(999), "999");
        assert_eq!(thousands(1000), "1,000");
        assert_eq!(thousands(1_387_787), "1,387,787");
    }

    #[test]
    fn count_table_lists_all_emotions_and_total() {
        let counts = BTreeMap::from([(Emotion::Joy, 393_631), (Emotion::Surprise, 13_535)]);
        let t = count_table(&counts);
        assert_eq!(t.lines().count(), 9);
        assert!(t.lines().any(|l| l.split_whitespace().eq(["fear", "0"])));
        assert!(t
            .lines()
            .last()
            .unwrap()
            .split_whitespace()
            .eq(["Total", "407,166"]));
    }

    #[test]
    fn config_lines() {
        let c = parse_config("# comment\nepochs = 3\n\nseed=1 # trailing\n").unwrap();
        assert_eq!(
            c,
            [
                ("epochs".to_string(), "3".to_string()),
                ("seed".into(), "1".into())
            ]
        );
        assert!(parse_config("epochs 3").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }
}
