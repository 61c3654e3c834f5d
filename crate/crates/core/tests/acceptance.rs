//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any fails.
//!
//! ```text
//! cargo test --release --test acceptance
//! ```

mod common;

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use common::{bundled_examples, data, run, vectors};
use emogru::baseline::{eval_logreg, featurize, train_logreg, BowFeatureSpace, LogRegConfig};
use emogru::corpus::{
    balanced_indices, parse_tsv, preprocess, split_indices, wang_normalize, BinaryDataset,
    SplitSizes,
};
use emogru::embed::{build_matrix, EmbeddingMatrix};
use emogru::eval::{
    evaluate_binary, evaluate_cross, f1, report_table, Classifier, ConfusionCounts, CrossOptions,
    EvalReport, LabelMapping, MappedLabel, TextScorer,
};
use emogru::nn::{forward, ForwardOptions, Matrix, ModelParameters, ModelShape};
use emogru::train::{
    adam_step, load_checkpoint, prepare, save_checkpoint, train_classifier, AdamState, Checkpoint,
    TrainConfig,
};
use emogru::Emotion;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

/// Gradient check at D=8, H=5, L=7 over five seeds through the command line.
fn gradient_correctness() -> Outcome {
    let t = Instant::now();
    let r = run(
        &[
            "gradcheck",
            "--embed-dim",
            "8",
            "--hidden",
            "5",
            "--seq-len",
            "7",
            "--seeds",
            "5",
        ],
        "",
    );
    let elapsed = t.elapsed();
    let errors: Vec<f64> = r
        .stdout
        .lines()
        .filter(|l| l.starts_with("  "))
        .map(|l| l.rsplit(' ').next().unwrap().parse().unwrap())
        .collect();
    let max = errors.iter().copied().fold(0.0, f64::max);
    check(
        r.code == 0 && errors.len() == 5 * 22 && max < 1e-4 && within(elapsed, 60),
        format!(
            "{} tensor checks, max rel err {max:.2e}, exit {}, {elapsed:.1?}",
            errors.len(),
            r.code
        ),
    )
}

/// Zero model gives exactly 0.5; zero-gradient Adam steps change no bits.
fn trivial_fixed_points() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let shape = ModelShape::new(6, 4);
    let zero = ModelParameters::<f64>::zeros(shape);
    let emb = Matrix::from_fn(20, 6, |_, _| rng.gen_range(-3.0..3.0));
    let mut worst = 0.0f64;
    for _ in 0..200 {
        // real tokens followed by padding
        let len = rng.gen_range(1..12);
        let pad = rng.gen_range(0..5);
        let x: Vec<u32> = (0..len)
            .map(|_| rng.gen_range(1..20))
            .chain((0..pad).map(|_| 0))
            .collect();
        for mask_aware in [true, false] {
            let opts = ForwardOptions {
                mask_aware,
                ..ForwardOptions::inference()
            };
            let p = forward(&x, &emb, &zero, opts)
                .map_err(|e| e.to_string())?
                .probability();
            worst = worst.max((p - 0.5).abs());
        }
    }

    let mut params = ModelParameters::<f32>::init(ModelShape::new(6, 4), 5);
    let before: Vec<u32> = params
        .tensors()
        .iter()
        .flat_map(|t| t.data.iter().map(|v| v.to_bits()))
        .collect();
    let grads = ModelParameters::<f32>::zeros(ModelShape::new(6, 4));
    let mut state = AdamState::for_model(&params);
    for _ in 0..10 {
        adam_step(&mut params, &grads, &mut state, &TrainConfig::default())
            .map_err(|e| e.to_string())?;
    }
    let after: Vec<u32> = params
        .tensors()
        .iter()
        .flat_map(|t| t.data.iter().map(|v| v.to_bits()))
        .collect();
    check(
        worst == 0.0 && before == after && state.t == 10,
        format!(
            "max |p - 0.5| = {worst:e}, Adam t={} with {} params bitwise unchanged: {}",
            state.t,
            before.len(),
            before == after
        ),
    )
}

fn prepared_model(
    file: &str,
    target: Emotion,
    config: &TrainConfig,
) -> (emogru::train::Prepared, Classifier) {
    let examples = bundled_examples(file);
    let p = prepare(
        &examples,
        target,
        config.seed,
        target.default_vocab_cap(),
        config.seq_len,
    )
    .unwrap();
    let emb = build_matrix(&p.vocab, &vectors(), config.seed);
    let ck = train_classifier(&p.encoded, &p.vocab, &emb, config, |_, _| {}).unwrap();
    let c = Classifier::new(ck, emb).unwrap();
    (p, c)
}

/// Keyword corpus with default settings: fits training data and generalizes.
fn overfitting_proxy() -> Outcome {
    let t = Instant::now();
    let config = TrainConfig::default();
    let (p, c) = prepared_model("keyword.tsv", Emotion::Joy, &config);
    let train = evaluate_binary(&c, &p.encoded.train, 0.5).map_err(|e| e.to_string())?;
    let test = evaluate_binary(&c, &p.encoded.test, 0.5).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    let acc = train.counts.accuracy();
    check(
        p.encoded.train.len() + p.encoded.dev.len() + p.encoded.test.len() == 200
            && acc >= 0.99
            && test.f1 >= 0.95
            && within(elapsed, 120),
        format!(
            "batch {} epochs {}: train acc {acc:.3}, test f1 {:.3}, {elapsed:.1?}",
            config.batch_size, config.epochs, test.f1
        ),
    )
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

/// Negation corpus: recurrent model beats unigram BOW by at least 10 points.
fn sequence_sensitivity() -> Outcome {
    let t = Instant::now();
    let mut rows = Vec::new();
    for seed in 0..3 {
        let config = TrainConfig {
            seed,
            ..Default::default()
        };
        let (p, c) = prepared_model("negation.tsv", Emotion::Sadness, &config);
        let gru = evaluate_binary(&c, &p.encoded.test, 0.5)
            .map_err(|e| e.to_string())?
            .f1;

        let space =
            BowFeatureSpace::build(p.split.train.examples.iter().map(|(t, _)| t.as_slice()), 1);
        let xy = |d: &BinaryDataset<Vec<String>>| -> (Vec<_>, Vec<u8>) {
            d.examples
                .iter()
                .map(|(t, y)| (featurize(t, &space), *y))
                .unzip()
        };
        let (xs, ys) = xy(&p.split.train);
        let model = train_logreg(
            &xs,
            &ys,
            space.size(),
            &LogRegConfig {
                seed,
                ..Default::default()
            },
        )
        .map_err(|e| e.to_string())?;
        let (xt, yt) = xy(&p.split.test);
        let bow = eval_logreg(&model, &xt, &yt, 0.5)
            .map_err(|e| e.to_string())?
            .f1;
        rows.push((gru, bow));
    }
    let elapsed = t.elapsed();
    let gap = median(rows.iter().map(|(g, b)| 100.0 * (g - b)).collect());
    let detail: Vec<String> = rows
        .iter()
        .map(|(g, b)| format!("{:.1}/{:.1}", 100.0 * g, 100.0 * b))
        .collect();
    check(
        gap >= 10.0 && within(elapsed, 300),
        format!(
            "gru/bow f1 per seed [{}], median gap {gap:.1} points, {elapsed:.1?}",
            detail.join(", ")
        ),
    )
}

/// F1 against a brute-force oracle, and the published comparison row.
fn metric_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(0..60);
        let rate = rng.gen_range(0.0..1.0);
        let pred: Vec<bool> = (0..n).map(|_| rng.gen_bool(rate)).collect();
        let gold: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();

        let mut tp = 0u64;
        let mut fp = 0u64;
        let mut fn_ = 0u64;
        for i in 0..n {
            match (pred[i], gold[i]) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fn_ += 1,
                (false, false) => {}
            }
        }
        let p = if tp + fp == 0 {
            0.0
        } else {
            tp as f64 / (tp + fp) as f64
        };
        let r = if tp + fn_ == 0 {
            0.0
        } else {
            tp as f64 / (tp + fn_) as f64
        };
        let oracle = if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        };
        let closed = if tp == 0 {
            0.0
        } else {
            2.0 * tp as f64 / (2 * tp + fp + fn_) as f64
        };

        let counts = ConfusionCounts::from_pairs(pred.iter().copied().zip(gold.iter().copied()));
        let got = f1(&counts).f1;
        if got.to_bits() != oracle.to_bits()
            || (got - closed).abs() > 1e-12
            || counts.total() != n as u64
        {
            mismatches += 1;
        }
    }

    use Emotion::*;
    let wang = EvalReport::from_f1([
        (Joy, 0.721),
        (Sadness, 0.647),
        (Anger, 0.715),
        (Love, 0.515),
        (Fear, 0.439),
        (Thankfulness, 0.571),
        (Surprise, 0.139),
    ]);
    let ours = EvalReport::from_f1([
        (Joy, 0.821),
        (Sadness, 0.792),
        (Anger, 0.837),
        (Love, 0.803),
        (Fear, 0.781),
        (Thankfulness, 0.836),
        (Surprise, 0.756),
    ]);
    let table = report_table(&ours, Some(&wang));
    let average: Vec<&str> = table
        .lines()
        .last()
        .unwrap_or("")
        .split_whitespace()
        .collect();
    check(
        mismatches == 0 && average == ["Average", "53.5", "80.4", "26.8"],
        format!(
            "{mismatches}/1000 oracle mismatches, table row {:?}",
            average.join(" ")
        ),
    )
}

/// Preprocessing and normalization reproduce the documented rewrites.
fn pipeline_fidelity() -> Outcome {
    let cases = [
        (preprocess("awesome!!"), "awesome !!"),
        (wang_normalize("ooooh"), "ooh"),
        (wang_normalize("!!!!!"), "!!"),
    ];
    let bad: Vec<String> = cases
        .iter()
        .filter(|(got, want)| got != want)
        .map(|(got, want)| format!("{got:?} != {want:?}"))
        .collect();
    check(
        bad.is_empty(),
        if bad.is_empty() {
            "3/3 exact".into()
        } else {
            bad.join("; ")
        },
    )
}

/// 10⁴ random trials of balancing and splitting.
fn balance_and_split() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = Vec::new();
    for trial in 0..10_000 {
        let target = Emotion::ALL[rng.gen_range(0..7)];
        let positives = rng.gen_range(5..=60);
        let others = rng.gen_range(positives..=positives * 3);
        let mut labels: Vec<Emotion> = (0..positives).map(|_| target).collect();
        labels.extend((0..others).map(|_| loop {
            let e = Emotion::ALL[rng.gen_range(0..7)];
            if e != target {
                break e;
            }
        }));
        let seed = rng.gen();
        let balanced = balanced_indices(&labels, target, seed).unwrap();
        let ones = balanced.iter().filter(|(_, y)| *y == 1).count();
        let zeros_ok = balanced
            .iter()
            .all(|&(i, y)| (labels[i] == target) == (y == 1));
        if ones * 2 != balanced.len()
            || !zeros_ok
            || balanced != balanced_indices(&labels, target, seed).unwrap()
        {
            failures.push(format!("trial {trial}: balance"));
            continue;
        }

        let binary: Vec<u8> = balanced.iter().map(|(_, y)| *y).collect();
        let n = binary.len() as f64;
        let parts = split_indices(&binary, seed).unwrap();
        let sizes = [parts[0].len(), parts[1].len(), parts[2].len()];
        let expected = SplitSizes::for_len(binary.len());
        let near = [0.8, 0.1, 0.1]
            .iter()
            .zip(sizes)
            .all(|(f, s)| (s as f64 - f * n).abs() <= 1.0);
        let mut all: Vec<usize> = parts.concat();
        all.sort_unstable();
        let partition = all == (0..binary.len()).collect::<Vec<_>>();
        if !near
            || !partition
            || sizes != [expected.train, expected.dev, expected.test]
            || parts != split_indices(&binary, seed).unwrap()
        {
            failures.push(format!("trial {trial}: split {sizes:?} of {n}"));
        }
    }
    check(
        failures.is_empty(),
        format!(
            "10000 trials, {} failures {}",
            failures.len(),
            failures
                .iter()
                .take(3)
                .cloned()
                .collect::<Vec<_>>()
                .join("; ")
        ),
    )
}

/// Save/load keeps predictions bitwise; a different embedding is refused.
fn serialization() -> Outcome {
    let config = TrainConfig {
        epochs: 3,
        ..Default::default()
    };
    let (p, trained) = prepared_model("keyword.tsv", Emotion::Joy, &config);
    let checkpoint: Checkpoint = trained.checkpoint().clone();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let stem = dir.path().join("joy");
    save_checkpoint(&checkpoint, &stem).map_err(|e| e.to_string())?;
    let loaded = load_checkpoint(&stem).map_err(|e| e.to_string())?;
    let reloaded =
        Classifier::from_vectors(loaded.clone(), &vectors()).map_err(|e| e.to_string())?;

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let rows = p.vocab.size() as u32;
    let mut identical = 0;
    for _ in 0..100 {
        let len = rng.gen_range(1..=35);
        let probe: Vec<u32> = (0..len).map(|_| rng.gen_range(0..rows)).collect();
        let a = trained.score_indices(&probe).map_err(|e| e.to_string())?;
        let b = reloaded.score_indices(&probe).map_err(|e| e.to_string())?;
        identical += usize::from(a.to_bits() == b.to_bits());
    }

    let perturbed = {
        let mut m = trained.embedding().matrix().clone();
        m.data_mut()[40] += 1e-3;
        EmbeddingMatrix::from_matrix(m).map_err(|e| e.to_string())?
    };
    let refused = Classifier::new(loaded.clone(), perturbed).is_err();
    check(
        identical == 100 && loaded == checkpoint && refused,
        format!("{identical}/100 probe predictions bitwise identical, tensors equal: {}, perturbed embedding refused: {refused}", loaded == checkpoint),
    )
}

/// A scorer that knows the gold label of every toy text.
struct Oracle {
    emotion: Emotion,
    gold: HashMap<String, MappedLabel>,
}

impl TextScorer for Oracle {
    fn emotion(&self) -> Emotion {
        self.emotion
    }

    fn score(&self, text: &str) -> emogru::Result<f64> {
        Ok(if self.gold[text] == MappedLabel::Emotion(self.emotion) {
            1.0
        } else {
            0.0
        })
    }
}

/// Seven trained models through the label mapping, then an oracle set.
fn cross_dataset_harness() -> Outcome {
    let records = parse_tsv(&std::fs::read_to_string(data("cross.tsv")).unwrap()).unwrap();
    let mapping = LabelMapping::crowdflower();
    if mapping != LabelMapping::load(data("cross.map")).map_err(|e| e.to_string())? {
        return Err("bundled mapping differs from the built-in one".into());
    }
    let config = TrainConfig::default();
    let models: Vec<Classifier> = Emotion::ALL
        .iter()
        .map(|&e| prepared_model("emotions.tsv", e, &config).1)
        .collect();
    let scorers: Vec<&dyn TextScorer> = models.iter().map(|m| m as &dyn TextScorer).collect();
    let report = evaluate_cross(&scorers, &records, &mapping, CrossOptions::default())
        .map_err(|e| e.to_string())?;

    let expected: BTreeSet<Emotion> = [
        Emotion::Sadness,
        Emotion::Fear,
        Emotion::Joy,
        Emotion::Love,
        Emotion::Surprise,
        Emotion::Anger,
    ]
    .into();
    let got: BTreeSet<Emotion> = report.per_emotion.keys().copied().collect();
    let six = got == expected && report.macro_f1.is_finite();

    let mut gold = HashMap::new();
    for r in &records {
        let label = mapping.get(&r.label);
        if *gold.entry(r.text.clone()).or_insert(label) != label {
            return Err(format!("ambiguous toy text {:?}", r.text));
        }
    }
    let oracles: Vec<Oracle> = Emotion::ALL
        .iter()
        .map(|&emotion| Oracle {
            emotion,
            gold: gold.clone(),
        })
        .collect();
    let scorers: Vec<&dyn TextScorer> = oracles.iter().map(|o| o as &dyn TextScorer).collect();
    let perfect = evaluate_cross(&scorers, &records, &mapping, CrossOptions::default())
        .map_err(|e| e.to_string())?;
    let all_one =
        perfect.per_emotion.len() == 6 && perfect.per_emotion.values().all(|m| m.f1 == 1.0);
    check(
        six && all_one,
        format!(
            "trained set: {} emotions, macro f1 {:.3}; oracle set: f1 = 1 on {}/6",
            got.len(),
            report.macro_f1,
            perfect.per_emotion.values().filter(|m| m.f1 == 1.0).count()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("gradient correctness", gradient_correctness),
        ("trivial fixed points", trivial_fixed_points),
        ("overfitting proxy", overfitting_proxy),
        ("sequence sensitivity", sequence_sensitivity),
        ("metric oracle", metric_oracle),
        ("pipeline fidelity", pipeline_fidelity),
        ("balance and split invariants", balance_and_split),
        ("serialization", serialization),
        ("cross-dataset harness", cross_dataset_harness),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let (verdict, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} {verdict} {name}: {detail}", i + 1);
    }
    println!(
        "acceptance: {}/{} passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
