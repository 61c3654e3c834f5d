// Word order matters: on the bundled negation corpus, where every text has
// exactly one `not` and one `good` and only their order decides the label,
// the recurrent model is compared with unigram and bigram bag-of-words
// logistic regression on the same test split.
//
// ```text
// cargo run --release --example negation_vs_bow
// ```

use std::path::Path;

use emogru::baseline::{eval_logreg, featurize, train_logreg, BowFeatureSpace, LogRegConfig};
use emogru::corpus::{examples_from_records, load_tsv, BinaryDataset};
use emogru::embed::{build_matrix, load_vectors};
use emogru::eval::{evaluate_binary, Classifier};
use emogru::synthetic::VECTOR_DIM;
use emogru::train::{prepare, train_classifier, TrainConfig};
use emogru::Emotion;

fn bow_f1(
    train: &BinaryDataset<Vec<String>>,
    test: &BinaryDataset<Vec<String>>,
    max_n: usize,
) -> emogru::Result<f64> {
    let space = BowFeatureSpace::build(train.examples.iter().map(|(t, _)| t.as_slice()), max_n);
    let xy = |d: &BinaryDataset<Vec<String>>| -> (Vec<_>, Vec<u8>) {
        d.examples
            .iter()
            .map(|(t, y)| (featurize(t, &space), *y))
            .unzip()
    };
    let (xs, ys) = xy(train);
    let model = train_logreg(&xs, &ys, space.size(), &LogRegConfig::default())?;
    let (xt, yt) = xy(test);
    Ok(eval_logreg(&model, &xt, &yt, 0.5)?.f1)
}

/// `(gru, unigram, bigram)` test F1.
pub fn run_example() -> emogru::Result<(f64, f64, f64)> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let (examples, _) = examples_from_records(&load_tsv(data.join("negation.tsv"))?);
    let vectors = load_vectors(data.join("vectors.vec"), VECTOR_DIM)?;

    let config = TrainConfig::default();
    let p = prepare(
        &examples,
        Emotion::Sadness,
        config.seed,
        1000,
        config.seq_len,
    )?;
    let emb = build_matrix(&p.vocab, &vectors, config.seed);
    let checkpoint = train_classifier(&p.encoded, &p.vocab, &emb, &config, |_, _| {})?;
    let gru = evaluate_binary(&Classifier::new(checkpoint, emb)?, &p.encoded.test, 0.5)?.f1;

    let unigram = bow_f1(&p.split.train, &p.split.test, 1)?;
    let bigram = bow_f1(&p.split.train, &p.split.test, 2)?;
    println!("bi-GRU          test f1 {:.3}", gru);
    println!("BOW n=1         test f1 {:.3}", unigram);
    println!("BOW n=1,2       test f1 {:.3}", bigram);
    Ok((gru, unigram, bigram))
}

fn main() -> emogru::Result<()> {
    run_example().map(|_| ())
}
