// End-to-end training of one binary classifier on the bundled keyword
// corpus, followed by a checkpoint save/load round trip.
//
// ```text
// cargo run --release --example train_classifier
// ```

use std::path::Path;

use emogru::corpus::{examples_from_records, load_tsv};
use emogru::embed::{build_matrix, load_vectors};
use emogru::eval::{evaluate_binary, Classifier, EmotionMetrics};
use emogru::synthetic::VECTOR_DIM;
use emogru::train::{load_checkpoint, prepare, save_checkpoint, train_classifier, TrainConfig};
use emogru::Emotion;

pub fn run_example() -> emogru::Result<EmotionMetrics> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let (examples, _) = examples_from_records(&load_tsv(data.join("keyword.tsv"))?);
    let vectors = load_vectors(data.join("vectors.vec"), VECTOR_DIM)?;

    let config = TrainConfig::default();
    let prepared = prepare(
        &examples,
        Emotion::Joy,
        config.seed,
        Emotion::Joy.default_vocab_cap(),
        config.seq_len,
    )?;
    let emb = build_matrix(&prepared.vocab, &vectors, config.seed);
    let checkpoint = train_classifier(
        &prepared.encoded,
        &prepared.vocab,
        &emb,
        &config,
        |epoch, r| {
            println!(
                "epoch {:>2}  train {:.4}  dev {:.4}  dev f1 {:.3}",
                epoch + 1,
                r.train_loss,
                r.dev_loss,
                r.dev_f1
            );
        },
    )?;

    let dir = tempfile::tempdir().map_err(|e| emogru::Error::io("tempdir", e))?;
    let stem = dir.path().join("joy");
    save_checkpoint(&checkpoint, &stem)?;
    let reloaded = Classifier::new(load_checkpoint(&stem)?, emb)?;
    assert_eq!(reloaded.checkpoint(), &checkpoint);

    let test = evaluate_binary(&reloaded, &prepared.encoded.test, 0.5)?;
    println!("test f1 {:.3} ({:?})", test.f1, test.counts);
    for text in ["what a good morning", "just another day at work"] {
        println!(
            "p(joy | {text:?}) = {:.3}",
            emogru::eval::TextScorer::score(&reloaded, text)?
        );
    }
    Ok(test)
}

fn main() -> emogru::Result<()> {
    run_example().map(|_| ())
}
