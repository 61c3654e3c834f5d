// Batch scoring with several classifiers at once, as the `predict`
// subcommand does: trains joy, sadness and anger models on the bundled
// seven-emotion corpus, then prints one JSON line per input text.
//
// ```text
// cargo run --release --example predict
// ```

use std::collections::BTreeMap;
use std::path::Path;

use emogru::corpus::{examples_from_records, load_tsv};
use emogru::embed::{build_matrix, load_vectors};
use emogru::eval::{Classifier, TextScorer};
use emogru::synthetic::VECTOR_DIM;
use emogru::train::{prepare, train_classifier, TrainConfig};
use emogru::Emotion;

pub fn run_example() -> emogru::Result<Vec<BTreeMap<Emotion, f64>>> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let (examples, _) = examples_from_records(&load_tsv(data.join("emotions.tsv"))?);
    let vectors = load_vectors(data.join("vectors.vec"), VECTOR_DIM)?;
    let config = TrainConfig::default();

    let mut models = Vec::new();
    for emotion in [Emotion::Joy, Emotion::Sadness, Emotion::Anger] {
        let p = prepare(&examples, emotion, config.seed, 1000, config.seq_len)?;
        let emb = build_matrix(&p.vocab, &vectors, config.seed);
        let ck = train_classifier(&p.encoded, &p.vocab, &emb, &config, |_, _| {})?;
        models.push(Classifier::new(ck, emb)?);
    }

    let mut all = Vec::new();
    for text in [
        "So HAPPY with my friends today!!",
        "a sad sad night",
        "really angry at work",
        "",
    ] {
        let scores: BTreeMap<Emotion, f64> = models
            .iter()
            .map(|m| Ok((m.emotion(), m.score(text)?)))
            .collect::<emogru::Result<_>>()?;
        println!("{}", serde_json::json!({ "text": text, "scores": scores }));
        all.push(scores);
    }
    Ok(all)
}

fn main() -> emogru::Result<()> {
    run_example().map(|_| ())
}
