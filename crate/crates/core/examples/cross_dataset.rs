// Seven one-vs-rest classifiers trained on the bundled seven-emotion
// corpus, then evaluated on a differently-labeled toy dataset through a
// label mapping (`worry=fear`, `happiness=joy`, ...).
//
// ```text
// cargo run --release --example cross_dataset
// ```

use std::path::Path;

use emogru::corpus::{examples_from_records, load_tsv};
use emogru::embed::{build_matrix, load_vectors};
use emogru::eval::{
    evaluate_cross, report_table, Classifier, CrossOptions, EvalReport, LabelMapping, TextScorer,
};
use emogru::synthetic::VECTOR_DIM;
use emogru::train::{prepare, train_classifier, TrainConfig};
use emogru::Emotion;

pub fn run_example() -> emogru::Result<EvalReport> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let (examples, _) = examples_from_records(&load_tsv(data.join("emotions.tsv"))?);
    let vectors = load_vectors(data.join("vectors.vec"), VECTOR_DIM)?;
    let config = TrainConfig::default();

    let classifiers = Emotion::ALL
        .iter()
        .map(|&emotion| {
            let p = prepare(
                &examples,
                emotion,
                config.seed,
                emotion.default_vocab_cap(),
                config.seq_len,
            )?;
            let emb = build_matrix(&p.vocab, &vectors, config.seed);
            let ck = train_classifier(&p.encoded, &p.vocab, &emb, &config, |_, _| {})?;
            Classifier::new(ck, emb)
        })
        .collect::<emogru::Result<Vec<_>>>()?;
    let scorers: Vec<&dyn TextScorer> = classifiers.iter().map(|c| c as &dyn TextScorer).collect();

    let records = load_tsv(data.join("cross.tsv"))?;
    let mapping = LabelMapping::load(data.join("cross.map"))?;
    let kept = evaluate_cross(&scorers, &records, &mapping, CrossOptions::default())?;
    let dropped = evaluate_cross(
        &scorers,
        &records,
        &mapping,
        CrossOptions {
            drop_unmapped: true,
            ..Default::default()
        },
    )?;

    println!(
        "unmapped labels as negatives:\n{}",
        report_table(&kept, None)
    );
    println!(
        "unmapped labels dropped, against the first run:\n{}",
        report_table(&dropped, Some(&kept))
    );
    Ok(kept)
}

fn main() -> emogru::Result<()> {
    run_example().map(|_| ())
}
