#![allow(dead_code)]

use std::path::{Path, PathBuf};

use emogru::corpus::{examples_from_records, parse_tsv, Example, Vocabulary};
use emogru::embed::{build_matrix, parse_vectors, WordVectors};
use emogru::nn::{ModelParameters, ModelShape};
use emogru::synthetic::{word_vectors, BUNDLE_SEED, VECTOR_DIM};
use emogru::train::{Checkpoint, TrainConfig};
use emogru::Emotion;

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn data(name: &str) -> PathBuf {
    data_dir().join(name)
}

pub fn bundled_examples(name: &str) -> Vec<Example> {
    let text = std::fs::read_to_string(data(name)).unwrap();
    examples_from_records(&parse_tsv(&text).unwrap()).0
}

pub fn vectors() -> WordVectors {
    parse_vectors(
        word_vectors(VECTOR_DIM, BUNDLE_SEED + 5).as_bytes(),
        VECTOR_DIM,
    )
    .unwrap()
}

/// A checkpoint whose every trainable parameter is zero.
pub fn zero_checkpoint(emotion: Emotion, vectors: &WordVectors) -> Checkpoint {
    let config = TrainConfig {
        hidden_size: 4,
        dense_size: 6,
        ..Default::default()
    };
    let vocab = Vocabulary::from_tokens(vec!["good".into(), "day".into()], 100).unwrap();
    let emb = build_matrix(&vocab, vectors, config.seed);
    Checkpoint {
        emotion,
        params: ModelParameters::zeros(ModelShape {
            embed_dim: vectors.dim(),
            hidden: 4,
            dense: 6,
        }),
        config,
        vocab,
        history: Vec::new(),
        embedding_checksum: emb.checksum(),
    }
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(args: &[&str], stdin: &str) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("emogru").chain(args.iter().copied());
    let code = emogru::cli::run_from(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}
