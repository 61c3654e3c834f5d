//! Emotion classification for short social-media texts.
//!
//! The toolkit trains one binary bidirectional-GRU classifier per emotion
//! over frozen pretrained word vectors, and ships a bag-of-words logistic
//! regression baseline plus evaluation harnesses for in-domain test splits
//! and for foreign datasets with a different label vocabulary.
//!
//! The pipeline, bottom up:
//!
//! - [`corpus`]: TSV ingestion, curation heuristics, preprocessing,
//!   tokenization, vocabularies, balanced one-vs-rest datasets and splits.
//! - [`embed`]: text-format word vectors and the frozen embedding matrix.
//! - [`nn`]: the network (BiGRU, max+mean pooling, dense, dropout, sigmoid)
//!   with a hand-derived backward pass and a finite-difference checker.
//! - [`train`]: Adam, the mini-batch loop and the checkpoint format.
//! - [`eval`]: confusion counts, F1, cross-dataset label mapping, tables.
//! - [`baseline`]: n-gram count features and logistic regression.
//! - [`cli`]: the `emogru` command-line front end.
//! - [`synthetic`]: small generated corpora and word vectors used by the
//!   examples, tests and bundled `data/` files.

pub mod baseline;
pub mod cli;
pub mod corpus;
pub mod embed;
mod error;
pub mod eval;
pub mod nn;
pub mod synthetic;
pub mod train;

pub use corpus::Emotion;
pub use error::{Error, ErrorKind, Result};
