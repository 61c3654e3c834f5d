//! Corpus ingestion, curation, preprocessing and dataset construction.

mod dataset;
mod io;
mod text;
mod vocab;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use dataset::{
    balanced_indices, build_balanced, split_80_10_10, split_indices, BinaryDataset, EncodedDataset,
    EncodedSplit, SplitDataset, SplitSizes,
};
pub use io::{load_lexicon, load_tsv, parse_lexicon, parse_tsv, read_vocabulary, write_vocabulary};
pub use text::{preprocess, tokenize, wang_curate, wang_normalize, HashtagLexicon};
pub use vocab::{build_vocabulary, encode, Vocabulary, OOV_INDEX, PAD_INDEX};

/// The seven emotion categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emotion {
    Joy,
    Sadness,
    Anger,
    Love,
    Fear,
    Thankfulness,
    Surprise,
}

impl Emotion {
    pub const ALL: [Emotion; 7] = [
        Emotion::Joy,
        Emotion::Sadness,
        Emotion::Anger,
        Emotion::Love,
        Emotion::Fear,
        Emotion::Thankfulness,
        Emotion::Surprise,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Emotion::Joy => "joy",
            Emotion::Sadness => "sadness",
            Emotion::Anger => "anger",
            Emotion::Love => "love",
            Emotion::Fear => "fear",
            Emotion::Thankfulness => "thankfulness",
            Emotion::Surprise => "surprise",
        }
    }

    /// Vocabulary size used for this emotion's classifier: larger for the
    /// emotions with more training data.
    pub fn default_vocab_cap(self) -> usize {
        match self {
            Emotion::Joy | Emotion::Sadness | Emotion::Anger | Emotion::Love => 100_000,
            Emotion::Thankfulness | Emotion::Fear => 50_000,
            Emotion::Surprise => 25_000,
        }
    }
}

impl fmt::Display for Emotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Emotion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Emotion::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| Error::Format(format!("unknown emotion {s:?}")))
    }
}

/// One line of a labeled source dataset. The label is in the source's own
/// vocabulary and need not be an [`Emotion`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRecord {
    pub label: String,
    pub text: String,
}

impl RawRecord {
    pub fn new(label: impl Into<String>, text: impl Into<String>) -> Result<Self> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(Error::Format("record text is empty".into()));
        }
        Ok(RawRecord {
            label: label.into(),
            text,
        })
    }
}

/// A tokenized text with its emotion label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example {
    tokens: Vec<String>,
    label: Emotion,
}

impl Example {
    pub fn new(tokens: Vec<String>, label: Emotion) -> Result<Self> {
        if tokens.is_empty() {
            return Err(Error::Data("example has no tokens".into()));
        }
        if let Some(bad) = tokens
            .iter()
            .find(|t| t.is_empty() || t.chars().any(char::is_whitespace))
        {
            return Err(Error::Data(format!("invalid token {bad:?}")));
        }
        Ok(Example { tokens, label })
    }

    /// Preprocesses and tokenizes `text`. Returns `None` when nothing is
    /// left after preprocessing (e.g. a text made only of hashtags).
    pub fn from_text(text: &str, label: Emotion) -> Option<Self> {
        let tokens = tokenize(&preprocess(text));
        (!tokens.is_empty()).then_some(Example { tokens, label })
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn label(&self) -> Emotion {
        self.label
    }

    pub fn into_tokens(self) -> Vec<String> {
        self.tokens
    }
}

/// Turns raw records whose label is one of the seven emotions into
/// examples. Records with foreign labels or no tokens are skipped; the
/// number skipped is returned alongside.
pub fn examples_from_records(records: &[RawRecord]) -> (Vec<Example>, usize) {
    let mut skipped = 0;
    let examples = records
        .iter()
        .filter_map(|r| {
            let ex = r
                .label
                .parse::<Emotion>()
                .ok()
                .and_then(|label| Example::from_text(&r.text, label));
            if ex.is_none() {
                skipped += 1;
            }
            ex
        })
        .collect();
    (examples, skipped)
}
