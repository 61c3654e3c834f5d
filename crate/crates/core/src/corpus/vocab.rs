use std::collections::HashMap;

use sha2::{Digest, Sha256};

use crate::{Error, Result};

pub const PAD_INDEX: u32 = 0;
pub const OOV_INDEX: u32 = 1;
const FIRST_REAL: u32 = 2;

/// Token to index map with two reserved slots: 0 for padding and 1 for
/// out-of-vocabulary tokens. Real tokens occupy `2..size()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    index_of: HashMap<String, u32>,
    cap: usize,
}

impl Vocabulary {
    /// Builds a vocabulary from real tokens listed in index order.
    pub fn from_tokens(tokens: Vec<String>, cap: usize) -> Result<Self> {
        if tokens.len() > cap {
            return Err(Error::Data(format!(
                "{} tokens exceed vocabulary cap {cap}",
                tokens.len()
            )));
        }
        let mut index_of = HashMap::with_capacity(tokens.len());
        for (i, tok) in tokens.iter().enumerate() {
            if tok.is_empty() || tok.chars().any(char::is_whitespace) {
                return Err(Error::Format(format!("invalid vocabulary token {tok:?}")));
            }
            if index_of
                .insert(tok.clone(), FIRST_REAL + i as u32)
                .is_some()
            {
                return Err(Error::Format(format!("duplicate vocabulary token {tok:?}")));
            }
        }
        Ok(Vocabulary {
            tokens,
            index_of,
            cap,
        })
    }

    /// Total number of rows including the two reserved slots.
    pub fn size(&self) -> usize {
        self.tokens.len() + FIRST_REAL as usize
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Real tokens in index order, starting at index 2.
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn index(&self, token: &str) -> Option<u32> {
        self.index_of.get(token).copied()
    }

    pub fn token(&self, index: u32) -> Option<&str> {
        index
            .checked_sub(FIRST_REAL)
            .and_then(|i| self.tokens.get(i as usize))
            .map(String::as_str)
    }

    /// Hex SHA-256 over the token list; identifies the encoding an
    /// [`EncodedDataset`](super::EncodedDataset) was produced with.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        for tok in &self.tokens {
            h.update(tok.as_bytes());
            h.update(b"\n");
        }
        hex::encode(h.finalize())
    }
}

/// Keeps the `cap` most frequent tokens. Ties are broken by lexicographic
/// order, and indices follow the same order.
pub fn build_vocabulary<'a>(
    docs: impl IntoIterator<Item = &'a [String]>,
    cap: usize,
) -> Vocabulary {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for doc in docs {
        for tok in doc {
            *counts.entry(tok.as_str()).or_default() += 1;
        }
    }
    let mut ranked: Vec<(&str, usize)> = counts.into_iter().collect();
    ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked.truncate(cap);
    let tokens = ranked.into_iter().map(|(t, _)| t.to_owned()).collect();
    Vocabulary::from_tokens(tokens, cap).expect("counted tokens are unique")
}

/// Maps tokens to indices, truncating to the first `seq_len` tokens and
/// right-padding with [`PAD_INDEX`].
pub fn encode(tokens: &[String], vocab: &Vocabulary, seq_len: usize) -> Vec<u32> {
    let mut out: Vec<u32> = tokens
        .iter()
        .take(seq_len)
        .map(|t| vocab.index(t).unwrap_or(OOV_INDEX))
        .collect();
    out.resize(seq_len, PAD_INDEX);
    out
}
