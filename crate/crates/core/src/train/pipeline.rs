use super::trainer::derive_seed;
use crate::corpus::{
    build_balanced, split_80_10_10, EncodedSplit, Example, SplitDataset, Vocabulary,
};
use crate::{Emotion, Result};

/// A balanced, split and encoded dataset for one target emotion.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub split: SplitDataset<Vec<String>>,
    pub vocab: Vocabulary,
    pub encoded: EncodedSplit,
}

/// Balances `examples` around `target`, splits 80/10/10 and builds the
/// vocabulary from the training split. The same seed always yields the same
/// test set, so neural and bag-of-words runs can be compared directly.
pub fn prepare(
    examples: &[Example],
    target: Emotion,
    seed: u64,
    vocab_cap: usize,
    seq_len: usize,
) -> Result<Prepared> {
    let balanced = build_balanced(examples, target, derive_seed(seed, &[10]))?;
    let split = split_80_10_10(balanced, derive_seed(seed, &[11]))?;
    let vocab = split.train_vocabulary(vocab_cap);
    let encoded = split.encode(&vocab, seq_len);
    Ok(Prepared {
        split,
        vocab,
        encoded,
    })
}
