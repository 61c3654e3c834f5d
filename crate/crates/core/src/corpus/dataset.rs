use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{encode, Emotion, Example, Vocabulary};
use crate::{Error, Result};

/// One-vs-rest dataset: every item carries label 1 (target emotion) or 0.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryDataset<X> {
    pub target: Emotion,
    pub examples: Vec<(X, u8)>,
}

impl<X> BinaryDataset<X> {
    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn positives(&self) -> usize {
        self.examples.iter().filter(|(_, y)| *y == 1).count()
    }
}

/// A dataset whose token sequences have been mapped through a vocabulary
/// into fixed-length index sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedDataset {
    pub target: Emotion,
    pub seq_len: usize,
    /// [`Vocabulary::fingerprint`] of the encoding vocabulary.
    pub vocab_fingerprint: String,
    pub examples: Vec<(Vec<u32>, u8)>,
}

impl EncodedDataset {
    pub fn encode(data: &BinaryDataset<Vec<String>>, vocab: &Vocabulary, seq_len: usize) -> Self {
        EncodedDataset {
            target: data.target,
            seq_len,
            vocab_fingerprint: vocab.fingerprint(),
            examples: data
                .examples
                .iter()
                .map(|(toks, y)| (encode(toks, vocab, seq_len), *y))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }
}

/// An encoded train/dev/test partition.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedSplit {
    pub train: EncodedDataset,
    pub dev: EncodedDataset,
    pub test: EncodedDataset,
}

impl SplitDataset<Vec<String>> {
    pub fn encode(&self, vocab: &Vocabulary, seq_len: usize) -> EncodedSplit {
        EncodedSplit {
            train: EncodedDataset::encode(&self.train, vocab, seq_len),
            dev: EncodedDataset::encode(&self.dev, vocab, seq_len),
            test: EncodedDataset::encode(&self.test, vocab, seq_len),
        }
    }

    /// Vocabulary over the training split only.
    pub fn train_vocabulary(&self, cap: usize) -> Vocabulary {
        super::build_vocabulary(self.train.examples.iter().map(|(t, _)| t.as_slice()), cap)
    }
}

/// Train/dev/test partition of one binary dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitDataset<X> {
    pub train: BinaryDataset<X>,
    pub dev: BinaryDataset<X>,
    pub test: BinaryDataset<X>,
}

impl<X> SplitDataset<X> {
    pub fn map<Y>(
        self,
        mut f: impl FnMut(BinaryDataset<X>) -> BinaryDataset<Y>,
    ) -> SplitDataset<Y> {
        SplitDataset {
            train: f(self.train),
            dev: f(self.dev),
            test: f(self.test),
        }
    }
}

/// Selects all `target` positions as positives and an equal-sized uniform
/// sample of the remaining positions as negatives, shuffled.
///
/// Returns `(position in labels, binary label)` pairs.
pub fn balanced_indices(
    labels: &[Emotion],
    target: Emotion,
    seed: u64,
) -> Result<Vec<(usize, u8)>> {
    let (pos, neg): (Vec<usize>, Vec<usize>) =
        (0..labels.len()).partition(|&i| labels[i] == target);
    if pos.is_empty() {
        return Err(Error::Data(format!("no positive examples for {target}")));
    }
    if neg.len() < pos.len() {
        return Err(Error::Data(format!(
            "need {} negatives, have {}",
            pos.len(),
            neg.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampled = index::sample(&mut rng, neg.len(), pos.len());
    let mut out: Vec<(usize, u8)> = pos.iter().map(|&i| (i, 1)).collect();
    out.extend(sampled.iter().map(|j| (neg[j], 0)));
    out.shuffle(&mut rng);
    Ok(out)
}

/// Balanced one-vs-rest dataset over the examples' token sequences.
pub fn build_balanced(
    examples: &[Example],
    target: Emotion,
    seed: u64,
) -> Result<BinaryDataset<Vec<String>>> {
    let labels: Vec<Emotion> = examples.iter().map(Example::label).collect();
    let picked = balanced_indices(&labels, target, seed)?;
    Ok(BinaryDataset {
        target,
        examples: picked
            .into_iter()
            .map(|(i, y)| (examples[i].tokens().to_vec(), y))
            .collect(),
    })
}

/// Sizes of an 80/10/10 partition of `n` items.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSizes {
    pub train: usize,
    pub dev: usize,
    pub test: usize,
}

impl SplitSizes {
    /// Train takes `floor(0.8 n)`, the remainder is halved between dev and
    /// test, and an odd leftover goes to train.
    pub fn for_len(n: usize) -> Self {
        let base = n * 4 / 5;
        let rest = n - base;
        let dev = rest / 2;
        SplitSizes {
            train: base + rest % 2,
            dev,
            test: dev,
        }
    }
}

/// Stratified 80/10/10 partition. Returns, per split, positions into
/// `labels`.
///
/// Each class is shuffled on its own, the two classes are interleaved
/// (positive first) and the interleaved order is cut at [`SplitSizes`].
/// Any contiguous window of an alternating sequence holds the two classes
/// within one of each other, so every split keeps the balance.
pub fn split_indices(labels: &[u8], seed: u64) -> Result<[Vec<usize>; 3]> {
    if labels.len() < 10 {
        return Err(Error::Data("dataset too small to split".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut pos, mut neg): (Vec<usize>, Vec<usize>) =
        (0..labels.len()).partition(|&i| labels[i] == 1);
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);

    let mut order = Vec::with_capacity(labels.len());
    let (mut p, mut n) = (pos.into_iter(), neg.into_iter());
    loop {
        match (p.next(), n.next()) {
            (None, None) => break,
            (a, b) => order.extend(a.into_iter().chain(b)),
        }
    }

    let sizes = SplitSizes::for_len(order.len());
    let test = order.split_off(sizes.train + sizes.dev);
    let dev = order.split_off(sizes.train);
    Ok([order, dev, test])
}

pub fn split_80_10_10<X>(dataset: BinaryDataset<X>, seed: u64) -> Result<SplitDataset<X>> {
    let labels: Vec<u8> = dataset.examples.iter().map(|(_, y)| *y).collect();
    let [train, dev, test] = split_indices(&labels, seed)?;
    let target = dataset.target;
    let mut slots: Vec<Option<(X, u8)>> = dataset.examples.into_iter().map(Some).collect();
    let mut take = |idx: Vec<usize>| BinaryDataset {
        target,
        examples: idx
            .into_iter()
            .map(|i| slots[i].take().expect("split positions are disjoint"))
            .collect(),
    };
    Ok(SplitDataset {
        train: take(train),
        dev: take(dev),
        test: take(test),
    })
}
