use crate::corpus::{encode, preprocess, tokenize, EncodedDataset, OOV_INDEX};
use crate::embed::{build_matrix, EmbeddingMatrix, WordVectors};
use crate::nn::{forward, ForwardOptions};
use crate::train::{predict_all, Checkpoint};
use crate::{Emotion, Error, Result};

use super::{ConfusionCounts, EmotionMetrics};

/// Anything that maps raw text to the probability of one emotion.
pub trait TextScorer: Sync {
    fn emotion(&self) -> Emotion;
    fn score(&self, text: &str) -> Result<f64>;
}

/// A checkpoint paired with the embedding matrix it was trained against.
#[derive(Debug, Clone)]
pub struct Classifier {
    checkpoint: Checkpoint,
    embedding: EmbeddingMatrix,
    vocab_fingerprint: String,
}

impl Classifier {
    /// Fails unless `embedding` matches the checksum stored at training
    /// time.
    pub fn new(checkpoint: Checkpoint, embedding: EmbeddingMatrix) -> Result<Self> {
        if embedding.checksum() != checkpoint.embedding_checksum {
            return Err(Error::Checkpoint(format!(
                "embedding checksum mismatch for the {} classifier",
                checkpoint.emotion
            )));
        }
        let vocab_fingerprint = checkpoint.vocab.fingerprint();
        Ok(Classifier {
            checkpoint,
            embedding,
            vocab_fingerprint,
        })
    }

    /// Rebuilds the frozen embedding from word vectors and the checkpoint's
    /// own vocabulary and seed.
    pub fn from_vectors(checkpoint: Checkpoint, vectors: &WordVectors) -> Result<Self> {
        let emb = build_matrix(&checkpoint.vocab, vectors, checkpoint.config.seed);
        Self::new(checkpoint, emb)
    }

    pub fn checkpoint(&self) -> &Checkpoint {
        &self.checkpoint
    }

    pub fn embedding(&self) -> &EmbeddingMatrix {
        &self.embedding
    }

    pub fn score_indices(&self, indices: &[u32]) -> Result<f64> {
        let opts = ForwardOptions {
            mask_aware: self.checkpoint.config.mask_aware,
            ..ForwardOptions::inference()
        };
        let trace = forward(
            indices,
            self.embedding.matrix(),
            &self.checkpoint.params,
            opts,
        )?;
        Ok(trace.probability() as f64)
    }

    /// Scores a token sequence. An empty sequence is scored as a single
    /// out-of-vocabulary token.
    pub fn score_tokens(&self, tokens: &[String]) -> Result<f64> {
        let seq_len = self.checkpoint.config.seq_len;
        let mut indices = encode(tokens, &self.checkpoint.vocab, seq_len);
        if tokens.is_empty() {
            indices[0] = OOV_INDEX;
        }
        self.score_indices(&indices)
    }
}

impl TextScorer for Classifier {
    fn emotion(&self) -> Emotion {
        self.checkpoint.emotion
    }

    fn score(&self, text: &str) -> Result<f64> {
        self.score_tokens(&tokenize(&preprocess(text)))
    }
}

/// Test-split evaluation with dropout off; `p ≥ threshold` predicts the
/// target emotion.
pub fn evaluate_binary(
    classifier: &Classifier,
    test: &EncodedDataset,
    threshold: f64,
) -> Result<EmotionMetrics> {
    if test.is_empty() {
        return Err(Error::Data("empty test set".into()));
    }
    if test.vocab_fingerprint != classifier.vocab_fingerprint {
        return Err(Error::Data(
            "test set was encoded with a different vocabulary".into(),
        ));
    }
    let probs = predict_all(
        &classifier.checkpoint.params,
        classifier.embedding.matrix(),
        test,
        classifier.checkpoint.config.mask_aware,
    )?;
    let labels: Vec<u8> = test.examples.iter().map(|(_, y)| *y).collect();
    Ok(ConfusionCounts::from_scores(&probs, &labels, threshold).into())
}
