//! Two-file checkpoint: `<stem>.manifest.json` describes the run and the
//! tensor layout, `<stem>.weights.bin` holds the raw little-endian `f32`
//! payload in manifest order with no framing.
//!
//! The embedding matrix is not stored; it is rebuilt from the vector file
//! and the stored vocabulary, and checked against `embedding_checksum`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{EpochRecord, TrainConfig};
use crate::corpus::Vocabulary;
use crate::nn::{ModelParameters, ModelShape, TENSOR_NAMES};
use crate::{Emotion, Error, Result};

pub const CHECKPOINT_VERSION: u32 = 1;

/// A trained binary classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub emotion: Emotion,
    pub config: TrainConfig,
    pub vocab: Vocabulary,
    pub params: ModelParameters<f32>,
    pub history: Vec<EpochRecord>,
    pub embedding_checksum: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct TensorEntry {
    name: String,
    shape: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    version: u32,
    emotion: Emotion,
    config: TrainConfig,
    vocab_cap: usize,
    vocab: Vec<String>,
    tensors: Vec<TensorEntry>,
    history: Vec<EpochRecord>,
    embedding_checksum: String,
}

pub fn manifest_path(stem: &Path) -> PathBuf {
    with_suffix(stem, ".manifest.json")
}

pub fn weights_path(stem: &Path) -> PathBuf {
    with_suffix(stem, ".weights.bin")
}

fn with_suffix(stem: &Path, suffix: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

impl Checkpoint {
    pub fn shape(&self) -> ModelShape {
        self.params.shape()
    }

    fn manifest(&self) -> Manifest {
        Manifest {
            version: CHECKPOINT_VERSION,
            emotion: self.emotion,
            config: self.config.clone(),
            vocab_cap: self.vocab.cap(),
            vocab: self.vocab.tokens().to_vec(),
            tensors: self
                .params
                .tensors()
                .into_iter()
                .map(|t| TensorEntry {
                    name: t.name.to_string(),
                    shape: t.shape,
                })
                .collect(),
            history: self.history.clone(),
            embedding_checksum: self.embedding_checksum.clone(),
        }
    }

    pub fn manifest_json(&self) -> String {
        serde_json::to_string_pretty(&self.manifest()).expect("manifest serializes")
    }

    pub fn weights_bytes(&self) -> Vec<u8> {
        self.params
            .tensors()
            .iter()
            .flat_map(|t| t.data.iter().flat_map(|x| x.to_le_bytes()))
            .collect()
    }

    /// Parses a manifest and payload, validating version, tensor table and
    /// payload length before accepting any weights.
    pub fn from_parts(manifest: &str, weights: &[u8]) -> Result<Self> {
        let raw: serde_json::Value = serde_json::from_str(manifest)
            .map_err(|e| Error::Checkpoint(format!("corrupt manifest: {e}")))?;
        if raw.get("version").and_then(serde_json::Value::as_u64) != Some(CHECKPOINT_VERSION as u64)
        {
            return Err(Error::Checkpoint("unsupported checkpoint version".into()));
        }
        let m: Manifest = serde_json::from_value(raw)
            .map_err(|e| Error::Checkpoint(format!("corrupt manifest: {e}")))?;
        m.config
            .validate()
            .map_err(|e| Error::Checkpoint(format!("corrupt manifest: {e}")))?;

        let embed_dim = m
            .tensors
            .first()
            .and_then(|t| t.shape.first().copied())
            .ok_or_else(|| Error::Checkpoint("empty tensor table".into()))?;
        let expected = ModelParameters::<f32>::zeros(ModelShape {
            embed_dim,
            hidden: m.config.hidden_size,
            dense: m.config.dense_size,
        });
        let table_ok = m.tensors.len() == TENSOR_NAMES.len()
            && m.tensors
                .iter()
                .zip(expected.tensors())
                .all(|(e, t)| e.name == t.name && e.shape == t.shape);
        if !table_ok {
            return Err(Error::Checkpoint(
                "tensor table does not match model configuration".into(),
            ));
        }
        if weights.len() != 4 * expected.num_scalars() {
            return Err(Error::Checkpoint("payload length mismatch".into()));
        }

        let mut params = expected;
        let mut floats = weights
            .chunks_exact(4)
            .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]));
        for t in params.tensors_mut() {
            for x in t {
                *x = floats.next().expect("length checked");
            }
        }
        if !params.is_finite() {
            return Err(Error::Checkpoint(
                "payload contains non-finite weights".into(),
            ));
        }
        let vocab = Vocabulary::from_tokens(m.vocab, m.vocab_cap)
            .map_err(|e| Error::Checkpoint(format!("corrupt manifest: {e}")))?;
        Ok(Checkpoint {
            emotion: m.emotion,
            config: m.config,
            vocab,
            params,
            history: m.history,
            embedding_checksum: m.embedding_checksum,
        })
    }
}

pub fn save_checkpoint(c: &Checkpoint, stem: impl AsRef<Path>) -> Result<()> {
    let stem = stem.as_ref();
    if let Some(dir) = stem.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mp = manifest_path(stem);
    fs::write(&mp, c.manifest_json()).map_err(|e| Error::io(mp, e))?;
    let wp = weights_path(stem);
    fs::write(&wp, c.weights_bytes()).map_err(|e| Error::io(wp, e))
}

pub fn load_checkpoint(stem: impl AsRef<Path>) -> Result<Checkpoint> {
    let stem = stem.as_ref();
    let mp = manifest_path(stem);
    let manifest = fs::read_to_string(&mp).map_err(|e| Error::io(mp, e))?;
    let wp = weights_path(stem);
    let weights = fs::read(&wp).map_err(|e| Error::io(wp, e))?;
    Checkpoint::from_parts(&manifest, &weights)
}
