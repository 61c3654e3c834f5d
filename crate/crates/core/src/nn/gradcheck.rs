//! Central finite-difference verification of [`backward`].

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::matrix::Matrix;
use super::model::{backward, bce_loss, forward, ForwardOptions, ModelParameters, ModelShape};
use crate::Result;

/// Settings for a randomized gradient check.
#[derive(Debug, Clone, PartialEq)]
pub struct GradCheckConfig {
    pub embed_dim: usize,
    pub hidden: usize,
    pub dense: usize,
    pub seq_len: usize,
    pub vocab_rows: usize,
    pub seed: u64,
    pub step: f64,
    pub tolerance: f64,
    /// Check at most this many scalars per tensor (all when `None`).
    pub samples_per_tensor: Option<usize>,
    /// Scale the analytic `gru_fwd.w_h` gradient by 1.1 before comparing.
    pub corrupt: bool,
}

impl Default for GradCheckConfig {
    fn default() -> Self {
        GradCheckConfig {
            embed_dim: 8,
            hidden: 5,
            dense: super::model::DEFAULT_DENSE,
            seq_len: 7,
            vocab_rows: 12,
            seed: 0,
            step: 1e-5,
            tolerance: 1e-4,
            samples_per_tensor: None,
            corrupt: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TensorCheck {
    pub name: String,
    pub checked: usize,
    pub max_rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradCheckReport {
    pub tensors: Vec<TensorCheck>,
    pub max_rel_error: f64,
    pub tolerance: f64,
}

impl GradCheckReport {
    pub fn passed(&self) -> bool {
        self.max_rel_error < self.tolerance
    }
}

/// A small random model, embedding, input and label for a check.
#[derive(Debug, Clone)]
pub struct Problem {
    pub params: ModelParameters<f64>,
    pub embedding: Matrix<f64>,
    pub indices: Vec<u32>,
    pub label: u8,
    pub opts: ForwardOptions,
}

impl Problem {
    /// Glorot-initialized weights with every tensor (biases included)
    /// jittered, a uniform `[-1, 1]` embedding with a zero padding row, and
    /// an input of `seq_len` positions whose last two are padding when the
    /// sequence is long enough. Dropout is active with a fixed mask.
    pub fn random(cfg: &GradCheckConfig) -> Self {
        let shape = ModelShape {
            embed_dim: cfg.embed_dim,
            hidden: cfg.hidden,
            dense: cfg.dense,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut params = ModelParameters::<f64>::init(shape, rng.gen());
        for t in params.tensors_mut() {
            for x in t {
                *x += rng.gen_range(-0.1..0.1);
            }
        }
        let rows = cfg.vocab_rows.max(3);
        let embedding = Matrix::from_fn(rows, cfg.embed_dim, |r, _| {
            if r == 0 {
                0.0
            } else {
                rng.gen_range(-1.0..1.0)
            }
        });
        let real = if cfg.seq_len > 3 {
            cfg.seq_len - 2
        } else {
            cfg.seq_len
        };
        let indices = (0..cfg.seq_len)
            .map(|i| {
                if i < real {
                    rng.gen_range(1..rows as u32)
                } else {
                    0
                }
            })
            .collect();
        let label = rng.gen_range(0..=1u8);
        let opts = ForwardOptions {
            mask_aware: true,
            training: true,
            dropout: 0.5,
            seed: rng.gen(),
        };
        Problem {
            params,
            embedding,
            indices,
            label,
            opts,
        }
    }

    pub fn loss(&self, params: &ModelParameters<f64>) -> Result<f64> {
        let trace = forward(&self.indices, &self.embedding, params, self.opts)?;
        Ok(bce_loss(trace.probability(), self.label))
    }
}

/// `|a − n| / max(|a|, |n|, 1e-12)`.
pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-12)
}

/// Compares the analytic gradient with `(L(θ+h) − L(θ−h)) / 2h` for every
/// checked scalar and reports the worst relative error per tensor.
pub fn gradient_check(problem: &Problem, cfg: &GradCheckConfig) -> Result<GradCheckReport> {
    let trace = forward(
        &problem.indices,
        &problem.embedding,
        &problem.params,
        problem.opts,
    )?;
    let mut analytic = backward(&trace, problem.label, &problem.params)?;
    if cfg.corrupt {
        for g in analytic.gru_fwd.w_h.data_mut() {
            *g *= 1.1;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut probe = problem.params.clone();
    let mut tensors = Vec::new();
    for (ti, view) in analytic.tensors().iter().enumerate() {
        let n = view.data.len();
        let picked: Vec<usize> = match cfg.samples_per_tensor {
            Some(k) if k < n => index::sample(&mut rng, n, k).into_vec(),
            _ => (0..n).collect(),
        };
        let mut worst = 0.0f64;
        for &i in &picked {
            let orig = problem.params.tensors()[ti].data[i];
            probe.tensors_mut()[ti][i] = orig + cfg.step;
            let up = problem.loss(&probe)?;
            probe.tensors_mut()[ti][i] = orig - cfg.step;
            let down = problem.loss(&probe)?;
            probe.tensors_mut()[ti][i] = orig;
            let numeric = (up - down) / (2.0 * cfg.step);
            worst = worst.max(relative_error(view.data[i], numeric));
        }
        tensors.push(TensorCheck {
            name: view.name.to_string(),
            checked: picked.len(),
            max_rel_error: worst,
        });
    }
    let max_rel_error = tensors.iter().map(|t| t.max_rel_error).fold(0.0, f64::max);
    Ok(GradCheckReport {
        tensors,
        max_rel_error,
        tolerance: cfg.tolerance,
    })
}
