use serde::{Deserialize, Serialize};

use crate::nn::{DEFAULT_DENSE, DEFAULT_HIDDEN};
use crate::{Error, Result};

/// Hyperparameters of one classifier's training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub batch_size: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub seed: u64,
    pub hidden_size: usize,
    pub dense_size: usize,
    pub seq_len: usize,
    pub dropout: f64,
    /// Run the recurrence and pooling over non-padding positions only.
    pub mask_aware: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            batch_size: 250,
            epochs: 20,
            learning_rate: 0.001,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            seed: 0,
            hidden_size: DEFAULT_HIDDEN,
            dense_size: DEFAULT_DENSE,
            seq_len: 35,
            dropout: 0.5,
            mask_aware: true,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Config(msg.to_string()));
        if self.batch_size == 0 {
            return fail("batch_size must be at least 1");
        }
        if self.epochs == 0 {
            return fail("epochs must be at least 1");
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return fail("learning_rate must be positive");
        }
        for (name, b) in [
            ("adam_beta1", self.adam_beta1),
            ("adam_beta2", self.adam_beta2),
        ] {
            if !(b > 0.0 && b < 1.0) {
                return Err(Error::Config(format!("{name} must lie in (0, 1)")));
            }
        }
        if !(self.adam_eps > 0.0) {
            return fail("adam_eps must be positive");
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return fail("dropout must lie in [0, 1)");
        }
        if self.hidden_size == 0 || self.dense_size == 0 || self.seq_len == 0 {
            return fail("hidden_size, dense_size and seq_len must be at least 1");
        }
        Ok(())
    }
}
