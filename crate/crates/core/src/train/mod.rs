//! Optimizer, training loop and checkpoint format.

mod adam;
mod checkpoint;
mod config;
mod pipeline;
mod trainer;

pub use adam::{adam_step, adam_update, AdamHyper, AdamState};
pub use checkpoint::{load_checkpoint, save_checkpoint, Checkpoint, CHECKPOINT_VERSION};
pub use config::TrainConfig;
pub use pipeline::{prepare, Prepared};
pub use trainer::{predict_all, train_classifier, EpochRecord};
