//! Metrics, test-split and cross-dataset evaluation, and report tables.

mod classifier;
mod cross;
mod metrics;
mod table;

pub use classifier::{evaluate_binary, Classifier, TextScorer};
pub use cross::{evaluate_cross, CrossOptions, LabelMapping, MappedLabel};
pub use metrics::{f1, ConfusionCounts, EmotionMetrics, EvalReport, F1Score};
pub use table::report_table;
