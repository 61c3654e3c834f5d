//! Numeric core of the classifier.
//!
//! Everything is generic over [`Scalar`] so the same code trains in `f32`
//! and is verified against finite differences in `f64`.

mod gradcheck;
mod gru;
mod init;
mod matrix;
mod model;

pub use gradcheck::{
    gradient_check, relative_error, GradCheckConfig, GradCheckReport, Problem, TensorCheck,
};
pub use gru::{gru_cell, GruParams, StepCache};
pub use matrix::{dot, sigmoid, Matrix, Scalar};
pub use model::{
    backward, bce_loss, bigru_forward, forward, head_forward, pool_concat, BiGruTrace,
    ForwardOptions, ForwardTrace, HeadTrace, ModelParameters, ModelShape, TensorView, BCE_EPSILON,
    DEFAULT_DENSE, DEFAULT_HIDDEN, TENSOR_NAMES,
};
