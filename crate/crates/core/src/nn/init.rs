use rand::Rng;

use super::matrix::{Matrix, Scalar};

/// Uniform in `±sqrt(6 / (fan_in + fan_out))`.
pub(crate) fn glorot<T: Scalar>(m: &mut Matrix<T>, rng: &mut impl Rng) {
    let limit = (6.0 / (m.rows() + m.cols()) as f64).sqrt();
    for w in m.data_mut() {
        *w = T::of(rng.gen_range(-limit..=limit));
    }
}

pub(crate) fn glorot_vec<T: Scalar>(
    v: &mut [T],
    fan_in: usize,
    fan_out: usize,
    rng: &mut impl Rng,
) {
    let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
    for w in v {
        *w = T::of(rng.gen_range(-limit..=limit));
    }
}
