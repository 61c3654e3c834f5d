//! Single-direction GRU: cell, unrolled forward pass and BPTT.
//!
//! Gate convention (row-vector form, weights stored input-major):
//!
//! ```text
//! z = σ(Wzᵀx + Uzᵀh + bz)
//! r = σ(Wrᵀx + Urᵀh + br)
//! c = tanh(Whᵀx + Uhᵀ(r ⊙ h) + bh)
//! h' = (1 − z) ⊙ h + z ⊙ c
//! ```

use rand::Rng;

use super::init::glorot;
use super::matrix::{sigmoid, Matrix, Scalar};
use crate::{Error, Result};

/// Parameters of one recurrent direction.
#[derive(Debug, Clone, PartialEq)]
pub struct GruParams<T> {
    pub w_z: Matrix<T>,
    pub w_r: Matrix<T>,
    pub w_h: Matrix<T>,
    pub u_z: Matrix<T>,
    pub u_r: Matrix<T>,
    pub u_h: Matrix<T>,
    pub b_z: Vec<T>,
    pub b_r: Vec<T>,
    pub b_h: Vec<T>,
}

impl<T: Scalar> GruParams<T> {
    pub fn zeros(input: usize, hidden: usize) -> Self {
        GruParams {
            w_z: Matrix::zeros(input, hidden),
            w_r: Matrix::zeros(input, hidden),
            w_h: Matrix::zeros(input, hidden),
            u_z: Matrix::zeros(hidden, hidden),
            u_r: Matrix::zeros(hidden, hidden),
            u_h: Matrix::zeros(hidden, hidden),
            b_z: vec![T::zero(); hidden],
            b_r: vec![T::zero(); hidden],
            b_h: vec![T::zero(); hidden],
        }
    }

    /// Glorot-uniform weights, zero biases.
    pub fn init(input: usize, hidden: usize, rng: &mut impl Rng) -> Self {
        let mut p = Self::zeros(input, hidden);
        for m in [
            &mut p.w_z, &mut p.w_r, &mut p.w_h, &mut p.u_z, &mut p.u_r, &mut p.u_h,
        ] {
            glorot(m, rng);
        }
        p
    }

    pub fn input_dim(&self) -> usize {
        self.w_z.rows()
    }

    pub fn hidden_dim(&self) -> usize {
        self.w_z.cols()
    }

    pub(crate) fn check_shapes(&self) -> Result<()> {
        let (d, h) = (self.input_dim(), self.hidden_dim());
        let ok = [&self.w_z, &self.w_r, &self.w_h]
            .iter()
            .all(|m| m.shape() == [d, h])
            && [&self.u_z, &self.u_r, &self.u_h]
                .iter()
                .all(|m| m.shape() == [h, h])
            && [&self.b_z, &self.b_r, &self.b_h]
                .iter()
                .all(|b| b.len() == h);
        if ok {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "GRU tensors inconsistent with D={d}, H={h}"
            )))
        }
    }
}

/// Activations of one GRU step, kept for the backward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCache<T> {
    pub h_prev: Vec<T>,
    pub z: Vec<T>,
    pub r: Vec<T>,
    pub candidate: Vec<T>,
    pub h: Vec<T>,
}

fn affine<T: Scalar>(bias: &[T], w: &Matrix<T>, x: &[T], u: &Matrix<T>, h: &[T]) -> Vec<T> {
    let mut out = bias.to_vec();
    w.accumulate_transposed_mul(x, &mut out);
    u.accumulate_transposed_mul(h, &mut out);
    out
}

pub(crate) fn step<T: Scalar>(x: &[T], h_prev: &[T], p: &GruParams<T>) -> StepCache<T> {
    let z: Vec<T> = affine(&p.b_z, &p.w_z, x, &p.u_z, h_prev)
        .into_iter()
        .map(sigmoid)
        .collect();
    let r: Vec<T> = affine(&p.b_r, &p.w_r, x, &p.u_r, h_prev)
        .into_iter()
        .map(sigmoid)
        .collect();
    let gated: Vec<T> = r.iter().zip(h_prev).map(|(&r, &h)| r * h).collect();
    let candidate: Vec<T> = affine(&p.b_h, &p.w_h, x, &p.u_h, &gated)
        .into_iter()
        .map(T::tanh)
        .collect();
    let h = (0..h_prev.len())
        .map(|j| (T::one() - z[j]) * h_prev[j] + z[j] * candidate[j])
        .collect();
    StepCache {
        h_prev: h_prev.to_vec(),
        z,
        r,
        candidate,
        h,
    }
}

/// One GRU step from `h_prev` on input `x`.
pub fn gru_cell<T: Scalar>(x: &[T], h_prev: &[T], params: &GruParams<T>) -> Result<Vec<T>> {
    params.check_shapes()?;
    if x.len() != params.input_dim() || h_prev.len() != params.hidden_dim() {
        return Err(Error::Shape(format!(
            "gru_cell got x of {} and h of {}, expected {} and {}",
            x.len(),
            h_prev.len(),
            params.input_dim(),
            params.hidden_dim()
        )));
    }
    Ok(step(x, h_prev, params).h)
}

/// Runs the recurrence over `xs` in the given order from a zero state.
pub(crate) fn unroll<T: Scalar>(xs: &[&[T]], p: &GruParams<T>) -> Vec<StepCache<T>> {
    let mut h = vec![T::zero(); p.hidden_dim()];
    xs.iter()
        .map(|x| {
            let c = step(x, &h, p);
            h.clone_from(&c.h);
            c
        })
        .collect()
}

/// Backpropagation through time for one direction. `dh[s]` is the loss
/// gradient arriving at the output of step `s` from above; gradients are
/// accumulated into `grads`.
pub(crate) fn unroll_backward<T: Scalar>(
    xs: &[&[T]],
    caches: &[StepCache<T>],
    dh: &[Vec<T>],
    p: &GruParams<T>,
    grads: &mut GruParams<T>,
) {
    let hidden = p.hidden_dim();
    let mut carry = vec![T::zero(); hidden];
    for s in (0..caches.len()).rev() {
        let c = &caches[s];
        let x = xs[s];
        let dh_total: Vec<T> = dh[s].iter().zip(&carry).map(|(&a, &b)| a + b).collect();

        let mut dh_prev = vec![T::zero(); hidden];
        let mut da_h = vec![T::zero(); hidden];
        let mut da_z = vec![T::zero(); hidden];
        for j in 0..hidden {
            let g = dh_total[j];
            let (z, cand, hp) = (c.z[j], c.candidate[j], c.h_prev[j]);
            dh_prev[j] = g * (T::one() - z);
            da_h[j] = g * z * (T::one() - cand * cand);
            da_z[j] = g * (cand - hp) * z * (T::one() - z);
        }

        let gated: Vec<T> = c.r.iter().zip(&c.h_prev).map(|(&r, &h)| r * h).collect();
        grads.w_h.accumulate_outer(x, &da_h);
        grads.u_h.accumulate_outer(&gated, &da_h);
        add_assign(&mut grads.b_h, &da_h);
        let mut d_gated = vec![T::zero(); hidden];
        p.u_h.accumulate_mul(&da_h, &mut d_gated);

        let mut da_r = vec![T::zero(); hidden];
        for j in 0..hidden {
            let r = c.r[j];
            dh_prev[j] = dh_prev[j] + d_gated[j] * r;
            da_r[j] = d_gated[j] * c.h_prev[j] * r * (T::one() - r);
        }

        grads.w_z.accumulate_outer(x, &da_z);
        grads.u_z.accumulate_outer(&c.h_prev, &da_z);
        add_assign(&mut grads.b_z, &da_z);
        p.u_z.accumulate_mul(&da_z, &mut dh_prev);

        grads.w_r.accumulate_outer(x, &da_r);
        grads.u_r.accumulate_outer(&c.h_prev, &da_r);
        add_assign(&mut grads.b_r, &da_r);
        p.u_r.accumulate_mul(&da_r, &mut dh_prev);

        carry = dh_prev;
    }
}

pub(crate) fn add_assign<T: Scalar>(acc: &mut [T], x: &[T]) {
    for (a, &b) in acc.iter_mut().zip(x) {
        *a = *a + b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_params_zero_state() {
        let p = GruParams::<f64>::zeros(3, 2);
        let c = step(&[1.0, -2.0, 0.5], &[0.0, 0.0], &p);
        assert_eq!(c.z, vec![0.5, 0.5]);
        assert_eq!(c.candidate, vec![0.0, 0.0]);
        assert_eq!(c.h, vec![0.0, 0.0]);
    }

    #[test]
    fn zero_params_halve_state() {
        let p = GruParams::<f64>::zeros(1, 3);
        let h = gru_cell(&[4.0], &[0.2, -0.6, 0.9], &p).unwrap();
        assert_eq!(h, vec![0.1, -0.3, 0.45]);
    }

    #[test]
    fn scalar_candidate_only() {
        let mut p = GruParams::<f64>::zeros(1, 1);
        p.w_h = Matrix::from_vec(1, 1, vec![1.0]).unwrap();
        let h = gru_cell(&[1.0], &[0.0], &p).unwrap();
        // 0.5 * tanh(1)
        assert!((h[0] - 0.380_797_077_977_882_3).abs() < 1e-12, "{}", h[0]);
    }

    #[test]
    fn shape_mismatch() {
        let p = GruParams::<f64>::zeros(2, 2);
        assert!(gru_cell(&[1.0], &[0.0, 0.0], &p).is_err());
        assert!(gru_cell(&[1.0, 1.0], &[0.0], &p).is_err());
    }
}
