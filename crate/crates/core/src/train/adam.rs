use crate::nn::{ModelParameters, Scalar, TENSOR_NAMES};
use crate::{Error, Result};

use super::TrainConfig;

/// First and second moment estimates, one pair per parameter tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState<T> {
    pub m: Vec<Vec<T>>,
    pub v: Vec<Vec<T>>,
    pub t: u64,
}

impl<T: Scalar> AdamState<T> {
    pub fn new(sizes: impl IntoIterator<Item = usize>) -> Self {
        let (m, v) = sizes
            .into_iter()
            .map(|n| (vec![T::zero(); n], vec![T::zero(); n]))
            .unzip();
        AdamState { m, v, t: 0 }
    }

    pub fn for_model(params: &ModelParameters<T>) -> Self {
        Self::new(params.tensors().iter().map(|t| t.data.len()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamHyper {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl From<&TrainConfig> for AdamHyper {
    fn from(c: &TrainConfig) -> Self {
        AdamHyper {
            learning_rate: c.learning_rate,
            beta1: c.adam_beta1,
            beta2: c.adam_beta2,
            eps: c.adam_eps,
        }
    }
}

/// One bias-corrected Adam update over named tensors.
///
/// Gradients are checked for finiteness before anything is modified, so a
/// failed step leaves both parameters and state untouched.
pub fn adam_update<T: Scalar>(
    params: Vec<&mut [T]>,
    grads: &[&[T]],
    names: &[&str],
    state: &mut AdamState<T>,
    hyper: AdamHyper,
) -> Result<()> {
    if params.len() != grads.len() || params.len() != state.m.len() {
        return Err(Error::Shape(
            "optimizer state does not match parameters".into(),
        ));
    }
    for (i, g) in grads.iter().enumerate() {
        if g.len() != state.m[i].len() || params[i].len() != g.len() {
            return Err(Error::Shape(format!("tensor {} changed size", names[i])));
        }
        if g.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numeric(format!(
                "gradient overflow at tensor {}",
                names[i]
            )));
        }
    }
    state.t += 1;
    let t = state.t as i32;
    let (b1, b2) = (T::of(hyper.beta1), T::of(hyper.beta2));
    let correct1 = T::of(1.0 - hyper.beta1.powi(t));
    let correct2 = T::of(1.0 - hyper.beta2.powi(t));
    let (lr, eps) = (T::of(hyper.learning_rate), T::of(hyper.eps));
    for (i, theta) in params.into_iter().enumerate() {
        let (m, v) = (&mut state.m[i], &mut state.v[i]);
        for j in 0..theta.len() {
            let g = grads[i][j];
            m[j] = b1 * m[j] + (T::one() - b1) * g;
            v[j] = b2 * v[j] + (T::one() - b2) * g * g;
            let m_hat = m[j] / correct1;
            let v_hat = v[j] / correct2;
            let delta = lr * m_hat / (v_hat.sqrt() + eps);
            if !delta.is_zero() {
                theta[j] = theta[j] - delta;
            }
        }
    }
    Ok(())
}

/// Adam step on a full classifier. The embedding is not a parameter and is
/// never touched.
pub fn adam_step<T: Scalar>(
    params: &mut ModelParameters<T>,
    grads: &ModelParameters<T>,
    state: &mut AdamState<T>,
    config: &TrainConfig,
) -> Result<()> {
    let grad_views = grads.tensors();
    let grad_slices: Vec<&[T]> = grad_views.iter().map(|t| t.data).collect();
    adam_update(
        params.tensors_mut(),
        &grad_slices,
        &TENSOR_NAMES,
        state,
        config.into(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::ModelShape;
    use proptest::prelude::*;

    fn defaults() -> AdamHyper {
        (&TrainConfig::default()).into()
    }

    fn scalar_steps(grads: &[f64]) -> Vec<f64> {
        let mut theta = [0.0f64];
        let mut state = AdamState::<f64>::new([1]);
        grads
            .iter()
            .map(|&g| {
                adam_update(
                    vec![&mut theta[..]],
                    &[&[g][..]],
                    &["theta"],
                    &mut state,
                    defaults(),
                )
                .unwrap();
                theta[0]
            })
            .collect()
    }

    #[test]
    fn first_step_is_learning_rate() {
        let th = scalar_steps(&[1.0]);
        let expected = -0.001 / (1.0 + 1e-8);
        assert!((th[0] - expected).abs() < 1e-15, "{}", th[0]);
        assert!((th[0] + 0.000_999_999_990).abs() < 1e-14);
    }

    #[test]
    fn two_identical_steps() {
        // oracle: m̂ = v̂ = 1 on both steps, so each moves lr / (1 + eps)
        let th = scalar_steps(&[1.0, 1.0]);
        let expected = -2.0 * 0.001 / (1.0 + 1e-8);
        assert!((th[1] - expected).abs() < 1e-15, "{}", th[1]);
    }

    #[test]
    fn zero_gradient_is_a_fixed_point() {
        let mut p = ModelParameters::<f32>::init(ModelShape::new(4, 3), 2);
        let before = p.clone();
        let g = ModelParameters::zeros(p.shape());
        let mut state = AdamState::for_model(&p);
        let cfg = TrainConfig::default();
        for _ in 0..3 {
            adam_step(&mut p, &g, &mut state, &cfg).unwrap();
        }
        assert_eq!(state.t, 3);
        for (a, b) in p.tensors().iter().zip(before.tensors()) {
            assert!(a
                .data
                .iter()
                .zip(b.data)
                .all(|(x, y)| x.to_bits() == y.to_bits()));
        }
    }

    #[test]
    fn non_finite_gradient_is_rejected() {
        let mut p = ModelParameters::<f32>::zeros(ModelShape::new(2, 2));
        let mut g = ModelParameters::zeros(p.shape());
        g.w_dense.data_mut()[3] = f32::NAN;
        let mut state = AdamState::for_model(&p);
        let err = adam_step(&mut p, &g, &mut state, &TrainConfig::default()).unwrap_err();
        assert_eq!(err.to_string(), "gradient overflow at tensor dense.w");
        assert_eq!(state.t, 0);
    }

    proptest! {
        #[test]
        fn first_step_magnitude(g in prop_oneof![0.01f64..100.0, -100.0f64..-0.01]) {
            let th = scalar_steps(&[g]);
            let step = th[0].abs();
            prop_assert!(step >= 0.001 * (1.0 - 1e-6) && step <= 0.001);
            prop_assert_eq!(th[0].signum(), -g.signum());
        }

        #[test]
        fn second_moment_non_negative(gs in proptest::collection::vec(-5.0f64..5.0, 1..20)) {
            let mut theta = [0.0f64];
            let mut state = AdamState::<f64>::new([1]);
            for (k, g) in gs.iter().enumerate() {
                adam_update(vec![&mut theta[..]], &[&[*g][..]], &["x"], &mut state, defaults()).unwrap();
                prop_assert!(state.v[0][0] >= 0.0);
                prop_assert_eq!(state.t, k as u64 + 1);
            }
        }
    }
}
