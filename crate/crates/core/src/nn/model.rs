//! The full classifier: frozen embedding lookup, bidirectional GRU,
//! concatenated global max and mean pooling, a ReLU dense layer with
//! inverted dropout, and a sigmoid output unit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::gru::{add_assign, unroll, unroll_backward, GruParams, StepCache};
use super::init::{glorot, glorot_vec};
use super::matrix::{dot, sigmoid, Matrix, Scalar};
use crate::corpus::PAD_INDEX;
use crate::{Error, Result};

pub const DEFAULT_HIDDEN: usize = 64;
pub const DEFAULT_DENSE: usize = 70;
/// Probabilities are clamped to `[ε, 1−ε]` before taking logs.
pub const BCE_EPSILON: f64 = 1e-7;

/// Dimensions of a classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelShape {
    pub embed_dim: usize,
    pub hidden: usize,
    pub dense: usize,
}

impl ModelShape {
    pub fn new(embed_dim: usize, hidden: usize) -> Self {
        ModelShape {
            embed_dim,
            hidden,
            dense: DEFAULT_DENSE,
        }
    }

    /// Width of the pooled representation: max and mean over both
    /// directions.
    pub fn pooled(&self) -> usize {
        4 * self.hidden
    }
}

/// One named parameter tensor, borrowed.
#[derive(Debug)]
pub struct TensorView<'a, T> {
    pub name: &'static str,
    pub shape: Vec<usize>,
    pub data: &'a [T],
}

/// Every trainable tensor of one binary classifier. Also used to hold
/// gradients, which have identical shapes.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParameters<T> {
    pub gru_fwd: GruParams<T>,
    pub gru_bwd: GruParams<T>,
    /// `4H × dense`.
    pub w_dense: Matrix<T>,
    pub b_dense: Vec<T>,
    pub w_out: Vec<T>,
    pub b_out: T,
}

pub const TENSOR_NAMES: [&str; 22] = [
    "gru_fwd.w_z",
    "gru_fwd.w_r",
    "gru_fwd.w_h",
    "gru_fwd.u_z",
    "gru_fwd.u_r",
    "gru_fwd.u_h",
    "gru_fwd.b_z",
    "gru_fwd.b_r",
    "gru_fwd.b_h",
    "gru_bwd.w_z",
    "gru_bwd.w_r",
    "gru_bwd.w_h",
    "gru_bwd.u_z",
    "gru_bwd.u_r",
    "gru_bwd.u_h",
    "gru_bwd.b_z",
    "gru_bwd.b_r",
    "gru_bwd.b_h",
    "dense.w",
    "dense.b",
    "out.w",
    "out.b",
];

fn matrix_view<T: Scalar>(m: &Matrix<T>) -> (Vec<usize>, &[T]) {
    (m.shape().to_vec(), m.data())
}

fn vector_view<T>(b: &[T]) -> (Vec<usize>, &[T]) {
    (vec![b.len()], b)
}

fn gru_views<T: Scalar>(g: &GruParams<T>) -> [(Vec<usize>, &[T]); 9] {
    let (m, v) = (matrix_view, vector_view);
    [
        m(&g.w_z),
        m(&g.w_r),
        m(&g.w_h),
        m(&g.u_z),
        m(&g.u_r),
        m(&g.u_h),
        v(&g.b_z),
        v(&g.b_r),
        v(&g.b_h),
    ]
}

fn gru_slices_mut<T: Scalar>(g: &mut GruParams<T>) -> [&mut [T]; 9] {
    [
        g.w_z.data_mut(),
        g.w_r.data_mut(),
        g.w_h.data_mut(),
        g.u_z.data_mut(),
        g.u_r.data_mut(),
        g.u_h.data_mut(),
        &mut g.b_z,
        &mut g.b_r,
        &mut g.b_h,
    ]
}

impl<T: Scalar> ModelParameters<T> {
    pub fn zeros(shape: ModelShape) -> Self {
        let ModelShape {
            embed_dim,
            hidden,
            dense,
        } = shape;
        ModelParameters {
            gru_fwd: GruParams::zeros(embed_dim, hidden),
            gru_bwd: GruParams::zeros(embed_dim, hidden),
            w_dense: Matrix::zeros(4 * hidden, dense),
            b_dense: vec![T::zero(); dense],
            w_out: vec![T::zero(); dense],
            b_out: T::zero(),
        }
    }

    /// Glorot-uniform weights for every matrix and the output vector,
    /// zero biases.
    pub fn init(shape: ModelShape, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p = Self::zeros(shape);
        p.gru_fwd = GruParams::init(shape.embed_dim, shape.hidden, &mut rng);
        p.gru_bwd = GruParams::init(shape.embed_dim, shape.hidden, &mut rng);
        glorot(&mut p.w_dense, &mut rng);
        glorot_vec(&mut p.w_out, shape.dense, 1, &mut rng);
        p
    }

    pub fn shape(&self) -> ModelShape {
        ModelShape {
            embed_dim: self.gru_fwd.input_dim(),
            hidden: self.gru_fwd.hidden_dim(),
            dense: self.b_dense.len(),
        }
    }

    /// Tensors in the canonical order of [`TENSOR_NAMES`].
    pub fn tensors(&self) -> Vec<TensorView<'_, T>> {
        let mut views: Vec<(Vec<usize>, &[T])> = Vec::with_capacity(TENSOR_NAMES.len());
        views.extend(gru_views(&self.gru_fwd));
        views.extend(gru_views(&self.gru_bwd));
        views.push((self.w_dense.shape().to_vec(), self.w_dense.data()));
        views.push((vec![self.b_dense.len()], &self.b_dense));
        views.push((vec![self.w_out.len()], &self.w_out));
        views.push((vec![], std::slice::from_ref(&self.b_out)));
        let out = TENSOR_NAMES
            .iter()
            .zip(views)
            .map(|(&name, (shape, data))| TensorView { name, shape, data })
            .collect();
        out
    }

    /// Mutable tensors, same order as [`tensors`](Self::tensors).
    pub fn tensors_mut(&mut self) -> Vec<&mut [T]> {
        let mut out: Vec<&mut [T]> = Vec::with_capacity(TENSOR_NAMES.len());
        out.extend(gru_slices_mut(&mut self.gru_fwd));
        out.extend(gru_slices_mut(&mut self.gru_bwd));
        out.push(self.w_dense.data_mut());
        out.push(&mut self.b_dense);
        out.push(&mut self.w_out);
        out.push(std::slice::from_mut(&mut self.b_out));
        out
    }

    pub fn num_scalars(&self) -> usize {
        self.tensors().iter().map(|t| t.data.len()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.tensors()
            .iter()
            .all(|t| t.data.iter().all(|x| x.is_finite()))
    }

    pub fn cast<U: Scalar>(&self) -> ModelParameters<U> {
        let mut out = ModelParameters::<U>::zeros(self.shape());
        for (dst, src) in out.tensors_mut().into_iter().zip(self.tensors()) {
            for (d, s) in dst.iter_mut().zip(src.data) {
                *d = U::of(s.to_f64().unwrap());
            }
        }
        out
    }

    /// `self += other`, tensor by tensor.
    pub fn add_assign(&mut self, other: &Self) {
        for (dst, src) in self.tensors_mut().into_iter().zip(other.tensors()) {
            add_assign(dst, src.data);
        }
    }

    pub fn scale(&mut self, k: T) {
        for t in self.tensors_mut() {
            for x in t {
                *x = *x * k;
            }
        }
    }

    pub(crate) fn check_shapes(&self) -> Result<()> {
        self.gru_fwd.check_shapes()?;
        self.gru_bwd.check_shapes()?;
        let s = self.shape();
        if self.gru_bwd.input_dim() != s.embed_dim
            || self.gru_bwd.hidden_dim() != s.hidden
            || self.w_dense.shape() != [s.pooled(), s.dense]
            || self.w_out.len() != s.dense
        {
            return Err(Error::Shape(format!(
                "head tensors inconsistent with {s:?}"
            )));
        }
        Ok(())
    }
}

/// Cached activations of the recurrent layer for one input.
#[derive(Debug, Clone, PartialEq)]
pub struct BiGruTrace<T> {
    /// Embedding rows of the processed positions, in text order.
    pub inputs: Vec<Vec<T>>,
    /// Forward direction, step `s` reads position `s`.
    pub fwd: Vec<StepCache<T>>,
    /// Backward direction, step `s` reads position `T − 1 − s`.
    pub bwd: Vec<StepCache<T>>,
}

/// Everything the backward pass needs from one forward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardTrace<T> {
    pub gru: BiGruTrace<T>,
    /// `T × 2H`, row `t` is `[h_fwd(t) ‖ h_bwd(t)]`.
    pub states: Matrix<T>,
    pub pooled: Vec<T>,
    /// Timestep chosen by max pooling, per state column.
    pub argmax: Vec<usize>,
    pub head: HeadTrace<T>,
}

impl<T: Scalar> ForwardTrace<T> {
    pub fn probability(&self) -> T {
        self.head.p
    }
}

/// Cached activations of the classification head.
#[derive(Debug, Clone, PartialEq)]
pub struct HeadTrace<T> {
    pub dense_pre: Vec<T>,
    pub dense_act: Vec<T>,
    /// Per-unit dropout multiplier: `0` or `1/(1−rate)`; all ones at
    /// inference.
    pub mask: Vec<T>,
    pub logit: T,
    pub p: T,
}

/// Runs both recurrent directions. With `mask_aware` only non-padding
/// positions are processed; otherwise all positions are.
pub fn bigru_forward<T: Scalar>(
    indices: &[u32],
    emb: &Matrix<T>,
    params: &ModelParameters<T>,
    mask_aware: bool,
) -> Result<(Matrix<T>, BiGruTrace<T>)> {
    let hidden = params.shape().hidden;
    if emb.cols() != params.shape().embed_dim {
        return Err(Error::Shape(format!(
            "embedding dim {} does not match model input {}",
            emb.cols(),
            params.shape().embed_dim
        )));
    }
    if let Some(&bad) = indices.iter().find(|&&i| i as usize >= emb.rows()) {
        return Err(Error::Shape(format!(
            "index {bad} outside embedding of {} rows",
            emb.rows()
        )));
    }
    let inputs: Vec<Vec<T>> = indices
        .iter()
        .filter(|&&i| !mask_aware || i != PAD_INDEX)
        .map(|&i| emb.row(i as usize).to_vec())
        .collect();
    if inputs.is_empty() {
        return Err(Error::EmptySequence);
    }

    let forward_order: Vec<&[T]> = inputs.iter().map(Vec::as_slice).collect();
    let backward_order: Vec<&[T]> = forward_order.iter().rev().copied().collect();
    let fwd = unroll(&forward_order, &params.gru_fwd);
    let bwd = unroll(&backward_order, &params.gru_bwd);

    let steps = inputs.len();
    let mut states = Matrix::zeros(steps, 2 * hidden);
    for t in 0..steps {
        let row = states.row_mut(t);
        row[..hidden].copy_from_slice(&fwd[t].h);
        row[hidden..].copy_from_slice(&bwd[steps - 1 - t].h);
    }
    Ok((states, BiGruTrace { inputs, fwd, bwd }))
}

/// Columnwise max over timesteps followed by columnwise mean. Returns the
/// pooled vector and the argmax timestep of each column (lowest on ties).
pub fn pool_concat<T: Scalar>(states: &Matrix<T>) -> Result<(Vec<T>, Vec<usize>)> {
    let (steps, width) = (states.rows(), states.cols());
    if steps == 0 {
        return Err(Error::EmptySequence);
    }
    let mut max = states.row(0).to_vec();
    let mut argmax = vec![0; width];
    let mut sum = states.row(0).to_vec();
    for t in 1..steps {
        for (c, &v) in states.row(t).iter().enumerate() {
            if v > max[c] {
                max[c] = v;
                argmax[c] = t;
            }
            sum[c] = sum[c] + v;
        }
    }
    let n = T::of(steps as f64);
    max.extend(sum.into_iter().map(|s| s / n));
    Ok((max, argmax))
}

/// Dense ReLU layer, inverted dropout when `training`, sigmoid output.
pub fn head_forward<T: Scalar>(
    pooled: &[T],
    params: &ModelParameters<T>,
    dropout: f64,
    training: bool,
    seed: u64,
) -> Result<HeadTrace<T>> {
    if pooled.len() != params.w_dense.rows() {
        return Err(Error::Shape(format!(
            "pooled width {} does not match dense input {}",
            pooled.len(),
            params.w_dense.rows()
        )));
    }
    if !(0.0..1.0).contains(&dropout) {
        return Err(Error::Config(format!(
            "dropout rate {dropout} outside [0, 1)"
        )));
    }
    let mut dense_pre = params.b_dense.clone();
    params
        .w_dense
        .accumulate_transposed_mul(pooled, &mut dense_pre);
    let dense_act: Vec<T> = dense_pre.iter().map(|&v| v.max(T::zero())).collect();
    let mask: Vec<T> = if training {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let keep = T::of(1.0 / (1.0 - dropout));
        (0..dense_act.len())
            .map(|_| {
                if rng.gen::<f64>() < dropout {
                    T::zero()
                } else {
                    keep
                }
            })
            .collect()
    } else {
        vec![T::one(); dense_act.len()]
    };
    let dropped: Vec<T> = dense_act.iter().zip(&mask).map(|(&a, &m)| a * m).collect();
    let logit = dot(&params.w_out, &dropped) + params.b_out;
    Ok(HeadTrace {
        dense_pre,
        dense_act,
        mask,
        logit,
        p: sigmoid(logit),
    })
}

/// How a forward pass runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForwardOptions {
    pub mask_aware: bool,
    pub training: bool,
    pub dropout: f64,
    /// Seeds the dropout mask; ignored at inference.
    pub seed: u64,
}

impl ForwardOptions {
    pub fn inference() -> Self {
        ForwardOptions {
            mask_aware: true,
            training: false,
            dropout: 0.5,
            seed: 0,
        }
    }
}

pub fn forward<T: Scalar>(
    indices: &[u32],
    emb: &Matrix<T>,
    params: &ModelParameters<T>,
    opts: ForwardOptions,
) -> Result<ForwardTrace<T>> {
    params.check_shapes()?;
    let (states, gru) = bigru_forward(indices, emb, params, opts.mask_aware)?;
    let (pooled, argmax) = pool_concat(&states)?;
    let head = head_forward(&pooled, params, opts.dropout, opts.training, opts.seed)?;
    Ok(ForwardTrace {
        gru,
        states,
        pooled,
        argmax,
        head,
    })
}

/// Binary cross-entropy of probability `p` against label `y`.
pub fn bce_loss<T: Scalar>(p: T, y: u8) -> T {
    let eps = T::of(BCE_EPSILON);
    let p = p.max(eps).min(T::one() - eps);
    if y == 1 {
        -p.ln()
    } else {
        -(T::one() - p).ln()
    }
}

/// Gradient of the binary cross-entropy with respect to every trainable
/// tensor. The embedding receives no gradient.
pub fn backward<T: Scalar>(
    trace: &ForwardTrace<T>,
    y: u8,
    params: &ModelParameters<T>,
) -> Result<ModelParameters<T>> {
    let shape = params.shape();
    let hidden = shape.hidden;
    let steps = trace.states.rows();
    if trace.pooled.len() != shape.pooled()
        || trace.head.dense_pre.len() != shape.dense
        || trace.states.cols() != 2 * hidden
        || trace.gru.inputs.first().map(Vec::len) != Some(shape.embed_dim)
    {
        return Err(Error::Shape("trace does not match model parameters".into()));
    }
    let mut g = ModelParameters::zeros(shape);
    let head = &trace.head;

    // sigmoid + cross-entropy
    let d_logit = head.p - if y == 1 { T::one() } else { T::zero() };
    g.b_out = d_logit;
    let mut d_pre = vec![T::zero(); shape.dense];
    for j in 0..shape.dense {
        let dropped = head.dense_act[j] * head.mask[j];
        g.w_out[j] = d_logit * dropped;
        if head.dense_pre[j] > T::zero() {
            d_pre[j] = d_logit * params.w_out[j] * head.mask[j];
        }
    }
    g.b_dense.copy_from_slice(&d_pre);
    g.w_dense.accumulate_outer(&trace.pooled, &d_pre);
    let mut d_pooled = vec![T::zero(); shape.pooled()];
    params.w_dense.accumulate_mul(&d_pre, &mut d_pooled);

    // pooling
    let width = 2 * hidden;
    let mut d_states = Matrix::zeros(steps, width);
    let inv_steps = T::one() / T::of(steps as f64);
    for t in 0..steps {
        let row = d_states.row_mut(t);
        for c in 0..width {
            row[c] = d_pooled[width + c] * inv_steps;
        }
    }
    for c in 0..width {
        let t = trace.argmax[c];
        let v = d_states.get(t, c) + d_pooled[c];
        d_states.row_mut(t)[c] = v;
    }

    // recurrence
    let dh_fwd: Vec<Vec<T>> = (0..steps)
        .map(|t| d_states.row(t)[..hidden].to_vec())
        .collect();
    let dh_bwd: Vec<Vec<T>> = (0..steps)
        .map(|s| d_states.row(steps - 1 - s)[hidden..].to_vec())
        .collect();
    let forward_order: Vec<&[T]> = trace.gru.inputs.iter().map(Vec::as_slice).collect();
    let backward_order: Vec<&[T]> = forward_order.iter().rev().copied().collect();
    unroll_backward(
        &forward_order,
        &trace.gru.fwd,
        &dh_fwd,
        &params.gru_fwd,
        &mut g.gru_fwd,
    );
    unroll_backward(
        &backward_order,
        &trace.gru.bwd,
        &dh_bwd,
        &params.gru_bwd,
        &mut g.gru_bwd,
    );
    Ok(g)
}
