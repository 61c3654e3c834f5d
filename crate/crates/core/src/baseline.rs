//! Bag-of-n-grams logistic regression (maximum entropy) baseline.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::eval::{ConfusionCounts, EmotionMetrics};
use crate::nn::sigmoid;
use crate::{Error, Result};

/// Unigrams, then adjacent bigrams joined with `_` when `max_n ≥ 2`.
pub fn ngrams(tokens: &[String], max_n: usize) -> impl Iterator<Item = String> + '_ {
    let bigrams = (max_n >= 2)
        .then(|| tokens.windows(2).map(|w| format!("{}_{}", w[0], w[1])))
        .into_iter()
        .flatten();
    tokens.iter().cloned().chain(bigrams)
}

/// Column index for every n-gram seen in training, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BowFeatureSpace {
    feature_of: HashMap<String, usize>,
    names: Vec<String>,
    max_n: usize,
}

impl BowFeatureSpace {
    pub fn build<'a>(docs: impl IntoIterator<Item = &'a [String]>, max_n: usize) -> Self {
        let set: BTreeSet<String> = docs.into_iter().flat_map(|d| ngrams(d, max_n)).collect();
        let names: Vec<String> = set.into_iter().collect();
        let feature_of = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        BowFeatureSpace {
            feature_of,
            names,
            max_n,
        }
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn index(&self, ngram: &str) -> Option<usize> {
        self.feature_of.get(ngram).copied()
    }

    pub fn name(&self, index: usize) -> Option<&str> {
        self.names.get(index).map(String::as_str)
    }
}

/// Sparse count vector, sorted by column.
pub type SparseVector = Vec<(usize, f64)>;

/// Counts of the in-space n-grams of `tokens`.
pub fn featurize(tokens: &[String], space: &BowFeatureSpace) -> SparseVector {
    let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
    for g in ngrams(tokens, space.max_n) {
        if let Some(i) = space.index(&g) {
            *counts.entry(i).or_default() += 1.0;
        }
    }
    counts.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRegConfig {
    pub l2: f64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for LogRegConfig {
    fn default() -> Self {
        LogRegConfig {
            l2: 1e-3,
            learning_rate: 0.5,
            epochs: 300,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogRegModel {
    pub w: Vec<f64>,
    pub b: f64,
    pub l2: f64,
}

impl LogRegModel {
    pub fn predict(&self, x: &SparseVector) -> f64 {
        sigmoid(self.b + x.iter().map(|&(i, v)| self.w[i] * v).sum::<f64>())
    }

    /// JSON dump `{bias, l2, weights: {ngram: weight}}`.
    pub fn to_json(&self, space: &BowFeatureSpace) -> String {
        #[derive(Serialize)]
        struct Dump<'a> {
            bias: f64,
            l2: f64,
            weights: BTreeMap<&'a str, f64>,
        }
        let weights = self
            .w
            .iter()
            .enumerate()
            .filter_map(|(i, &w)| space.name(i).map(|n| (n, w)))
            .collect();
        serde_json::to_string_pretty(&Dump {
            bias: self.b,
            l2: self.l2,
            weights,
        })
        .expect("dump serializes")
    }
}

/// `mean BCE + (l2/2)·‖w‖²`; the bias is not regularized.
pub fn logreg_objective(model: &LogRegModel, xs: &[SparseVector], ys: &[u8]) -> f64 {
    let data: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, &y)| {
            let z = model.b + x.iter().map(|&(i, v)| model.w[i] * v).sum::<f64>();
            // log(1 + e^z) − y·z, computed stably
            z.max(0.0) + (-z.abs()).exp().ln_1p() - y as f64 * z
        })
        .sum::<f64>()
        / xs.len() as f64;
    data + 0.5 * model.l2 * model.w.iter().map(|w| w * w).sum::<f64>()
}

/// Gradient of the data term only, `(∂/∂w, ∂/∂b)`.
fn data_gradient(model: &LogRegModel, xs: &[SparseVector], ys: &[u8]) -> (Vec<f64>, f64) {
    let mut gw = vec![0.0; model.w.len()];
    let mut gb = 0.0;
    let n = xs.len() as f64;
    for (x, &y) in xs.iter().zip(ys) {
        let r = (model.predict(x) - y as f64) / n;
        gb += r;
        for &(i, v) in x {
            gw[i] += r * v;
        }
    }
    (gw, gb)
}

/// Gradient of [`logreg_objective`].
pub fn logreg_gradient(model: &LogRegModel, xs: &[SparseVector], ys: &[u8]) -> (Vec<f64>, f64) {
    let (mut gw, gb) = data_gradient(model, xs, ys);
    for (g, w) in gw.iter_mut().zip(&model.w) {
        *g += model.l2 * w;
    }
    (gw, gb)
}

/// Full-batch proximal gradient descent: a gradient step on the data term,
/// then the closed-form L2 shrink `w / (1 + lr·l2)`, which stays stable for
/// any regularization strength.
pub fn train_logreg(
    xs: &[SparseVector],
    ys: &[u8],
    dim: usize,
    config: &LogRegConfig,
) -> Result<LogRegModel> {
    if config.epochs == 0 {
        return Err(Error::Config("epochs must be at least 1".into()));
    }
    if !(config.learning_rate > 0.0) || !(config.l2 >= 0.0) {
        return Err(Error::Config(
            "learning rate must be positive and l2 non-negative".into(),
        ));
    }
    if xs.len() != ys.len() {
        return Err(Error::Shape("features and labels differ in length".into()));
    }
    if !(ys.contains(&0) && ys.contains(&1)) {
        return Err(Error::Data("logistic regression needs both classes".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut model = LogRegModel {
        w: (0..dim).map(|_| rng.gen_range(-1e-3..1e-3)).collect(),
        b: 0.0,
        l2: config.l2,
    };
    let lr = config.learning_rate;
    let shrink = 1.0 / (1.0 + lr * config.l2);
    for _ in 0..config.epochs {
        let (gw, gb) = data_gradient(&model, xs, ys);
        for (w, g) in model.w.iter_mut().zip(&gw) {
            *w = (*w - lr * g) * shrink;
        }
        model.b -= lr * gb;
    }
    if model.w.iter().any(|w| !w.is_finite()) || !model.b.is_finite() {
        return Err(Error::Numeric("logistic regression diverged".into()));
    }
    Ok(model)
}

/// Thresholded metrics of the model on labeled features.
pub fn eval_logreg(
    model: &LogRegModel,
    xs: &[SparseVector],
    ys: &[u8],
    threshold: f64,
) -> Result<EmotionMetrics> {
    if xs.is_empty() {
        return Err(Error::Data("empty test set".into()));
    }
    let scores: Vec<f64> = xs.iter().map(|x| model.predict(x)).collect();
    Ok(ConfusionCounts::from_scores(&scores, ys, threshold).into())
}
