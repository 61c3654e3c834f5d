use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::Emotion;

/// Binary confusion counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn record(&mut self, predicted: bool, gold: bool) {
        match (predicted, gold) {
            (true, true) => self.tp += 1,
            (true, false) => self.fp += 1,
            (false, false) => self.tn += 1,
            (false, true) => self.fn_ += 1,
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (bool, bool)>) -> Self {
        let mut c = Self::default();
        for (p, g) in pairs {
            c.record(p, g);
        }
        c
    }

    /// Counts for scores thresholded at `threshold` (`score ≥ threshold` is
    /// positive).
    pub fn from_scores(scores: &[f64], gold: &[u8], threshold: f64) -> Self {
        Self::from_pairs(
            scores
                .iter()
                .zip(gold)
                .map(|(&s, &y)| (s >= threshold, y == 1)),
        )
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn accuracy(&self) -> f64 {
        ratio(self.tp + self.tn, self.total())
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct F1Score {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Precision, recall and F1 with every zero denominator read as 0.
pub fn f1(counts: &ConfusionCounts) -> F1Score {
    let precision = ratio(counts.tp, counts.tp + counts.fp);
    let recall = ratio(counts.tp, counts.tp + counts.fn_);
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    F1Score {
        precision,
        recall,
        f1,
    }
}

/// Metrics of one binary classifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmotionMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    #[serde(flatten)]
    pub counts: ConfusionCounts,
}

impl From<ConfusionCounts> for EmotionMetrics {
    fn from(counts: ConfusionCounts) -> Self {
        let F1Score {
            precision,
            recall,
            f1,
        } = f1(&counts);
        EmotionMetrics {
            precision,
            recall,
            f1,
            counts,
        }
    }
}

/// Per-emotion metrics plus their unweighted mean F1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub per_emotion: BTreeMap<Emotion, EmotionMetrics>,
    pub macro_f1: f64,
}

impl EvalReport {
    pub fn new(per_emotion: BTreeMap<Emotion, EmotionMetrics>) -> Self {
        let macro_f1 = if per_emotion.is_empty() {
            0.0
        } else {
            per_emotion.values().map(|m| m.f1).sum::<f64>() / per_emotion.len() as f64
        };
        EvalReport {
            per_emotion,
            macro_f1,
        }
    }

    /// Report built from F1 values alone, e.g. published figures.
    pub fn from_f1(values: impl IntoIterator<Item = (Emotion, f64)>) -> Self {
        Self::new(
            values
                .into_iter()
                .map(|(e, f1)| {
                    (
                        e,
                        EmotionMetrics {
                            precision: f64::NAN,
                            recall: f64::NAN,
                            f1,
                            counts: ConfusionCounts::default(),
                        },
                    )
                })
                .collect(),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(tp: u64, fp: u64, tn: u64, fn_: u64) -> ConfusionCounts {
        ConfusionCounts { tp, fp, tn, fn_ }
    }

    #[test]
    fn perfect() {
        let s = f1(&counts(10, 0, 0, 0));
        assert_eq!((s.precision, s.recall, s.f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn two_thirds() {
        let s = f1(&counts(2, 1, 0, 1));
        for v in [s.precision, s.recall, s.f1] {
            assert!((v - 2.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn degenerate_denominators() {
        let s = f1(&counts(0, 0, 0, 5));
        assert_eq!((s.precision, s.recall, s.f1), (0.0, 0.0, 0.0));
        let s = f1(&ConfusionCounts::default());
        assert_eq!(s.f1, 0.0);
    }

    #[test]
    fn threshold_is_inclusive() {
        let c = ConfusionCounts::from_scores(&[0.5, 0.5, 0.5, 0.5], &[1, 1, 0, 0], 0.5);
        assert_eq!(c, counts(2, 2, 0, 0));
        let m = EmotionMetrics::from(c);
        assert_eq!((m.precision, m.recall), (0.5, 1.0));
        assert!((m.f1 - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn json_layout() {
        let mut per = BTreeMap::new();
        per.insert(Emotion::Joy, EmotionMetrics::from(counts(1, 0, 1, 0)));
        let v: serde_json::Value = serde_json::from_str(&EvalReport::new(per).to_json()).unwrap();
        let joy = &v["per_emotion"]["joy"];
        for key in ["precision", "recall", "f1", "tp", "fp", "tn", "fn"] {
            assert!(joy.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["macro_f1"], 1.0);
    }

    #[test]
    fn macro_is_order_invariant() {
        let a = EvalReport::from_f1([
            (Emotion::Joy, 0.2),
            (Emotion::Fear, 0.9),
            (Emotion::Love, 0.4),
        ]);
        let b = EvalReport::from_f1([
            (Emotion::Love, 0.4),
            (Emotion::Joy, 0.2),
            (Emotion::Fear, 0.9),
        ]);
        assert_eq!(a.macro_f1, b.macro_f1);
    }
}
