//! Discrete AdaBoost over depth-1 decision stumps.
//!
//! Each round picks the stump with minimal weighted error over every
//! `(feature, threshold, polarity)` candidate, where the thresholds per
//! feature are one cut below the minimum value plus the midpoints between
//! consecutive distinct values. Round weight is `0.5 ln((1 - e) / e)`;
//! boosting stops early on `e >= 0.5` (round discarded) or on a perfect
//! stump (kept with a capped weight).

use crate::dr::ReducedMatrix;
use crate::error::Result;
use crate::util::Fingerprint;

use super::{check_two_classes, Classifier};

/// Error treated as perfect when selecting the capped round weight.
const PERFECT_EPS: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct BoostParams {
    pub n_rounds: usize,
    /// Unused by the deterministic stump search; kept so every classifier
    /// spec carries a seed.
    pub seed: u64,
}

impl Default for BoostParams {
    fn default() -> Self {
        BoostParams {
            n_rounds: 50,
            seed: 0,
        }
    }
}

/// Axis-aligned threshold classifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stump {
    pub feature: usize,
    pub threshold: f64,
    /// When true, `x[feature] > threshold` predicts positive; otherwise the
    /// inequality is reversed.
    pub positive_above: bool,
}

impl Stump {
    pub fn predict(&self, x: &[f64]) -> bool {
        (x[self.feature] > self.threshold) == self.positive_above
    }
}

#[derive(Debug, Clone)]
pub struct AdaBoostModel {
    rounds: Vec<(Stump, f64)>,
    n_features: usize,
}

impl AdaBoostModel {
    pub fn rounds(&self) -> &[(Stump, f64)] {
        &self.rounds
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn predict(&self, x: &[f64]) -> bool {
        let score: f64 = self
            .rounds
            .iter()
            .map(|(stump, alpha)| if stump.predict(x) { *alpha } else { -*alpha })
            .sum();
        // A zero score ties to negative.
        score > 0.0
    }

    pub fn fingerprint(&self) -> u64 {
        let mut fp = Fingerprint::new();
        fp.push_u64(self.n_features as u64);
        for (stump, alpha) in &self.rounds {
            fp.push_u64(stump.feature as u64);
            fp.push_f64(stump.threshold);
            fp.push_u64(u64::from(stump.positive_above));
            fp.push_f64(*alpha);
        }
        fp.finish()
    }
}

impl Classifier for AdaBoostModel {
    fn n_features(&self) -> usize {
        self.n_features
    }
    fn predict(&self, x: &[f64]) -> bool {
        AdaBoostModel::predict(self, x)
    }
    fn fingerprint(&self) -> u64 {
        AdaBoostModel::fingerprint(self)
    }
}

/// The canonical candidate thresholds for one feature: one cut below the
/// smallest value, then the midpoints between consecutive distinct values.
pub fn candidate_thresholds(values: &mut Vec<f64>) -> Vec<f64> {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values.dedup();
    let mut out = Vec::with_capacity(values.len());
    if let Some(&first) = values.first() {
        out.push(first - 1.0);
    }
    for w in values.windows(2) {
        out.push(w[0] + (w[1] - w[0]) / 2.0);
    }
    out
}

/// Exhaustive weighted-error minimization over every candidate stump.
/// Ties break to the lower feature index, then the lower threshold, then
/// `positive_above` before its reverse.
fn best_stump(features: &ReducedMatrix, labels: &[bool], weights: &[f64]) -> (Stump, f64) {
    let n = features.n_rows();
    let d = features.n_cols();
    let x = features.values();
    let mut best: Option<(f64, Stump)> = None;
    let mut column = Vec::with_capacity(n);
    for f in 0..d {
        column.clear();
        column.extend(x.column(f).iter().copied());
        let mut distinct = column.clone();
        for threshold in candidate_thresholds(&mut distinct) {
            for positive_above in [true, false] {
                let stump = Stump {
                    feature: f,
                    threshold,
                    positive_above,
                };
                let mut err = 0.0;
                for j in 0..n {
                    let predicted = (column[j] > threshold) == positive_above;
                    if predicted != labels[j] {
                        err += weights[j];
                    }
                }
                let better = match &best {
                    None => true,
                    Some((e, s)) => {
                        err < e - 1e-15
                            || ((err - e).abs() <= 1e-15
                                && (stump.feature, stump.threshold, !stump.positive_above)
                                    < (s.feature, s.threshold, !s.positive_above))
                    }
                };
                if better {
                    best = Some((err, stump));
                }
            }
        }
    }
    let (err, stump) = best.expect("at least one candidate stump exists");
    (stump, err)
}

pub fn train_adaboost(
    features: &ReducedMatrix,
    labels: &[bool],
    params: &BoostParams,
) -> Result<AdaBoostModel> {
    check_two_classes(labels)?;
    assert_eq!(features.n_rows(), labels.len());
    let n = labels.len();
    let mut weights = vec![1.0 / n as f64; n];
    let mut rounds = Vec::new();

    for _round in 0..params.n_rounds {
        let (stump, err) = best_stump(features, labels, &weights);
        if err >= 0.5 - 1e-12 {
            break;
        }
        if err <= PERFECT_EPS {
            let alpha = 0.5 * ((1.0 - PERFECT_EPS) / PERFECT_EPS).ln();
            rounds.push((stump, alpha));
            break;
        }
        let alpha = 0.5 * ((1.0 - err) / err).ln();
        rounds.push((stump, alpha));
        let mut total = 0.0;
        for j in 0..n {
            let agree = stump.predict(features.row(j).as_slice().unwrap()) == labels[j];
            weights[j] *= if agree { (-alpha).exp() } else { alpha.exp() };
            total += weights[j];
        }
        for w in &mut weights {
            *w /= total;
        }
    }

    Ok(AdaBoostModel {
        rounds,
        n_features: features.n_cols(),
    })
}
