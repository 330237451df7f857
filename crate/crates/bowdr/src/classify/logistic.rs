//! L2-regularized logistic regression trained by accelerated gradient
//! descent (Nesterov momentum with the strongly-convex schedule, step size
//! from a power-iteration bound on the Hessian).
//!
//! Initialization is zero weights with the class prior log-odds as bias, so
//! a zero-iteration model predicts the majority class and exact ties fall
//! to the negative class.

use ndarray::{Array1, Array2};

use crate::dr::ReducedMatrix;
use crate::error::{Error, Result};
use crate::util::Fingerprint;

use super::{check_two_classes, Classifier};

#[derive(Debug, Clone)]
pub struct LinearParams {
    /// L2 penalty applied to all coefficients including the bias.
    pub l2_penalty: f64,
    pub max_iterations: usize,
    /// Gradient norm below which the fit is converged.
    pub tolerance: f64,
}

impl Default for LinearParams {
    fn default() -> Self {
        LinearParams {
            l2_penalty: 1e-3,
            max_iterations: 5000,
            tolerance: 1e-6,
        }
    }
}

impl LinearParams {
    pub fn validate(&self) -> Result<()> {
        if self.l2_penalty < 0.0 {
            return Err(Error::InvalidParams("l2_penalty must be >= 0".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidParams("tolerance must be > 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct LogisticModel {
    weights: Array1<f64>,
    bias: f64,
    pub iterations_run: usize,
    pub final_grad_norm: f64,
}

impl LogisticModel {
    pub fn weights(&self) -> &Array1<f64> {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn n_features(&self) -> usize {
        self.weights.len()
    }

    pub fn decision_value(&self, x: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(x)
            .map(|(w, v)| w * v)
            .sum::<f64>()
            + self.bias
    }

    pub fn predict(&self, x: &[f64]) -> bool {
        // Zero score ties to negative.
        self.decision_value(x) > 0.0
    }

    pub fn fingerprint(&self) -> u64 {
        let mut fp = Fingerprint::new();
        fp.push_f64(self.bias);
        fp.push_f64s(self.weights.iter());
        fp.finish()
    }
}

impl Classifier for LogisticModel {
    fn n_features(&self) -> usize {
        self.weights.len()
    }
    fn predict(&self, x: &[f64]) -> bool {
        LogisticModel::predict(self, x)
    }
    fn fingerprint(&self) -> u64 {
        LogisticModel::fingerprint(self)
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Mean logistic loss plus the L2 term, with its gradient in `(weights,
/// bias)`. Exposed so tests can check the gradient against finite
/// differences.
pub fn loss_and_grad(
    features: &Array2<f64>,
    labels: &[bool],
    weights: &Array1<f64>,
    bias: f64,
    l2_penalty: f64,
) -> (f64, Array1<f64>, f64) {
    let n = labels.len();
    let d = weights.len();
    let mut loss = 0.0;
    let mut grad_w = Array1::zeros(d);
    let mut grad_b = 0.0;
    for j in 0..n {
        let row = features.row(j);
        let z: f64 = row.iter().zip(weights.iter()).map(|(x, w)| x * w).sum::<f64>() + bias;
        let y = if labels[j] { 1.0 } else { 0.0 };
        // log(1 + exp(-|z|)) + max(0, -yz) form keeps the loss finite.
        let zy = if labels[j] { z } else { -z };
        loss += if zy >= 0.0 {
            (1.0 + (-zy).exp()).ln()
        } else {
            -zy + (1.0 + zy.exp()).ln()
        };
        let residual = sigmoid(z) - y;
        for (g, x) in grad_w.iter_mut().zip(row.iter()) {
            *g += residual * x;
        }
        grad_b += residual;
    }
    loss /= n as f64;
    grad_w.mapv_inplace(|g| g / n as f64);
    grad_b /= n as f64;

    let w_sq: f64 = weights.iter().map(|w| w * w).sum::<f64>() + bias * bias;
    loss += 0.5 * l2_penalty * w_sq;
    for (g, w) in grad_w.iter_mut().zip(weights.iter()) {
        *g += l2_penalty * w;
    }
    grad_b += l2_penalty * bias;
    (loss, grad_w, grad_b)
}

/// Largest eigenvalue of the augmented Gram matrix `[X 1]^T [X 1]` by power
/// iteration with a deterministic start.
fn gram_spectral_bound(features: &Array2<f64>) -> f64 {
    let (n, d) = features.dim();
    let aug = d + 1;
    let mut gram = Array2::zeros((aug, aug));
    for a in 0..d {
        for b in a..d {
            let dot: f64 = (0..n).map(|j| features[(j, a)] * features[(j, b)]).sum();
            gram[(a, b)] = dot;
            gram[(b, a)] = dot;
        }
        let col_sum: f64 = features.column(a).sum();
        gram[(a, d)] = col_sum;
        gram[(d, a)] = col_sum;
    }
    gram[(d, d)] = n as f64;

    let mut v = Array1::from_elem(aug, 1.0 / (aug as f64).sqrt());
    let mut lambda = 0.0;
    for _ in 0..200 {
        let next = gram.dot(&v);
        let norm = next.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let new_lambda = norm;
        v = next / norm;
        if (new_lambda - lambda).abs() <= 1e-10 * new_lambda.max(1.0) {
            return new_lambda;
        }
        lambda = new_lambda;
    }
    lambda
}

pub fn train_linear(
    features: &ReducedMatrix,
    labels: &[bool],
    params: &LinearParams,
) -> Result<LogisticModel> {
    check_two_classes(labels)?;
    params.validate()?;
    assert_eq!(features.n_rows(), labels.len());
    let x = features.values();
    let n = labels.len();
    let d = features.n_cols();

    let pos = labels.iter().filter(|&&l| l).count();
    let neg = n - pos;
    let mut w = Array1::zeros(d);
    let mut b = (pos as f64 / neg as f64).ln();

    if params.max_iterations == 0 {
        let (_, gw, gb) = loss_and_grad(x, labels, &w, b, params.l2_penalty);
        let gnorm = (gw.iter().map(|g| g * g).sum::<f64>() + gb * gb).sqrt();
        return Ok(LogisticModel {
            weights: w,
            bias: b,
            iterations_run: 0,
            final_grad_norm: gnorm,
        });
    }

    // Smoothness bound: Hessian <= Gram / (4n) + lambda I.
    let lip = gram_spectral_bound(x) / (4.0 * n as f64) + params.l2_penalty;
    let step = 1.0 / lip;
    let mu = params.l2_penalty;
    let momentum_const = if mu > 0.0 {
        let ratio = (mu / lip).sqrt();
        (1.0 - ratio) / (1.0 + ratio)
    } else {
        0.0
    };

    // Nesterov lookahead state.
    let mut zw = w.clone();
    let mut zb = b;
    let mut grad_norm = f64::INFINITY;
    let mut iterations_run = 0;
    for t in 1..=params.max_iterations {
        let (_, gw, gb) = loss_and_grad(x, labels, &zw, zb, params.l2_penalty);
        let w_next = &zw - &(&gw * step);
        let b_next = zb - step * gb;
        let beta = if mu > 0.0 {
            momentum_const
        } else {
            (t as f64 - 1.0) / (t as f64 + 2.0)
        };
        zw = &w_next + &((&w_next - &w) * beta);
        zb = b_next + beta * (b_next - b);
        w = w_next;
        b = b_next;
        iterations_run = t;

        let (_, cw, cb) = loss_and_grad(x, labels, &w, b, params.l2_penalty);
        grad_norm = (cw.iter().map(|g| g * g).sum::<f64>() + cb * cb).sqrt();
        if grad_norm <= params.tolerance {
            return Ok(LogisticModel {
                weights: w,
                bias: b,
                iterations_run,
                final_grad_norm: grad_norm,
            });
        }
    }
    Err(Error::NonConvergence {
        grad_norm,
        iterations: iterations_run,
    })
}
