//! Scaling benchmark: per-iteration wall time of the fuzzy fit as the
//! document count grows at fixed k, vocabulary size and row density.
//!
//! Each size is measured twice with different iteration budgets and the
//! times are differenced, so one-off setup cost (seeding, the canonical
//! sort) drops out of the per-iteration figure.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::fuzzy::{fit, FuzzyParams};

use super::synth::random_count_matrix;

#[derive(Debug, Clone, Copy)]
pub struct ScalingPoint {
    pub n: usize,
    pub secs_per_iteration: f64,
}

#[derive(Debug, Clone)]
pub struct ScalingReport {
    pub points: Vec<ScalingPoint>,
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination of the least-squares line through
    /// `(n, secs_per_iteration)`.
    pub r_squared: f64,
    /// Time ratios between consecutive sizes.
    pub ratios: Vec<f64>,
}

pub fn scaling_benchmark(
    sizes: &[usize],
    k: usize,
    m: usize,
    nnz_per_row: usize,
    seed: u64,
) -> Result<ScalingReport> {
    if sizes.len() < 2 {
        return Err(Error::InsufficientPoints(sizes.len()));
    }
    let mut points = Vec::with_capacity(sizes.len());
    for (i, &n) in sizes.iter().enumerate() {
        let x = random_count_matrix(n, m, nnz_per_row, seed.wrapping_add(i as u64))
            .l2_normalize_rows();
        let mut params = FuzzyParams::new(k, 1.5);
        params.seed = seed;
        // Effectively never converges early within the measured budgets.
        params.epsilon = 1e-300;

        params.max_iterations = 2;
        let t0 = Instant::now();
        let (model_short, _) = fit(&x, &params)?;
        let short = t0.elapsed().as_secs_f64();
        let short_iters = model_short.iterations_run();

        params.max_iterations = 6;
        let t1 = Instant::now();
        let (model_long, _) = fit(&x, &params)?;
        let long = t1.elapsed().as_secs_f64();
        let long_iters = model_long.iterations_run();

        let secs_per_iteration = if long_iters > short_iters {
            (long - short).max(0.0) / (long_iters - short_iters) as f64
        } else {
            long / long_iters.max(1) as f64
        };
        points.push(ScalingPoint {
            n,
            secs_per_iteration,
        });
    }

    let xs: Vec<f64> = points.iter().map(|p| p.n as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.secs_per_iteration).collect();
    let (slope, intercept, r_squared) = least_squares_line(&xs, &ys);
    let ratios = ys.windows(2).map(|w| w[1] / w[0]).collect();
    Ok(ScalingReport {
        points,
        slope,
        intercept,
        r_squared,
        ratios,
    })
}

fn least_squares_line(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let fit = slope * x + intercept;
            (y - fit) * (y - fit)
        })
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    (slope, intercept, r_squared)
}
