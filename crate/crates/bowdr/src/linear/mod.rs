//! Truncated SVD and PCA baselines on the sparse count matrix.
//!
//! Both factorizations run through randomized subspace iteration with a
//! Rayleigh-Ritz step, touching the sparse matrix only through
//! matrix-times-dense products. PCA is the SVD of the column-centered
//! matrix with *implicit* centering: the operator `y -> X y - mean (1^T y)`
//! is applied, the sparse matrix is never densified.
//!
//! [`dense_svd_oracle`] is an independent dense decomposition (one-sided
//! Jacobi) used by the test suites to pin the iterative results.

mod dense;

pub use dense::{jacobi_eigh, one_sided_jacobi_svd, orthonormalize_columns};

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ndarray::{Array1, Array2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::corpus::SparseDocMatrix;
use crate::dr::{Method, ReducedMatrix};
use crate::error::{Error, Result};
use crate::util::Fingerprint;

const OVERSAMPLE: usize = 10;
const MAX_SWEEPS: usize = 300;
/// Ritz-value relative change below which the iteration is converged.
const RITZ_TOL: f64 = 1e-12;
/// Singular values below `RANK_TOL * s1` are treated as zero.
const RANK_TOL: f64 = 1e-12;

/// Top-k factors `X ~ U S V^T`: `u` has orthonormal columns, `s` is
/// non-increasing and non-negative, `vt` has orthonormal rows.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub u: Array2<f64>,
    pub s: Array1<f64>,
    pub vt: Array2<f64>,
    /// Set when trailing singular values fell below the rank tolerance and
    /// were zero-filled.
    pub rank_deficient: bool,
}

impl SvdFactors {
    pub fn k(&self) -> usize {
        self.s.len()
    }

    pub fn n_terms(&self) -> usize {
        self.vt.ncols()
    }

    /// Training-row features `U * diag(S)`.
    pub fn scores(&self) -> Array2<f64> {
        let mut out = self.u.clone();
        for (mut col, &sv) in out.columns_mut().into_iter().zip(self.s.iter()) {
            col.mapv_inplace(|v| v * sv);
        }
        out
    }

    /// Fold-safe projection of (possibly unseen) rows: `x * V`.
    pub fn transform(&self, x: &SparseDocMatrix) -> Result<ReducedMatrix> {
        if x.n_cols() != self.n_terms() {
            return Err(Error::DimensionMismatch {
                expected: self.n_terms(),
                got: x.n_cols(),
            });
        }
        let k = self.k();
        let mut out = Array2::zeros((x.n_rows(), k));
        for j in 0..x.n_rows() {
            let row = x.row(j);
            let mut target = out.row_mut(j);
            for i in 0..k {
                let mut acc = 0.0;
                for (&c, &v) in row.cols.iter().zip(row.vals) {
                    acc += v * self.vt[(i, c as usize)];
                }
                target[i] = acc;
            }
        }
        Ok(ReducedMatrix::new(out, Method::Svd))
    }

    pub fn fingerprint(&self) -> u64 {
        let mut fp = Fingerprint::new();
        fp.push_u64(self.k() as u64);
        fp.push_f64s(self.s.iter());
        fp.push_f64s(self.u.iter());
        fp.push_f64s(self.vt.iter());
        fp.finish()
    }

    /// Factor dump: `method=SVD k=<k>` header, then the dense triple dump of
    /// the `vt` rows followed by a `s` line per singular value.
    pub fn to_dump_string(&self) -> String {
        let mut s = format!("method=SVD k={}\n", self.k());
        for (i, sv) in self.s.iter().enumerate() {
            writeln!(s, "s {} {}", i, sv).unwrap();
        }
        s.push_str(&crate::corpus::dense_dump_string(&self.vt));
        s
    }

    pub fn write_dump(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_dump_string()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// PCA factors: column means, row-orthonormal components (the regression
/// coefficients) and the training scores.
#[derive(Debug, Clone)]
pub struct PcaFactors {
    pub mean: Array1<f64>,
    pub components: Array2<f64>,
    pub scores: Array2<f64>,
    pub singular_values: Array1<f64>,
    pub rank_deficient: bool,
}

impl PcaFactors {
    pub fn k(&self) -> usize {
        self.components.nrows()
    }

    pub fn n_terms(&self) -> usize {
        self.components.ncols()
    }

    /// Fold-safe projection of (possibly unseen) rows: `(x - mean) * P^T`,
    /// computed as `x * P^T - mean * P^T` so sparse rows stay sparse.
    pub fn transform(&self, x: &SparseDocMatrix) -> Result<ReducedMatrix> {
        if x.n_cols() != self.n_terms() {
            return Err(Error::DimensionMismatch {
                expected: self.n_terms(),
                got: x.n_cols(),
            });
        }
        let k = self.k();
        let mean_proj: Vec<f64> = (0..k)
            .map(|i| {
                self.mean
                    .iter()
                    .zip(self.components.row(i).iter())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        let mut out = Array2::zeros((x.n_rows(), k));
        for j in 0..x.n_rows() {
            let row = x.row(j);
            let mut target = out.row_mut(j);
            for i in 0..k {
                let mut acc = 0.0;
                for (&c, &v) in row.cols.iter().zip(row.vals) {
                    acc += v * self.components[(i, c as usize)];
                }
                target[i] = acc - mean_proj[i];
            }
        }
        Ok(ReducedMatrix::new(out, Method::Pca))
    }

    pub fn fingerprint(&self) -> u64 {
        let mut fp = Fingerprint::new();
        fp.push_u64(self.k() as u64);
        fp.push_f64s(self.mean.iter());
        fp.push_f64s(self.components.iter());
        fp.finish()
    }

    pub fn to_dump_string(&self) -> String {
        let mut s = format!("method=PCA k={}\n", self.k());
        for (i, sv) in self.singular_values.iter().enumerate() {
            writeln!(s, "s {} {}", i, sv).unwrap();
        }
        s.push_str(&crate::corpus::dense_dump_string(&self.components));
        s
    }

    pub fn write_dump(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_dump_string()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// The linear operator interface the subspace iteration works through:
/// `n x m`, forward product against dense `m x r`, transposed product
/// against dense `n x r`.
trait LinearOp {
    fn n(&self) -> usize;
    fn m(&self) -> usize;
    fn mul(&self, w: &Array2<f64>) -> Array2<f64>;
    fn t_mul(&self, y: &Array2<f64>) -> Array2<f64>;
}

struct PlainOp<'a>(&'a SparseDocMatrix);

impl LinearOp for PlainOp<'_> {
    fn n(&self) -> usize {
        self.0.n_rows()
    }
    fn m(&self) -> usize {
        self.0.n_cols()
    }
    fn mul(&self, w: &Array2<f64>) -> Array2<f64> {
        self.0.mul_dense(w)
    }
    fn t_mul(&self, y: &Array2<f64>) -> Array2<f64> {
        self.0.t_mul_dense(y)
    }
}

/// `A = X - 1 mean^T` applied without densifying `X`.
struct CenteredOp<'a> {
    x: &'a SparseDocMatrix,
    mean: Array1<f64>,
}

impl LinearOp for CenteredOp<'_> {
    fn n(&self) -> usize {
        self.x.n_rows()
    }
    fn m(&self) -> usize {
        self.x.n_cols()
    }
    fn mul(&self, w: &Array2<f64>) -> Array2<f64> {
        let mut out = self.x.mul_dense(w);
        let r = w.ncols();
        let mean_w: Vec<f64> = (0..r)
            .map(|l| self.mean.iter().zip(w.column(l)).map(|(a, b)| a * b).sum())
            .collect();
        for mut row in out.rows_mut() {
            for l in 0..r {
                row[l] -= mean_w[l];
            }
        }
        out
    }
    fn t_mul(&self, y: &Array2<f64>) -> Array2<f64> {
        let mut out = self.x.t_mul_dense(y);
        let r = y.ncols();
        let col_sums: Vec<f64> = (0..r).map(|l| y.column(l).sum()).collect();
        for (c, mut row) in out.rows_mut().into_iter().enumerate() {
            let mc = self.mean[c];
            for l in 0..r {
                row[l] -= mc * col_sums[l];
            }
        }
        out
    }
}

/// Randomized subspace iteration with Rayleigh-Ritz extraction.
/// The small eigenproblem goes through the symmetric Jacobi solver, a
/// different algorithm and code path from the one-sided Jacobi oracle.
fn subspace_svd(
    op: &dyn LinearOp,
    k: usize,
    seed: u64,
) -> Result<(Array2<f64>, Array1<f64>, Array2<f64>, bool)> {
    let (n, m) = (op.n(), op.m());
    let min_dim = n.min(m);
    let r = (k + OVERSAMPLE).min(min_dim);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let omega = Array2::from_shape_fn((m, r), |_| normal.sample(&mut rng));

    let mut q = op.mul(&omega);
    orthonormalize_columns(&mut q);

    let mut prev_ritz: Option<Array1<f64>> = None;
    let mut last_delta = f64::INFINITY;
    for _sweep in 0..MAX_SWEEPS {
        let mut z = op.t_mul(&q);
        orthonormalize_columns(&mut z);
        q = op.mul(&z);
        orthonormalize_columns(&mut q);

        // Rayleigh-Ritz on span(Q): eigendecompose (Q^T A)(Q^T A)^T.
        let bt = op.t_mul(&q); // m x r, equals B^T
        let gram = bt.t().dot(&bt); // r x r
        let (eigvals, _) = jacobi_eigh(&gram);
        let ritz: Array1<f64> =
            Array1::from_iter(eigvals.iter().take(k).map(|&l| l.max(0.0).sqrt()));
        let scale = ritz[0].max(f64::MIN_POSITIVE);
        if let Some(prev) = &prev_ritz {
            last_delta = ritz
                .iter()
                .zip(prev.iter())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max)
                / scale;
            if last_delta <= RITZ_TOL {
                break;
            }
        }
        prev_ritz = Some(ritz);
    }
    if last_delta > RITZ_TOL.max(1e-9) {
        return Err(Error::ConvergenceFailure {
            iterations: MAX_SWEEPS,
            residual: last_delta,
        });
    }

    // Final extraction from the converged subspace.
    let bt = op.t_mul(&q);
    let gram = bt.t().dot(&bt);
    let (eigvals, w) = jacobi_eigh(&gram);
    let s1 = eigvals[0].max(0.0).sqrt();
    let mut u = Array2::zeros((n, k));
    let mut s = Array1::zeros(k);
    let mut vt = Array2::zeros((k, m));
    let mut rank_deficient = false;
    let qw = q.dot(&w); // n x r, columns are Ritz vectors
    for i in 0..k {
        let sigma = eigvals[i].max(0.0).sqrt();
        if sigma <= RANK_TOL * s1.max(f64::MIN_POSITIVE) {
            // Trailing directions below the rank tolerance: zero the value,
            // zero the score column, fill vt from the canonical basis later.
            rank_deficient = true;
            s[i] = 0.0;
            for row in 0..n {
                u[(row, i)] = qw[(row, i)];
            }
            continue;
        }
        s[i] = sigma;
        for row in 0..n {
            u[(row, i)] = qw[(row, i)];
        }
        // v_i = B^T w_i / sigma = bt . w[:, i] / sigma.
        for c in 0..m {
            let mut acc = 0.0;
            for l in 0..bt.ncols() {
                acc += bt[(c, l)] * w[(l, i)];
            }
            vt[(i, c)] = acc / sigma;
        }
    }
    if rank_deficient {
        complete_vt_rows(&mut vt, &s);
    }
    canonicalize_signs(&mut u, &mut vt);
    Ok((u, s, vt, rank_deficient))
}

/// Fills the vt rows of zeroed singular values with canonical-basis vectors
/// orthogonalized against the valid rows, keeping `vt vt^T = I`.
fn complete_vt_rows(vt: &mut Array2<f64>, s: &Array1<f64>) {
    let (k, m) = vt.dim();
    for i in 0..k {
        if s[i] > 0.0 {
            continue;
        }
        'candidates: for c in 0..m {
            let mut row: Vec<f64> = (0..m).map(|j| if j == c { 1.0 } else { 0.0 }).collect();
            for _pass in 0..2 {
                for other in 0..k {
                    if other == i || (s[other] == 0.0 && other > i) {
                        continue;
                    }
                    let dot: f64 = (0..m).map(|j| row[j] * vt[(other, j)]).sum();
                    for j in 0..m {
                        row[j] -= dot * vt[(other, j)];
                    }
                }
            }
            let norm: f64 = row.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.5 {
                for j in 0..m {
                    vt[(i, j)] = row[j] / norm;
                }
                break 'candidates;
            }
        }
    }
}

/// Flips each singular direction so the largest-magnitude coefficient of its
/// `vt` row is positive (ties to the lowest column), making the output
/// deterministic and comparable across runs.
pub fn canonicalize_signs(u: &mut Array2<f64>, vt: &mut Array2<f64>) {
    let (k, m) = vt.dim();
    for i in 0..k {
        let mut best = 0usize;
        for c in 1..m {
            if vt[(i, c)].abs() > vt[(i, best)].abs() {
                best = c;
            }
        }
        if vt[(i, best)] < 0.0 {
            for c in 0..m {
                vt[(i, c)] = -vt[(i, c)];
            }
            for row in 0..u.nrows() {
                u[(row, i)] = -u[(row, i)];
            }
        }
    }
}

/// Top-k singular triplets of the sparse matrix via randomized subspace
/// iteration. Deterministic for a fixed seed; singular values match the
/// dense oracle to 1e-6 relative on test-sized matrices.
pub fn truncated_svd(x: &SparseDocMatrix, k: usize, seed: u64) -> Result<SvdFactors> {
    let max = x.n_rows().min(x.n_cols());
    if k < 1 || k > max {
        return Err(Error::InvalidK { k, max });
    }
    let op = PlainOp(x);
    let (u, s, vt, rank_deficient) = subspace_svd(&op, k, seed)?;
    Ok(SvdFactors {
        u,
        s,
        vt,
        rank_deficient,
    })
}

/// SVD-based reduction: training features are `U * diag(S)`, unseen rows
/// project as `x * V`.
pub fn svd_reduce(
    x: &SparseDocMatrix,
    k: usize,
    seed: u64,
) -> Result<(ReducedMatrix, SvdFactors)> {
    let factors = truncated_svd(x, k, seed)?;
    let reduced = ReducedMatrix::new(factors.scores(), Method::Svd);
    Ok((reduced, factors))
}

/// PCA reduction: truncated SVD of the implicitly column-centered matrix.
/// Training features are the scores `t = A V`; unseen rows transform as
/// `(x - mean) * P^T`.
pub fn pca_reduce(
    x: &SparseDocMatrix,
    k: usize,
    seed: u64,
) -> Result<(ReducedMatrix, PcaFactors)> {
    let max = (x.n_rows().saturating_sub(1)).min(x.n_cols());
    if k < 1 || k > max {
        return Err(Error::InvalidK { k, max });
    }
    let op = CenteredOp {
        x,
        mean: x.col_means(),
    };
    let (u, s, vt, rank_deficient) = subspace_svd(&op, k, seed)?;
    let mut scores = u;
    for (mut col, &sv) in scores.columns_mut().into_iter().zip(s.iter()) {
        col.mapv_inplace(|v| v * sv);
    }
    let factors = PcaFactors {
        mean: op.mean,
        components: vt,
        scores: scores.clone(),
        singular_values: s,
        rank_deficient,
    };
    Ok((ReducedMatrix::new(scores, Method::Pca), factors))
}

/// Full SVD of a small dense matrix (`n, m <= 64`) by one-sided Jacobi, with
/// canonical signs. This is the independent oracle the iterative path is
/// tested against.
pub fn dense_svd_oracle(x: &Array2<f64>) -> SvdFactors {
    let (n, m) = x.dim();
    assert!(n <= 64 && m <= 64, "oracle is for small matrices only");
    let (mut u, s, mut vt) = one_sided_jacobi_svd(x);
    canonicalize_signs(&mut u, &mut vt);
    SvdFactors {
        u,
        s,
        vt,
        rank_deficient: false,
    }
}
