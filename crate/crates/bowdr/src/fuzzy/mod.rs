//! Soft spherical k-means on unit-normalized bag-of-words rows.
//!
//! Documents live on the unit sphere and dissimilarity is `1 - cos`. The
//! fitted membership matrix — how strongly each document belongs to each of
//! the `k` clusters — *is* the reduced representation: an `n x m` count
//! matrix collapses to an `n x k` feature matrix. Unseen documents transform
//! by recomputing memberships against the frozen prototypes, so the model is
//! safe to use inside cross-validation.
//!
//! The solver alternates two closed-form steps: optimal memberships for
//! fixed prototypes, then optimal prototypes for fixed memberships. Both
//! steps never increase the objective, so the recorded trace is
//! non-increasing and the stopping rule is a minimum absolute improvement.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ndarray::Array2;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::corpus::{SparseDocMatrix, SparseRow};
use crate::dr::{Method, ReducedMatrix};
use crate::error::{Error, Result};
use crate::util::Fingerprint;

/// Dissimilarities at or below this are treated as an exact hit when
/// evaluating the membership closed form.
pub const SINGULARITY_TOL: f64 = 1e-12;

/// Prototype separation at or below this makes the Xie-Beni index undefined.
const SEPARATION_TOL: f64 = 1e-12;

/// Row-chunk size for the parallel membership pass. Fixed, so results do not
/// depend on the worker count.
const ROW_CHUNK: usize = 2048;

/// Solver settings. Defaults: 100 iterations, minimum objective improvement
/// 1e-5, single restart.
#[derive(Debug, Clone)]
pub struct FuzzyParams {
    /// Cluster count; this is also the reduced dimensionality.
    pub k: usize,
    /// Fuzzifier, must be > 1. Larger values give softer memberships.
    pub q: f64,
    pub max_iterations: usize,
    /// Stop when the absolute objective improvement between consecutive
    /// iterations falls below this.
    pub epsilon: f64,
    pub seed: u64,
    /// Independent seeded restarts; the lowest final objective wins, ties go
    /// to the earliest restart.
    pub n_restarts: u32,
}

impl FuzzyParams {
    pub fn new(k: usize, q: f64) -> Self {
        FuzzyParams {
            k,
            q,
            max_iterations: 100,
            epsilon: 1e-5,
            seed: 0,
            n_restarts: 1,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::InvalidParams("k must be >= 1".into()));
        }
        if !(self.q > 1.0) {
            return Err(Error::InvalidParams(format!(
                "fuzzifier must be > 1, got {}",
                self.q
            )));
        }
        if self.max_iterations < 1 {
            return Err(Error::InvalidParams("max_iterations must be >= 1".into()));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidParams("epsilon must be > 0".into()));
        }
        if self.n_restarts < 1 {
            return Err(Error::InvalidParams("n_restarts must be >= 1".into()));
        }
        Ok(())
    }
}

/// Dense `n x k` matrix of fuzzy memberships. Every entry is in `[0, 1]` and
/// every row sums to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipMatrix {
    values: Array2<f64>,
}

impl MembershipMatrix {
    pub fn n_docs(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_clusters(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn get(&self, doc: usize, cluster: usize) -> f64 {
        self.values[(doc, cluster)]
    }

    /// Index of the strongest cluster per document (ties to the lowest id).
    pub fn hard_assignment(&self) -> Vec<usize> {
        (0..self.n_docs())
            .map(|j| {
                let row = self.values.row(j);
                let mut best = 0usize;
                for f in 1..row.len() {
                    if row[f] > row[best] {
                        best = f;
                    }
                }
                best
            })
            .collect()
    }

    /// Checks the membership contract: entries in `[0, 1]`, rows summing to
    /// 1 within `1e-9`, and column sums strictly inside `(0, n)` when k >= 2.
    pub fn validate_invariants(&self) -> Result<()> {
        let (n, k) = self.values.dim();
        for j in 0..n {
            let mut sum = 0.0;
            for f in 0..k {
                let v = self.values[(j, f)];
                if !(-1e-15..=1.0 + 1e-12).contains(&v) {
                    return Err(Error::InvalidParams(format!(
                        "membership ({j},{f}) = {v} outside [0,1]"
                    )));
                }
                sum += v;
            }
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidParams(format!(
                    "row {j} sums to {sum}, not 1"
                )));
            }
        }
        if k >= 2 {
            for f in 0..k {
                let col: f64 = (0..n).map(|j| self.values[(j, f)]).sum();
                if !(col > 0.0 && col < n as f64) {
                    return Err(Error::InvalidParams(format!(
                        "column {f} sum {col} outside (0, {n})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Plain matrix dump (`n k nnz` header plus every entry as a triple).
    pub fn to_dump_string(&self) -> String {
        crate::corpus::dense_dump_string(&self.values)
    }

    pub fn write_dump(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_dump_string()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

impl From<MembershipMatrix> for ReducedMatrix {
    fn from(u: MembershipMatrix) -> Self {
        ReducedMatrix::new(u.values, Method::Fc)
    }
}

/// A fitted soft spherical k-means model: `k` unit-norm prototype rows over
/// the vocabulary, plus the fit diagnostics.
#[derive(Debug, Clone)]
pub struct FuzzyModel {
    prototypes: Array2<f64>,
    params: FuzzyParams,
    /// Seed of the restart that produced this model.
    seed_used: u64,
    objective_trace: Vec<f64>,
    converged: bool,
    iterations_run: usize,
    /// `(iteration, cluster)` pairs where a degenerate cluster was re-seeded.
    reseeded: Vec<(usize, usize)>,
}

impl FuzzyModel {
    pub fn k(&self) -> usize {
        self.prototypes.nrows()
    }

    pub fn n_terms(&self) -> usize {
        self.prototypes.ncols()
    }

    pub fn q(&self) -> f64 {
        self.params.q
    }

    pub fn prototypes(&self) -> &Array2<f64> {
        &self.prototypes
    }

    pub fn params(&self) -> &FuzzyParams {
        &self.params
    }

    pub fn seed_used(&self) -> u64 {
        self.seed_used
    }

    pub fn objective_trace(&self) -> &[f64] {
        &self.objective_trace
    }

    pub fn final_objective(&self) -> f64 {
        *self.objective_trace.last().expect("trace never empty")
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    pub fn iterations_run(&self) -> usize {
        self.iterations_run
    }

    pub fn reseeded(&self) -> &[(usize, usize)] {
        &self.reseeded
    }

    /// Memberships of (possibly unseen) unit-normalized documents against the
    /// frozen prototypes — the fold-safe transform. On the training matrix
    /// this reproduces the fit-time memberships exactly.
    pub fn reduce(&self, x: &SparseDocMatrix) -> Result<ReducedMatrix> {
        if x.n_cols() != self.n_terms() {
            return Err(Error::DimensionMismatch {
                expected: self.n_terms(),
                got: x.n_cols(),
            });
        }
        Ok(update_memberships(x, &self.prototypes, self.params.q).into())
    }

    /// Stable hash of the frozen transform (prototypes and fuzzifier).
    pub fn fingerprint(&self) -> u64 {
        let mut fp = Fingerprint::new();
        fp.push_u64(self.k() as u64);
        fp.push_u64(self.n_terms() as u64);
        fp.push_f64(self.params.q);
        fp.push_f64s(self.prototypes.iter());
        fp.finish()
    }

    /// ASCII model dump: header `k m q`, then nonzero prototype entries as
    /// `cluster col value` triples. Restores the transform, not the fit
    /// diagnostics.
    pub fn to_dump_string(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{} {} {}", self.k(), self.n_terms(), self.params.q).unwrap();
        for f in 0..self.k() {
            for c in 0..self.n_terms() {
                let v = self.prototypes[(f, c)];
                if v != 0.0 {
                    writeln!(s, "{} {} {}", f, c, v).unwrap();
                }
            }
        }
        s
    }

    pub fn write_dump(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_dump_string()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn from_dump_str(text: &str, path: &Path) -> Result<Self> {
        let bad = |line: usize, reason: &str| Error::MalformedDump {
            path: path.to_path_buf(),
            line,
            reason: reason.to_string(),
        };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| bad(1, "empty file"))?;
        let head: Vec<&str> = header.split_whitespace().collect();
        if head.len() != 3 {
            return Err(bad(1, "header must be `k m q`"));
        }
        let k: usize = head[0].parse().map_err(|_| bad(1, "bad k"))?;
        let m: usize = head[1].parse().map_err(|_| bad(1, "bad m"))?;
        let q: f64 = head[2].parse().map_err(|_| bad(1, "bad q"))?;
        let mut prototypes = Array2::zeros((k, m));
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(bad(idx + 1, "expected `cluster col value`"));
            }
            let f: usize = parts[0].parse().map_err(|_| bad(idx + 1, "bad cluster"))?;
            let c: usize = parts[1].parse().map_err(|_| bad(idx + 1, "bad column"))?;
            let v: f64 = parts[2].parse().map_err(|_| bad(idx + 1, "bad value"))?;
            if f >= k || c >= m {
                return Err(bad(idx + 1, "index out of range"));
            }
            prototypes[(f, c)] = v;
        }
        let mut params = FuzzyParams::new(k, q);
        params.validate()?;
        params.seed = 0;
        Ok(FuzzyModel {
            prototypes,
            seed_used: 0,
            params,
            objective_trace: vec![f64::NAN],
            converged: true,
            iterations_run: 0,
            reseeded: Vec::new(),
        })
    }

    pub fn read_dump(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_dump_str(&text, path)
    }
}

/// `1 - <x, v>` for a unit sparse row against a unit dense vector, clamped
/// into `[0, 2]`. An empty row has no direction, so its dissimilarity is 1
/// to everything.
pub fn cosine_dissimilarity(x: SparseRow<'_>, v: &[f64]) -> f64 {
    if x.is_empty() {
        return 1.0;
    }
    (1.0 - x.dot_dense(v)).clamp(0.0, 2.0)
}

/// Writes the membership row for one document into `out` (length k), given
/// the dissimilarities `d` to each prototype.
///
/// Regular case: `mu_f = [sum_g (d_f / d_g)^{1/(q-1)}]^{-1}`, evaluated in
/// the overflow-free form `w_f / sum w` with `w_f = (d_min / d_f)^{1/(q-1)}`.
/// If any dissimilarity is at or below [`SINGULARITY_TOL`], the unit mass is
/// split uniformly over the zero-dissimilarity clusters.
fn membership_row_from_dissim(d: &[f64], q: f64, out: &mut [f64]) {
    let k = d.len();
    let dmin = d.iter().copied().fold(f64::INFINITY, f64::min);
    if dmin <= SINGULARITY_TOL {
        let hits = d.iter().filter(|&&v| v <= SINGULARITY_TOL).count();
        let share = 1.0 / hits as f64;
        for f in 0..k {
            out[f] = if d[f] <= SINGULARITY_TOL { share } else { 0.0 };
        }
        return;
    }
    let e = 1.0 / (q - 1.0);
    let mut sum = 0.0;
    for f in 0..k {
        let w = (dmin / d[f]).powf(e);
        out[f] = w;
        sum += w;
    }
    for w in out.iter_mut() {
        *w /= sum;
    }
}

fn membership_row(row: SparseRow<'_>, prototypes: &Array2<f64>, q: f64, out: &mut [f64]) {
    let k = prototypes.nrows();
    let mut d = vec![0.0; k];
    for f in 0..k {
        d[f] = cosine_dissimilarity(row, prototypes.row(f).to_slice().expect("contiguous"));
    }
    membership_row_from_dissim(&d, q, out);
}

/// The optimal memberships for fixed prototypes. Rows are independent, so
/// the document loop is parallel over fixed-size chunks and the result is
/// identical for any worker count.
pub fn update_memberships(
    x: &SparseDocMatrix,
    prototypes: &Array2<f64>,
    q: f64,
) -> MembershipMatrix {
    let n = x.n_rows();
    let k = prototypes.nrows();
    let mut values = Array2::zeros((n, k));
    {
        let buf = values.as_slice_mut().expect("standard layout");
        buf.par_chunks_mut(ROW_CHUNK * k)
            .enumerate()
            .for_each(|(chunk_idx, chunk)| {
                let row0 = chunk_idx * ROW_CHUNK;
                for (local, out) in chunk.chunks_mut(k).enumerate() {
                    membership_row(x.row(row0 + local), prototypes, q, out);
                }
            });
    }
    MembershipMatrix { values }
}

/// The optimal prototypes for fixed memberships:
/// `v_f = normalize(sum_j mu_fj^q x_j)`. Clusters whose weighted sum is
/// numerically zero are re-seeded to the document worst served by the
/// surviving prototypes; the returned list names the re-seeded clusters.
///
/// The per-cluster accumulations run in document order, so results are
/// independent of the worker count.
pub fn update_prototypes(
    x: &SparseDocMatrix,
    u: &MembershipMatrix,
    q: f64,
) -> (Array2<f64>, Vec<usize>) {
    let n = x.n_rows();
    let m = x.n_cols();
    let k = u.n_clusters();
    assert_eq!(u.n_docs(), n, "membership rows must match document count");

    let rows: Vec<Array2<f64>> = (0..k)
        .into_par_iter()
        .map(|f| {
            let mut acc = Array2::zeros((1, m));
            {
                let acc = acc.as_slice_mut().expect("contiguous");
                for j in 0..n {
                    let w = u.get(j, f).powf(q);
                    if w == 0.0 {
                        continue;
                    }
                    let row = x.row(j);
                    for (&c, &v) in row.cols.iter().zip(row.vals) {
                        acc[c as usize] += w * v;
                    }
                }
            }
            acc
        })
        .collect();

    let mut prototypes = Array2::zeros((k, m));
    let mut degenerate = Vec::new();
    for (f, acc) in rows.into_iter().enumerate() {
        let norm = acc.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= 1e-12 {
            degenerate.push(f);
        } else {
            let mut target = prototypes.row_mut(f);
            for (o, v) in target.iter_mut().zip(acc.iter()) {
                *o = v / norm;
            }
        }
    }

    if !degenerate.is_empty() {
        reseed_degenerate(x, &mut prototypes, &degenerate);
    }
    (prototypes, degenerate)
}

/// Replaces each degenerate prototype with the non-empty document whose best
/// dissimilarity to the surviving prototypes is worst; successive degenerate
/// clusters take successive worst documents.
fn reseed_degenerate(x: &SparseDocMatrix, prototypes: &mut Array2<f64>, degenerate: &[usize]) {
    let k = prototypes.nrows();
    let healthy: Vec<usize> = (0..k).filter(|f| !degenerate.contains(f)).collect();
    let mut candidates: Vec<(f64, usize)> = x
        .non_empty_rows()
        .into_iter()
        .map(|j| {
            let row = x.row(j);
            let best = healthy
                .iter()
                .map(|&f| {
                    cosine_dissimilarity(row, prototypes.row(f).to_slice().expect("contiguous"))
                })
                .fold(f64::INFINITY, f64::min);
            // With no healthy cluster left every document is equally poorly
            // served; fall back to document order.
            let score = if best.is_finite() { best } else { 0.0 };
            (score, j)
        })
        .collect();
    // Worst-served first; ties broken by document index for determinism.
    candidates.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    for (slot, &f) in degenerate.iter().enumerate() {
        let j = candidates[slot % candidates.len()].1;
        let row = x.row(j);
        let mut target = prototypes.row_mut(f);
        target.fill(0.0);
        let norm = row.norm();
        for (&c, &v) in row.cols.iter().zip(row.vals) {
            target[c as usize] = v / norm;
        }
    }
}

/// The clustering objective `sum_f sum_j mu_fj^q * d(x_j, v_f)`.
/// Accumulation order is fixed (clusters outer, documents inner), so the
/// value is identical for any worker count.
pub fn objective(
    x: &SparseDocMatrix,
    prototypes: &Array2<f64>,
    u: &MembershipMatrix,
    q: f64,
) -> f64 {
    let n = x.n_rows();
    let k = prototypes.nrows();
    let parts: Vec<f64> = (0..k)
        .into_par_iter()
        .map(|f| {
            let proto = prototypes.row(f);
            let proto = proto.to_slice().expect("contiguous");
            let mut acc = 0.0;
            for j in 0..n {
                let mu = u.get(j, f);
                if mu == 0.0 {
                    continue;
                }
                acc += mu.powf(q) * cosine_dissimilarity(x.row(j), proto);
            }
            acc
        })
        .collect();
    parts.iter().sum()
}

/// Fits soft spherical k-means on a unit-normalized sparse matrix.
///
/// Initialization picks `k` distinct non-empty document rows by squared-
/// dissimilarity weighting from a seeded generator; candidate documents are
/// visited in a content-canonical order, so permuting the input rows selects
/// the same documents. Iteration alternates [`update_memberships`] and
/// [`update_prototypes`] and stops when the objective improves by less than
/// `epsilon` or `max_iterations` is reached.
pub fn fit(x: &SparseDocMatrix, params: &FuzzyParams) -> Result<(FuzzyModel, MembershipMatrix)> {
    params.validate()?;
    if params.k > x.n_rows() {
        return Err(Error::InvalidParams(format!(
            "k = {} exceeds document count {}",
            params.k,
            x.n_rows()
        )));
    }
    if !x.rows_are_unit_norm(1e-8) {
        return Err(Error::InvalidParams(
            "rows must be unit L2 norm (l2_normalize_rows) or empty".into(),
        ));
    }
    let canonical = canonical_row_order(x);
    if canonical.len() < params.k {
        return Err(Error::TooFewDocuments {
            needed: params.k,
            got: canonical.len(),
        });
    }

    let mut best: Option<(FuzzyModel, MembershipMatrix)> = None;
    for restart in 0..params.n_restarts {
        let seed = params.seed.wrapping_add(u64::from(restart));
        let prototypes = init_prototypes(x, &canonical, params.k, seed);
        let run = run_alternation(x, prototypes, params, seed);
        let better = match &best {
            None => true,
            Some((m, _)) => run.0.final_objective() < m.final_objective(),
        };
        if better {
            best = Some(run);
        }
    }
    Ok(best.expect("n_restarts >= 1"))
}

/// Runs the alternation from caller-provided starting prototypes (warm
/// start). `prototypes` must be `k x m` with unit-norm rows.
pub fn fit_from_prototypes(
    x: &SparseDocMatrix,
    prototypes: Array2<f64>,
    params: &FuzzyParams,
) -> Result<(FuzzyModel, MembershipMatrix)> {
    params.validate()?;
    if prototypes.nrows() != params.k || prototypes.ncols() != x.n_cols() {
        return Err(Error::DimensionMismatch {
            expected: params.k * x.n_cols(),
            got: prototypes.nrows() * prototypes.ncols(),
        });
    }
    if !x.rows_are_unit_norm(1e-8) {
        return Err(Error::InvalidParams(
            "rows must be unit L2 norm (l2_normalize_rows) or empty".into(),
        ));
    }
    Ok(run_alternation(x, prototypes, params, params.seed))
}

fn run_alternation(
    x: &SparseDocMatrix,
    prototypes: Array2<f64>,
    params: &FuzzyParams,
    seed: u64,
) -> (FuzzyModel, MembershipMatrix) {
    let q = params.q;
    let mut v = prototypes;
    let mut u = update_memberships(x, &v, q);
    let mut trace = vec![objective(x, &v, &u, q)];
    let mut converged = false;
    let mut iterations_run = 0;
    let mut reseeded = Vec::new();

    for t in 1..=params.max_iterations {
        let (v_next, degenerate) = update_prototypes(x, &u, q);
        v = v_next;
        for f in degenerate {
            reseeded.push((t, f));
        }
        u = update_memberships(x, &v, q);
        let j = objective(x, &v, &u, q);
        let prev = *trace.last().expect("non-empty");
        trace.push(j);
        iterations_run = t;
        if prev - j < params.epsilon {
            converged = true;
            break;
        }
    }

    let model = FuzzyModel {
        prototypes: v,
        params: params.clone(),
        seed_used: seed,
        objective_trace: trace,
        converged,
        iterations_run,
        reseeded,
    };
    (model, u)
}

/// Non-empty row indices sorted by row content (column ids, then value
/// bits), ties by original index. Identical vectors are interchangeable, so
/// sampling in this order is invariant under row permutation.
fn canonical_row_order(x: &SparseDocMatrix) -> Vec<usize> {
    let mut idx = x.non_empty_rows();
    idx.sort_by(|&a, &b| {
        let ra = x.row(a);
        let rb = x.row(b);
        ra.cols
            .cmp(rb.cols)
            .then_with(|| {
                let va = ra.vals.iter().map(|v| v.to_bits());
                let vb = rb.vals.iter().map(|v| v.to_bits());
                va.cmp(vb)
            })
            .then(a.cmp(&b))
    });
    idx
}

/// Squared-dissimilarity weighted seeding over the canonical candidate
/// order: the first prototype is a uniform draw, each further prototype is
/// drawn with probability proportional to its squared dissimilarity to the
/// nearest already-chosen prototype. Already-chosen documents have weight 0.
fn init_prototypes(
    x: &SparseDocMatrix,
    canonical: &[usize],
    k: usize,
    seed: u64,
) -> Array2<f64> {
    let m = x.n_cols();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut prototypes = Array2::zeros((k, m));
    let mut chosen = vec![false; canonical.len()];

    let first = rng.gen_range(0..canonical.len());
    chosen[first] = true;
    copy_row(x, canonical[first], &mut prototypes, 0);

    let mut dist: Vec<f64> = canonical
        .iter()
        .map(|&j| {
            cosine_dissimilarity(x.row(j), prototypes.row(0).to_slice().expect("contiguous"))
        })
        .collect();

    for f in 1..k {
        let weights: Vec<f64> = dist
            .iter()
            .zip(&chosen)
            .map(|(&d, &c)| if c { 0.0 } else { d * d })
            .collect();
        let total: f64 = weights.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.gen::<f64>() * total;
            let mut pick = None;
            for (i, &w) in weights.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                target -= w;
                if target <= 0.0 {
                    pick = Some(i);
                    break;
                }
            }
            pick.unwrap_or_else(|| {
                weights
                    .iter()
                    .rposition(|&w| w > 0.0)
                    .expect("total > 0 implies a positive weight")
            })
        } else {
            // Every remaining candidate coincides with a chosen prototype;
            // take the first unchosen one in canonical order.
            chosen
                .iter()
                .position(|&c| !c)
                .expect("k <= candidate count")
        };
        chosen[pick] = true;
        copy_row(x, canonical[pick], &mut prototypes, f);
        let proto = prototypes.row(f);
        let proto = proto.to_slice().expect("contiguous");
        for (i, &j) in canonical.iter().enumerate() {
            let d = cosine_dissimilarity(x.row(j), proto);
            if d < dist[i] {
                dist[i] = d;
            }
        }
    }
    prototypes
}

fn copy_row(x: &SparseDocMatrix, j: usize, prototypes: &mut Array2<f64>, f: usize) {
    let row = x.row(j);
    let norm = row.norm();
    let mut target = prototypes.row_mut(f);
    for (&c, &v) in row.cols.iter().zip(row.vals) {
        target[c as usize] = v / norm;
    }
}

/// Xie-Beni validity index: compactness over `n` times the minimum pairwise
/// prototype separation. Lower is better; used to choose `k`.
pub fn xie_beni(
    x: &SparseDocMatrix,
    prototypes: &Array2<f64>,
    u: &MembershipMatrix,
    q: f64,
) -> Result<f64> {
    let k = prototypes.nrows();
    if k < 2 {
        return Err(Error::InvalidParams(
            "Xie-Beni index needs at least 2 clusters".into(),
        ));
    }
    let mut min_sep = f64::INFINITY;
    for f in 0..k {
        for g in (f + 1)..k {
            let dot: f64 = prototypes
                .row(f)
                .iter()
                .zip(prototypes.row(g).iter())
                .map(|(a, b)| a * b)
                .sum();
            min_sep = min_sep.min((1.0 - dot).clamp(0.0, 2.0));
        }
    }
    if min_sep <= SEPARATION_TOL {
        return Err(Error::IdenticalPrototypes {
            separation: min_sep,
        });
    }
    Ok(objective(x, prototypes, u, q) / (x.n_rows() as f64 * min_sep))
}
