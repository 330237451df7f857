use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};

use super::tokenize::{tokenize, TokenizerConfig};
use super::vocab::Vocabulary;
use super::LabeledCorpus;

/// Compressed sparse row document-term matrix: one row per document, one
/// column per vocabulary term. Stored values are strictly positive and
/// column ids are strictly increasing within a row; rows may be empty.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseDocMatrix {
    n_rows: usize,
    n_cols: usize,
    indptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
}

/// Borrowed view of one matrix row.
#[derive(Debug, Clone, Copy)]
pub struct SparseRow<'a> {
    pub cols: &'a [u32],
    pub vals: &'a [f64],
}

impl<'a> SparseRow<'a> {
    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    /// Dot product against a dense vector of length `n_cols`.
    pub fn dot_dense(&self, v: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (&c, &x) in self.cols.iter().zip(self.vals) {
            acc += x * v[c as usize];
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.vals.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn sum(&self) -> f64 {
        self.vals.iter().sum()
    }
}

impl SparseDocMatrix {
    /// Builds a matrix from per-row `(column, value)` pairs.
    ///
    /// Panics if a row violates the invariants (unsorted or duplicate
    /// columns, column id out of range, non-positive value); construction is
    /// a programming contract, not a data-validation path.
    pub fn from_rows(n_cols: usize, rows: &[Vec<(u32, f64)>]) -> Self {
        let mut indptr = Vec::with_capacity(rows.len() + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        indptr.push(0);
        for row in rows {
            let mut prev: Option<u32> = None;
            for &(c, v) in row {
                assert!((c as usize) < n_cols, "column {c} out of range {n_cols}");
                assert!(v > 0.0, "stored values must be positive, got {v}");
                if let Some(p) = prev {
                    assert!(c > p, "columns must be strictly increasing within a row");
                }
                prev = Some(c);
                cols.push(c);
                vals.push(v);
            }
            indptr.push(cols.len());
        }
        SparseDocMatrix {
            n_rows: rows.len(),
            n_cols,
            indptr,
            cols,
            vals,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn row(&self, j: usize) -> SparseRow<'_> {
        let (a, b) = (self.indptr[j], self.indptr[j + 1]);
        SparseRow {
            cols: &self.cols[a..b],
            vals: &self.vals[a..b],
        }
    }

    pub fn row_is_empty(&self, j: usize) -> bool {
        self.indptr[j] == self.indptr[j + 1]
    }

    pub fn rows(&self) -> impl Iterator<Item = SparseRow<'_>> {
        (0..self.n_rows).map(move |j| self.row(j))
    }

    /// Indices of rows with at least one stored value.
    pub fn non_empty_rows(&self) -> Vec<usize> {
        (0..self.n_rows).filter(|&j| !self.row_is_empty(j)).collect()
    }

    /// Scales every non-empty row to unit Euclidean norm; empty rows are left
    /// unchanged and the sparsity pattern is preserved.
    pub fn l2_normalize_rows(&self) -> Self {
        let mut out = self.clone();
        for j in 0..self.n_rows {
            let (a, b) = (self.indptr[j], self.indptr[j + 1]);
            if a == b {
                continue;
            }
            let norm = self.vals[a..b].iter().map(|v| v * v).sum::<f64>().sqrt();
            for v in &mut out.vals[a..b] {
                *v /= norm;
            }
        }
        out
    }

    /// True when every non-empty row has unit norm within `tol`.
    pub fn rows_are_unit_norm(&self, tol: f64) -> bool {
        (0..self.n_rows).all(|j| {
            let r = self.row(j);
            r.is_empty() || (r.norm() - 1.0).abs() <= tol
        })
    }

    /// New matrix containing `indices` rows in the given order.
    pub fn subset_rows(&self, indices: &[usize]) -> Self {
        let mut indptr = Vec::with_capacity(indices.len() + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        indptr.push(0);
        for &j in indices {
            assert!(j < self.n_rows, "row {j} out of range {}", self.n_rows);
            let (a, b) = (self.indptr[j], self.indptr[j + 1]);
            cols.extend_from_slice(&self.cols[a..b]);
            vals.extend_from_slice(&self.vals[a..b]);
            indptr.push(cols.len());
        }
        SparseDocMatrix {
            n_rows: indices.len(),
            n_cols: self.n_cols,
            indptr,
            cols,
            vals,
        }
    }

    /// Column means (used for implicitly centered PCA).
    pub fn col_means(&self) -> Array1<f64> {
        let mut sums = Array1::zeros(self.n_cols);
        for (&c, &v) in self.cols.iter().zip(&self.vals) {
            sums[c as usize] += v;
        }
        sums / self.n_rows as f64
    }

    /// `X * w` for dense `w` of shape `(n_cols, r)`.
    pub fn mul_dense(&self, w: &Array2<f64>) -> Array2<f64> {
        assert_eq!(w.nrows(), self.n_cols);
        let r = w.ncols();
        let mut out = Array2::zeros((self.n_rows, r));
        for j in 0..self.n_rows {
            let row = self.row(j);
            let mut out_row = out.row_mut(j);
            for (&c, &x) in row.cols.iter().zip(row.vals) {
                let w_row = w.row(c as usize);
                for l in 0..r {
                    out_row[l] += x * w_row[l];
                }
            }
        }
        out
    }

    /// `X^T * y` for dense `y` of shape `(n_rows, r)`. Accumulation runs in
    /// row order, so the result does not depend on scheduling.
    pub fn t_mul_dense(&self, y: &Array2<f64>) -> Array2<f64> {
        assert_eq!(y.nrows(), self.n_rows);
        let r = y.ncols();
        let mut out = Array2::zeros((self.n_cols, r));
        for j in 0..self.n_rows {
            let row = self.row(j);
            let y_row = y.row(j);
            for (&c, &x) in row.cols.iter().zip(row.vals) {
                let mut out_row = out.row_mut(c as usize);
                for l in 0..r {
                    out_row[l] += x * y_row[l];
                }
            }
        }
        out
    }

    /// Dense copy, for small test oracles.
    pub fn to_dense(&self) -> Array2<f64> {
        let mut out = Array2::zeros((self.n_rows, self.n_cols));
        for j in 0..self.n_rows {
            let row = self.row(j);
            for (&c, &v) in row.cols.iter().zip(row.vals) {
                out[(j, c as usize)] = v;
            }
        }
        out
    }

    /// Serializes to the ASCII dump format: header `n m nnz`, then
    /// `row col value` triples sorted by `(row, col)`.
    pub fn to_dump_string(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{} {} {}", self.n_rows, self.n_cols, self.nnz()).unwrap();
        for j in 0..self.n_rows {
            let row = self.row(j);
            for (&c, &v) in row.cols.iter().zip(row.vals) {
                writeln!(s, "{} {} {}", j, c, v).unwrap();
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

    /// Parses the dump format produced by [`Self::to_dump_string`].
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
            return Err(bad(1, "header must be `n m nnz`"));
        }
        let n: usize = head[0].parse().map_err(|_| bad(1, "bad row count"))?;
        let m: usize = head[1].parse().map_err(|_| bad(1, "bad column count"))?;
        let nnz: usize = head[2].parse().map_err(|_| bad(1, "bad nnz"))?;

        let mut rows: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
        let mut count = 0usize;
        let mut prev: Option<(usize, u32)> = None;
        for (idx, line) in lines {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(bad(lineno, "expected `row col value`"));
            }
            let r: usize = parts[0].parse().map_err(|_| bad(lineno, "bad row id"))?;
            let c: u32 = parts[1].parse().map_err(|_| bad(lineno, "bad column id"))?;
            let v: f64 = parts[2].parse().map_err(|_| bad(lineno, "bad value"))?;
            if r >= n || (c as usize) >= m {
                return Err(bad(lineno, "index out of range"));
            }
            if !(v > 0.0) {
                return Err(bad(lineno, "values must be positive"));
            }
            if let Some(p) = prev {
                if (r, c) <= p {
                    return Err(bad(lineno, "triples must be sorted by (row, col)"));
                }
            }
            prev = Some((r, c));
            rows[r].push((c, v));
            count += 1;
        }
        if count != nnz {
            return Err(bad(1, "nnz does not match triple count"));
        }
        Ok(SparseDocMatrix::from_rows(m, &rows))
    }

    pub fn read_dump(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_dump_str(&text, path)
    }
}

/// Counts in-vocabulary tokens per document: entry `(j, i)` is the frequency
/// of term `i` in document `j`. Out-of-vocabulary tokens are dropped;
/// documents with no surviving tokens become empty rows.
pub fn vectorize(
    corpus: &LabeledCorpus,
    vocab: &Vocabulary,
    cfg: &TokenizerConfig,
) -> SparseDocMatrix {
    let rows: Vec<Vec<(u32, f64)>> = corpus
        .documents()
        .iter()
        .map(|doc| {
            let mut counts: Vec<f64> = Vec::new();
            let mut seen: Vec<u32> = Vec::new();
            // Per-document term counting over a small map keyed by column id.
            let mut map = std::collections::HashMap::new();
            for token in tokenize(doc, cfg) {
                if let Some(id) = vocab.id(&token) {
                    *map.entry(id).or_insert(0.0) += 1.0;
                }
            }
            let mut ids: Vec<u32> = map.keys().copied().collect();
            ids.sort_unstable();
            for id in ids {
                seen.push(id);
                counts.push(map[&id]);
            }
            seen.into_iter().zip(counts).collect()
        })
        .collect();
    SparseDocMatrix::from_rows(vocab.len(), &rows)
}

/// Shared ASCII dump helpers for dense matrices (memberships, reduced
/// features, factors). Same triple layout as the sparse dump, but every
/// entry is written, zeros included.
pub(crate) fn dense_dump_string(values: &Array2<f64>) -> String {
    let (n, m) = values.dim();
    let mut s = String::new();
    writeln!(s, "{} {} {}", n, m, n * m).unwrap();
    for j in 0..n {
        for c in 0..m {
            writeln!(s, "{} {} {}", j, c, values[(j, c)]).unwrap();
        }
    }
    s
}

pub(crate) fn dense_from_dump_lines<'a, I: Iterator<Item = (usize, &'a str)>>(
    mut lines: I,
    path: &Path,
) -> Result<Array2<f64>> {
    let bad = |line: usize, reason: &str| Error::MalformedDump {
        path: path.to_path_buf(),
        line,
        reason: reason.to_string(),
    };
    let (hline, header) = lines.next().ok_or_else(|| bad(1, "missing header"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 3 {
        return Err(bad(hline + 1, "header must be `n m nnz`"));
    }
    let n: usize = head[0].parse().map_err(|_| bad(hline + 1, "bad row count"))?;
    let m: usize = head[1].parse().map_err(|_| bad(hline + 1, "bad column count"))?;
    let mut out = Array2::zeros((n, m));
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(bad(idx + 1, "expected `row col value`"));
        }
        let r: usize = parts[0].parse().map_err(|_| bad(idx + 1, "bad row id"))?;
        let c: usize = parts[1].parse().map_err(|_| bad(idx + 1, "bad column id"))?;
        let v: f64 = parts[2].parse().map_err(|_| bad(idx + 1, "bad value"))?;
        if r >= n || c >= m {
            return Err(bad(idx + 1, "index out of range"));
        }
        out[(r, c)] = v;
    }
    Ok(out)
}
