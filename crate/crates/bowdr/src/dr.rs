//! The common reduced feature representation and the uniform fit/transform
//! interface over the three reduction methods.
//!
//! Every method turns the sparse `n x m` count matrix into a dense `n x k`
//! feature matrix: fuzzy clustering via memberships, truncated SVD via
//! `U * diag(S)`, PCA via centered scores. A fitted [`DrModel`] transforms
//! unseen rows without refitting, which is what keeps cross-validation free
//! of leakage.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use ndarray::Array2;

use crate::corpus::SparseDocMatrix;
use crate::error::{Error, Result};
use crate::fuzzy::{self, FuzzyModel, FuzzyParams};
use crate::linear::{pca_reduce, svd_reduce, PcaFactors, SvdFactors};

/// Which reduction produced a feature matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Fc,
    Pca,
    Svd,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Fc => "FC",
            Method::Pca => "PCA",
            Method::Svd => "SVD",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fc" | "fuzzy" => Ok(Method::Fc),
            "pca" => Ok(Method::Pca),
            "svd" => Ok(Method::Svd),
            other => Err(Error::InvalidParams(format!("unknown method {other:?}"))),
        }
    }
}

/// Dense `n x k` feature matrix produced by a reduction method; the uniform
/// classifier input.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedMatrix {
    values: Array2<f64>,
    method: Method,
}

impl ReducedMatrix {
    pub fn new(values: Array2<f64>, method: Method) -> Self {
        ReducedMatrix { values, method }
    }

    pub fn n_rows(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.values.ncols()
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn row(&self, j: usize) -> ndarray::ArrayView1<'_, f64> {
        self.values.row(j)
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Dump format: one header line naming the method and k, then the dense
    /// triple dump.
    pub fn to_dump_string(&self) -> String {
        format!(
            "method={} k={}\n{}",
            self.method,
            self.n_cols(),
            crate::corpus::dense_dump_string(&self.values)
        )
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
        let mut method = None;
        for part in header.split_whitespace() {
            if let Some(v) = part.strip_prefix("method=") {
                method = Some(v.parse::<Method>().map_err(|_| bad(1, "bad method"))?);
            }
        }
        let method = method.ok_or_else(|| bad(1, "header must carry method=..."))?;
        let values = crate::corpus::dense_from_dump_lines(lines, path)?;
        Ok(ReducedMatrix { values, method })
    }

    pub fn read_dump(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_dump_str(&text, path)
    }
}

/// A reduction request: method, target dimensionality and seeds. `fit`
/// consumes raw counts; normalization happens internally where the method
/// requires or requests it.
#[derive(Debug, Clone)]
pub enum DrSpec {
    /// Soft spherical k-means on L2-normalized rows.
    Fuzzy { params: FuzzyParams },
    /// Truncated SVD of the count matrix (optionally of normalized rows).
    Svd {
        k: usize,
        seed: u64,
        normalize_rows: bool,
    },
    /// Truncated SVD of the implicitly centered count matrix (optionally of
    /// normalized rows).
    Pca {
        k: usize,
        seed: u64,
        normalize_rows: bool,
    },
}

impl DrSpec {
    pub fn fuzzy(k: usize, q: f64) -> Self {
        DrSpec::Fuzzy {
            params: FuzzyParams::new(k, q),
        }
    }

    pub fn svd(k: usize) -> Self {
        DrSpec::Svd {
            k,
            seed: 0,
            normalize_rows: false,
        }
    }

    pub fn pca(k: usize) -> Self {
        DrSpec::Pca {
            k,
            seed: 0,
            normalize_rows: false,
        }
    }

    pub fn method(&self) -> Method {
        match self {
            DrSpec::Fuzzy { .. } => Method::Fc,
            DrSpec::Svd { .. } => Method::Svd,
            DrSpec::Pca { .. } => Method::Pca,
        }
    }

    pub fn k(&self) -> usize {
        match self {
            DrSpec::Fuzzy { params } => params.k,
            DrSpec::Svd { k, .. } | DrSpec::Pca { k, .. } => *k,
        }
    }

    pub fn fuzzifier(&self) -> Option<f64> {
        match self {
            DrSpec::Fuzzy { params } => Some(params.q),
            _ => None,
        }
    }

    /// Same spec with a replaced seed; used to derive per-fold seeds.
    pub fn with_seed(&self, seed: u64) -> Self {
        match self {
            DrSpec::Fuzzy { params } => DrSpec::Fuzzy {
                params: params.clone().with_seed(seed),
            },
            DrSpec::Svd {
                k, normalize_rows, ..
            } => DrSpec::Svd {
                k: *k,
                seed,
                normalize_rows: *normalize_rows,
            },
            DrSpec::Pca {
                k, normalize_rows, ..
            } => DrSpec::Pca {
                k: *k,
                seed,
                normalize_rows: *normalize_rows,
            },
        }
    }

    /// Fits the reduction on training rows and returns the fitted model
    /// together with the training features.
    pub fn fit(&self, x_train: &SparseDocMatrix) -> Result<(DrModel, ReducedMatrix)> {
        match self {
            DrSpec::Fuzzy { params } => {
                let normalized = x_train.l2_normalize_rows();
                let (model, memberships) = fuzzy::fit(&normalized, params)?;
                Ok((DrModel::Fuzzy(model), memberships.into()))
            }
            DrSpec::Svd {
                k,
                seed,
                normalize_rows,
            } => {
                let x = maybe_normalize(x_train, *normalize_rows);
                let (reduced, factors) = svd_reduce(&x, *k, *seed)?;
                Ok((
                    DrModel::Svd {
                        factors,
                        normalize_rows: *normalize_rows,
                    },
                    reduced,
                ))
            }
            DrSpec::Pca {
                k,
                seed,
                normalize_rows,
            } => {
                let x = maybe_normalize(x_train, *normalize_rows);
                let (reduced, factors) = pca_reduce(&x, *k, *seed)?;
                Ok((
                    DrModel::Pca {
                        factors,
                        normalize_rows: *normalize_rows,
                    },
                    reduced,
                ))
            }
        }
    }
}

fn maybe_normalize(x: &SparseDocMatrix, normalize: bool) -> SparseDocMatrix {
    if normalize {
        x.l2_normalize_rows()
    } else {
        x.clone()
    }
}

/// A fitted reduction, able to transform unseen rows.
#[derive(Debug, Clone)]
pub enum DrModel {
    Fuzzy(FuzzyModel),
    Svd {
        factors: SvdFactors,
        normalize_rows: bool,
    },
    Pca {
        factors: PcaFactors,
        normalize_rows: bool,
    },
}

impl DrModel {
    pub fn method(&self) -> Method {
        match self {
            DrModel::Fuzzy(_) => Method::Fc,
            DrModel::Svd { .. } => Method::Svd,
            DrModel::Pca { .. } => Method::Pca,
        }
    }

    /// Transforms rows with the frozen model: fuzzy memberships against
    /// fixed prototypes, `x * V` for SVD, `(x - mean) * P^T` for PCA.
    pub fn transform(&self, x: &SparseDocMatrix) -> Result<ReducedMatrix> {
        match self {
            DrModel::Fuzzy(model) => model.reduce(&x.l2_normalize_rows()),
            DrModel::Svd {
                factors,
                normalize_rows,
            } => factors.transform(&maybe_normalize(x, *normalize_rows)),
            DrModel::Pca {
                factors,
                normalize_rows,
            } => factors.transform(&maybe_normalize(x, *normalize_rows)),
        }
    }

    /// Stable hash of the fitted transform; used to assert that test-fold
    /// perturbations cannot leak into a fold's model.
    pub fn fingerprint(&self) -> u64 {
        match self {
            DrModel::Fuzzy(m) => m.fingerprint(),
            DrModel::Svd { factors, .. } => factors.fingerprint(),
            DrModel::Pca { factors, .. } => factors.fingerprint(),
        }
    }
}
