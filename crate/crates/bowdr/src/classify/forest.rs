//! Random forest: CART trees with Gini splits on bootstrap samples and
//! random feature subsets per node. Prediction is a majority vote, ties go
//! to the negative class.

use ndarray::ArrayView2;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dr::ReducedMatrix;
use crate::error::Result;
use crate::util::{derive_seed, Fingerprint};

use super::{check_two_classes, Classifier};

#[derive(Debug, Clone)]
pub struct ForestParams {
    pub n_trees: usize,
    /// `None` grows trees until purity or sample exhaustion.
    pub max_depth: Option<usize>,
    /// Features examined per split; `None` means `floor(sqrt(d)).max(1)`.
    pub features_per_split: Option<usize>,
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 100,
            max_depth: None,
            features_per_split: None,
            bootstrap: true,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
enum Node {
    Leaf {
        label: bool,
    },
    Split {
        feature: usize,
        threshold: f64,
        /// `x[feature] <= threshold` goes left.
        left: Box<Node>,
        right: Box<Node>,
    },
}

impl Node {
    fn predict(&self, x: &[f64]) -> bool {
        match self {
            Node::Leaf { label } => *label,
            Node::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                if x[*feature] <= *threshold {
                    left.predict(x)
                } else {
                    right.predict(x)
                }
            }
        }
    }

    fn hash_into(&self, fp: &mut Fingerprint) {
        match self {
            Node::Leaf { label } => {
                fp.push_u64(u64::from(*label));
            }
            Node::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                fp.push_u64(1 + *feature as u64);
                fp.push_f64(*threshold);
                left.hash_into(fp);
                right.hash_into(fp);
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct RandomForestModel {
    trees: Vec<Node>,
    n_features: usize,
}

impl RandomForestModel {
    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn predict(&self, x: &[f64]) -> bool {
        let positive = self.trees.iter().filter(|t| t.predict(x)).count();
        // Strict majority; a tied vote is negative.
        positive * 2 > self.trees.len()
    }

    pub fn fingerprint(&self) -> u64 {
        let mut fp = Fingerprint::new();
        fp.push_u64(self.n_features as u64);
        for t in &self.trees {
            t.hash_into(&mut fp);
        }
        fp.finish()
    }
}

impl Classifier for RandomForestModel {
    fn n_features(&self) -> usize {
        self.n_features
    }
    fn predict(&self, x: &[f64]) -> bool {
        RandomForestModel::predict(self, x)
    }
    fn fingerprint(&self) -> u64 {
        RandomForestModel::fingerprint(self)
    }
}

/// Trains the ensemble. Each tree derives its own generator from
/// `(seed, tree index)`, so the forest is identical for any worker count.
pub fn train_random_forest(
    features: &ReducedMatrix,
    labels: &[bool],
    params: &ForestParams,
) -> Result<RandomForestModel> {
    check_two_classes(labels)?;
    assert_eq!(features.n_rows(), labels.len());
    let d = features.n_cols();
    let mtry = params.features_per_split.unwrap_or_else(|| {
        ((d as f64).sqrt().floor() as usize).clamp(1, d)
    });
    let x = features.values().view();

    let trees: Vec<Node> = (0..params.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(params.seed, "tree", t as u64));
            let n = labels.len();
            let sample: Vec<usize> = if params.bootstrap {
                (0..n).map(|_| rng.gen_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            grow(&x, labels, &sample, mtry, params.max_depth, 0, &mut rng)
        })
        .collect();

    Ok(RandomForestModel {
        trees,
        n_features: d,
    })
}

fn majority(labels: &[bool], sample: &[usize]) -> bool {
    let pos = sample.iter().filter(|&&j| labels[j]).count();
    // Ties go negative.
    pos * 2 > sample.len()
}

fn gini(pos: usize, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let p = pos as f64 / total as f64;
    1.0 - p * p - (1.0 - p) * (1.0 - p)
}

fn grow(
    x: &ArrayView2<'_, f64>,
    labels: &[bool],
    sample: &[usize],
    mtry: usize,
    max_depth: Option<usize>,
    depth: usize,
    rng: &mut ChaCha8Rng,
) -> Node {
    let pos = sample.iter().filter(|&&j| labels[j]).count();
    let pure = pos == 0 || pos == sample.len();
    let depth_capped = max_depth.is_some_and(|d| depth >= d);
    if pure || depth_capped || sample.len() < 2 {
        return Node::Leaf {
            label: majority(labels, sample),
        };
    }

    let d = x.ncols();
    let candidates: Vec<usize> = if mtry >= d {
        (0..d).collect()
    } else {
        // Partial Fisher-Yates draw of `mtry` distinct features, sorted so
        // the scan order (and its tie-breaking) is by feature index.
        let mut pool: Vec<usize> = (0..d).collect();
        for i in 0..mtry {
            let j = rng.gen_range(i..d);
            pool.swap(i, j);
        }
        let mut picked = pool[..mtry].to_vec();
        picked.sort_unstable();
        picked
    };

    let parent_gini = gini(pos, sample.len());
    // Best split: lowest weighted Gini, ties by lower feature then lower
    // threshold.
    let mut best: Option<(f64, usize, f64)> = None;
    let mut order: Vec<usize> = Vec::with_capacity(sample.len());
    for &f in &candidates {
        order.clear();
        order.extend_from_slice(sample);
        order.sort_by(|&a, &b| x[(a, f)].partial_cmp(&x[(b, f)]).unwrap());

        let total = order.len();
        let total_pos = pos;
        let mut left_pos = 0usize;
        for cut in 1..total {
            if labels[order[cut - 1]] {
                left_pos += 1;
            }
            let lo = x[(order[cut - 1], f)];
            let hi = x[(order[cut], f)];
            if lo == hi {
                continue;
            }
            let threshold = lo + (hi - lo) / 2.0;
            let left_n = cut;
            let right_n = total - cut;
            let weighted = (left_n as f64 * gini(left_pos, left_n)
                + right_n as f64 * gini(total_pos - left_pos, right_n))
                / total as f64;
            let better = match best {
                None => true,
                Some((g, bf, bt)) => {
                    weighted < g - 1e-15
                        || ((weighted - g).abs() <= 1e-15 && (f, threshold) < (bf, bt))
                }
            };
            if better {
                best = Some((weighted, f, threshold));
            }
        }
    }

    let (weighted, feature, threshold) = match best {
        Some(b) => b,
        // All candidate features constant on this sample.
        None => {
            return Node::Leaf {
                label: majority(labels, sample),
            }
        }
    };
    if weighted >= parent_gini - 1e-15 {
        return Node::Leaf {
            label: majority(labels, sample),
        };
    }

    let (left_sample, right_sample): (Vec<usize>, Vec<usize>) = sample
        .iter()
        .partition(|&&j| x[(j, feature)] <= threshold);
    let left = grow(x, labels, &left_sample, mtry, max_depth, depth + 1, rng);
    let right = grow(x, labels, &right_sample, mtry, max_depth, depth + 1, rng);
    Node::Split {
        feature,
        threshold,
        left: Box::new(left),
        right: Box::new(right),
    }
}
