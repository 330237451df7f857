//! Classifiers and the cross-validation protocol used to score reduced
//! feature spaces.
//!
//! Three deliberately different families: a random forest (bagged CART
//! trees, Gini splits), discrete AdaBoost over depth-1 stumps, and an
//! L2-regularized logistic model. All of them consume the dense
//! [`ReducedMatrix`](crate::dr::ReducedMatrix) rows, predict a binary label,
//! and are deterministic for a fixed seed.

mod boost;
mod cv;
mod forest;
mod logistic;

pub use boost::{train_adaboost, AdaBoostModel, BoostParams, Stump};
pub use cv::{
    accuracy, cross_validate, evaluate, stratified_kfold, ConfusionMatrix, CvReport,
};
pub use forest::{train_random_forest, ForestParams, RandomForestModel};
pub use logistic::{loss_and_grad, train_linear, LinearParams, LogisticModel};

use crate::dr::ReducedMatrix;
use crate::error::{Error, Result};

/// Uniform prediction interface over the fitted classifiers.
pub trait Classifier {
    /// Feature count expected at prediction time.
    fn n_features(&self) -> usize;
    /// Predicts the label of one feature row; `true` is the positive class.
    fn predict(&self, x: &[f64]) -> bool;
    /// Stable hash of the fitted parameters; used by the leakage checks.
    fn fingerprint(&self) -> u64;
}

/// Classifier choice plus its parameters.
#[derive(Debug, Clone)]
pub enum ClassifierSpec {
    Forest(ForestParams),
    AdaBoost(BoostParams),
    Logistic(LinearParams),
}

/// A fitted classifier of any family.
#[derive(Debug, Clone)]
pub enum ClassifierModel {
    Forest(RandomForestModel),
    AdaBoost(AdaBoostModel),
    Logistic(LogisticModel),
}

impl ClassifierSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ClassifierSpec::Forest(_) => "forest",
            ClassifierSpec::AdaBoost(_) => "adaboost",
            ClassifierSpec::Logistic(_) => "logistic",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "forest" | "rf" => Ok(ClassifierSpec::Forest(ForestParams::default())),
            "adaboost" | "boost" => Ok(ClassifierSpec::AdaBoost(BoostParams::default())),
            "logistic" | "linear" => Ok(ClassifierSpec::Logistic(LinearParams::default())),
            other => Err(Error::InvalidParams(format!(
                "unknown classifier {other:?}"
            ))),
        }
    }

    /// Same spec with a replaced seed (a no-op for the seedless logistic
    /// model); used to derive per-fold seeds.
    pub fn with_seed(&self, seed: u64) -> Self {
        match self {
            ClassifierSpec::Forest(p) => {
                let mut p = p.clone();
                p.seed = seed;
                ClassifierSpec::Forest(p)
            }
            ClassifierSpec::AdaBoost(p) => {
                let mut p = p.clone();
                p.seed = seed;
                ClassifierSpec::AdaBoost(p)
            }
            ClassifierSpec::Logistic(p) => ClassifierSpec::Logistic(p.clone()),
        }
    }

    pub fn train(&self, features: &ReducedMatrix, labels: &[bool]) -> Result<ClassifierModel> {
        match self {
            ClassifierSpec::Forest(p) => {
                Ok(ClassifierModel::Forest(train_random_forest(features, labels, p)?))
            }
            ClassifierSpec::AdaBoost(p) => {
                Ok(ClassifierModel::AdaBoost(train_adaboost(features, labels, p)?))
            }
            ClassifierSpec::Logistic(p) => {
                Ok(ClassifierModel::Logistic(train_linear(features, labels, p)?))
            }
        }
    }
}

impl Classifier for ClassifierModel {
    fn n_features(&self) -> usize {
        match self {
            ClassifierModel::Forest(m) => m.n_features(),
            ClassifierModel::AdaBoost(m) => m.n_features(),
            ClassifierModel::Logistic(m) => m.n_features(),
        }
    }

    fn predict(&self, x: &[f64]) -> bool {
        match self {
            ClassifierModel::Forest(m) => m.predict(x),
            ClassifierModel::AdaBoost(m) => m.predict(x),
            ClassifierModel::Logistic(m) => m.predict(x),
        }
    }

    fn fingerprint(&self) -> u64 {
        match self {
            ClassifierModel::Forest(m) => m.fingerprint(),
            ClassifierModel::AdaBoost(m) => m.fingerprint(),
            ClassifierModel::Logistic(m) => m.fingerprint(),
        }
    }
}

pub(crate) fn check_two_classes(labels: &[bool]) -> Result<()> {
    let pos = labels.iter().filter(|&&l| l).count();
    if pos == 0 || pos == labels.len() {
        return Err(Error::SingleClass);
    }
    Ok(())
}
