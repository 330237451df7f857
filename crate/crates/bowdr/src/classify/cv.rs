//! Confusion matrices, accuracy, stratified folding and the leakage-free
//! cross-validation driver.
//!
//! Per fold the reduction is fitted on the training rows only; test rows go
//! through the frozen model's transform. Nothing about a fold's test rows
//! can influence that fold's fitted models.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::SparseDocMatrix;
use crate::dr::{DrSpec, Method};
use crate::error::{Error, Result};
use crate::util::{derive_seed, mean, population_std};

use super::{Classifier, ClassifierSpec};

/// Binary confusion counts; rows actual, columns predicted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub true_neg: usize,
    pub false_pos: usize,
    pub false_neg: usize,
    pub true_pos: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.true_neg + self.false_pos + self.false_neg + self.true_pos
    }

    pub fn count(&mut self, actual: bool, predicted: bool) {
        match (actual, predicted) {
            (false, false) => self.true_neg += 1,
            (false, true) => self.false_pos += 1,
            (true, false) => self.false_neg += 1,
            (true, true) => self.true_pos += 1,
        }
    }
}

/// `(TP + TN) / (TP + TN + FP + FN)`.
pub fn accuracy(cm: &ConfusionMatrix) -> Result<f64> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::EmptyMatrix);
    }
    Ok((cm.true_pos + cm.true_neg) as f64 / total as f64)
}

/// Stratified fold assignment: within each class the (seed-shuffled)
/// instances are dealt round-robin, so per-fold class proportions are within
/// one instance of the global ones. Requires every class to have at least
/// `folds` members.
pub fn stratified_kfold(labels: &[bool], folds: usize, seed: u64) -> Result<Vec<usize>> {
    if folds < 2 {
        return Err(Error::InvalidParams("folds must be >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![0usize; labels.len()];
    for (class, name) in [(false, "negative"), (true, "positive")] {
        let mut members: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == class)
            .map(|(j, _)| j)
            .collect();
        if members.len() < folds {
            return Err(Error::TooFewPerClass {
                class: name,
                count: members.len(),
                folds,
            });
        }
        members.shuffle(&mut rng);
        for (i, j) in members.into_iter().enumerate() {
            assignment[j] = i % folds;
        }
    }
    Ok(assignment)
}

/// Fold assignment used by [`cross_validate`]: stratified when feasible;
/// leave-one-out (`folds == n`) falls back to one instance per fold, since
/// single-instance folds cannot hold both classes.
fn fold_assignment(labels: &[bool], folds: usize, seed: u64) -> Result<Vec<usize>> {
    if folds == labels.len() {
        return Ok((0..labels.len()).collect());
    }
    stratified_kfold(labels, folds, seed)
}

/// Scores a fitted classifier on a labeled feature matrix.
pub fn evaluate<C: Classifier>(
    model: &C,
    features: &crate::dr::ReducedMatrix,
    labels: &[bool],
) -> Result<ConfusionMatrix> {
    if features.n_cols() != model.n_features() {
        return Err(Error::DimensionMismatch {
            expected: model.n_features(),
            got: features.n_cols(),
        });
    }
    assert_eq!(features.n_rows(), labels.len());
    let mut cm = ConfusionMatrix::default();
    for (j, &actual) in labels.iter().enumerate() {
        let predicted = model.predict(features.row(j).as_slice().unwrap());
        cm.count(actual, predicted);
    }
    Ok(cm)
}

/// Everything a cross-validation run reports.
#[derive(Debug, Clone, PartialEq)]
pub struct CvReport {
    pub method: Method,
    pub k: usize,
    pub fuzzifier: Option<f64>,
    pub classifier: String,
    pub folds: Vec<ConfusionMatrix>,
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    /// Population standard deviation across the fold accuracies.
    pub std_dev: f64,
    pub seed: u64,
}

impl CvReport {
    /// CSV row: dataset, method, k, fuzzifier (or NA), classifier, fold
    /// accuracies (semicolon-joined), mean, standard deviation, seed.
    pub fn csv_row(&self, dataset: &str) -> String {
        let fuzz = self
            .fuzzifier
            .map_or_else(|| "NA".to_string(), |q| q.to_string());
        let accs: Vec<String> = self.fold_accuracies.iter().map(|a| a.to_string()).collect();
        format!(
            "{},{},{},{},{},{},{},{},{}",
            dataset,
            self.method,
            self.k,
            fuzz,
            self.classifier,
            accs.join(";"),
            self.mean_accuracy,
            self.std_dev,
            self.seed
        )
    }
}

/// Cross-validates one (reduction, classifier) cell on raw counts.
///
/// Per-fold seeds for the reduction, the classifier and the folding itself
/// all derive from `seed`, so a report is reproducible from `(inputs,
/// seed)` alone.
pub fn cross_validate(
    x_raw: &SparseDocMatrix,
    labels: &[bool],
    dr: &DrSpec,
    classifier: &ClassifierSpec,
    folds: usize,
    seed: u64,
) -> Result<CvReport> {
    let n = x_raw.n_rows();
    if labels.len() != n {
        return Err(Error::InvalidParams(format!(
            "{} labels for {} rows",
            labels.len(),
            n
        )));
    }
    if folds < 2 || folds > n {
        return Err(Error::InvalidParams(format!(
            "folds = {folds} out of range [2, {n}]"
        )));
    }
    let assignment = fold_assignment(labels, folds, derive_seed(seed, "fold-split", 0))?;

    let mut fold_cms = Vec::with_capacity(folds);
    let mut fold_accs = Vec::with_capacity(folds);
    for fold in 0..folds {
        let train_idx: Vec<usize> = (0..n).filter(|&j| assignment[j] != fold).collect();
        let test_idx: Vec<usize> = (0..n).filter(|&j| assignment[j] == fold).collect();
        let x_train = x_raw.subset_rows(&train_idx);
        let x_test = x_raw.subset_rows(&test_idx);
        let y_train: Vec<bool> = train_idx.iter().map(|&j| labels[j]).collect();
        let y_test: Vec<bool> = test_idx.iter().map(|&j| labels[j]).collect();

        let dr_fold = dr.with_seed(derive_seed(seed, "dr", fold as u64));
        let (dr_model, train_features) = dr_fold.fit(&x_train)?;
        let test_features = dr_model.transform(&x_test)?;

        let clf_fold = classifier.with_seed(derive_seed(seed, "clf", fold as u64));
        let model = clf_fold.train(&train_features, &y_train)?;
        let cm = evaluate(&model, &test_features, &y_test)?;
        fold_accs.push(accuracy(&cm)?);
        fold_cms.push(cm);
    }

    Ok(CvReport {
        method: dr.method(),
        k: dr.k(),
        fuzzifier: dr.fuzzifier(),
        classifier: classifier.name().to_string(),
        mean_accuracy: mean(&fold_accs),
        std_dev: population_std(&fold_accs),
        folds: fold_cms,
        fold_accuracies: fold_accs,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{ForestParams, LinearParams};
    use rand::Rng;

    #[test]
    fn accuracy_arithmetic() {
        let cm = ConfusionMatrix {
            true_neg: 1,
            false_pos: 0,
            false_neg: 0,
            true_pos: 1,
        };
        assert_eq!(accuracy(&cm).unwrap(), 1.0);
        let cm = ConfusionMatrix {
            true_neg: 0,
            false_pos: 1,
            false_neg: 1,
            true_pos: 0,
        };
        assert_eq!(accuracy(&cm).unwrap(), 0.0);
        let cm = ConfusionMatrix {
            true_neg: 50,
            false_pos: 5,
            false_neg: 10,
            true_pos: 35,
        };
        assert_eq!(accuracy(&cm).unwrap(), 0.85);
        assert!(matches!(
            accuracy(&ConfusionMatrix::default()),
            Err(Error::EmptyMatrix)
        ));
    }

    #[test]
    fn accuracy_times_total_is_exact_integer_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let cm = ConfusionMatrix {
                true_neg: rng.gen_range(0..50),
                false_pos: rng.gen_range(0..50),
                false_neg: rng.gen_range(0..50),
                true_pos: rng.gen_range(1..50),
            };
            let acc = accuracy(&cm).unwrap();
            let rebuilt = acc * cm.total() as f64;
            assert_eq!(rebuilt.round() as usize, cm.true_pos + cm.true_neg);
        }
    }

    #[test]
    fn inverted_predictions_swap_the_matrix() {
        let actual = [true, true, false, false, true];
        let predicted = [true, false, false, true, true];
        let mut cm = ConfusionMatrix::default();
        let mut inv = ConfusionMatrix::default();
        for (&a, &p) in actual.iter().zip(&predicted) {
            cm.count(a, p);
            inv.count(a, !p);
        }
        assert_eq!(cm.true_pos, inv.false_neg);
        assert_eq!(cm.false_neg, inv.true_pos);
        assert_eq!(cm.true_neg, inv.false_pos);
        assert_eq!(cm.false_pos, inv.true_neg);
    }

    #[test]
    fn balanced_ten_instances_five_folds() {
        let labels: Vec<bool> = (0..10).map(|i| i % 2 == 0).collect();
        let a = stratified_kfold(&labels, 5, 0).unwrap();
        for fold in 0..5 {
            let pos = labels
                .iter()
                .enumerate()
                .filter(|(j, &l)| a[*j] == fold && l)
                .count();
            let neg = labels
                .iter()
                .enumerate()
                .filter(|(j, &l)| a[*j] == fold && !l)
                .count();
            assert_eq!((pos, neg), (1, 1), "fold {fold}");
        }
    }

    #[test]
    fn two_folds_on_four_instances_split_evenly() {
        let labels = [true, true, false, false];
        let a = stratified_kfold(&labels, 2, 9).unwrap();
        let f0 = a.iter().filter(|&&f| f == 0).count();
        assert_eq!(f0, 2);
    }

    #[test]
    fn kfold_is_deterministic_and_respects_minimums() {
        let labels: Vec<bool> = (0..20).map(|i| i % 4 == 0).collect();
        assert_eq!(
            stratified_kfold(&labels, 5, 33).unwrap(),
            stratified_kfold(&labels, 5, 33).unwrap()
        );
        assert!(matches!(
            stratified_kfold(&labels, 6, 33),
            Err(Error::TooFewPerClass { .. })
        ));
        assert!(stratified_kfold(&labels, 1, 0).is_err());
    }

    #[test]
    fn folds_partition_all_instances() {
        let labels: Vec<bool> = (0..37).map(|i| i % 3 == 0).collect();
        let a = stratified_kfold(&labels, 4, 8).unwrap();
        let mut counts = vec![0usize; 4];
        for &f in &a {
            assert!(f < 4);
            counts[f] += 1;
        }
        assert_eq!(counts.iter().sum::<usize>(), 37);
        // Per-class proportions within one instance of even.
        for class in [true, false] {
            let sizes: Vec<usize> = (0..4)
                .map(|fold| {
                    labels
                        .iter()
                        .enumerate()
                        .filter(|(j, &l)| l == class && a[*j] == fold)
                        .count()
                })
                .collect();
            let max = sizes.iter().max().unwrap();
            let min = sizes.iter().min().unwrap();
            assert!(max - min <= 1);
        }
    }

    fn tiny_two_topic_matrix(n: usize) -> (SparseDocMatrix, Vec<bool>) {
        // Positive docs use columns 0..3, negatives 3..6.
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for j in 0..n {
            let positive = j % 2 == 0;
            let base = if positive { 0u32 } else { 3u32 };
            let mut row = Vec::new();
            for c in 0..3u32 {
                let v = rng.gen_range(1..4) as f64;
                row.push((base + c, v));
            }
            rows.push(row);
            labels.push(positive);
        }
        (SparseDocMatrix::from_rows(6, &rows), labels)
    }

    #[test]
    fn leave_one_out_runs_and_aggregates_n_folds() {
        let (x, labels) = tiny_two_topic_matrix(6);
        let report = cross_validate(
            &x,
            &labels,
            &DrSpec::svd(2),
            &ClassifierSpec::Logistic(LinearParams::default()),
            6,
            5,
        )
        .unwrap();
        assert_eq!(report.folds.len(), 6);
        assert_eq!(report.fold_accuracies.len(), 6);
        // Mean/std recomputable from the per-fold values.
        assert!((report.mean_accuracy - mean(&report.fold_accuracies)).abs() < 1e-15);
        assert!((report.std_dev - population_std(&report.fold_accuracies)).abs() < 1e-15);
    }

    #[test]
    fn same_seed_gives_identical_reports() {
        let (x, labels) = tiny_two_topic_matrix(20);
        let spec = DrSpec::fuzzy(2, 1.5);
        let clf = ClassifierSpec::Forest(ForestParams {
            n_trees: 15,
            ..ForestParams::default()
        });
        let a = cross_validate(&x, &labels, &spec, &clf, 5, 42).unwrap();
        let b = cross_validate(&x, &labels, &spec, &clf, 5, 42).unwrap();
        assert_eq!(a, b);
        let c = cross_validate(&x, &labels, &spec, &clf, 5, 43).unwrap();
        assert!(a.seed != c.seed);
    }

    #[test]
    fn separable_corpus_scores_high_with_every_method() {
        let (x, labels) = tiny_two_topic_matrix(100);
        for dr in [DrSpec::fuzzy(2, 2.0), DrSpec::svd(2), DrSpec::pca(2)] {
            let report = cross_validate(
                &x,
                &labels,
                &dr,
                &ClassifierSpec::Logistic(LinearParams::default()),
                5,
                7,
            )
            .unwrap();
            assert!(
                report.mean_accuracy >= 0.95,
                "{:?}: {}",
                report.method,
                report.mean_accuracy
            );
        }
    }

    #[test]
    fn perturbing_test_rows_never_changes_fold_models() {
        // Fingerprint check on fold 0: rebuild with mutated test rows and
        // compare the fitted reduction and classifier hashes.
        let (x, labels) = tiny_two_topic_matrix(20);
        let folds = 5;
        let seed = 11;
        let assignment = fold_assignment(&labels, folds, derive_seed(seed, "fold-split", 0)).unwrap();
        let train_idx: Vec<usize> = (0..20).filter(|&j| assignment[j] != 0).collect();
        let test_idx: Vec<usize> = (0..20).filter(|&j| assignment[j] == 0).collect();

        let fit_fold = |matrix: &SparseDocMatrix| {
            let x_train = matrix.subset_rows(&train_idx);
            let y_train: Vec<bool> = train_idx.iter().map(|&j| labels[j]).collect();
            let dr = DrSpec::fuzzy(2, 1.5).with_seed(derive_seed(seed, "dr", 0));
            let (dr_model, feats) = dr.fit(&x_train).unwrap();
            let clf = ClassifierSpec::Forest(ForestParams {
                n_trees: 10,
                ..ForestParams::default()
            })
            .with_seed(derive_seed(seed, "clf", 0));
            let model = clf.train(&feats, &y_train).unwrap();
            use crate::classify::Classifier as _;
            (dr_model.fingerprint(), model.fingerprint())
        };

        let baseline = fit_fold(&x);

        // Perturb every test row of the raw matrix.
        let mut rows: Vec<Vec<(u32, f64)>> = (0..20)
            .map(|j| {
                let r = x.row(j);
                r.cols.iter().copied().zip(r.vals.iter().copied()).collect()
            })
            .collect();
        for &j in &test_idx {
            for entry in rows[j].iter_mut() {
                entry.1 += 3.0;
            }
            rows[j].push((5, 17.0));
            rows[j].sort_by_key(|e| e.0);
            rows[j].dedup_by_key(|e| e.0);
        }
        let perturbed = SparseDocMatrix::from_rows(6, &rows);
        let after = fit_fold(&perturbed);
        assert_eq!(baseline, after);
    }

    #[test]
    fn csv_row_shape() {
        let (x, labels) = tiny_two_topic_matrix(10);
        let report = cross_validate(
            &x,
            &labels,
            &DrSpec::fuzzy(2, 1.5),
            &ClassifierSpec::Logistic(LinearParams::default()),
            5,
            3,
        )
        .unwrap();
        let row = report.csv_row("unit");
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 9);
        assert_eq!(fields[0], "unit");
        assert_eq!(fields[1], "FC");
        assert_eq!(fields[2], "2");
        assert_eq!(fields[3], "1.5");
        assert_eq!(fields[4], "logistic");
        assert_eq!(fields[5].split(';').count(), 5);
        assert_eq!(fields[8], "3");

        let report = cross_validate(
            &x,
            &labels,
            &DrSpec::svd(2),
            &ClassifierSpec::Logistic(LinearParams::default()),
            5,
            3,
        )
        .unwrap();
        let row = report.csv_row("unit");
        assert_eq!(row.split(',').nth(3).unwrap(), "NA");
    }
}
