//! The sweep runner: evaluates every `(method-variant, k, classifier)` cell,
//! persists results as CSV, and resumes cleanly from a partial file.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::classify::{cross_validate, ClassifierSpec};
use crate::corpus::{
    build_vocabulary, load_class_dirs, load_labeled_lines, load_reuters_sgml, vectorize,
    LabeledCorpus, SparseDocMatrix, TokenizerConfig,
};
use crate::dr::{DrSpec, Method};
use crate::error::{Error, Result};
use crate::fuzzy::FuzzyParams;
use crate::util::{derive_seed, fnv1a64, mean};

use super::config::{DatasetSpec, ExperimentConfig};
use super::synth;

pub const RESULTS_FILE: &str = "results.csv";
pub const TIMINGS_FILE: &str = "timings.csv";
const CSV_HEADER: &str =
    "dataset,method,k,fuzzifier,classifier,fold_accuracies,mean_accuracy,std_dev,seed,status";

/// Identity of one sweep cell.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct CellSpec {
    pub method: Method,
    pub fuzzifier: Option<f64>,
    pub k: usize,
    pub classifier: String,
}

impl CellSpec {
    fn key(&self) -> String {
        format!(
            "{}|{}|{}|{}",
            self.method,
            self.fuzzifier.map_or("NA".into(), |q| q.to_string()),
            self.k,
            self.classifier
        )
    }
}

/// Display label for a method variant: `FC-1.5`, `FC-2`, `PCA`, `SVD`.
pub fn variant_label(method: Method, fuzzifier: Option<f64>) -> String {
    match (method, fuzzifier) {
        (Method::Fc, Some(q)) => format!("FC-{q}"),
        (m, _) => m.to_string(),
    }
}

/// What happened to a cell.
#[derive(Debug, Clone, PartialEq)]
pub enum CellOutcome {
    Ok {
        fold_accuracies: Vec<f64>,
        mean_accuracy: f64,
        std_dev: f64,
    },
    Failed {
        reason: String,
    },
}

/// One evaluated cell.
#[derive(Debug, Clone)]
pub struct CellResult {
    pub dataset: String,
    pub method: Method,
    pub fuzzifier: Option<f64>,
    pub k: usize,
    pub classifier: String,
    pub seed: u64,
    pub outcome: CellOutcome,
    /// Wall time of this run's evaluation; `None` when resumed from file.
    pub wall: Option<Duration>,
}

impl CellResult {
    pub fn variant(&self) -> String {
        variant_label(self.method, self.fuzzifier)
    }

    pub fn mean_accuracy(&self) -> Option<f64> {
        match &self.outcome {
            CellOutcome::Ok { mean_accuracy, .. } => Some(*mean_accuracy),
            CellOutcome::Failed { .. } => None,
        }
    }

    fn csv_row(&self) -> String {
        let fuzz = self.fuzzifier.map_or("NA".into(), |q| q.to_string());
        match &self.outcome {
            CellOutcome::Ok {
                fold_accuracies,
                mean_accuracy,
                std_dev,
            } => {
                let accs: Vec<String> = fold_accuracies.iter().map(|a| a.to_string()).collect();
                format!(
                    "{},{},{},{},{},{},{},{},{},ok",
                    self.dataset,
                    self.method,
                    self.k,
                    fuzz,
                    self.classifier,
                    accs.join(";"),
                    mean_accuracy,
                    std_dev,
                    self.seed
                )
            }
            CellOutcome::Failed { reason } => format!(
                "{},{},{},{},{},,,,{},failed: {}",
                self.dataset,
                self.method,
                self.k,
                fuzz,
                self.classifier,
                self.seed,
                reason.replace(',', ";").replace('\n', " ")
            ),
        }
    }
}

/// Classifier-averaged accuracy for one `(variant, k)`; emitted only when
/// every configured classifier succeeded there.
#[derive(Debug, Clone, PartialEq)]
pub struct AvgRow {
    pub variant: String,
    pub k: usize,
    pub avg_accuracy: f64,
}

/// All cells of one sweep, in canonical order.
#[derive(Debug, Clone)]
pub struct ResultsTable {
    pub dataset: String,
    pub cells: Vec<CellResult>,
    pub n_classifiers: usize,
}

impl ResultsTable {
    /// Arithmetic mean of the per-classifier mean accuracies for each
    /// `(variant, k)` with a complete set of successful cells.
    pub fn averaged(&self) -> Vec<AvgRow> {
        let mut out = Vec::new();
        let mut seen: Vec<(String, usize)> = Vec::new();
        for cell in &self.cells {
            let key = (cell.variant(), cell.k);
            if seen.contains(&key) {
                continue;
            }
            seen.push(key.clone());
            let members: Vec<&CellResult> = self
                .cells
                .iter()
                .filter(|c| c.variant() == key.0 && c.k == key.1)
                .collect();
            if members.len() != self.n_classifiers {
                continue;
            }
            let means: Option<Vec<f64>> = members.iter().map(|c| c.mean_accuracy()).collect();
            if let Some(means) = means {
                out.push(AvgRow {
                    variant: key.0,
                    k: key.1,
                    avg_accuracy: mean(&means),
                });
            }
        }
        out
    }

    /// The `(k, averaged accuracy)` series of one variant, k ascending.
    pub fn series(&self, variant: &str) -> Vec<(usize, f64)> {
        let mut pts: Vec<(usize, f64)> = self
            .averaged()
            .into_iter()
            .filter(|r| r.variant == variant)
            .map(|r| (r.k, r.avg_accuracy))
            .collect();
        pts.sort_by_key(|p| p.0);
        pts
    }

    pub fn variants(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in &self.cells {
            let v = c.variant();
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for cell in &self.cells {
            s.push_str(&cell.csv_row());
            s.push('\n');
        }
        s
    }
}

fn parse_results_csv(text: &str, path: &Path) -> Result<Vec<CellResult>> {
    let bad = |line: usize, reason: String| Error::MalformedDump {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        Some((_, other)) => {
            return Err(bad(1, format!("unexpected header {other:?}")));
        }
        None => return Ok(Vec::new()),
    }
    let mut out = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.splitn(10, ',').collect();
        if fields.len() != 10 {
            return Err(bad(idx + 1, format!("expected 10 fields, got {}", fields.len())));
        }
        let method: Method = fields[1]
            .parse()
            .map_err(|_| bad(idx + 1, format!("bad method {:?}", fields[1])))?;
        let k: usize = fields[2]
            .parse()
            .map_err(|_| bad(idx + 1, format!("bad k {:?}", fields[2])))?;
        let fuzzifier = if fields[3] == "NA" {
            None
        } else {
            Some(
                fields[3]
                    .parse::<f64>()
                    .map_err(|_| bad(idx + 1, format!("bad fuzzifier {:?}", fields[3])))?,
            )
        };
        let seed: u64 = fields[8]
            .parse()
            .map_err(|_| bad(idx + 1, format!("bad seed {:?}", fields[8])))?;
        let outcome = if fields[9] == "ok" {
            let accs: Vec<f64> = fields[5]
                .split(';')
                .map(|a| {
                    a.parse::<f64>()
                        .map_err(|_| bad(idx + 1, format!("bad accuracy {a:?}")))
                })
                .collect::<Result<_>>()?;
            CellOutcome::Ok {
                mean_accuracy: fields[6]
                    .parse()
                    .map_err(|_| bad(idx + 1, "bad mean".into()))?,
                std_dev: fields[7]
                    .parse()
                    .map_err(|_| bad(idx + 1, "bad std dev".into()))?,
                fold_accuracies: accs,
            }
        } else {
            CellOutcome::Failed {
                reason: fields[9]
                    .strip_prefix("failed: ")
                    .unwrap_or(fields[9])
                    .to_string(),
            }
        };
        out.push(CellResult {
            dataset: fields[0].to_string(),
            method,
            fuzzifier,
            k,
            classifier: fields[4].to_string(),
            seed,
            outcome,
            wall: None,
        });
    }
    Ok(out)
}

/// Loads a dataset spec into the count matrix plus labels.
pub fn load_dataset(
    spec: &DatasetSpec,
    tokenizer: &TokenizerConfig,
    seed: u64,
) -> Result<(SparseDocMatrix, Vec<bool>, String)> {
    let corpus: LabeledCorpus = match spec {
        DatasetSpec::Lines {
            path,
            positive,
            negative,
        } => load_labeled_lines(path, positive, negative.as_deref())?,
        DatasetSpec::Reuters {
            paths,
            positive_topic,
        } => {
            let mut files = Vec::new();
            for p in paths {
                if p.is_dir() {
                    let mut found: Vec<PathBuf> = fs::read_dir(p)
                        .map_err(|source| Error::Io {
                            path: p.clone(),
                            source,
                        })?
                        .filter_map(|e| e.ok().map(|e| e.path()))
                        .filter(|f| f.extension().is_some_and(|x| x == "sgm"))
                        .collect();
                    found.sort();
                    files.extend(found);
                } else {
                    files.push(p.clone());
                }
            }
            if files.is_empty() {
                return Err(Error::MissingDirectory(
                    paths.first().cloned().unwrap_or_default(),
                ));
            }
            load_reuters_sgml(&files, positive_topic)?.0
        }
        DatasetSpec::ClassDirs {
            root,
            positive_dir,
            negative_sample,
        } => load_class_dirs(root, positive_dir, *negative_sample, derive_seed(seed, "sample", 0))?,
        DatasetSpec::SynthSeparable { n, words_per_class } => {
            synth::two_block_corpus(*n, *words_per_class, derive_seed(seed, "synth", 0))?
        }
        DatasetSpec::SynthImbalanced {
            n,
            positive_fraction,
        } => synth::imbalanced_topic_corpus(
            *n,
            *positive_fraction,
            derive_seed(seed, "synth", 0),
        )?,
    };
    let vocab = build_vocabulary(&corpus, tokenizer)?;
    let x = vectorize(&corpus, &vocab, tokenizer);
    Ok((x, corpus.labels().to_vec(), spec.label()))
}

fn enumerate_cells(cfg: &ExperimentConfig) -> Vec<CellSpec> {
    let mut cells = Vec::new();
    for method in &cfg.methods {
        let fuzzifiers: Vec<Option<f64>> = match method {
            Method::Fc => cfg.fuzzifiers.iter().map(|&q| Some(q)).collect(),
            _ => vec![None],
        };
        for fuzzifier in fuzzifiers {
            for &k in &cfg.dims {
                for classifier in &cfg.classifiers {
                    cells.push(CellSpec {
                        method: *method,
                        fuzzifier,
                        k,
                        classifier: classifier.clone(),
                    });
                }
            }
        }
    }
    cells
}

fn cell_dr_spec(cell: &CellSpec, cfg: &ExperimentConfig) -> DrSpec {
    match cell.method {
        Method::Fc => {
            let mut params = FuzzyParams::new(cell.k, cell.fuzzifier.expect("fc has q"));
            params.n_restarts = cfg.restarts;
            DrSpec::Fuzzy { params }
        }
        Method::Svd => DrSpec::Svd {
            k: cell.k,
            seed: 0,
            normalize_rows: cfg.normalize_linear,
        },
        Method::Pca => DrSpec::Pca {
            k: cell.k,
            seed: 0,
            normalize_rows: cfg.normalize_linear,
        },
    }
}

fn evaluate_cell(
    cell: &CellSpec,
    x: &SparseDocMatrix,
    labels: &[bool],
    dataset: &str,
    cfg: &ExperimentConfig,
) -> CellResult {
    let seed = derive_seed(cfg.seed, "cell", fnv1a64(cell.key().as_bytes()));
    let start = Instant::now();
    let outcome = (|| -> Result<CellOutcome> {
        let dr = cell_dr_spec(cell, cfg);
        let clf = ClassifierSpec::parse(&cell.classifier)?;
        let report = cross_validate(x, labels, &dr, &clf, cfg.folds, seed)?;
        Ok(CellOutcome::Ok {
            fold_accuracies: report.fold_accuracies,
            mean_accuracy: report.mean_accuracy,
            std_dev: report.std_dev,
        })
    })()
    .unwrap_or_else(|err| CellOutcome::Failed {
        reason: err.to_string(),
    });
    CellResult {
        dataset: dataset.to_string(),
        method: cell.method,
        fuzzifier: cell.fuzzifier,
        k: cell.k,
        classifier: cell.classifier.clone(),
        seed,
        outcome,
        wall: Some(start.elapsed()),
    }
}

/// Runs the sweep on an already-vectorized dataset. Cells already present in
/// `out_dir/results.csv` are reused, missing ones are computed (in
/// parallel), and all output files are rewritten in canonical order.
pub fn run_sweep(
    x: &SparseDocMatrix,
    labels: &[bool],
    dataset: &str,
    cfg: &ExperimentConfig,
) -> Result<ResultsTable> {
    cfg.validate()?;
    let min_dim = x.n_rows().min(x.n_cols());
    if let Some(&bad) = cfg.dims.iter().find(|&&k| k > min_dim) {
        return Err(Error::InvalidK { k: bad, max: min_dim });
    }

    fs::create_dir_all(&cfg.out_dir).map_err(|source| Error::Io {
        path: cfg.out_dir.clone(),
        source,
    })?;
    let results_path = cfg.out_dir.join(RESULTS_FILE);
    let mut done: Vec<CellResult> = Vec::new();
    if results_path.exists() {
        let text = fs::read_to_string(&results_path).map_err(|source| Error::Io {
            path: results_path.clone(),
            source,
        })?;
        done = parse_results_csv(&text, &results_path)?;
        if let Some(foreign) = done.iter().find(|c| c.dataset != dataset) {
            return Err(Error::InvalidConfig {
                path: results_path.clone(),
                line: 0,
                reason: format!(
                    "existing results are for dataset {:?}, not {dataset:?}",
                    foreign.dataset
                ),
            });
        }
    }

    let cells = enumerate_cells(cfg);
    let missing: Vec<&CellSpec> = cells
        .iter()
        .filter(|c| {
            !done.iter().any(|d| {
                d.method == c.method
                    && d.fuzzifier == c.fuzzifier
                    && d.k == c.k
                    && d.classifier == c.classifier
            })
        })
        .collect();

    let computed: Vec<CellResult> = missing
        .par_iter()
        .map(|cell| evaluate_cell(cell, x, labels, dataset, cfg))
        .collect();

    // Canonical order regardless of which cells were resumed.
    let mut ordered = Vec::with_capacity(cells.len());
    for cell in &cells {
        let found = done
            .iter()
            .chain(computed.iter())
            .find(|d| {
                d.method == cell.method
                    && d.fuzzifier == cell.fuzzifier
                    && d.k == cell.k
                    && d.classifier == cell.classifier
            })
            .expect("every cell resumed or computed");
        ordered.push(found.clone());
    }
    let table = ResultsTable {
        dataset: dataset.to_string(),
        cells: ordered,
        n_classifiers: cfg.classifiers.len(),
    };

    fs::write(&results_path, table.to_csv()).map_err(|source| Error::Io {
        path: results_path.clone(),
        source,
    })?;
    write_timings(&table, &cfg.out_dir.join(TIMINGS_FILE))?;
    super::plot::emit_plot_data(&table, &cfg.out_dir)?;
    Ok(table)
}

/// Loads the dataset named by the config and runs the sweep.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultsTable> {
    let (x, labels, dataset) = load_dataset(&cfg.dataset, &cfg.tokenizer, cfg.seed)?;
    run_sweep(&x, &labels, &dataset, cfg)
}

/// Wall times of the cells computed in this run; resumed cells have no
/// fresh timing. Excluded from the byte-determinism guarantee.
fn write_timings(table: &ResultsTable, path: &Path) -> Result<()> {
    let mut s = String::from("dataset,variant,k,classifier,wall_ms\n");
    for cell in &table.cells {
        if let Some(wall) = cell.wall {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                cell.dataset,
                cell.variant(),
                cell.k,
                cell.classifier,
                wall.as_millis()
            ));
        }
    }
    fs::write(path, s).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
