//! Experiment configuration: dataset specs, the flat `key=value` config
//! file, and flag overrides (flags win).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::corpus::TokenizerConfig;
use crate::dr::Method;
use crate::error::{Error, Result};

/// Where a labeled corpus comes from.
#[derive(Debug, Clone)]
pub enum DatasetSpec {
    /// `label<TAB>text` file.
    Lines {
        path: PathBuf,
        positive: String,
        negative: Option<String>,
    },
    /// Reuters-21578 SGML files (a directory of `*.sgm` or explicit files).
    Reuters {
        paths: Vec<PathBuf>,
        positive_topic: String,
    },
    /// Directory-per-class layout.
    ClassDirs {
        root: PathBuf,
        positive_dir: String,
        negative_sample: Option<usize>,
    },
    /// Synthetic separable corpus (two disjoint vocabularies).
    SynthSeparable { n: usize, words_per_class: usize },
    /// Synthetic imbalanced topic corpus.
    SynthImbalanced { n: usize, positive_fraction: f64 },
}

impl DatasetSpec {
    /// Parses the CLI form: `lines:PATH`, `reuters:DIR_OR_FILE`,
    /// `dirs:ROOT`, `synth:separable[,n=N]`, `synth:imbalanced[,n=N,pos=F]`.
    /// Non-synthetic specs need `positive`.
    pub fn parse(
        spec: &str,
        positive: Option<&str>,
        negative: Option<&str>,
        negative_sample: Option<usize>,
    ) -> Result<Self> {
        let bad = |msg: String| Error::InvalidParams(msg);
        let (kind, rest) = spec
            .split_once(':')
            .ok_or_else(|| bad(format!("dataset spec {spec:?} must be kind:value")))?;
        let need_positive = || {
            positive
                .map(str::to_string)
                .ok_or_else(|| bad("--positive is required for this dataset".into()))
        };
        match kind {
            "lines" => Ok(DatasetSpec::Lines {
                path: PathBuf::from(rest),
                positive: need_positive()?,
                negative: negative.map(str::to_string),
            }),
            "reuters" => Ok(DatasetSpec::Reuters {
                paths: vec![PathBuf::from(rest)],
                positive_topic: need_positive()?,
            }),
            "dirs" => Ok(DatasetSpec::ClassDirs {
                root: PathBuf::from(rest),
                positive_dir: need_positive()?,
                negative_sample,
            }),
            "synth" => {
                let mut parts = rest.split(',');
                let which = parts.next().unwrap_or_default();
                let mut n = 400usize;
                let mut pos = 0.05f64;
                let mut words = 50usize;
                for p in parts {
                    let (key, value) = p
                        .split_once('=')
                        .ok_or_else(|| bad(format!("bad synth parameter {p:?}")))?;
                    match key {
                        "n" => n = value.parse().map_err(|_| bad(format!("bad n {value:?}")))?,
                        "pos" => {
                            pos = value.parse().map_err(|_| bad(format!("bad pos {value:?}")))?
                        }
                        "words" => {
                            words =
                                value.parse().map_err(|_| bad(format!("bad words {value:?}")))?
                        }
                        other => return Err(bad(format!("unknown synth parameter {other:?}"))),
                    }
                }
                match which {
                    "separable" => Ok(DatasetSpec::SynthSeparable {
                        n,
                        words_per_class: words,
                    }),
                    "imbalanced" => Ok(DatasetSpec::SynthImbalanced {
                        n,
                        positive_fraction: pos,
                    }),
                    other => Err(bad(format!("unknown synth corpus {other:?}"))),
                }
            }
            other => Err(bad(format!("unknown dataset kind {other:?}"))),
        }
    }

    /// Short name used in result rows and file names.
    pub fn label(&self) -> String {
        match self {
            DatasetSpec::Lines { path, .. } => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "lines".into()),
            DatasetSpec::Reuters { .. } => "reuters".into(),
            DatasetSpec::ClassDirs { root, .. } => root
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "dirs".into()),
            DatasetSpec::SynthSeparable { .. } => "synth-separable".into(),
            DatasetSpec::SynthImbalanced { .. } => "synth-imbalanced".into(),
        }
    }
}

/// Full sweep configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub dataset: DatasetSpec,
    pub tokenizer: TokenizerConfig,
    /// Reduced dimensionalities to sweep (sorted, deduplicated).
    pub dims: Vec<usize>,
    pub methods: Vec<Method>,
    pub fuzzifiers: Vec<f64>,
    pub classifiers: Vec<String>,
    pub folds: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub restarts: u32,
    /// L2-normalize rows before PCA/SVD (parity with the fuzzy path).
    pub normalize_linear: bool,
}

impl ExperimentConfig {
    pub fn default_dims() -> Vec<usize> {
        (1..=10).map(|i| i * 10).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() {
            return Err(Error::InvalidParams("dimension list is empty".into()));
        }
        if self.dims.iter().any(|&k| k < 1) {
            return Err(Error::InvalidParams("dimensions must be >= 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidParams("method list is empty".into()));
        }
        if self.methods.contains(&Method::Fc) && self.fuzzifiers.is_empty() {
            return Err(Error::InvalidParams("fuzzifier list is empty".into()));
        }
        if self.fuzzifiers.iter().any(|&q| !(q > 1.0)) {
            return Err(Error::InvalidParams("fuzzifiers must be > 1".into()));
        }
        if self.classifiers.is_empty() {
            return Err(Error::InvalidParams("classifier list is empty".into()));
        }
        if self.folds < 2 {
            return Err(Error::InvalidParams("folds must be >= 2".into()));
        }
        if self.restarts < 1 {
            return Err(Error::InvalidParams("restarts must be >= 1".into()));
        }
        self.tokenizer.validate()
    }
}

/// Flat `key=value` settings assembled from an optional config file plus CLI
/// overrides; later insertions win.
#[derive(Debug, Clone, Default)]
pub struct ConfigMap {
    values: BTreeMap<String, String>,
}

impl ConfigMap {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut values = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::InvalidConfig {
                path: path.to_path_buf(),
                line: idx + 1,
                reason: "expected key=value".to_string(),
            })?;
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(ConfigMap { values })
    }

    pub fn set(&mut self, key: &str, value: String) {
        self.values.insert(key.to_string(), value);
    }

    pub fn set_if(&mut self, key: &str, value: Option<String>) {
        if let Some(v) = value {
            self.set(key, v);
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn parse_key<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                Error::InvalidParams(format!("bad value {raw:?} for key {key:?}"))
            }),
        }
    }

    fn parse_list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .split(',')
                .map(|p| {
                    p.trim().parse::<T>().map_err(|_| {
                        Error::InvalidParams(format!("bad list entry {p:?} for key {key:?}"))
                    })
                })
                .collect::<Result<Vec<T>>>()
                .map(Some),
        }
    }

    /// Builds the experiment config. `dataset` (and `positive` for real
    /// corpora) and `out` are required; everything else has defaults.
    pub fn into_experiment_config(self) -> Result<ExperimentConfig> {
        let spec_str = self
            .get("dataset")
            .ok_or_else(|| Error::InvalidParams("dataset is required".into()))?;
        let negative_sample: Option<usize> = self.parse_key("negative_sample")?;
        let dataset = DatasetSpec::parse(
            spec_str,
            self.get("positive"),
            self.get("negative"),
            negative_sample,
        )?;

        let mut tokenizer = TokenizerConfig::default();
        if let Some(min_df) = self.parse_key::<usize>("min_df")? {
            tokenizer.min_doc_freq = min_df;
        }
        if let Some(len) = self.parse_key::<usize>("min_token_len")? {
            tokenizer.min_token_len = len;
        }
        if let Some(lc) = self.parse_key::<bool>("lowercase")? {
            tokenizer.lowercase = lc;
        }
        if let Some(stop_path) = self.get("stopwords") {
            let path = PathBuf::from(stop_path);
            let text = fs::read_to_string(&path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            tokenizer.stopwords = Some(
                text.lines()
                    .map(|l| l.trim().to_lowercase())
                    .filter(|l| !l.is_empty())
                    .collect(),
            );
        }

        let mut dims = self
            .parse_list::<usize>("dims")?
            .unwrap_or_else(ExperimentConfig::default_dims);
        dims.sort_unstable();
        dims.dedup();

        let methods = match self.get("methods") {
            None => vec![Method::Fc, Method::Pca, Method::Svd],
            Some(raw) => raw
                .split(',')
                .map(|p| p.trim().parse::<Method>())
                .collect::<Result<Vec<Method>>>()?,
        };
        let fuzzifiers = self.parse_list::<f64>("fuzzifier")?.unwrap_or(vec![1.5, 2.0]);
        let classifiers = match self.get("classifiers") {
            None => vec!["forest".into(), "adaboost".into(), "logistic".into()],
            Some(raw) => raw.split(',').map(|p| p.trim().to_string()).collect(),
        };

        let out_dir = PathBuf::from(
            self.get("out")
                .ok_or_else(|| Error::InvalidParams("out directory is required".into()))?,
        );

        let cfg = ExperimentConfig {
            dataset,
            tokenizer,
            dims,
            methods,
            fuzzifiers,
            classifiers,
            folds: self.parse_key("folds")?.unwrap_or(5),
            seed: self.parse_key("seed")?.unwrap_or(0),
            out_dir,
            restarts: self.parse_key("restarts")?.unwrap_or(1),
            normalize_linear: self.parse_key("normalize")?.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn dataset_spec_parsing() {
        let d = DatasetSpec::parse("lines:/tmp/data.tsv", Some("grain"), None, None).unwrap();
        assert!(matches!(d, DatasetSpec::Lines { .. }));
        assert_eq!(d.label(), "data");

        let d = DatasetSpec::parse("synth:imbalanced,n=500,pos=0.1", None, None, None).unwrap();
        match d {
            DatasetSpec::SynthImbalanced {
                n,
                positive_fraction,
            } => {
                assert_eq!(n, 500);
                assert!((positive_fraction - 0.1).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }

        assert!(DatasetSpec::parse("lines:/x", None, None, None).is_err());
        assert!(DatasetSpec::parse("nope", None, None, None).is_err());
        assert!(DatasetSpec::parse("synth:weird", None, None, None).is_err());
    }

    #[test]
    fn config_file_plus_overrides_flags_win() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# comment").unwrap();
        writeln!(f, "dataset=synth:separable,n=100").unwrap();
        writeln!(f, "dims=10,20").unwrap();
        writeln!(f, "folds=5").unwrap();
        writeln!(f, "out=/tmp/out").unwrap();
        let mut map = ConfigMap::from_file(f.path()).unwrap();
        map.set("folds", "3".into());
        let cfg = map.into_experiment_config().unwrap();
        assert_eq!(cfg.folds, 3);
        assert_eq!(cfg.dims, vec![10, 20]);
        assert_eq!(cfg.methods.len(), 3);
        assert_eq!(cfg.fuzzifiers, vec![1.5, 2.0]);
    }

    #[test]
    fn malformed_config_line_is_reported() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "dataset=synth:separable").unwrap();
        writeln!(f, "this is not a pair").unwrap();
        let err = ConfigMap::from_file(f.path()).unwrap_err();
        assert!(matches!(err, Error::InvalidConfig { line: 2, .. }));
    }

    #[test]
    fn defaults_are_the_documented_sweep() {
        let mut map = ConfigMap::default();
        map.set("dataset", "synth:imbalanced".into());
        map.set("out", "/tmp/x".into());
        let cfg = map.into_experiment_config().unwrap();
        assert_eq!(cfg.dims, vec![10, 20, 30, 40, 50, 60, 70, 80, 90, 100]);
        assert_eq!(cfg.folds, 5);
        assert_eq!(cfg.classifiers, vec!["forest", "adaboost", "logistic"]);
    }

    #[test]
    fn validation_rejects_bad_lists() {
        let mut map = ConfigMap::default();
        map.set("dataset", "synth:imbalanced".into());
        map.set("out", "/tmp/x".into());
        map.set("fuzzifier", "0.5".into());
        assert!(map.into_experiment_config().is_err());
    }
}
