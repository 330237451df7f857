use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bowdr::classify::{cross_validate, ClassifierSpec};
use bowdr::corpus::SparseDocMatrix;
use bowdr::dr::{DrSpec, Method};
use bowdr::error::{Error, Result};
use bowdr::fuzzy::{self, FuzzyParams};
use bowdr::harness::{
    emit_plot_data, load_dataset, run_sweep, scaling_benchmark, stability_summary, ConfigMap,
    DatasetSpec,
};

#[derive(Parser)]
#[command(
    name = "bowdr",
    about = "Bag-of-words dimensionality reduction and classification benchmarks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct DatasetArgs {
    /// Dataset spec: lines:PATH | reuters:DIR_OR_FILE | dirs:ROOT |
    /// synth:separable[,n=N,words=W] | synth:imbalanced[,n=N,pos=F]
    #[arg(long)]
    dataset: String,
    /// Positive label / topic / class directory.
    #[arg(long)]
    positive: Option<String>,
    /// Strict negative label for lines datasets.
    #[arg(long)]
    negative: Option<String>,
    /// Downsample the negative class to this many documents (dirs datasets).
    #[arg(long)]
    negative_sample: Option<usize>,
    /// Minimum document frequency for vocabulary terms.
    #[arg(long, default_value_t = 3)]
    min_df: usize,
}

impl DatasetArgs {
    fn load(&self, seed: u64) -> Result<(SparseDocMatrix, Vec<bool>, String)> {
        let spec = DatasetSpec::parse(
            &self.dataset,
            self.positive.as_deref(),
            self.negative.as_deref(),
            self.negative_sample,
        )?;
        let mut tokenizer = bowdr::corpus::TokenizerConfig::default();
        tokenizer.min_doc_freq = self.min_df;
        load_dataset(&spec, &tokenizer, seed)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Vectorize a corpus into the sparse matrix dump (plus a labels file).
    Ingest {
        #[command(flatten)]
        dataset: DatasetArgs,
        #[arg(long)]
        seed: Option<u64>,
        /// Output path for the matrix dump; labels go to `<out>.labels`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Reduce a dumped matrix with one method and write the reduced dump.
    Reduce {
        /// Matrix dump produced by `ingest`.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        method: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        fuzzifier: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// L2-normalize rows before PCA/SVD.
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        out: PathBuf,
        /// Also dump the fitted fuzzy model (prototypes) here.
        #[arg(long)]
        model_out: Option<PathBuf>,
    },
    /// Cross-validate a single (method, k, classifier) cell.
    Eval {
        #[command(flatten)]
        dataset: DatasetArgs,
        #[arg(long)]
        method: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        fuzzifier: Option<f64>,
        #[arg(long)]
        classifier: String,
        #[arg(long, default_value_t = 5)]
        folds: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the full dimension sweep and write CSV + plot data.
    Sweep {
        /// Flat key=value config file; flags override its entries.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        dataset: Option<String>,
        #[arg(long)]
        positive: Option<String>,
        #[arg(long)]
        negative: Option<String>,
        #[arg(long)]
        negative_sample: Option<usize>,
        /// Comma-separated dimension list, e.g. 10,20,30.
        #[arg(long)]
        dims: Option<String>,
        /// Comma-separated subset of fc,pca,svd.
        #[arg(long)]
        methods: Option<String>,
        /// Comma-separated fuzzifier list.
        #[arg(long)]
        fuzzifier: Option<String>,
        /// Comma-separated subset of forest,adaboost,logistic.
        #[arg(long)]
        classifiers: Option<String>,
        #[arg(long)]
        folds: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        min_df: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scaling benchmark of the fuzzy fit: per-iteration time vs n.
    Bench {
        /// Comma-separated document counts.
        #[arg(long, default_value = "10000,20000,40000,80000")]
        sizes: String,
        #[arg(long, default_value_t = 50)]
        k: usize,
        #[arg(long, default_value_t = 10000)]
        m: usize,
        #[arg(long, default_value_t = 40)]
        nnz: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Optional CSV output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Xie-Beni validity index over a range of cluster counts.
    Validity {
        #[command(flatten)]
        dataset: DatasetArgs,
        #[arg(long)]
        kmin: usize,
        #[arg(long)]
        kmax: usize,
        #[arg(long, default_value_t = 1.5)]
        fuzzifier: f64,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are not usage errors.
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn parse_method_args(method: &str, k: usize, fuzzifier: Option<f64>, normalize: bool) -> Result<DrSpec> {
    let method: Method = method.parse()?;
    Ok(match method {
        Method::Fc => DrSpec::Fuzzy {
            params: FuzzyParams::new(k, fuzzifier.unwrap_or(1.5)),
        },
        Method::Svd => DrSpec::Svd {
            k,
            seed: 0,
            normalize_rows: normalize,
        },
        Method::Pca => DrSpec::Pca {
            k,
            seed: 0,
            normalize_rows: normalize,
        },
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest { dataset, seed, out } => {
            let (x, labels, name) = dataset.load(seed.unwrap_or(0))?;
            x.write_dump(&out)?;
            let labels_path = out.with_extension(format!(
                "{}labels",
                out.extension()
                    .map(|e| format!("{}.", e.to_string_lossy()))
                    .unwrap_or_default()
            ));
            let body: String = labels
                .iter()
                .map(|&l| if l { "1\n" } else { "0\n" })
                .collect();
            std::fs::write(&labels_path, body).map_err(|source| Error::Io {
                path: labels_path.clone(),
                source,
            })?;
            eprintln!(
                "ingested {name}: {} docs x {} terms, {} nonzeros -> {}",
                x.n_rows(),
                x.n_cols(),
                x.nnz(),
                out.display()
            );
            Ok(())
        }
        Command::Reduce {
            input,
            method,
            k,
            fuzzifier,
            seed,
            normalize,
            out,
            model_out,
        } => {
            let x = SparseDocMatrix::read_dump(&input)?;
            let spec = parse_method_args(&method, k, fuzzifier, normalize)?
                .with_seed(seed.unwrap_or(0));
            let (model, reduced) = spec.fit(&x)?;
            reduced.write_dump(&out)?;
            if let Some(model_path) = model_out {
                if let bowdr::dr::DrModel::Fuzzy(fm) = &model {
                    fm.write_dump(&model_path)?;
                } else {
                    match &model {
                        bowdr::dr::DrModel::Svd { factors, .. } => {
                            factors.write_dump(&model_path)?
                        }
                        bowdr::dr::DrModel::Pca { factors, .. } => {
                            factors.write_dump(&model_path)?
                        }
                        bowdr::dr::DrModel::Fuzzy(_) => unreachable!(),
                    }
                }
            }
            eprintln!(
                "reduced {} docs to {} dimensions with {} -> {}",
                reduced.n_rows(),
                reduced.n_cols(),
                reduced.method(),
                out.display()
            );
            Ok(())
        }
        Command::Eval {
            dataset,
            method,
            k,
            fuzzifier,
            classifier,
            folds,
            seed,
        } => {
            let seed = seed.unwrap_or(0);
            let (x, labels, name) = dataset.load(seed)?;
            let dr = parse_method_args(&method, k, fuzzifier, false)?;
            let clf = ClassifierSpec::parse(&classifier)?;
            let report = cross_validate(&x, &labels, &dr, &clf, folds, seed)?;
            println!("{}", report.csv_row(&name));
            eprintln!(
                "mean accuracy {:.5} (sigma {:.5}) over {} folds",
                report.mean_accuracy,
                report.std_dev,
                report.folds.len()
            );
            Ok(())
        }
        Command::Sweep {
            config,
            dataset,
            positive,
            negative,
            negative_sample,
            dims,
            methods,
            fuzzifier,
            classifiers,
            folds,
            seed,
            min_df,
            out,
        } => {
            let mut map = match config {
                Some(path) => ConfigMap::from_file(&path)?,
                None => ConfigMap::default(),
            };
            map.set_if("dataset", dataset);
            map.set_if("positive", positive);
            map.set_if("negative", negative);
            map.set_if("negative_sample", negative_sample.map(|v| v.to_string()));
            map.set_if("dims", dims);
            map.set_if("methods", methods);
            map.set_if("fuzzifier", fuzzifier);
            map.set_if("classifiers", classifiers);
            map.set_if("folds", folds.map(|v| v.to_string()));
            map.set_if("seed", seed.map(|v| v.to_string()));
            map.set_if("min_df", min_df.map(|v| v.to_string()));
            map.set_if("out", out.map(|p| p.display().to_string()));
            let cfg = map.into_experiment_config()?;

            let (x, labels, name) = load_dataset(&cfg.dataset, &cfg.tokenizer, cfg.seed)?;
            eprintln!(
                "dataset {name}: {} docs x {} terms ({} positive)",
                x.n_rows(),
                x.n_cols(),
                labels.iter().filter(|&&l| l).count()
            );
            let table = run_sweep(&x, &labels, &name, &cfg)?;
            emit_plot_data(&table, &cfg.out_dir)?;
            let failed = table
                .cells
                .iter()
                .filter(|c| c.mean_accuracy().is_none())
                .count();
            eprintln!(
                "sweep complete: {} cells ({failed} failed) -> {}",
                table.cells.len(),
                cfg.out_dir.display()
            );
            for (variant, sigma) in stability_summary(&table)? {
                eprintln!("stability {variant}: sigma = {sigma:.3e}");
            }
            Ok(())
        }
        Command::Bench {
            sizes,
            k,
            m,
            nnz,
            seed,
            out,
        } => {
            let sizes: Vec<usize> = sizes
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidParams(format!("bad size {p:?}")))
                })
                .collect::<Result<_>>()?;
            let report = scaling_benchmark(&sizes, k, m, nnz, seed)?;
            let mut csv = String::from("n,secs_per_iteration\n");
            for p in &report.points {
                println!("n = {:>8}  {:.6} s/iteration", p.n, p.secs_per_iteration);
                csv.push_str(&format!("{},{}\n", p.n, p.secs_per_iteration));
            }
            println!(
                "linear fit: t = {:.3e} * n + {:.3e},  R^2 = {:.4}",
                report.slope, report.intercept, report.r_squared
            );
            for (i, r) in report.ratios.iter().enumerate() {
                println!(
                    "ratio {} -> {}: {:.2}x",
                    report.points[i].n,
                    report.points[i + 1].n,
                    r
                );
            }
            if let Some(path) = out {
                std::fs::write(&path, csv).map_err(|source| Error::Io { path, source })?;
            }
            Ok(())
        }
        Command::Validity {
            dataset,
            kmin,
            kmax,
            fuzzifier,
            seed,
        } => {
            if kmin < 2 || kmax < kmin {
                return Err(Error::InvalidParams(
                    "need 2 <= kmin <= kmax for the validity scan".into(),
                ));
            }
            let seed = seed.unwrap_or(0);
            let (x, _, name) = dataset.load(seed)?;
            let normalized = x.l2_normalize_rows();
            println!("# {name}: Xie-Beni index by cluster count (lower is better)");
            println!("k xie_beni objective iterations converged");
            for k in kmin..=kmax {
                let params = FuzzyParams::new(k, fuzzifier).with_seed(seed);
                let (model, u) = fuzzy::fit(&normalized, &params)?;
                let xb = fuzzy::xie_beni(&normalized, model.prototypes(), &u, fuzzifier)?;
                println!(
                    "{k} {xb} {} {} {}",
                    model.final_objective(),
                    model.iterations_run(),
                    model.converged()
                );
            }
            Ok(())
        }
    }
}
