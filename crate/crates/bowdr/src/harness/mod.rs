//! Experiment harness: dataset specs, the dimension-sweep runner, plot-data
//! emission, stability statistics and the scaling benchmark.
//!
//! A sweep evaluates every `(method-variant, k, classifier)` cell with
//! cross-validation, records one CSV row per cell, and averages the
//! classifier means per `(variant, k)`. Cell seeds derive from the master
//! seed and the cell identity, never from execution order, so output files
//! are byte-identical across reruns and worker counts. Wall-clock timings
//! go to a separate file that is excluded from that guarantee.

mod bench;
mod config;
mod plot;
mod sweep;
pub mod synth;

pub use bench::{scaling_benchmark, ScalingPoint, ScalingReport};
pub use config::{ConfigMap, DatasetSpec, ExperimentConfig};
pub use plot::{emit_plot_data, read_series, stability_summary};
pub use sweep::{load_dataset, run_experiment, run_sweep, AvgRow, CellOutcome, CellResult, ResultsTable};
