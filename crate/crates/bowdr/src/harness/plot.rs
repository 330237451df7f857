//! Plot-data emission and the cross-dimension stability statistic.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::util::population_std;

use super::sweep::ResultsTable;

/// Writes one whitespace-delimited `(k, averaged accuracy)` series file per
/// method-variant plus a combined `averages.csv`; returns the paths.
pub fn emit_plot_data(table: &ResultsTable, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let io_err = |p: &Path, source: std::io::Error| Error::Io {
        path: p.to_path_buf(),
        source,
    };
    fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;
    let mut written = Vec::new();

    let mut combined = String::from("dataset,variant,k,avg_accuracy\n");
    for variant in table.variants() {
        let series = table.series(&variant);
        let mut body = String::new();
        for (k, acc) in &series {
            body.push_str(&format!("{k} {acc}\n"));
            combined.push_str(&format!("{},{variant},{k},{acc}\n", table.dataset));
        }
        let path = out_dir.join(format!("plot_{variant}.dat"));
        fs::write(&path, body).map_err(|e| io_err(&path, e))?;
        written.push(path);
    }
    let avg_path = out_dir.join("averages.csv");
    fs::write(&avg_path, combined).map_err(|e| io_err(&avg_path, e))?;
    written.push(avg_path);
    Ok(written)
}

/// Parses a series file back into `(k, accuracy)` points.
pub fn read_series(path: &Path) -> Result<Vec<(usize, f64)>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let bad = |line: usize, reason: &str| Error::MalformedDump {
        path: path.to_path_buf(),
        line,
        reason: reason.to_string(),
    };
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let k: usize = parts
            .next()
            .ok_or_else(|| bad(idx + 1, "missing k"))?
            .parse()
            .map_err(|_| bad(idx + 1, "bad k"))?;
        let acc: f64 = parts
            .next()
            .ok_or_else(|| bad(idx + 1, "missing accuracy"))?
            .parse()
            .map_err(|_| bad(idx + 1, "bad accuracy"))?;
        out.push((k, acc));
    }
    Ok(out)
}

/// Population standard deviation of the classifier-averaged accuracy across
/// the dimension sweep, per method-variant: the stability statistic. Lower
/// means the method's quality depends less on choosing k well.
pub fn stability_summary(table: &ResultsTable) -> Result<Vec<(String, f64)>> {
    let mut out = Vec::new();
    for variant in table.variants() {
        let series = table.series(&variant);
        if series.len() < 2 {
            return Err(Error::InsufficientPoints(series.len()));
        }
        let values: Vec<f64> = series.iter().map(|&(_, a)| a).collect();
        out.push((variant, population_std(&values)));
    }
    Ok(out)
}
