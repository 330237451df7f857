use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::LabeledCorpus;

/// Loads a `label<TAB>text` file (UTF-8, LF line endings, blank lines
/// skipped). A line whose label equals `positive` is positive. When
/// `negative` is given, any other label is rejected as unknown; when it is
/// `None`, every non-positive label is negative.
pub fn load_labeled_lines(
    path: &Path,
    positive: &str,
    negative: Option<&str>,
) -> Result<LabeledCorpus> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut documents = Vec::new();
    let mut labels = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (label, body) = line.split_once('\t').ok_or_else(|| Error::MalformedLine {
            path: path.to_path_buf(),
            line: idx + 1,
            reason: "missing tab delimiter".to_string(),
        })?;
        let is_positive = if label == positive {
            true
        } else if negative.map_or(true, |n| label == n) {
            false
        } else {
            return Err(Error::UnknownLabel {
                path: path.to_path_buf(),
                line: idx + 1,
                label: label.to_string(),
            });
        };
        documents.push(body.to_string());
        labels.push(is_positive);
    }
    LabeledCorpus::new(documents, labels)
}

/// Loads a directory-per-class layout `root/<class>/<docfile>`: everything in
/// `positive_dir` is positive, everything else negative. When
/// `negative_sample` is given, the negatives are downsampled without
/// replacement by a generator seeded with `seed`; the kept documents stay in
/// their original (class, filename) order, so the result is deterministic.
pub fn load_class_dirs(
    root: &Path,
    positive_dir: &str,
    negative_sample: Option<usize>,
    seed: u64,
) -> Result<LabeledCorpus> {
    let io_err = |p: &Path, source: std::io::Error| Error::Io {
        path: p.to_path_buf(),
        source,
    };
    if !root.is_dir() {
        return Err(Error::MissingDirectory(root.to_path_buf()));
    }
    let mut class_dirs: Vec<(String, std::path::PathBuf)> = Vec::new();
    for entry in fs::read_dir(root).map_err(|e| io_err(root, e))? {
        let entry = entry.map_err(|e| io_err(root, e))?;
        let p = entry.path();
        if p.is_dir() {
            class_dirs.push((entry.file_name().to_string_lossy().into_owned(), p));
        }
    }
    class_dirs.sort_by(|a, b| a.0.cmp(&b.0));
    if !class_dirs.iter().any(|(name, _)| name == positive_dir) {
        return Err(Error::MissingDirectory(root.join(positive_dir)));
    }

    let mut positives = Vec::new();
    let mut negatives = Vec::new();
    for (name, dir) in &class_dirs {
        let mut files: Vec<std::path::PathBuf> = fs::read_dir(dir)
            .map_err(|e| io_err(dir, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        files.sort();
        for f in files {
            let body = fs::read(&f).map_err(|e| io_err(&f, e))?;
            let text = String::from_utf8_lossy(&body).into_owned();
            if name == positive_dir {
                positives.push(text);
            } else {
                negatives.push(text);
            }
        }
    }

    let kept_negatives = match negative_sample {
        None => negatives,
        Some(want) => {
            if want > negatives.len() {
                return Err(Error::SampleTooLarge {
                    requested: want,
                    available: negatives.len(),
                });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut idx: Vec<usize> = (0..negatives.len()).collect();
            idx.shuffle(&mut rng);
            let mut chosen: Vec<usize> = idx.into_iter().take(want).collect();
            chosen.sort_unstable();
            let mut kept = Vec::with_capacity(want);
            let mut negatives = negatives.into_iter().enumerate();
            for target in chosen {
                loop {
                    let (i, doc) = negatives.next().expect("index in range");
                    if i == target {
                        kept.push(doc);
                        break;
                    }
                }
            }
            kept
        }
    };

    let mut documents = positives;
    let n_pos = documents.len();
    documents.extend(kept_negatives);
    let labels: Vec<bool> = (0..documents.len()).map(|i| i < n_pos).collect();
    LabeledCorpus::new(documents, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn loads_tab_separated_lines() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "grain\twheat shipment rises").unwrap();
        writeln!(f, "other\toil price falls").unwrap();
        let c = load_labeled_lines(f.path(), "grain", None).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.labels(), &[true, false]);
        assert_eq!(c.documents()[0], "wheat shipment rises");
    }

    #[test]
    fn missing_delimiter_reports_line_number() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "grain\tok line").unwrap();
        writeln!(f, "no delimiter here").unwrap();
        let err = load_labeled_lines(f.path(), "grain", None).unwrap_err();
        match err {
            Error::MalformedLine { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn unknown_label_in_strict_mode() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "pos\ta b").unwrap();
        writeln!(f, "mystery\tc d").unwrap();
        let err = load_labeled_lines(f.path(), "pos", Some("neg")).unwrap_err();
        assert!(matches!(err, Error::UnknownLabel { line: 2, .. }));
    }

    #[test]
    fn single_class_rejected_at_validation() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "pos\ta b").unwrap();
        writeln!(f, "pos\tc d").unwrap();
        let err = load_labeled_lines(f.path(), "pos", None).unwrap_err();
        assert!(matches!(err, Error::SingleClass));
    }

    fn write_class_tree(root: &Path, spec: &[(&str, usize)]) {
        for (class, count) in spec {
            let dir = root.join(class);
            fs::create_dir_all(&dir).unwrap();
            for i in 0..*count {
                fs::write(dir.join(format!("doc{i:03}.txt")), format!("{class} text {i}"))
                    .unwrap();
            }
        }
    }

    #[test]
    fn class_dirs_default_keeps_all_negatives() {
        let tmp = tempfile::tempdir().unwrap();
        write_class_tree(tmp.path(), &[("virus", 3), ("bacteria", 4), ("cardiac", 2)]);
        let c = load_class_dirs(tmp.path(), "virus", None, 0).unwrap();
        assert_eq!(c.len(), 9);
        assert_eq!(c.positive_count(), 3);
    }

    #[test]
    fn class_dirs_downsamples_deterministically() {
        let tmp = tempfile::tempdir().unwrap();
        write_class_tree(tmp.path(), &[("virus", 3), ("bacteria", 10), ("cardiac", 10)]);
        let a = load_class_dirs(tmp.path(), "virus", Some(5), 7).unwrap();
        let b = load_class_dirs(tmp.path(), "virus", Some(5), 7).unwrap();
        assert_eq!(a.len(), 3 + 5);
        assert_eq!(a.documents(), b.documents());
        assert_eq!(a.labels(), b.labels());
        let c = load_class_dirs(tmp.path(), "virus", Some(5), 8).unwrap();
        assert!(a.documents() != c.documents());
    }

    #[test]
    fn class_dirs_errors() {
        let tmp = tempfile::tempdir().unwrap();
        write_class_tree(tmp.path(), &[("virus", 2), ("bacteria", 3)]);
        let err = load_class_dirs(tmp.path(), "prion", None, 0).unwrap_err();
        assert!(matches!(err, Error::MissingDirectory(_)));
        let err = load_class_dirs(tmp.path(), "virus", Some(10), 0).unwrap_err();
        assert!(matches!(err, Error::SampleTooLarge { .. }));
    }
}
