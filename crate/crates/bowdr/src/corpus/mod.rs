//! Corpus ingestion: loaders, tokenization, vocabulary construction and the
//! sparse document-term frequency matrix.
//!
//! The pipeline is `load -> tokenize -> build_vocabulary -> vectorize`, and
//! optionally [`SparseDocMatrix::l2_normalize_rows`] for methods that work on
//! the unit sphere. All stages are deterministic for fixed inputs and
//! configuration.

mod loaders;
mod matrix;
mod sgml;
mod tokenize;
mod vocab;

pub use loaders::{load_class_dirs, load_labeled_lines};
pub(crate) use matrix::{dense_dump_string, dense_from_dump_lines};
pub use matrix::{vectorize, SparseDocMatrix, SparseRow};
pub use sgml::{load_reuters_sgml, ReutersStats};
pub use tokenize::{tokenize, TokenizerConfig};
pub use vocab::{build_vocabulary, Vocabulary};

use crate::error::{Error, Result};

/// A labeled collection of raw documents. Labels are binary: `true` is the
/// positive class.
#[derive(Debug, Clone)]
pub struct LabeledCorpus {
    documents: Vec<String>,
    labels: Vec<bool>,
}

impl LabeledCorpus {
    /// Builds a corpus, enforcing the invariants: at least two documents,
    /// labels aligned with documents, and both classes present.
    pub fn new(documents: Vec<String>, labels: Vec<bool>) -> Result<Self> {
        if documents.len() != labels.len() {
            return Err(Error::InvalidParams(format!(
                "{} documents but {} labels",
                documents.len(),
                labels.len()
            )));
        }
        if documents.len() < 2 {
            return Err(Error::TooFewDocuments {
                needed: 2,
                got: documents.len(),
            });
        }
        let positives = labels.iter().filter(|&&l| l).count();
        if positives == 0 || positives == labels.len() {
            return Err(Error::SingleClass);
        }
        Ok(LabeledCorpus { documents, labels })
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn documents(&self) -> &[String] {
        &self.documents
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn positive_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l).count()
    }
}
