use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};

use super::tokenize::{tokenize, TokenizerConfig};
use super::LabeledCorpus;

/// The term dictionary: a bijection between terms and column ids `[0, m)`.
/// Column order is lexicographic by term, so the mapping is deterministic
/// across runs and platforms.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, u32>,
}

impl Vocabulary {
    fn from_sorted_terms(terms: Vec<String>) -> Self {
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        Vocabulary { terms, index }
    }

    /// Number of terms, `m`.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Column id for a term, if in vocabulary.
    pub fn id(&self, term: &str) -> Option<u32> {
        self.index.get(term).copied()
    }

    /// Term for a column id.
    pub fn term(&self, id: u32) -> &str {
        &self.terms[id as usize]
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }
}

/// Collects the distinct tokens of `corpus` that occur in at least
/// `cfg.min_doc_freq` documents and assigns ids in lexicographic order.
pub fn build_vocabulary(corpus: &LabeledCorpus, cfg: &TokenizerConfig) -> Result<Vocabulary> {
    cfg.validate()?;
    let mut doc_freq: HashMap<String, usize> = HashMap::new();
    for doc in corpus.documents() {
        let mut seen = HashSet::new();
        for token in tokenize(doc, cfg) {
            if seen.insert(token.clone()) {
                *doc_freq.entry(token).or_insert(0) += 1;
            }
        }
    }
    let mut terms: Vec<String> = doc_freq
        .into_iter()
        .filter(|(_, df)| *df >= cfg.min_doc_freq)
        .map(|(t, _)| t)
        .collect();
    if terms.is_empty() {
        return Err(Error::EmptyVocabulary {
            min_doc_freq: cfg.min_doc_freq,
        });
    }
    terms.sort_unstable();
    Ok(Vocabulary::from_sorted_terms(terms))
}
