use std::collections::HashSet;

use crate::error::{Error, Result};

/// Tokenization and vocabulary-pruning knobs.
///
/// Tokens are maximal runs of alphabetic characters; everything else is a
/// separator. Defaults: lowercase, minimum token length 2, no stopwords,
/// minimum document frequency 3.
#[derive(Debug, Clone)]
pub struct TokenizerConfig {
    pub lowercase: bool,
    /// Minimum token length in characters; shorter tokens are dropped.
    pub min_token_len: usize,
    /// Terms occurring in fewer documents than this are pruned from the
    /// vocabulary.
    pub min_doc_freq: usize,
    /// Optional stopword set, matched after lowercasing.
    pub stopwords: Option<HashSet<String>>,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        TokenizerConfig {
            lowercase: true,
            min_token_len: 2,
            min_doc_freq: 3,
            stopwords: None,
        }
    }
}

impl TokenizerConfig {
    /// A default config with the given minimum document frequency; small
    /// corpora usually want `min_doc_freq(1)`.
    pub fn with_min_doc_freq(min_doc_freq: usize) -> Self {
        TokenizerConfig {
            min_doc_freq,
            ..TokenizerConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_token_len < 1 {
            return Err(Error::InvalidParams("min_token_len must be >= 1".into()));
        }
        if self.min_doc_freq < 1 {
            return Err(Error::InvalidParams("min_doc_freq must be >= 1".into()));
        }
        Ok(())
    }
}

/// Splits `text` into tokens: maximal alphabetic runs, optionally lowercased,
/// filtered by minimum length and stopword list. Deterministic; empty input
/// yields an empty list.
pub fn tokenize(text: &str, cfg: &TokenizerConfig) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in text.chars() {
        if ch.is_alphabetic() {
            current.push(ch);
        } else if !current.is_empty() {
            push_token(&mut tokens, std::mem::take(&mut current), cfg);
        }
    }
    if !current.is_empty() {
        push_token(&mut tokens, current, cfg);
    }
    tokens
}

fn push_token(out: &mut Vec<String>, raw: String, cfg: &TokenizerConfig) {
    let token = if cfg.lowercase {
        raw.to_lowercase()
    } else {
        raw
    };
    if token.chars().count() < cfg.min_token_len {
        return;
    }
    if let Some(stop) = &cfg.stopwords {
        if stop.contains(&token) {
            return;
        }
    }
    out.push(token);
}
