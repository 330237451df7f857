//! Dimensionality reduction for sparse bag-of-words text.
//!
//! A document collection becomes a sparse `n x m` count matrix; that is far
//! too wide to classify on directly. This crate reduces it to a dense
//! `n x k` feature matrix three ways and benchmarks them against each other:
//!
//! - **Fuzzy clustering** ([`fuzzy`]): soft spherical k-means on the unit
//!   sphere. The document-cluster membership matrix *is* the reduced
//!   representation.
//! - **Truncated SVD** and **PCA** ([`linear`]): the classical linear
//!   baselines, computed sparsely (PCA with implicit centering).
//! - A classification harness ([`classify`], [`harness`]): three classifier
//!   families under leakage-free k-fold cross-validation, swept over the
//!   reduced dimensionality, with CSV and plot-data output.
//!
//! ```
//! use bowdr::corpus::{build_vocabulary, vectorize, LabeledCorpus, TokenizerConfig};
//! use bowdr::fuzzy::{fit, FuzzyParams};
//!
//! let corpus = LabeledCorpus::new(
//!     vec![
//!         "wheat exports rose sharply".into(),
//!         "corn and wheat shipments".into(),
//!         "virus outbreak spreads".into(),
//!         "new virus strain found".into(),
//!     ],
//!     vec![true, true, false, false],
//! )?;
//! let cfg = TokenizerConfig::with_min_doc_freq(1);
//! let vocab = build_vocabulary(&corpus, &cfg)?;
//! let x = vectorize(&corpus, &vocab, &cfg).l2_normalize_rows();
//!
//! let (model, memberships) = fit(&x, &FuzzyParams::new(2, 1.5))?;
//! assert_eq!(memberships.n_docs(), 4);
//! assert_eq!(memberships.n_clusters(), 2);
//! assert!(model.converged());
//! # Ok::<(), bowdr::Error>(())
//! ```
//!
//! The narrative guide lives in `book/`; its code blocks double as the
//! crate's doc-tests.

pub mod classify;
pub mod corpus;
pub mod dr;
pub mod error;
pub mod fuzzy;
pub mod harness;
pub mod linear;
mod util;

pub use error::{Error, Result};

// The book chapters compile and run as doc-tests, keeping the guide in sync
// with the library.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/corpus.md")]
    pub struct Corpus;
    #[doc = include_str!("../../../book/src/fuzzy.md")]
    pub struct Fuzzy;
    #[doc = include_str!("../../../book/src/linear.md")]
    pub struct Linear;
    #[doc = include_str!("../../../book/src/classification.md")]
    pub struct Classification;
    #[doc = include_str!("../../../book/src/harness.md")]
    pub struct Harness;
    #[doc = include_str!("../../../book/src/formats.md")]
    pub struct Formats;
}
