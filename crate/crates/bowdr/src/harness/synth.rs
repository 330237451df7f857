//! Synthetic corpora and matrices for tests, proxy experiments and the
//! scaling benchmark.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{LabeledCorpus, SparseDocMatrix};
use crate::error::Result;

/// Alphabetic word from a prefix and an index (base-26 suffix), so the
/// tokenizer keeps it intact.
fn word(prefix: &str, i: usize) -> String {
    let mut suffix = ['a'; 3];
    let mut v = i;
    for slot in (0..3).rev() {
        suffix[slot] = (b'a' + (v % 26) as u8) as char;
        v /= 26;
    }
    let mut s = String::from(prefix);
    s.extend(suffix);
    s
}

fn sample_doc(rng: &mut ChaCha8Rng, len: usize, pick: impl Fn(&mut ChaCha8Rng) -> String) -> String {
    let mut tokens = Vec::with_capacity(len);
    for _ in 0..len {
        tokens.push(pick(rng));
    }
    tokens.join(" ")
}

/// A cleanly separable corpus: two equally sized classes over disjoint
/// vocabularies of `words_per_class` words each. Labels alternate.
pub fn two_block_corpus(n: usize, words_per_class: usize, seed: u64) -> Result<LabeledCorpus> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut documents = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for j in 0..n {
        let positive = j % 2 == 0;
        let prefix = if positive { "pos" } else { "neg" };
        let len = rng.gen_range(15..30);
        let doc = sample_doc(&mut rng, len, |r| {
            word(prefix, r.gen_range(0..words_per_class))
        });
        documents.push(doc);
        labels.push(positive);
    }
    LabeledCorpus::new(documents, labels)
}

/// An imbalanced binary task shaped like topic-labeled news: a small
/// positive class with its own topic vocabulary, negatives drawn from two
/// background topics, shared filler words everywhere, and strongly varying
/// negative document lengths. A slice of the negatives borrows a little
/// positive-topic vocabulary so the task is not perfectly separable.
pub fn imbalanced_topic_corpus(
    n: usize,
    positive_fraction: f64,
    seed: u64,
) -> Result<LabeledCorpus> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_pos = ((n as f64 * positive_fraction).round() as usize).max(2);
    let pos_words = 60;
    let topic_words = 80;
    let common_words = 60;

    let mut documents = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for j in 0..n {
        // Spread positives evenly through the corpus.
        let positive = j % (n / n_pos).max(1) == 0 && labels.iter().filter(|&&l| l).count() < n_pos;
        if positive {
            let len = rng.gen_range(30..70);
            let doc = sample_doc(&mut rng, len, |r| {
                let roll: f64 = r.gen();
                if roll < 0.65 {
                    word("vir", r.gen_range(0..pos_words))
                } else if roll < 0.90 {
                    word("com", r.gen_range(0..common_words))
                } else if roll < 0.95 {
                    word("bac", r.gen_range(0..topic_words))
                } else {
                    word("car", r.gen_range(0..topic_words))
                }
            });
            documents.push(doc);
            labels.push(true);
        } else {
            let topic = if rng.gen::<bool>() { "bac" } else { "car" };
            let other = if topic == "bac" { "car" } else { "bac" };
            let noisy = rng.gen::<f64>() < 0.25;
            let len = rng.gen_range(10..140);
            let doc = sample_doc(&mut rng, len, |r| {
                let roll: f64 = r.gen();
                if noisy && roll < 0.05 {
                    word("vir", r.gen_range(0..pos_words))
                } else if roll < 0.65 {
                    word(topic, r.gen_range(0..topic_words))
                } else if roll < 0.90 {
                    word("com", r.gen_range(0..common_words))
                } else {
                    word(other, r.gen_range(0..topic_words))
                }
            });
            documents.push(doc);
            labels.push(false);
        }
    }
    LabeledCorpus::new(documents, labels)
}

/// Random sparse count matrix with a fixed number of nonzeros per row;
/// used by the scaling benchmark and the randomized test fixtures.
pub fn random_count_matrix(n: usize, m: usize, nnz_per_row: usize, seed: u64) -> SparseDocMatrix {
    assert!(nnz_per_row <= m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(n);
    let mut seen = vec![u32::MAX; m];
    for j in 0..n {
        let marker = j as u32;
        let mut cols = Vec::with_capacity(nnz_per_row);
        while cols.len() < nnz_per_row {
            let c = rng.gen_range(0..m);
            if seen[c] != marker {
                seen[c] = marker;
                cols.push(c as u32);
            }
        }
        cols.sort_unstable();
        let row: Vec<(u32, f64)> = cols
            .into_iter()
            .map(|c| (c, rng.gen_range(1..6) as f64))
            .collect();
        rows.push(row);
    }
    SparseDocMatrix::from_rows(m, &rows)
}
