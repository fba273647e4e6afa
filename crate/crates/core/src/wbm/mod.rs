//! Word-based metrics: a candidate scored against human references.
//!
//! All metrics compare tokens by their lowercase form. Implemented variants:
//!
//! | metric | variant |
//! | ------ | ------- |
//! | BLEU | sentence BLEU, clipped n-gram precision, closest-reference brevity penalty |
//! | TER | greedy phrase shifts, normalized by average reference length |
//! | ROUGE-N | clipped n-gram recall, best reference |
//! | ROUGE-L | LCS F1, best reference |
//! | SemSim | pluggable provider (Dice overlap by default) |

mod bleu;
mod rouge;
mod semsim;
mod ter;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::textproc::Token;

pub use bleu::{bleu, corpus_bleu, BleuConfig, BleuStats, Smoothing};
pub use rouge::{lcs_len, rouge_l, rouge_n};
pub use semsim::{semantic_similarity, EmbeddingFile, LexicalOverlap, SimilarityProvider};
pub use ter::{levenshtein, ter, ter_with_config, TerConfig};

/// Anything that can be compared as a token.
pub trait TokenKey {
    fn key(&self) -> &str;
}

impl TokenKey for Token {
    fn key(&self) -> &str {
        &self.lower
    }
}

impl TokenKey for String {
    fn key(&self) -> &str {
        self
    }
}

impl TokenKey for &str {
    fn key(&self) -> &str {
        self
    }
}

pub(crate) fn keys<T: TokenKey>(tokens: &[T]) -> Vec<&str> {
    tokens.iter().map(TokenKey::key).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WbmMetric {
    Bleu,
    Ter,
    RougeN(usize),
    RougeL,
    SemSim,
}

impl fmt::Display for WbmMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WbmMetric::Bleu => f.write_str("bleu"),
            WbmMetric::Ter => f.write_str("ter"),
            WbmMetric::RougeN(n) => write!(f, "rouge_{n}"),
            WbmMetric::RougeL => f.write_str("rouge_l"),
            WbmMetric::SemSim => f.write_str("semsim"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreFlag {
    EmptyCandidate,
    EmptyAfterFiltering,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WbmScore {
    pub metric: WbmMetric,
    pub value: f64,
    pub detail: BTreeMap<String, f64>,
    pub flags: Vec<ScoreFlag>,
}

impl WbmScore {
    pub(crate) fn new(metric: WbmMetric, value: f64) -> Self {
        Self {
            metric,
            value,
            detail: BTreeMap::new(),
            flags: Vec::new(),
        }
    }

    pub(crate) fn with(mut self, key: &str, value: f64) -> Self {
        self.detail.insert(key.to_string(), value);
        self
    }

    pub(crate) fn flagged(mut self, flag: ScoreFlag) -> Self {
        self.flags.push(flag);
        self
    }
}

/// Counts of every n-gram of order `n`.
pub(crate) fn ngram_counts<'t, 'a>(tokens: &'t [&'a str], n: usize) -> BTreeMap<&'t [&'a str], usize> {
    let mut counts = BTreeMap::new();
    if n == 0 || tokens.len() < n {
        return counts;
    }
    for w in tokens.windows(n) {
        *counts.entry(w).or_insert(0) += 1;
    }
    counts
}
