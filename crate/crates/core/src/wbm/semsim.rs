use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use super::{ScoreFlag, WbmMetric, WbmScore};
use crate::error::{ResourceError, WbmError};
use crate::resources::WordSet;
use crate::textproc::TextUnit;

/// A symmetric similarity between two texts, in `[0, 1]`.
pub trait SimilarityProvider: Send + Sync {
    fn name(&self) -> &str;

    /// Returns the similarity and any flags raised while computing it.
    fn similarity(&self, a: &TextUnit, b: &TextUnit) -> (f64, Vec<ScoreFlag>);
}

/// Dice coefficient over stopword-filtered, lowercased word types.
#[derive(Debug, Clone)]
pub struct LexicalOverlap {
    stopwords: WordSet,
}

impl LexicalOverlap {
    pub fn new(stopwords: WordSet) -> Self {
        Self { stopwords }
    }

    fn content_types<'a>(&self, text: &'a TextUnit) -> BTreeSet<&'a str> {
        text.words()
            .map(|t| t.lower.as_str())
            .filter(|w| !self.stopwords.contains(w))
            .collect()
    }
}

impl Default for LexicalOverlap {
    fn default() -> Self {
        Self::new(WordSet::default_stopwords())
    }
}

impl SimilarityProvider for LexicalOverlap {
    fn name(&self) -> &str {
        "lexical_overlap_dice"
    }

    fn similarity(&self, a: &TextUnit, b: &TextUnit) -> (f64, Vec<ScoreFlag>) {
        let (sa, sb) = (self.content_types(a), self.content_types(b));
        if sa.is_empty() && sb.is_empty() {
            return (0.0, vec![ScoreFlag::EmptyAfterFiltering]);
        }
        let shared = sa.intersection(&sb).count();
        (2.0 * shared as f64 / (sa.len() + sb.len()) as f64, Vec::new())
    }
}

/// Cosine similarity of mean word vectors, rescaled from `[-1, 1]` to
/// `[0, 1]`.
///
/// The vector file holds one `word v1 ... vd` entry per line; an optional
/// `count dim` header line is detected and skipped.
#[derive(Debug, Clone)]
pub struct EmbeddingFile {
    vectors: HashMap<String, Vec<f64>>,
    dim: usize,
}

impl EmbeddingFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, WbmError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| ResourceError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(Self::parse(&text, &path.display().to_string())?)
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, ResourceError> {
        let malformed = |line: usize, reason: String| ResourceError::Malformed {
            path: origin.to_string(),
            line,
            reason,
        };
        let mut vectors = HashMap::new();
        let mut dim = 0;
        for (i, line) in text.lines().enumerate() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            if i == 0 && fields.len() == 2 && fields.iter().all(|f| f.parse::<usize>().is_ok()) {
                continue;
            }
            let values = fields[1..]
                .iter()
                .map(|v| v.parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| malformed(i + 1, e.to_string()))?;
            if values.is_empty() {
                return Err(malformed(i + 1, "entry has no vector components".into()));
            }
            if dim == 0 {
                dim = values.len();
            } else if values.len() != dim {
                return Err(malformed(i + 1, format!("expected {dim} components, found {}", values.len())));
            }
            vectors.insert(fields[0].to_lowercase(), values);
        }
        Ok(Self { vectors, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    fn mean_vector(&self, text: &TextUnit) -> Option<Vec<f64>> {
        let mut sum = vec![0.0; self.dim];
        let mut n = 0usize;
        for v in text.words().filter_map(|t| self.vectors.get(&t.lower)) {
            for (s, x) in sum.iter_mut().zip(v) {
                *s += x;
            }
            n += 1;
        }
        (n > 0).then(|| sum.into_iter().map(|s| s / n as f64).collect())
    }
}

impl SimilarityProvider for EmbeddingFile {
    fn name(&self) -> &str {
        "embedding_cosine"
    }

    fn similarity(&self, a: &TextUnit, b: &TextUnit) -> (f64, Vec<ScoreFlag>) {
        let (Some(va), Some(vb)) = (self.mean_vector(a), self.mean_vector(b)) else {
            return (0.0, vec![ScoreFlag::EmptyAfterFiltering]);
        };
        let dot: f64 = va.iter().zip(&vb).map(|(x, y)| x * y).sum();
        let na = va.iter().map(|x| x * x).sum::<f64>().sqrt();
        let nb = vb.iter().map(|x| x * x).sum::<f64>().sqrt();
        if na == 0.0 || nb == 0.0 {
            return (0.0, vec![ScoreFlag::EmptyAfterFiltering]);
        }
        let cos = (dot / (na * nb)).clamp(-1.0, 1.0);
        ((cos + 1.0) / 2.0, Vec::new())
    }
}

pub fn semantic_similarity(a: &TextUnit, b: &TextUnit, provider: &dyn SimilarityProvider) -> WbmScore {
    let (value, flags) = provider.similarity(a, b);
    let mut score = WbmScore::new(WbmMetric::SemSim, value.clamp(0.0, 1.0));
    score.flags = flags;
    score
}
