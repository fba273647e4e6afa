use serde::{Deserialize, Serialize};

use super::{keys, ngram_counts, ScoreFlag, TokenKey, WbmMetric, WbmScore};
use crate::error::WbmError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Smoothing {
    /// Any zero precision zeroes the score.
    #[default]
    None,
    /// Add one to numerator and denominator of every order's precision.
    AddOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BleuConfig {
    pub max_n: usize,
    pub smoothing: Smoothing,
}

impl Default for BleuConfig {
    fn default() -> Self {
        Self {
            max_n: 4,
            smoothing: Smoothing::None,
        }
    }
}

/// Sufficient statistics for BLEU. Adding the statistics of several
/// sentences and scoring the sum gives corpus BLEU.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BleuStats {
    pub matches: Vec<u64>,
    pub totals: Vec<u64>,
    pub candidate_len: u64,
    pub reference_len: u64,
}

impl BleuStats {
    pub fn new(max_n: usize) -> Self {
        Self {
            matches: vec![0; max_n],
            totals: vec![0; max_n],
            candidate_len: 0,
            reference_len: 0,
        }
    }

    pub fn from_sentence<T: TokenKey>(candidate: &[T], references: &[Vec<T>], max_n: usize) -> Self {
        let cand = keys(candidate);
        let refs: Vec<Vec<&str>> = references.iter().map(|r| keys(r)).collect();
        let mut stats = Self::new(max_n);
        stats.candidate_len = cand.len() as u64;
        stats.reference_len = refs
            .iter()
            .map(|r| r.len())
            .min_by_key(|&r| (r.abs_diff(cand.len()), r))
            .unwrap_or(0) as u64;
        for n in 1..=max_n {
            let cand_counts = ngram_counts(&cand, n);
            let ref_counts: Vec<_> = refs.iter().map(|r| ngram_counts(r, n)).collect();
            let mut matched = 0u64;
            for (gram, &count) in &cand_counts {
                let max_ref = ref_counts.iter().map(|rc| rc.get(gram).copied().unwrap_or(0)).max().unwrap_or(0);
                matched += count.min(max_ref) as u64;
            }
            stats.matches[n - 1] = matched;
            stats.totals[n - 1] = cand.len().saturating_sub(n - 1) as u64;
        }
        stats
    }

    pub fn merge(&mut self, other: &BleuStats) {
        if self.matches.len() < other.matches.len() {
            self.matches.resize(other.matches.len(), 0);
            self.totals.resize(other.totals.len(), 0);
        }
        for (i, (&m, &t)) in other.matches.iter().zip(&other.totals).enumerate() {
            self.matches[i] += m;
            self.totals[i] += t;
        }
        self.candidate_len += other.candidate_len;
        self.reference_len += other.reference_len;
    }

    /// Scores the accumulated statistics. Orders for which the candidate has
    /// no n-grams at all are left out of the geometric mean.
    pub fn score(&self, smoothing: Smoothing) -> WbmScore {
        let mut score = WbmScore::new(WbmMetric::Bleu, 0.0)
            .with("hyp_len", self.candidate_len as f64)
            .with("ref_len", self.reference_len as f64);
        if self.candidate_len == 0 {
            return score.with("bp", 0.0).flagged(ScoreFlag::EmptyCandidate);
        }
        let mut log_sum = 0.0;
        let mut orders = 0usize;
        let mut zero = false;
        for (i, (&m, &t)) in self.matches.iter().zip(&self.totals).enumerate() {
            if t == 0 {
                continue;
            }
            let p = match smoothing {
                Smoothing::None => m as f64 / t as f64,
                Smoothing::AddOne => (m as f64 + 1.0) / (t as f64 + 1.0),
            };
            score.detail.insert(format!("p{}", i + 1), p);
            orders += 1;
            if p == 0.0 {
                zero = true;
            } else {
                log_sum += p.ln();
            }
        }
        let (c, r) = (self.candidate_len as f64, self.reference_len as f64);
        let bp = if c < r { (1.0 - r / c).exp() } else { 1.0 };
        score.detail.insert("bp".into(), bp);
        score.detail.insert("effective_order".into(), orders as f64);
        if !zero && orders > 0 {
            score.value = bp * (log_sum / orders as f64).exp();
        }
        score
    }
}

/// Sentence-level BLEU of `candidate` against `references`.
pub fn bleu<T: TokenKey>(candidate: &[T], references: &[Vec<T>], config: BleuConfig) -> Result<WbmScore, WbmError> {
    if references.is_empty() {
        return Err(WbmError::EmptyReferences);
    }
    if config.max_n == 0 {
        return Err(WbmError::InvalidOrder);
    }
    Ok(BleuStats::from_sentence(candidate, references, config.max_n).score(config.smoothing))
}

/// Corpus BLEU over `(candidate, references)` pairs: statistics are summed
/// before scoring.
pub fn corpus_bleu<'a, T: TokenKey + 'a>(
    pairs: impl IntoIterator<Item = (&'a [T], &'a [Vec<T>])>,
    config: BleuConfig,
) -> Result<WbmScore, WbmError> {
    if config.max_n == 0 {
        return Err(WbmError::InvalidOrder);
    }
    let mut total = BleuStats::new(config.max_n);
    for (cand, refs) in pairs {
        if refs.is_empty() {
            return Err(WbmError::EmptyReferences);
        }
        total.merge(&BleuStats::from_sentence(cand, refs, config.max_n));
    }
    Ok(total.score(config.smoothing))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_string).collect()
    }

    #[test]
    fn identity_is_one() {
        let c = toks("the cat sat on the mat");
        let s = bleu(&c, std::slice::from_ref(&c), BleuConfig::default()).unwrap();
        assert_eq!(s.value, 1.0);
        // shorter than max_n still scores 1 via the effective order
        let c = toks("the cat");
        assert_eq!(bleu(&c, std::slice::from_ref(&c), BleuConfig::default()).unwrap().value, 1.0);
    }

    #[test]
    fn clipped_counts_zero_bigrams() {
        let s = bleu(&toks("the the the the"), &[toks("the cat")], BleuConfig::default()).unwrap();
        assert_eq!(s.detail["p1"], 0.25);
        assert_eq!(s.detail["p2"], 0.0);
        assert_eq!(s.value, 0.0);
    }

    #[test]
    fn brevity_penalty_example() {
        let cfg = BleuConfig {
            max_n: 2,
            smoothing: Smoothing::None,
        };
        let s = bleu(&toks("the cat sat"), &[toks("the cat sat on the mat")], cfg).unwrap();
        assert_eq!(s.detail["p1"], 1.0);
        assert_eq!(s.detail["p2"], 1.0);
        assert!((s.detail["bp"] - (-1.0f64).exp()).abs() < 1e-15);
        assert!((s.value - 0.367_879_441).abs() < 1e-6);
    }

    #[test]
    fn closest_reference_ties_take_shorter() {
        let c = toks("a b c d");
        let s = bleu(&c, &[toks("a b c d e f"), toks("a b")], BleuConfig::default()).unwrap();
        assert_eq!(s.detail["ref_len"], 2.0);
        let s = bleu(&c, &[toks("a b c d e"), toks("a b c")], BleuConfig::default()).unwrap();
        assert_eq!(s.detail["ref_len"], 3.0);
    }

    #[test]
    fn add_one_smoothing_avoids_zero() {
        let cfg = BleuConfig {
            max_n: 4,
            smoothing: Smoothing::AddOne,
        };
        let s = bleu(&toks("the the the the"), &[toks("the cat")], cfg).unwrap();
        assert!(s.value > 0.0 && s.value < 1.0);
    }

    #[test]
    fn errors_and_flags() {
        let r = vec![toks("a b")];
        assert!(matches!(
            bleu::<String>(&toks("a"), &[], BleuConfig::default()),
            Err(WbmError::EmptyReferences)
        ));
        let cfg = BleuConfig {
            max_n: 0,
            ..Default::default()
        };
        assert!(matches!(bleu(&toks("a"), &r, cfg), Err(WbmError::InvalidOrder)));
        let s = bleu(&Vec::<String>::new(), &r, BleuConfig::default()).unwrap();
        assert_eq!(s.value, 0.0);
        assert_eq!(s.flags, vec![ScoreFlag::EmptyCandidate]);
    }

    #[test]
    fn corpus_bleu_sums_statistics() {
        let c1 = toks("the cat sat");
        let r1 = [toks("the cat sat")];
        let c2 = toks("a dog ran fast");
        let r2 = [toks("a dog ran fast")];
        let s = corpus_bleu([(&c1[..], &r1[..]), (&c2[..], &r2[..])], BleuConfig::default()).unwrap();
        assert_eq!(s.value, 1.0);
        assert_eq!(s.detail["hyp_len"], 7.0);
    }
}
