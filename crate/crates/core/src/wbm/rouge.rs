use super::{keys, ngram_counts, ScoreFlag, TokenKey, WbmMetric, WbmScore};
use crate::error::WbmError;

/// ROUGE-N: clipped n-gram recall, maximized over references.
pub fn rouge_n<T: TokenKey>(candidate: &[T], references: &[Vec<T>], n: usize) -> Result<WbmScore, WbmError> {
    if references.is_empty() {
        return Err(WbmError::EmptyReferences);
    }
    if n == 0 {
        return Err(WbmError::InvalidOrder);
    }
    let cand = keys(candidate);
    let cand_counts = ngram_counts(&cand, n);
    let mut best = (0.0f64, 0usize);
    for (i, reference) in references.iter().enumerate() {
        let r = keys(reference);
        if r.len() < n || cand.len() < n {
            continue;
        }
        let ref_counts = ngram_counts(&r, n);
        let total: usize = ref_counts.values().sum();
        let hits: usize = ref_counts
            .iter()
            .map(|(g, &c)| c.min(cand_counts.get(g).copied().unwrap_or(0)))
            .sum();
        let recall = hits as f64 / total as f64;
        if recall > best.0 {
            best = (recall, i);
        }
    }
    let mut score = WbmScore::new(WbmMetric::RougeN(n), best.0).with("best_ref", best.1 as f64);
    if cand.is_empty() {
        score = score.flagged(ScoreFlag::EmptyCandidate);
    }
    Ok(score)
}

/// Length of the longest common subsequence.
pub fn lcs_len<A: AsRef<str>, B: AsRef<str>>(a: &[A], b: &[B]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x.as_ref() == y.as_ref() {
                prev[j] + 1
            } else {
                prev[j + 1].max(cur[j])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// ROUGE-L F1 from the longest common subsequence, maximized over references.
pub fn rouge_l<T: TokenKey>(candidate: &[T], references: &[Vec<T>]) -> Result<WbmScore, WbmError> {
    if references.is_empty() {
        return Err(WbmError::EmptyReferences);
    }
    let cand = keys(candidate);
    let mut best = (0.0f64, 0.0f64, 0.0f64, 0usize);
    for (i, reference) in references.iter().enumerate() {
        let r = keys(reference);
        if cand.is_empty() || r.is_empty() {
            continue;
        }
        let l = lcs_len(&cand, &r) as f64;
        let recall = l / r.len() as f64;
        let precision = l / cand.len() as f64;
        let f1 = if recall + precision == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        if f1 > best.0 {
            best = (f1, recall, precision, i);
        }
    }
    let mut score = WbmScore::new(WbmMetric::RougeL, best.0)
        .with("recall", best.1)
        .with("precision", best.2)
        .with("best_ref", best.3 as f64);
    if cand.is_empty() {
        score = score.flagged(ScoreFlag::EmptyCandidate);
    }
    Ok(score)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_string).collect()
    }

    #[test]
    fn rouge_n_examples() {
        let c = toks("a b c");
        assert_eq!(rouge_n(&c, std::slice::from_ref(&c), 2).unwrap().value, 1.0);
        assert_eq!(rouge_n(&c, &[toks("x y z")], 1).unwrap().value, 0.0);
        assert_eq!(rouge_n(&c, &[toks("a b d")], 2).unwrap().value, 0.5);
    }

    #[test]
    fn rouge_n_short_inputs() {
        assert_eq!(rouge_n(&toks("a"), &[toks("a b")], 2).unwrap().value, 0.0);
        assert_eq!(rouge_n(&toks("a b"), &[toks("a")], 2).unwrap().value, 0.0);
        // clipped: candidate repeats do not inflate recall
        assert_eq!(rouge_n(&toks("a a a"), &[toks("a b")], 1).unwrap().value, 0.5);
    }

    #[test]
    fn rouge_l_examples() {
        let c = toks("a b c d");
        assert_eq!(rouge_l(&c, std::slice::from_ref(&c)).unwrap().value, 1.0);
        let s = rouge_l(&c, &[toks("a c b d")]).unwrap();
        assert_eq!(s.value, 0.75);
        assert_eq!(s.detail["recall"], 0.75);
        assert_eq!(s.detail["precision"], 0.75);
        assert_eq!(rouge_l(&c, &[toks("x y")]).unwrap().value, 0.0);
    }

    #[test]
    fn empty_references_error() {
        assert!(rouge_l(&toks("a"), &[]).is_err());
        assert!(rouge_n(&toks("a"), &[], 1).is_err());
    }

    #[test]
    fn lcs_known_values() {
        assert_eq!(lcs_len(&toks("a b c b d a b"), &toks("b d c a b a")), 4);
        assert_eq!(lcs_len(&toks(""), &toks("a")), 0);
    }
}
