use super::{keys, ScoreFlag, TokenKey, WbmMetric, WbmScore};
use crate::error::WbmError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TerConfig {
    /// Allow phrase shifts. Without shifts TER is word-level Levenshtein
    /// distance over average reference length.
    pub shifts: bool,
    /// Upper bound on accepted shifts per reference.
    pub max_iterations: usize,
    /// Longest phrase considered for a single shift.
    pub max_phrase_len: usize,
}

impl Default for TerConfig {
    fn default() -> Self {
        Self {
            shifts: true,
            max_iterations: 50,
            max_phrase_len: 10,
        }
    }
}

/// Word-level edit distance with unit insert, delete and substitute costs.
pub fn levenshtein<A: AsRef<str>, B: AsRef<str>>(a: &[A], b: &[B]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, x) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(x.as_ref() != y.as_ref());
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

fn contains_phrase(haystack: &[&str], needle: &[&str]) -> bool {
    haystack.windows(needle.len()).any(|w| w == needle)
}

fn apply_shift<'a>(hyp: &[&'a str], start: usize, len: usize, target: usize) -> Vec<&'a str> {
    let mut rest: Vec<&str> = Vec::with_capacity(hyp.len());
    rest.extend_from_slice(&hyp[..start]);
    rest.extend_from_slice(&hyp[start + len..]);
    let mut out = Vec::with_capacity(hyp.len());
    out.extend_from_slice(&rest[..target]);
    out.extend_from_slice(&hyp[start..start + len]);
    out.extend_from_slice(&rest[target..]);
    out
}

/// Greedy shift search against one reference. Returns `(edits, shifts)`
/// where `edits` already includes one unit per shift.
fn align(hyp: &[&str], reference: &[&str], config: &TerConfig) -> (usize, usize) {
    let mut current = hyp.to_vec();
    let mut cost = levenshtein(&current, reference);
    let mut shifts = 0;
    if !config.shifts {
        return (cost, 0);
    }
    while shifts < config.max_iterations && cost > 0 {
        let mut best: Option<(usize, Vec<&str>)> = None;
        for start in 0..current.len() {
            for len in 1..=config.max_phrase_len.min(current.len() - start) {
                let phrase = &current[start..start + len];
                if !contains_phrase(reference, phrase) {
                    break;
                }
                for target in 0..=current.len() - len {
                    if target == start {
                        continue;
                    }
                    let moved = apply_shift(&current, start, len, target);
                    let moved_cost = levenshtein(&moved, reference);
                    if moved_cost < best.as_ref().map_or(cost, |b| b.0) {
                        best = Some((moved_cost, moved));
                    }
                }
            }
        }
        match best {
            Some((moved_cost, moved)) => {
                current = moved;
                cost = moved_cost;
                shifts += 1;
            }
            None => break,
        }
    }
    (cost + shifts, shifts)
}

pub fn ter<T: TokenKey>(candidate: &[T], references: &[Vec<T>]) -> Result<WbmScore, WbmError> {
    ter_with_config(candidate, references, TerConfig::default())
}

/// Translation edit rate: fewest edits (insertions, deletions,
/// substitutions, phrase shifts) to any reference, over the average
/// reference length.
pub fn ter_with_config<T: TokenKey>(
    candidate: &[T],
    references: &[Vec<T>],
    config: TerConfig,
) -> Result<WbmScore, WbmError> {
    if references.is_empty() {
        return Err(WbmError::EmptyReferences);
    }
    let avg_len = references.iter().map(Vec::len).sum::<usize>() as f64 / references.len() as f64;
    if avg_len == 0.0 {
        return Err(WbmError::ZeroLengthReferences);
    }
    let hyp = keys(candidate);
    let (best_ref, (edits, shifts)) = references
        .iter()
        .map(|r| align(&hyp, &keys(r), &config))
        .enumerate()
        .min_by_key(|&(i, (edits, _))| (edits, i))
        .expect("at least one reference");
    let mut score = WbmScore::new(WbmMetric::Ter, edits as f64 / avg_len)
        .with("edits", edits as f64)
        .with("shifts", shifts as f64)
        .with("avg_ref_len", avg_len)
        .with("best_ref", best_ref as f64);
    if hyp.is_empty() {
        score = score.flagged(ScoreFlag::EmptyCandidate);
    }
    Ok(score)
}
