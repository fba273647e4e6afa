//! Metric reliability: rank correlation with human ratings, relative ranking
//! accuracy and bootstrap intervals.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::StatsError;
use crate::eval::{EvalRecord, MetricReport};

/// Average ranks, 1-based; tied values share the mean of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // positions i+1 ..= j share their mean
        let rank = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = rank;
        }
        i = j;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman's rho as the Pearson correlation of average ranks. `None` when
/// either sample is constant.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<Option<f64>, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(StatsError::TooFewSamples(x.len()));
    }
    Ok(pearson(&average_ranks(x), &average_ranks(y)))
}

/// Share of system pairs, among those humans tell apart, that the metric
/// orders the same way. Metric ties on such pairs count one half. `None`
/// when humans tie on every pair.
pub fn ranking_accuracy(
    metric_scores: &BTreeMap<String, f64>,
    human_scores: &BTreeMap<String, f64>,
) -> Result<Option<f64>, StatsError> {
    let systems: Vec<(&f64, &f64)> = metric_scores
        .iter()
        .filter_map(|(s, m)| human_scores.get(s).map(|h| (m, h)))
        .collect();
    if systems.len() < 2 {
        return Err(StatsError::TooFewSystems(systems.len()));
    }
    let mut decided = 0usize;
    let mut agreement = 0.0;
    for (i, (m1, h1)) in systems.iter().enumerate() {
        for (m2, h2) in &systems[i + 1..] {
            if h1 == h2 {
                continue;
            }
            decided += 1;
            if m1 == m2 {
                agreement += 0.5;
            } else if (m1 < m2) == (h1 < h2) {
                agreement += 1.0;
            }
        }
    }
    Ok((decided > 0).then(|| agreement / decided as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapInterval {
    pub low: f64,
    pub high: f64,
    /// Resamples whose statistic was defined.
    pub defined_resamples: usize,
    /// Too few samples or defined resamples for a meaningful interval.
    pub degenerate: bool,
}

/// Linear-interpolation percentile of sorted data, `q` in `[0, 1]`.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Percentile 95% interval for Spearman's rho over `n_resamples` paired
/// resamples drawn with replacement.
///
/// Resample indices come from one ChaCha8 stream seeded with `seed`, drawn
/// sequentially before any parallel work, so the result does not depend on
/// the number of worker threads. The interval is widened to contain the
/// full-sample rho when the percentiles miss it.
pub fn bootstrap_ci(x: &[f64], y: &[f64], n_resamples: usize, seed: u64) -> Result<BootstrapInterval, StatsError> {
    let rho = spearman(x, y)?;
    let n = x.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<Vec<usize>> = (0..n_resamples)
        .map(|_| (0..n).map(|_| rng.gen_range(0..n)).collect())
        .collect();
    let mut stats: Vec<f64> = draws
        .par_iter()
        .filter_map(|idx| {
            let xs: Vec<f64> = idx.iter().map(|&i| x[i]).collect();
            let ys: Vec<f64> = idx.iter().map(|&i| y[i]).collect();
            pearson(&average_ranks(&xs), &average_ranks(&ys))
        })
        .collect();
    stats.sort_by(f64::total_cmp);
    let defined = stats.len();
    let degenerate = n < 3 || defined * 2 < n_resamples.max(1);
    let (mut low, mut high) = match (stats.first(), rho) {
        (Some(_), _) => (percentile(&stats, 0.025), percentile(&stats, 0.975)),
        (None, Some(r)) => (r, r),
        (None, None) => (f64::NAN, f64::NAN),
    };
    if let Some(r) = rho {
        low = low.min(r);
        high = high.max(r);
    }
    Ok(BootstrapInterval {
        low,
        high,
        defined_resamples: defined,
        degenerate,
    })
}

/// One metric and rating aspect pair in a correlation table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRow {
    pub metric: String,
    pub aspect: String,
    /// `None` when either side is constant or fewer than 2 pairs remain.
    pub rho: Option<f64>,
    pub n: usize,
    /// Rated items lacking a metric score, or scored items lacking the rating.
    pub n_dropped: usize,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub ci_degenerate: bool,
    /// Agreement of system means with human system means.
    pub ranking_accuracy: Option<f64>,
    pub n_systems: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub rows: Vec<CorrelationRow>,
    pub aspects: Vec<String>,
    pub n_resamples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationConfig {
    pub n_resamples: usize,
    pub seed: u64,
}

impl Default for CorrelationConfig {
    fn default() -> Self {
        Self {
            n_resamples: 1000,
            seed: 42,
        }
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Item-level Spearman correlation, bootstrap interval and system-level
/// ranking accuracy for every metric and rating aspect. Rows are sorted by
/// `|rho|` descending; undefined correlations come last.
pub fn correlate(records: &[EvalRecord], report: &MetricReport, config: CorrelationConfig) -> CorrelationReport {
    let index = report.index();
    let aspects: BTreeSet<&str> = records
        .iter()
        .flat_map(|r| r.ratings.values().flat_map(|a| a.keys().map(String::as_str)))
        .collect();
    let mut rows = Vec::new();
    for metric in &report.metrics {
        for &aspect in &aspects {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            let mut per_system: BTreeMap<&str, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
            let mut dropped = 0usize;
            for rec in records {
                let systems: BTreeSet<&str> = rec
                    .outputs
                    .keys()
                    .chain(rec.ratings.keys())
                    .map(String::as_str)
                    .collect();
                for system in systems {
                    let m = index
                        .get(&(rec.id.as_str(), system))
                        .and_then(|&i| report.items[i].scores.get(metric.as_str()).copied());
                    let h = rec.ratings.get(system).and_then(|a| a.get(aspect)).copied();
                    match (m, h) {
                        (Some(m), Some(h)) => {
                            xs.push(m);
                            ys.push(h);
                            let e = per_system.entry(system).or_default();
                            e.0.push(m);
                            e.1.push(h);
                        }
                        (None, None) => {}
                        _ => dropped += 1,
                    }
                }
            }
            let n = xs.len();
            let (rho, ci) = if n >= 2 {
                let rho = spearman(&xs, &ys).expect("equal lengths, n >= 2");
                let ci = bootstrap_ci(&xs, &ys, config.n_resamples, config.seed).expect("equal lengths, n >= 2");
                (rho, Some(ci))
            } else {
                (None, None)
            };
            let metric_means: BTreeMap<String, f64> =
                per_system.iter().map(|(s, (m, _))| (s.to_string(), mean(m))).collect();
            let human_means: BTreeMap<String, f64> =
                per_system.iter().map(|(s, (_, h))| (s.to_string(), mean(h))).collect();
            let ranking_accuracy = ranking_accuracy(&metric_means, &human_means).ok().flatten();
            let defined = |v: f64| (!v.is_nan()).then_some(v);
            rows.push(CorrelationRow {
                metric: metric.clone(),
                aspect: aspect.to_string(),
                rho,
                n,
                n_dropped: dropped,
                ci_low: rho.and(ci).and_then(|c| defined(c.low)),
                ci_high: rho.and(ci).and_then(|c| defined(c.high)),
                ci_degenerate: ci.is_none_or(|c| c.degenerate) || rho.is_none(),
                ranking_accuracy,
                n_systems: per_system.len(),
            });
        }
    }
    rows.sort_by(|a, b| {
        let key = |r: &CorrelationRow| r.rho.map(f64::abs).unwrap_or(-1.0);
        key(b)
            .total_cmp(&key(a))
            .then_with(|| a.metric.cmp(&b.metric))
            .then_with(|| a.aspect.cmp(&b.aspect))
    });
    CorrelationReport {
        rows,
        aspects: aspects.into_iter().map(String::from).collect(),
        n_resamples: config.n_resamples,
        seed: config.seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn ranks_with_ties() {
        assert_eq!(average_ranks(&[1.0, 2.0, 2.0, 3.0]), vec![1.0, 2.5, 2.5, 4.0]);
        assert_eq!(average_ranks(&[5.0, 5.0, 5.0]), vec![2.0, 2.0, 2.0]);
        assert_eq!(average_ranks(&[3.0, 1.0, 2.0]), vec![3.0, 1.0, 2.0]);
    }

    #[test]
    fn spearman_examples() {
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]).unwrap(), Some(1.0));
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[30.0, 20.0, 10.0]).unwrap(), Some(-1.0));
        assert_eq!(spearman(&[1.0, 1.0], &[1.0, 2.0]).unwrap(), None);
    }

    #[test]
    fn spearman_errors() {
        assert_eq!(spearman(&[1.0], &[1.0, 2.0]), Err(StatsError::LengthMismatch(1, 2)));
        assert_eq!(spearman(&[1.0], &[1.0]), Err(StatsError::TooFewSamples(1)));
    }

    #[test]
    fn ranking_accuracy_examples() {
        let human = map(&[("a", 1.0), ("b", 2.0), ("c", 3.0)]);
        assert_eq!(ranking_accuracy(&map(&[("a", 0.1), ("b", 0.2), ("c", 0.3)]), &human).unwrap(), Some(1.0));
        assert_eq!(ranking_accuracy(&map(&[("a", -1.0), ("b", -2.0), ("c", -3.0)]), &human).unwrap(), Some(0.0));
        let acc = ranking_accuracy(&map(&[("a", 5.0), ("b", 5.0), ("c", 9.0)]), &human).unwrap().unwrap();
        assert!((acc - 2.5 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn ranking_accuracy_edges() {
        let human = map(&[("a", 1.0), ("b", 1.0)]);
        assert_eq!(ranking_accuracy(&map(&[("a", 1.0), ("b", 2.0)]), &human).unwrap(), None);
        assert_eq!(
            ranking_accuracy(&map(&[("a", 1.0)]), &human),
            Err(StatsError::TooFewSystems(1))
        );
        // systems missing from either side are ignored
        let human = map(&[("a", 1.0), ("b", 2.0), ("z", 3.0)]);
        assert_eq!(ranking_accuracy(&map(&[("a", 1.0), ("b", 2.0), ("q", 0.0)]), &human).unwrap(), Some(1.0));
    }

    #[test]
    fn bootstrap_perfect_correlation() {
        let x: Vec<f64> = (0..30).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| v * 2.0 + 1.0).collect();
        let ci = bootstrap_ci(&x, &y, 200, 7).unwrap();
        assert_eq!((ci.low, ci.high), (1.0, 1.0));
        assert!(!ci.degenerate);
    }

    #[test]
    fn bootstrap_two_samples_is_degenerate() {
        let ci = bootstrap_ci(&[1.0, 2.0], &[1.0, 2.0], 100, 1).unwrap();
        assert!(ci.degenerate);
        assert_eq!((ci.low, ci.high), (1.0, 1.0));
    }

    #[test]
    fn bootstrap_is_reproducible() {
        let x: Vec<f64> = (0..40).map(|i| ((i * 37) % 11) as f64).collect();
        let y: Vec<f64> = (0..40).map(|i| ((i * 13) % 7) as f64).collect();
        let a = bootstrap_ci(&x, &y, 300, 42).unwrap();
        let b = bootstrap_ci(&x, &y, 300, 42).unwrap();
        assert_eq!(a.low.to_bits(), b.low.to_bits());
        assert_eq!(a.high.to_bits(), b.high.to_bits());
        let c = bootstrap_ci(&x, &y, 300, 43).unwrap();
        assert!(a != c || a.low == c.low);
    }

    fn rated(id: &str, system: &str, out: &str, quality: f64) -> EvalRecord {
        EvalRecord {
            id: id.into(),
            mr: None,
            references: vec!["the cat sat on the mat".into()],
            outputs: [(system.to_string(), out.to_string())].into_iter().collect(),
            ratings: [(system.to_string(), [("quality".to_string(), quality)].into_iter().collect())]
                .into_iter()
                .collect(),
        }
    }

    fn report(records: &[EvalRecord]) -> MetricReport {
        let dict = crate::WordSet::default_dictionary();
        let abbr = crate::WordSet::default_abbreviations();
        let sim = crate::wbm::LexicalOverlap::default();
        crate::eval::Scorer {
            suite: crate::eval::MetricSuite::default(),
            dictionary: &dict,
            abbreviations: &abbr,
            similarity: &sim,
        }
        .score_records(records)
        .unwrap()
    }

    #[test]
    fn correlate_monotone_ratings() {
        let outs = ["the cat", "the cat sat", "the cat sat on", "the cat sat on the mat"];
        let records: Vec<EvalRecord> = outs
            .iter()
            .enumerate()
            .map(|(i, o)| rated(&i.to_string(), if i % 2 == 0 { "a" } else { "b" }, o, 1.0 + i as f64))
            .collect();
        let rep = report(&records);
        let c = correlate(&records, &rep, CorrelationConfig::default());
        let row = c.rows.iter().find(|r| r.metric == "rouge_l").unwrap();
        assert_eq!(row.rho, Some(1.0));
        assert_eq!(row.n, 4);
        assert_eq!(row.ranking_accuracy, Some(1.0));
        assert!(row.ci_low.unwrap() <= 1.0 && row.ci_high == Some(1.0));
        // a constant metric has no rank correlation and ties every system pair
        let row = c.rows.iter().find(|r| r.metric == "misspellings").unwrap();
        assert_eq!(row.rho, None);
        assert_eq!(row.ranking_accuracy, Some(0.5));
        assert_eq!(c.rows.last().unwrap().rho, None);
    }

    #[test]
    fn correlate_counts_dropped_items() {
        let mut records = vec![rated("1", "a", "the cat", 1.0), rated("2", "a", "the cat sat", 2.0)];
        records.push(EvalRecord {
            ratings: BTreeMap::new(),
            ..rated("3", "a", "cat", 3.0)
        });
        let rep = report(&records);
        let c = correlate(&records, &rep, CorrelationConfig::default());
        assert!(c.rows.iter().all(|r| r.n == 2 && r.n_dropped == 1));
        assert_eq!(c.aspects, vec!["quality".to_string()]);
    }
}
