//! Evaluation records and the metric suite that scores them.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::EvalError;
use crate::gbm::{gbm_profile, value_exemptions, READABILITY_FORMULA};
use crate::mr::parse_mr;
use crate::resources::WordSet;
use crate::textproc::{Token, TextUnit};
use crate::wbm::{
    bleu, rouge_l, rouge_n, semantic_similarity, ter_with_config, BleuConfig, BleuStats, ScoreFlag,
    SimilarityProvider, Smoothing, TerConfig,
};

/// One evaluation unit: an optional MR, its references, and per-system
/// outputs and human ratings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub id: String,
    #[serde(default)]
    pub mr: Option<String>,
    #[serde(default)]
    pub references: Vec<String>,
    #[serde(default)]
    pub outputs: BTreeMap<String, String>,
    #[serde(default)]
    pub ratings: BTreeMap<String, BTreeMap<String, f64>>,
}

/// Rating scale used to check human ratings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatingScale {
    pub min: f64,
    pub max: f64,
}

impl Default for RatingScale {
    fn default() -> Self {
        Self { min: 1.0, max: 6.0 }
    }
}

pub fn check_ratings(records: &[EvalRecord], scale: RatingScale) -> Result<(), EvalError> {
    for r in records {
        for aspects in r.ratings.values() {
            for (aspect, &value) in aspects {
                if !(scale.min..=scale.max).contains(&value) {
                    return Err(EvalError::RatingOutOfScale {
                        id: r.id.clone(),
                        aspect: aspect.clone(),
                        value,
                        min: scale.min,
                        max: scale.max,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Names of the grammar-based metrics, in report order.
pub const GBM_METRICS: [&str; 6] = [
    "readability",
    "chars_per_utterance",
    "chars_per_word",
    "syllables_per_sentence",
    "syllables_per_word",
    "misspellings",
];

/// Which metrics to run and with which variant parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSuite {
    pub bleu: Option<BleuConfig>,
    pub ter: Option<TerConfig>,
    /// ROUGE-N orders to compute.
    pub rouge_n: Vec<usize>,
    pub rouge_l: bool,
    pub semsim: bool,
    pub gbm: bool,
}

impl Default for MetricSuite {
    fn default() -> Self {
        Self {
            bleu: Some(BleuConfig::default()),
            ter: Some(TerConfig::default()),
            rouge_n: vec![1, 2],
            rouge_l: true,
            semsim: true,
            gbm: true,
        }
    }
}

impl MetricSuite {
    /// Enabled metric names, in report order.
    pub fn metric_names(&self) -> Vec<String> {
        let mut names = Vec::new();
        if self.bleu.is_some() {
            names.push("bleu".to_string());
        }
        if self.ter.is_some() {
            names.push("ter".to_string());
        }
        names.extend(self.rouge_n.iter().map(|n| format!("rouge_{n}")));
        if self.rouge_l {
            names.push("rouge_l".to_string());
        }
        if self.semsim {
            names.push("semsim".to_string());
        }
        if self.gbm {
            names.extend(GBM_METRICS.iter().map(|s| s.to_string()));
        }
        names
    }

    /// Variant description of every enabled metric.
    pub fn variants(&self, similarity: &dyn SimilarityProvider) -> BTreeMap<String, String> {
        let mut v = BTreeMap::new();
        if let Some(b) = self.bleu {
            let smoothing = match b.smoothing {
                Smoothing::None => "none",
                Smoothing::AddOne => "add_one",
            };
            v.insert(
                "bleu".into(),
                format!("max_n={} smoothing={smoothing} brevity=closest_ref corpus=summed_stats", b.max_n),
            );
        }
        if let Some(t) = self.ter {
            v.insert(
                "ter".into(),
                format!(
                    "shifts={} search=greedy max_iterations={} max_phrase_len={} norm=avg_ref_len",
                    t.shifts, t.max_iterations, t.max_phrase_len
                ),
            );
        }
        for n in &self.rouge_n {
            v.insert(format!("rouge_{n}"), "clipped_recall max_over_refs".into());
        }
        if self.rouge_l {
            v.insert("rouge_l".into(), "lcs_f1 max_over_refs".into());
        }
        if self.semsim {
            v.insert("semsim".into(), format!("provider={} max_over_refs", similarity.name()));
        }
        if self.gbm {
            v.insert("readability".into(), READABILITY_FORMULA.into());
            v.insert("misspellings".into(), "dictionary_lookup mr_values_exempt".into());
        }
        v
    }
}

/// Scores of one system's output for one record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemScores {
    pub id: String,
    pub system: String,
    pub scores: BTreeMap<String, f64>,
    /// `metric:flag` entries, sorted.
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemSummary {
    pub n_items: usize,
    pub mean: BTreeMap<String, f64>,
    pub corpus_bleu: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub metrics: Vec<String>,
    pub variants: BTreeMap<String, String>,
    pub n_metrics: usize,
    pub n_records: usize,
    /// Records without any system output.
    pub n_records_without_outputs: usize,
    pub items: Vec<ItemScores>,
    pub systems: BTreeMap<String, SystemSummary>,
}

impl MetricReport {
    /// Score of `metric` for `(id, system)`, if present.
    pub fn score(&self, id: &str, system: &str, metric: &str) -> Option<f64> {
        self.index().get(&(id, system)).and_then(|i| self.items[*i].scores.get(metric).copied())
    }

    /// Map from `(id, system)` to the item's position.
    pub fn index(&self) -> BTreeMap<(&str, &str), usize> {
        self.items
            .iter()
            .enumerate()
            .map(|(i, it)| ((it.id.as_str(), it.system.as_str()), i))
            .collect()
    }
}

/// Resources shared by every scored item.
pub struct Scorer<'a> {
    pub suite: MetricSuite,
    pub dictionary: &'a WordSet,
    pub abbreviations: &'a WordSet,
    pub similarity: &'a dyn SimilarityProvider,
}

struct Scored {
    item: ItemScores,
    bleu_stats: Option<BleuStats>,
}

impl<'a> Scorer<'a> {
    fn unit(&self, text: &str) -> TextUnit {
        TextUnit::with_abbreviations(text, self.abbreviations)
    }

    fn score_output(
        &self,
        record: &EvalRecord,
        system: &str,
        output: &str,
        refs: &[TextUnit],
        ref_tokens: &[Vec<Token>],
        exemptions: &WordSet,
    ) -> Scored {
        let cand = self.unit(output);
        let cand_tokens: Vec<Token> = cand.tokens().cloned().collect();
        let mut scores = BTreeMap::new();
        let mut flags = Vec::new();
        let record_flags = |flags: &mut Vec<String>, metric: &str, f: &[ScoreFlag]| {
            for flag in f {
                let name = match flag {
                    ScoreFlag::EmptyCandidate => "empty_candidate",
                    ScoreFlag::EmptyAfterFiltering => "empty_after_filtering",
                };
                flags.push(format!("{metric}:{name}"));
            }
        };
        let mut bleu_stats = None;
        // references are checked non-empty before scoring, so the metric
        // calls below cannot fail
        if let Some(cfg) = self.suite.bleu {
            let s = bleu(&cand_tokens, ref_tokens, cfg).expect("validated references");
            record_flags(&mut flags, "bleu", &s.flags);
            scores.insert("bleu".to_string(), s.value);
            bleu_stats = Some(BleuStats::from_sentence(&cand_tokens, ref_tokens, cfg.max_n));
        }
        if let Some(cfg) = self.suite.ter {
            // zero-length references leave TER undefined for this item
            match ter_with_config(&cand_tokens, ref_tokens, cfg) {
                Ok(s) => {
                    record_flags(&mut flags, "ter", &s.flags);
                    scores.insert("ter".to_string(), s.value);
                }
                Err(_) => flags.push("ter:zero_length_references".to_string()),
            }
        }
        for &n in &self.suite.rouge_n {
            let s = rouge_n(&cand_tokens, ref_tokens, n).expect("validated references");
            scores.insert(format!("rouge_{n}"), s.value);
        }
        if self.suite.rouge_l {
            let s = rouge_l(&cand_tokens, ref_tokens).expect("validated references");
            scores.insert("rouge_l".to_string(), s.value);
        }
        if self.suite.semsim {
            let best = refs
                .iter()
                .map(|r| semantic_similarity(&cand, r, self.similarity))
                .max_by(|a, b| a.value.total_cmp(&b.value))
                .expect("validated references");
            let mut fl = best.flags.clone();
            fl.sort();
            fl.dedup();
            record_flags(&mut flags, "semsim", &fl);
            scores.insert("semsim".to_string(), best.value);
        }
        if self.suite.gbm {
            let p = gbm_profile(&cand, self.dictionary, exemptions);
            if !p.readability_defined {
                flags.push("readability:undefined".to_string());
            }
            scores.insert("readability".into(), p.readability);
            scores.insert("chars_per_utterance".into(), p.chars_per_utterance);
            scores.insert("chars_per_word".into(), p.chars_per_word);
            scores.insert("syllables_per_sentence".into(), p.syllables_per_sentence);
            scores.insert("syllables_per_word".into(), p.syllables_per_word);
            scores.insert("misspellings".into(), p.misspellings as f64);
        }
        flags.sort();
        Scored {
            item: ItemScores {
                id: record.id.clone(),
                system: system.to_string(),
                scores,
                flags,
            },
            bleu_stats,
        }
    }

    fn score_record(&self, record: &EvalRecord) -> Result<Vec<Scored>, EvalError> {
        if record.outputs.is_empty() {
            return Ok(Vec::new());
        }
        if record.references.is_empty() {
            return Err(EvalError::MissingReferences { id: record.id.clone() });
        }
        let exemptions = match &record.mr {
            Some(raw) if !raw.trim().is_empty() => {
                let mr = parse_mr(raw).map_err(|source| EvalError::BadMr {
                    id: record.id.clone(),
                    source,
                })?;
                value_exemptions(&mr)
            }
            _ => WordSet::new(),
        };
        let refs: Vec<TextUnit> = record.references.iter().map(|r| self.unit(r)).collect();
        let ref_tokens: Vec<Vec<Token>> = refs.iter().map(|r| r.tokens().cloned().collect()).collect();
        Ok(record
            .outputs
            .iter()
            .map(|(system, output)| self.score_output(record, system, output, &refs, &ref_tokens, &exemptions))
            .collect())
    }

    /// Scores every system output of every record. Item order follows record
    /// order, then system name.
    pub fn score_records(&self, records: &[EvalRecord]) -> Result<MetricReport, EvalError> {
        if records.is_empty() {
            return Err(EvalError::EmptyInput);
        }
        let per_record: Vec<Vec<Scored>> = records
            .par_iter()
            .map(|r| self.score_record(r))
            .collect::<Result<_, _>>()?;
        let metrics = self.suite.metric_names();
        let n_records_without_outputs = records.iter().filter(|r| r.outputs.is_empty()).count();

        // per system: item count, per-metric (sum, count), merged BLEU statistics
        type Sums = (usize, BTreeMap<String, (f64, usize)>, Option<BleuStats>);
        let mut sums: BTreeMap<String, Sums> = BTreeMap::new();
        let mut items = Vec::new();
        for scored in per_record.into_iter().flatten() {
            let entry = sums.entry(scored.item.system.clone()).or_default();
            entry.0 += 1;
            for (m, v) in &scored.item.scores {
                let s = entry.1.entry(m.clone()).or_insert((0.0, 0));
                s.0 += v;
                s.1 += 1;
            }
            if let Some(stats) = &scored.bleu_stats {
                entry.2.get_or_insert_with(|| BleuStats::new(stats.matches.len())).merge(stats);
            }
            items.push(scored.item);
        }
        let smoothing = self.suite.bleu.map(|b| b.smoothing).unwrap_or_default();
        let systems = sums
            .into_iter()
            .map(|(system, (n_items, totals, stats))| {
                let mean = totals.into_iter().map(|(m, (s, c))| (m, s / c as f64)).collect();
                let corpus_bleu = stats.map(|s| s.score(smoothing).value);
                (
                    system,
                    SystemSummary {
                        n_items,
                        mean,
                        corpus_bleu,
                    },
                )
            })
            .collect();
        Ok(MetricReport {
            n_metrics: metrics.len(),
            metrics,
            variants: self.suite.variants(self.similarity),
            n_records: records.len(),
            n_records_without_outputs,
            items,
            systems,
        })
    }
}
