//! Automatic quality gates for crowdsourced (MR, utterance) pairs.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::ValidateError;
use crate::gbm::{gbm_profile, value_exemptions};
use crate::mr::{lexicon_key, realization_spans, utterance_keys, MeaningRepresentation, SlotLexicon};
use crate::resources::WordSet;
use crate::textproc::TextUnit;
use crate::wbm::{semantic_similarity, LexicalOverlap, SimilarityProvider};

pub const WELL_FORMEDNESS: &str = "well_formedness";
pub const SEMANTIC_ADEQUACY: &str = "semantic_adequacy";
pub const HALLUCINATION: &str = "hallucination";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationConfig {
    pub min_words: usize,
    pub max_misspellings: usize,
    pub coverage_threshold: f64,
    /// Content selection is allowed: any positive coverage that also meets
    /// `coverage_threshold` passes.
    pub allow_skipped_slots: bool,
    pub semsim_threshold: f64,
    pub forbid_foreign_values: bool,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            min_words: 3,
            max_misspellings: 0,
            coverage_threshold: 1.0,
            allow_skipped_slots: false,
            semsim_threshold: 0.3,
            forbid_foreign_values: true,
        }
    }
}

impl ValidationConfig {
    pub fn check(&self) -> Result<(), ValidateError> {
        for (name, value) in [
            ("coverage_threshold", self.coverage_threshold),
            ("semsim_threshold", self.semsim_threshold),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(ValidateError::ThresholdOutOfRange { name, value });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateResult {
    pub gate: String,
    pub passed: bool,
    pub diagnostic: String,
    /// Word count, coverage and foreign-value mentions respectively.
    pub measured: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationOutcome {
    pub passed: bool,
    pub gates: Vec<GateResult>,
}

impl ValidationOutcome {
    pub fn gate(&self, name: &str) -> Option<&GateResult> {
        self.gates.iter().find(|g| g.gate == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub outcomes: Vec<ValidationOutcome>,
    pub n: usize,
    pub n_passed: usize,
    pub pass_rate: f64,
    /// Failures per gate name; every gate is listed, zero counts included.
    pub gate_failures: BTreeMap<String, usize>,
}

/// Shared resources for validation. Immutable and usable across threads.
pub struct Validator<'a> {
    pub config: ValidationConfig,
    pub lexicon: &'a SlotLexicon,
    pub dictionary: &'a WordSet,
    pub similarity: &'a dyn SimilarityProvider,
}

impl<'a> Validator<'a> {
    pub fn new(
        config: ValidationConfig,
        lexicon: &'a SlotLexicon,
        dictionary: &'a WordSet,
        similarity: &'a dyn SimilarityProvider,
    ) -> Result<Self, ValidateError> {
        config.check()?;
        Ok(Self {
            config,
            lexicon,
            dictionary,
            similarity,
        })
    }

    pub fn validate(&self, mr: &MeaningRepresentation, text: &str) -> ValidationOutcome {
        let unit = TextUnit::new(text);
        let gates = vec![
            self.well_formedness(mr, text, &unit),
            self.semantic_adequacy(mr, &unit),
            self.hallucination(mr, &unit),
        ];
        ValidationOutcome {
            passed: gates.iter().all(|g| g.passed),
            gates,
        }
    }

    fn well_formedness(&self, mr: &MeaningRepresentation, raw: &str, unit: &TextUnit) -> GateResult {
        let c = &self.config;
        let profile = gbm_profile(unit, self.dictionary, &value_exemptions(mr));
        let control = raw.chars().filter(|ch| ch.is_control() && !ch.is_whitespace()).count();
        let mut problems = Vec::new();
        if profile.word_count < c.min_words {
            problems.push(format!("{} words, need {}", profile.word_count, c.min_words));
        }
        if profile.misspellings > c.max_misspellings {
            problems.push(format!(
                "{} misspellings, allowed {}",
                profile.misspellings, c.max_misspellings
            ));
        }
        if control > 0 {
            problems.push(format!("{control} control characters"));
        }
        GateResult {
            gate: WELL_FORMEDNESS.into(),
            passed: problems.is_empty(),
            diagnostic: summary(problems, || {
                format!("{} words, {} misspellings", profile.word_count, profile.misspellings)
            }),
            measured: profile.word_count as f64,
        }
    }

    fn semantic_adequacy(&self, mr: &MeaningRepresentation, unit: &TextUnit) -> GateResult {
        let c = &self.config;
        let cov = crate::mr::coverage(mr, unit, self.lexicon);
        let sim = semantic_similarity(&TextUnit::new(&mr.values_text()), unit, self.similarity).value;
        let mut problems = Vec::new();
        if cov < c.coverage_threshold {
            problems.push(format!("coverage {cov:.3} below {:.3}", c.coverage_threshold));
        } else if c.allow_skipped_slots && cov == 0.0 {
            problems.push("no slot realized".to_string());
        }
        if sim < c.semsim_threshold {
            problems.push(format!("similarity {sim:.3} below {:.3}", c.semsim_threshold));
        }
        GateResult {
            gate: SEMANTIC_ADEQUACY.into(),
            passed: problems.is_empty(),
            diagnostic: summary(problems, || format!("coverage {cov:.3}, similarity {sim:.3}")),
            measured: cov,
        }
    }

    /// Lexicon values of attributes the MR lacks, or other values of
    /// attributes it has, that occur outside the spans of the MR's own
    /// values.
    fn hallucination(&self, mr: &MeaningRepresentation, unit: &TextUnit) -> GateResult {
        let keys = utterance_keys(unit);
        let own: Vec<(usize, usize)> = mr
            .slots
            .iter()
            .filter(|s| !s.value.is_empty())
            .flat_map(|s| realization_spans(&s.attribute, &s.value, &keys, self.lexicon))
            .collect();
        let inside_own = |(a, b): (usize, usize)| own.iter().any(|&(s, e)| s <= a && b <= e);
        let mut found = Vec::new();
        for attr in self.lexicon.attributes() {
            let mr_values: Vec<String> = mr
                .slots
                .iter()
                .filter(|s| lexicon_key(&s.attribute) == attr)
                .map(|s| lexicon_key(&s.value))
                .collect();
            for value in self.lexicon.values(attr) {
                if mr_values.contains(&lexicon_key(value)) {
                    continue;
                }
                let hit = realization_spans(attr, value, &keys, self.lexicon)
                    .into_iter()
                    .any(|span| !inside_own(span));
                if hit {
                    let kind = if mr_values.is_empty() { "foreign" } else { "contradicting" };
                    found.push(format!("{kind} {attr}={value}"));
                }
            }
        }
        let measured = found.len() as f64;
        let passed = !self.config.forbid_foreign_values || found.is_empty();
        GateResult {
            gate: HALLUCINATION.into(),
            passed,
            diagnostic: if found.is_empty() {
                "no foreign values".into()
            } else {
                found.join("; ")
            },
            measured,
        }
    }

    pub fn validate_batch(&self, pairs: &[(MeaningRepresentation, String)]) -> Result<BatchReport, ValidateError> {
        if pairs.is_empty() {
            return Err(ValidateError::EmptyInput);
        }
        let outcomes: Vec<ValidationOutcome> = pairs.par_iter().map(|(mr, text)| self.validate(mr, text)).collect();
        let mut gate_failures: BTreeMap<String, usize> = [WELL_FORMEDNESS, SEMANTIC_ADEQUACY, HALLUCINATION]
            .into_iter()
            .map(|g| (g.to_string(), 0))
            .collect();
        for gate in outcomes.iter().flat_map(|o| &o.gates).filter(|g| !g.passed) {
            *gate_failures.entry(gate.gate.clone()).or_default() += 1;
        }
        let n = outcomes.len();
        let n_passed = outcomes.iter().filter(|o| o.passed).count();
        Ok(BatchReport {
            outcomes,
            n,
            n_passed,
            pass_rate: n_passed as f64 / n as f64,
            gate_failures,
        })
    }
}

fn summary(problems: Vec<String>, ok: impl FnOnce() -> String) -> String {
    if problems.is_empty() {
        ok()
    } else {
        problems.join("; ")
    }
}

/// Validates one pair with lexical-overlap similarity.
pub fn validate_utterance(
    mr: &MeaningRepresentation,
    text: &str,
    config: &ValidationConfig,
    lexicon: &SlotLexicon,
    dictionary: &WordSet,
) -> Result<ValidationOutcome, ValidateError> {
    let sim = LexicalOverlap::default();
    Ok(Validator::new(config.clone(), lexicon, dictionary, &sim)?.validate(mr, text))
}

pub fn validate_batch(
    pairs: &[(MeaningRepresentation, String)],
    config: &ValidationConfig,
    lexicon: &SlotLexicon,
    dictionary: &WordSet,
) -> Result<BatchReport, ValidateError> {
    let sim = LexicalOverlap::default();
    Validator::new(config.clone(), lexicon, dictionary, &sim)?.validate_batch(pairs)
}
