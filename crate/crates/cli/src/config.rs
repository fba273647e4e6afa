//! Run configuration: a flat `key = value` file with command-line overrides.
//!
//! Every key has a default. The effective configuration, defaults included,
//! is echoed into each report.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use nlgeval::eval::{MetricSuite, RatingScale};
use nlgeval::stats::CorrelationConfig;
use nlgeval::validate::ValidationConfig;
use nlgeval::wbm::{BleuConfig, Smoothing, TerConfig};

use crate::InputError;

/// Keys and default values, in documentation order.
pub const DEFAULTS: &[(&str, &str)] = &[
    ("metrics", "bleu,ter,rouge_1,rouge_2,rouge_l,semsim,gbm"),
    ("bleu.max_n", "4"),
    ("bleu.smoothing", "none"),
    ("ter.shifts", "true"),
    ("ter.max_iterations", "50"),
    ("ter.max_phrase_len", "10"),
    ("resources.dictionary", ""),
    ("resources.basic_words", ""),
    ("resources.basic_words_size", "2000"),
    ("resources.stopwords", ""),
    ("resources.abbreviations", ""),
    ("resources.lexicon", ""),
    ("resources.embeddings", ""),
    ("msttr.segment_size", "50"),
    ("validate.min_words", "3"),
    ("validate.max_misspellings", "0"),
    ("validate.coverage_threshold", "1.0"),
    ("validate.allow_skipped_slots", "false"),
    ("validate.semsim_threshold", "0.3"),
    ("validate.forbid_foreign_values", "true"),
    ("validate.pass_floor", "0.5"),
    ("bootstrap.seed", "42"),
    ("bootstrap.resamples", "1000"),
    ("ratings.scale_min", "1"),
    ("ratings.scale_max", "6"),
    ("output.format", "json"),
    ("jobs", "0"),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            values: DEFAULTS.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        }
    }
}

fn bad(key: &str, value: &str, want: &str) -> InputError {
    InputError::Config(format!("{key} = {value:?}: expected {want}"))
}

impl RunConfig {
    /// Parses `key = value` lines. `#` starts a comment line.
    pub fn parse(text: &str, origin: &str) -> Result<Self, InputError> {
        let mut config = Self::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| InputError::Malformed {
                path: origin.to_string(),
                line: i + 1,
                reason: "expected `key = value`".into(),
            })?;
            config.set(key.trim(), value.trim()).map_err(|e| InputError::Malformed {
                path: origin.to_string(),
                line: i + 1,
                reason: e.to_string(),
            })?;
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, InputError> {
        let text = fs::read_to_string(path).map_err(|e| InputError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Sets a known key. Values are checked when read.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), InputError> {
        match self.values.get_mut(key) {
            Some(slot) => {
                *slot = value.to_string();
                Ok(())
            }
            None => Err(InputError::Config(format!("unknown configuration key {key:?}"))),
        }
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<(), InputError> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| InputError::Config(format!("override {assignment:?} is not key=value")))?;
        self.set(k.trim(), v.trim())
    }

    pub fn get(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or("")
    }

    pub fn effective(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, want: &str) -> Result<T, InputError> {
        let v = self.get(key);
        v.parse().map_err(|_| bad(key, v, want))
    }

    pub fn usize(&self, key: &str) -> Result<usize, InputError> {
        self.parsed(key, "a non-negative integer")
    }

    pub fn u64(&self, key: &str) -> Result<u64, InputError> {
        self.parsed(key, "a non-negative integer")
    }

    pub fn f64(&self, key: &str) -> Result<f64, InputError> {
        let v: f64 = self.parsed(key, "a number")?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad(key, self.get(key), "a finite number"))
        }
    }

    pub fn bool(&self, key: &str) -> Result<bool, InputError> {
        match self.get(key) {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            v => Err(bad(key, v, "true or false")),
        }
    }

    /// Path for a resource key; `None` selects the bundled default. A
    /// configured path must exist.
    pub fn path(&self, key: &str) -> Result<Option<PathBuf>, InputError> {
        let v = self.get(key);
        if v.is_empty() {
            return Ok(None);
        }
        let p = PathBuf::from(v);
        if !p.exists() {
            return Err(InputError::Config(format!("{key}: {} does not exist", p.display())));
        }
        Ok(Some(p))
    }

    pub fn metric_suite(&self) -> Result<MetricSuite, InputError> {
        let mut suite = MetricSuite {
            bleu: None,
            ter: None,
            rouge_n: Vec::new(),
            rouge_l: false,
            semsim: false,
            gbm: false,
        };
        for name in self.get("metrics").split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match name {
                "bleu" => {
                    let max_n = self.usize("bleu.max_n")?;
                    if max_n == 0 {
                        return Err(bad("bleu.max_n", "0", "at least 1"));
                    }
                    let smoothing = match self.get("bleu.smoothing") {
                        "none" => Smoothing::None,
                        "add_one" => Smoothing::AddOne,
                        v => return Err(bad("bleu.smoothing", v, "none or add_one")),
                    };
                    suite.bleu = Some(BleuConfig { max_n, smoothing });
                }
                "ter" => {
                    suite.ter = Some(TerConfig {
                        shifts: self.bool("ter.shifts")?,
                        max_iterations: self.usize("ter.max_iterations")?,
                        max_phrase_len: self.usize("ter.max_phrase_len")?,
                    })
                }
                "rouge_l" => suite.rouge_l = true,
                "semsim" => suite.semsim = true,
                "gbm" => suite.gbm = true,
                other => match other.strip_prefix("rouge_").and_then(|n| n.parse::<usize>().ok()) {
                    Some(n) if n >= 1 => {
                        if !suite.rouge_n.contains(&n) {
                            suite.rouge_n.push(n);
                        }
                    }
                    _ => return Err(InputError::Config(format!("unknown metric {other:?}"))),
                },
            }
        }
        Ok(suite)
    }

    pub fn validation(&self) -> Result<ValidationConfig, InputError> {
        let config = ValidationConfig {
            min_words: self.usize("validate.min_words")?,
            max_misspellings: self.usize("validate.max_misspellings")?,
            coverage_threshold: self.f64("validate.coverage_threshold")?,
            allow_skipped_slots: self.bool("validate.allow_skipped_slots")?,
            semsim_threshold: self.f64("validate.semsim_threshold")?,
            forbid_foreign_values: self.bool("validate.forbid_foreign_values")?,
        };
        config.check().map_err(|e| InputError::Config(e.to_string()))?;
        Ok(config)
    }

    pub fn pass_floor(&self) -> Result<f64, InputError> {
        let v = self.f64("validate.pass_floor")?;
        if (0.0..=1.0).contains(&v) {
            Ok(v)
        } else {
            Err(bad("validate.pass_floor", self.get("validate.pass_floor"), "a value in [0, 1]"))
        }
    }

    pub fn correlation(&self) -> Result<CorrelationConfig, InputError> {
        Ok(CorrelationConfig {
            n_resamples: self.usize("bootstrap.resamples")?,
            seed: self.u64("bootstrap.seed")?,
        })
    }

    pub fn rating_scale(&self) -> Result<RatingScale, InputError> {
        let scale = RatingScale {
            min: self.f64("ratings.scale_min")?,
            max: self.f64("ratings.scale_max")?,
        };
        if scale.min > scale.max {
            return Err(InputError::Config("ratings.scale_min exceeds ratings.scale_max".into()));
        }
        Ok(scale)
    }

    pub fn segment_size(&self) -> Result<usize, InputError> {
        match self.usize("msttr.segment_size")? {
            0 => Err(bad("msttr.segment_size", "0", "at least 1")),
            n => Ok(n),
        }
    }
}
