//! The subcommands. Each returns the rendered report and an exit status.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use nlgeval::corpusqual::{corpus_stats, CorpusConfig, CorpusStats, DLevelRuleSet, RULESET_VERSION};
use nlgeval::eval::{check_ratings, EvalRecord, MetricReport, Scorer};
use nlgeval::mr::parse_mr;
use nlgeval::stats::{correlate, CorrelationReport};
use nlgeval::validate::{BatchReport, Validator};
use nlgeval::wbm::{EmbeddingFile, LexicalOverlap, SimilarityProvider};
use nlgeval::{MeaningRepresentation, SlotLexicon, TextUnit, WordSet};

use crate::config::RunConfig;
use crate::dataset::{load_dataset, to_jsonl, Format};
use crate::output::{cell, format_float, percent, to_canonical_json, Table};
use crate::InputError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION_FLOOR: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Table,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "table" => Ok(OutputFormat::Table),
            _ => Err(format!("unknown output format {s:?} (json, table)")),
        }
    }
}

/// Rendered output of a command.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub exit: i32,
    pub warnings: Vec<String>,
}

/// Word lists, lexicon and similarity provider named by a configuration.
pub struct Resources {
    pub dictionary: WordSet,
    pub abbreviations: WordSet,
    pub stopwords: WordSet,
    pub basic_words: WordSet,
    pub lexicon: SlotLexicon,
    pub similarity: Box<dyn SimilarityProvider>,
}

impl Resources {
    pub fn load(config: &RunConfig) -> Result<Self, InputError> {
        let list = |key: &str, default: fn() -> WordSet| -> Result<WordSet, InputError> {
            Ok(match config.path(key)? {
                Some(p) => WordSet::load(p)?,
                None => default(),
            })
        };
        let basic_size = config.usize("resources.basic_words_size")?;
        let basic_words = match config.path("resources.basic_words")? {
            Some(p) => WordSet::load_limited(p, Some(basic_size))?,
            None => WordSet::default_basic_words(basic_size),
        };
        let stopwords = list("resources.stopwords", WordSet::default_stopwords)?;
        let lexicon = match config.path("resources.lexicon")? {
            Some(p) => SlotLexicon::load(p)?,
            None => SlotLexicon::identity(),
        };
        let similarity: Box<dyn SimilarityProvider> = match config.path("resources.embeddings")? {
            Some(p) => Box::new(EmbeddingFile::load(&p).map_err(|e| InputError::Data(e.to_string()))?),
            None => Box::new(LexicalOverlap::new(stopwords.clone())),
        };
        Ok(Self {
            dictionary: list("resources.dictionary", WordSet::default_dictionary)?,
            abbreviations: list("resources.abbreviations", WordSet::default_abbreviations)?,
            stopwords,
            basic_words,
            lexicon,
            similarity,
        })
    }

    fn scorer(&self, config: &RunConfig) -> Result<Scorer<'_>, InputError> {
        Ok(Scorer {
            suite: config.metric_suite()?,
            dictionary: &self.dictionary,
            abbreviations: &self.abbreviations,
            similarity: self.similarity.as_ref(),
        })
    }
}

#[derive(Serialize)]
struct Tool {
    name: &'static str,
    version: &'static str,
}

const TOOL: Tool = Tool {
    name: "nlgeval",
    version: env!("CARGO_PKG_VERSION"),
};

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'a str,
    config: BTreeMap<&'a str, &'a str>,
    inputs: Vec<String>,
    tool: Tool,
    report: T,
}

fn render_json<T: Serialize>(command: &str, config: &RunConfig, inputs: &[&Path], report: T) -> String {
    to_canonical_json(&Envelope {
        command,
        // the thread count never changes a report, so it is not echoed
        config: config
            .effective()
            .iter()
            .filter(|(k, _)| k.as_str() != "jobs")
            .map(|(k, v)| (k.as_str(), v.as_str()))
            .collect(),
        inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
        tool: TOOL,
        report,
    })
}

fn load(path: &Path, format: Format, warnings: &mut Vec<String>) -> Result<Vec<EvalRecord>, InputError> {
    let d = load_dataset(path, format)?;
    warnings.extend(d.warnings);
    if d.records.is_empty() {
        return Err(InputError::Data(format!("{}: no records", path.display())));
    }
    Ok(d.records)
}

pub fn score(path: &Path, format: Format, config: &RunConfig, out: OutputFormat) -> Result<Outcome, InputError> {
    let mut warnings = Vec::new();
    let records = load(path, format, &mut warnings)?;
    let resources = Resources::load(config)?;
    let report = resources.scorer(config)?.score_records(&records)?;
    if report.items.is_empty() {
        return Err(InputError::Data(format!("{}: no system outputs to score", path.display())));
    }
    let text = match out {
        OutputFormat::Json => render_json("score", config, &[path], &report),
        OutputFormat::Table => score_table(&report),
    };
    Ok(Outcome {
        text,
        exit: EXIT_OK,
        warnings,
    })
}

fn score_table(report: &MetricReport) -> String {
    let mut header = vec!["System".to_string(), "Items".to_string()];
    header.extend(report.metrics.iter().cloned());
    header.push("corpus_bleu".to_string());
    let mut t = Table::new(header);
    for (system, s) in &report.systems {
        let mut row = vec![system.clone(), s.n_items.to_string()];
        row.extend(report.metrics.iter().map(|m| cell(s.mean.get(m).copied())));
        row.push(cell(s.corpus_bleu));
        t.row(row);
    }
    t.render()
}

/// Reads the `report` of a saved `score` run.
fn load_metric_report(path: &Path) -> Result<MetricReport, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError::io(path, e))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| InputError::Malformed {
        path: path.display().to_string(),
        line: e.line(),
        reason: e.to_string(),
    })?;
    let report = value.get("report").cloned().unwrap_or(value);
    serde_json::from_value(report).map_err(|e| InputError::Data(format!("{}: not a score report: {e}", path.display())))
}

pub fn correlate_cmd(
    path: &Path,
    format: Format,
    scores: Option<&Path>,
    config: &RunConfig,
    out: OutputFormat,
) -> Result<Outcome, InputError> {
    let mut warnings = Vec::new();
    let records = load(path, format, &mut warnings)?;
    check_ratings(&records, config.rating_scale()?)?;
    let rated = records.iter().filter(|r| r.ratings.values().any(|a| !a.is_empty())).count();
    if rated == 0 {
        return Err(InputError::Data(format!("{}: no ratings to correlate with", path.display())));
    }
    let report = match scores {
        Some(p) => load_metric_report(p)?,
        None => Resources::load(config)?.scorer(config)?.score_records(&records)?,
    };
    let table = correlate(&records, &report, config.correlation()?);
    let mut inputs = vec![path];
    inputs.extend(scores);
    let text = match out {
        OutputFormat::Json => render_json("correlate", config, &inputs, &table),
        OutputFormat::Table => correlation_table(&table),
    };
    Ok(Outcome {
        text,
        exit: EXIT_OK,
        warnings,
    })
}

fn correlation_table(report: &CorrelationReport) -> String {
    let mut t = Table::new(["Metric", "Aspect", "rho", "CI low", "CI high", "n", "dropped", "rank acc"]);
    for r in &report.rows {
        t.row([
            r.metric.clone(),
            r.aspect.clone(),
            cell(r.rho),
            cell(r.ci_low),
            cell(r.ci_high),
            r.n.to_string(),
            r.n_dropped.to_string(),
            cell(r.ranking_accuracy),
        ]);
    }
    t.render()
}

#[derive(Serialize)]
struct DatasetStats {
    name: String,
    path: String,
    n_records: usize,
    /// Records without any reference text.
    n_records_skipped: usize,
    dlevel_ruleset: &'static str,
    stats: CorpusStats,
}

#[derive(Serialize)]
struct CorpusReport {
    datasets: Vec<DatasetStats>,
}

fn parse_record_mr(record: &EvalRecord) -> Result<Option<MeaningRepresentation>, InputError> {
    match &record.mr {
        Some(raw) if !raw.trim().is_empty() => parse_mr(raw)
            .map(Some)
            .map_err(|e| InputError::Data(format!("record {}: {e}", record.id))),
        _ => Ok(None),
    }
}

pub fn corpus_stats_cmd(
    paths: &[PathBuf],
    format: Format,
    config: &RunConfig,
    out: OutputFormat,
) -> Result<Outcome, InputError> {
    let resources = Resources::load(config)?;
    let corpus_config = CorpusConfig {
        segment_size: config.segment_size()?,
        basic_words: resources.basic_words.clone(),
        stopwords: resources.stopwords.clone(),
        lexicon: resources.lexicon.clone(),
        rules: DLevelRuleSet::default(),
    };
    let mut warnings = Vec::new();
    let mut datasets = Vec::new();
    for path in paths {
        let records = load(path, format, &mut warnings)?;
        let mut corpus = Vec::new();
        let mut skipped = 0;
        for r in &records {
            if r.references.is_empty() {
                skipped += 1;
                continue;
            }
            let mr = parse_record_mr(r)?;
            for text in &r.references {
                corpus.push((mr.clone(), TextUnit::with_abbreviations(text, &resources.abbreviations)));
            }
        }
        let stats = corpus_stats(&corpus, &corpus_config)
            .map_err(|e| InputError::Data(format!("{}: {e}", path.display())))?;
        datasets.push(DatasetStats {
            name: path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned()),
            path: path.display().to_string(),
            n_records: records.len(),
            n_records_skipped: skipped,
            dlevel_ruleset: RULESET_VERSION,
            stats,
        });
    }
    let report = CorpusReport { datasets };
    let text = match out {
        OutputFormat::Json => {
            let inputs: Vec<&Path> = paths.iter().map(PathBuf::as_path).collect();
            render_json("corpus-stats", config, &inputs, &report)
        }
        OutputFormat::Table => corpus_table(&report),
    };
    Ok(Outcome {
        text,
        exit: EXIT_OK,
        warnings,
    })
}

fn corpus_table(report: &CorpusReport) -> String {
    let mut t = Table::new([
        "Dataset",
        "LS",
        "MSTTR",
        "Level 0-1",
        "Level 6-7",
        "Content sel.",
        "Sentences",
        "Tokens",
    ]);
    for d in &report.datasets {
        let s = &d.stats;
        t.row([
            d.name.clone(),
            cell(Some(s.ls)),
            cell(Some(s.msttr)),
            percent(Some(s.frac_level01)),
            percent(Some(s.frac_level67)),
            percent(s.content_selection_rate),
            s.n_sentences.to_string(),
            s.n_tokens.to_string(),
        ]);
    }
    t.render()
}

#[derive(Serialize)]
struct PairRef {
    id: String,
    reference: usize,
}

#[derive(Serialize)]
struct ValidateReport {
    pairs: Vec<PairRef>,
    pass_floor: f64,
    meets_floor: bool,
    batch: BatchReport,
}

/// `(MR, utterance)` pairs of a dataset: one per reference, or one empty
/// utterance for a record without references.
pub fn validation_pairs(records: &[EvalRecord]) -> Result<Vec<(String, usize, MeaningRepresentation, String)>, InputError> {
    let mut pairs = Vec::new();
    for r in records {
        let mr = parse_record_mr(r)?
            .ok_or_else(|| InputError::Data(format!("record {}: validation needs an MR", r.id)))?;
        if r.references.is_empty() {
            pairs.push((r.id.clone(), 0, mr, String::new()));
        } else {
            for (i, text) in r.references.iter().enumerate() {
                pairs.push((r.id.clone(), i, mr.clone(), text.clone()));
            }
        }
    }
    Ok(pairs)
}

pub fn validate_cmd(path: &Path, format: Format, config: &RunConfig, out: OutputFormat) -> Result<Outcome, InputError> {
    let mut warnings = Vec::new();
    let records = load(path, format, &mut warnings)?;
    let resources = Resources::load(config)?;
    let validator = Validator::new(
        config.validation()?,
        &resources.lexicon,
        &resources.dictionary,
        resources.similarity.as_ref(),
    )
    .map_err(|e| InputError::Config(e.to_string()))?;
    let floor = config.pass_floor()?;
    let pairs = validation_pairs(&records)?;
    let batch_input: Vec<(MeaningRepresentation, String)> =
        pairs.iter().map(|(_, _, mr, text)| (mr.clone(), text.clone())).collect();
    let batch = validator
        .validate_batch(&batch_input)
        .map_err(|e| InputError::Data(e.to_string()))?;
    let meets_floor = batch.pass_rate >= floor;
    let report = ValidateReport {
        pairs: pairs
            .iter()
            .map(|(id, i, _, _)| PairRef {
                id: id.clone(),
                reference: *i,
            })
            .collect(),
        pass_floor: floor,
        meets_floor,
        batch,
    };
    let text = match out {
        OutputFormat::Json => render_json("validate", config, &[path], &report),
        OutputFormat::Table => validate_table(&report),
    };
    Ok(Outcome {
        text,
        exit: if meets_floor { EXIT_OK } else { EXIT_VALIDATION_FLOOR },
        warnings,
    })
}

fn validate_table(report: &ValidateReport) -> String {
    let mut t = Table::new(["Gate", "Failures"]);
    for (gate, n) in &report.batch.gate_failures {
        t.row([gate.clone(), n.to_string()]);
    }
    format!(
        "{}\npairs {}  passed {}  pass rate {}  floor {}\n",
        t.render(),
        report.batch.n,
        report.batch.n_passed,
        format_float(report.batch.pass_rate),
        format_float(report.pass_floor)
    )
}

pub fn export(path: &Path, format: Format) -> Result<Outcome, InputError> {
    let d = load_dataset(path, format)?;
    Ok(Outcome {
        text: to_jsonl(&d.records),
        exit: EXIT_OK,
        warnings: d.warnings,
    })
}
