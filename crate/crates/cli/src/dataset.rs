//! Loading and exporting evaluation datasets.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use nlgeval::eval::EvalRecord;
use serde_json::Value;

use crate::InputError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Auto,
    Jsonl,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Format::Auto),
            "jsonl" => Ok(Format::Jsonl),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown dataset format {s:?} (auto, jsonl, csv)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub records: Vec<EvalRecord>,
    pub warnings: Vec<String>,
}

/// Picks a format from the extension, then from the first non-blank byte.
pub fn detect_format(path: &Path, text: &str) -> Format {
    match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
        Some("jsonl" | "ndjson" | "json") => Format::Jsonl,
        Some("csv") => Format::Csv,
        _ => match text.trim_start_matches('\u{feff}').trim_start().as_bytes().first() {
            Some(b'{') => Format::Jsonl,
            _ => Format::Csv,
        },
    }
}

pub fn load_dataset(path: &Path, format: Format) -> Result<Dataset, InputError> {
    let text = fs::read_to_string(path).map_err(|e| InputError::io(path, e))?;
    let origin = path.display().to_string();
    let format = match format {
        Format::Auto => detect_format(path, &text),
        f => f,
    };
    let dataset = match format {
        Format::Jsonl => parse_jsonl(&text, &origin)?,
        _ => parse_csv(&text, &origin)?,
    };
    let mut seen = HashSet::new();
    for r in &dataset.records {
        if !seen.insert(r.id.as_str()) {
            return Err(InputError::DuplicateId {
                path: origin,
                id: r.id.clone(),
            });
        }
    }
    Ok(dataset)
}

fn malformed(origin: &str, line: usize, reason: impl Into<String>) -> InputError {
    InputError::Malformed {
        path: origin.to_string(),
        line,
        reason: reason.into(),
    }
}

/// One JSON object per line with keys `id, mr, references, outputs,
/// ratings`. Absent keys are empty; an absent id becomes the line number.
pub fn parse_jsonl(text: &str, origin: &str) -> Result<Dataset, InputError> {
    let mut records = Vec::new();
    let mut warnings = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim_start_matches('\u{feff}').trim();
        if line.is_empty() {
            continue;
        }
        let mut value: Value = serde_json::from_str(line).map_err(|e| malformed(origin, line_no, e.to_string()))?;
        let obj = value
            .as_object_mut()
            .ok_or_else(|| malformed(origin, line_no, "expected a JSON object"))?;
        let id = match obj.get("id") {
            None | Some(Value::Null) => line_no.to_string(),
            Some(Value::String(s)) => s.clone(),
            Some(Value::Number(n)) => n.to_string(),
            Some(_) => return Err(malformed(origin, line_no, "id must be a string or number")),
        };
        obj.insert("id".into(), Value::String(id));
        if !obj.contains_key("references") {
            warnings.push(format!("{origin}:{line_no}: no references"));
        }
        let record: EvalRecord =
            serde_json::from_value(value).map_err(|e| malformed(origin, line_no, e.to_string()))?;
        records.push(record);
    }
    Ok(Dataset { records, warnings })
}

/// CSV with a header containing `mr` and `ref` columns (case-insensitive)
/// and an optional `id` column. Each row is one record with one reference;
/// ids default to the 1-based data row number.
pub fn parse_csv(text: &str, origin: &str) -> Result<Dataset, InputError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.trim_start_matches('\u{feff}').as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| malformed(origin, 1, e.to_string()))?
        .clone();
    let column = |name: &str| headers.iter().position(|h| h.trim().eq_ignore_ascii_case(name));
    let mr_col = column("mr").ok_or_else(|| malformed(origin, 1, "header has no `mr` column"))?;
    let ref_col = column("ref").ok_or_else(|| malformed(origin, 1, "header has no `ref` column"))?;
    let id_col = column("id");
    let mut records = Vec::new();
    for (row, result) in reader.records().enumerate() {
        let rec = result.map_err(|e| {
            let line = e.position().map_or(row + 2, |p| p.line() as usize);
            malformed(origin, line, e.to_string())
        })?;
        let field = |i: usize| rec.get(i).unwrap_or("").to_string();
        let mr = field(mr_col);
        let reference = field(ref_col);
        records.push(EvalRecord {
            id: id_col.map(field).unwrap_or_else(|| (row + 1).to_string()),
            mr: (!mr.trim().is_empty()).then_some(mr),
            references: if reference.trim().is_empty() { Vec::new() } else { vec![reference] },
            outputs: Default::default(),
            ratings: Default::default(),
        });
    }
    Ok(Dataset {
        records,
        warnings: Vec::new(),
    })
}

/// JSONL with one record per line and a fixed key order.
pub fn to_jsonl(records: &[EvalRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    }
    out
}
