//! Dialogue-act meaning representations and slot realization checks.
//!
//! Accepted syntax is `act(attr = value, attr[value], ...)`. Pairs may be
//! separated by `,` or `;`, values may be wrapped in double or single quotes,
//! and a bare pair list without an act (`name[The Eagle], food[French]`) is
//! read as an implicit `inform`.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{MrError, ResourceError};
use crate::textproc::{casefold, normalize, tokenize, TextUnit};

pub const IMPLICIT_ACT: &str = "inform";

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub attribute: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeaningRepresentation {
    pub act_type: String,
    pub slots: Vec<Slot>,
}

impl MeaningRepresentation {
    /// Attributes that occur more than once, in first-seen order.
    pub fn duplicate_attributes(&self) -> Vec<&str> {
        let mut seen = Vec::new();
        let mut dups = Vec::new();
        for slot in &self.slots {
            let a = slot.attribute.as_str();
            if seen.contains(&a) {
                if !dups.contains(&a) {
                    dups.push(a);
                }
            } else {
                seen.push(a);
            }
        }
        dups
    }

    /// Slot values joined with spaces, used as the MR's text side when
    /// comparing it to an utterance.
    pub fn values_text(&self) -> String {
        self.slots
            .iter()
            .map(|s| s.value.as_str())
            .filter(|v| !v.is_empty())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn has_attribute(&self, attribute: &str) -> bool {
        let key = lexicon_key(attribute);
        self.slots.iter().any(|s| lexicon_key(&s.attribute) == key)
    }
}

impl fmt::Display for MeaningRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.act_type)?;
        for (i, slot) in self.slots.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if slot.value.is_empty() {
                f.write_str(&slot.attribute)?;
            } else {
                write!(f, "{} = {}", slot.attribute, slot.value)?;
            }
        }
        f.write_str(")")
    }
}

impl std::str::FromStr for MeaningRepresentation {
    type Err = MrError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_mr(s)
    }
}

/// Checks bracket balance outside double quotes; returns the first offending
/// byte offset.
fn check_balance(text: &str) -> Result<(), MrError> {
    let mut stack: Vec<(char, usize)> = Vec::new();
    let mut quoted = false;
    for (i, c) in text.char_indices() {
        match c {
            '"' => quoted = !quoted,
            _ if quoted => {}
            '(' | '[' => stack.push((c, i)),
            ')' | ']' => {
                let want = if c == ')' { '(' } else { '[' };
                match stack.pop() {
                    Some((open, _)) if open == want => {}
                    _ => return Err(MrError::UnbalancedDelimiters { offset: i }),
                }
            }
            _ => {}
        }
    }
    if let Some(&(_, offset)) = stack.first() {
        return Err(MrError::UnbalancedDelimiters { offset });
    }
    if quoted {
        let offset = text.rfind('"').unwrap_or(0);
        return Err(MrError::UnbalancedDelimiters { offset });
    }
    Ok(())
}

/// Byte offsets (relative to `s`) of top-level occurrences of any of `targets`.
fn top_level_positions(s: &str, targets: &[char]) -> Vec<usize> {
    let mut depth = 0usize;
    let mut quoted = false;
    let mut out = Vec::new();
    for (i, c) in s.char_indices() {
        match c {
            '"' => quoted = !quoted,
            _ if quoted => {}
            _ if depth == 0 && targets.contains(&c) => {
                out.push(i);
                if matches!(c, '(' | '[') {
                    depth += 1;
                }
            }
            '(' | '[' => depth += 1,
            ')' | ']' => depth = depth.saturating_sub(1),
            _ => {}
        }
    }
    out
}

fn strip_quotes(v: &str) -> &str {
    for q in ['"', '\''] {
        if v.len() >= 2 && v.starts_with(q) && v.ends_with(q) {
            return &v[1..v.len() - 1];
        }
    }
    v
}

fn leading_ws(s: &str) -> usize {
    s.len() - s.trim_start().len()
}

fn parse_pair(piece: &str, base: usize) -> Result<Slot, MrError> {
    let attr_offset = base + leading_ws(piece);
    let (attribute, value) = if let Some(&open) = top_level_positions(piece, &['[']).first() {
        // bracket syntax: attr[value]
        let close = piece.rfind(']').ok_or(MrError::UnbalancedDelimiters { offset: base + open })?;
        let rest = &piece[close + 1..];
        if !rest.trim().is_empty() {
            return Err(MrError::TrailingInput {
                offset: base + close + 1 + leading_ws(rest),
            });
        }
        (&piece[..open], &piece[open + 1..close])
    } else if let Some(&eq) = top_level_positions(piece, &['=']).first() {
        (&piece[..eq], &piece[eq + 1..])
    } else {
        (piece, "")
    };
    let attribute = attribute.trim();
    if attribute.is_empty() {
        return Err(MrError::EmptyAttribute { offset: attr_offset });
    }
    Ok(Slot {
        attribute: attribute.to_string(),
        value: strip_quotes(value.trim()).trim().to_string(),
    })
}

fn parse_pairs(body: &str, base: usize) -> Result<Vec<Slot>, MrError> {
    if body.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut slots = Vec::new();
    let mut start = 0;
    let mut cuts = top_level_positions(body, &[',', ';']);
    cuts.push(body.len());
    for cut in cuts {
        let piece = &body[start..cut];
        if piece.trim().is_empty() {
            return Err(MrError::EmptyAttribute {
                offset: base + start + leading_ws(piece),
            });
        }
        slots.push(parse_pair(piece, base + start)?);
        start = cut + 1;
    }
    Ok(slots)
}

pub fn parse_mr(text: &str) -> Result<MeaningRepresentation, MrError> {
    if text.trim().is_empty() {
        return Err(MrError::MissingActType { offset: 0 });
    }
    check_balance(text)?;

    let Some(&open) = top_level_positions(text, &['(']).first() else {
        // No act wrapper: either a bare pair list or an act with no slots.
        if top_level_positions(text, &['=', '[']).is_empty()
            && top_level_positions(text, &[',', ';']).is_empty()
        {
            return Ok(MeaningRepresentation {
                act_type: text.trim().to_string(),
                slots: Vec::new(),
            });
        }
        return Ok(MeaningRepresentation {
            act_type: IMPLICIT_ACT.to_string(),
            slots: parse_pairs(text, 0)?,
        });
    };

    let act_type = text[..open].trim();
    if act_type.is_empty() {
        return Err(MrError::MissingActType { offset: open });
    }
    // check_balance guarantees a matching close; find it by depth.
    let mut depth = 0usize;
    let mut quoted = false;
    let mut close = text.len();
    for (i, c) in text[open..].char_indices() {
        match c {
            '"' => quoted = !quoted,
            _ if quoted => {}
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth -= 1;
                if depth == 0 {
                    close = open + i;
                    break;
                }
            }
            _ => {}
        }
    }
    let rest = &text[close + 1..];
    if !rest.trim().is_empty() {
        return Err(MrError::TrailingInput {
            offset: close + 1 + leading_ws(rest),
        });
    }
    Ok(MeaningRepresentation {
        act_type: act_type.to_string(),
        slots: parse_pairs(&text[open + 1..close], open + 1)?,
    })
}

pub(crate) fn lexicon_key(s: &str) -> String {
    casefold(&normalize(s))
}

/// Matching key for a token: lowercase with typographic apostrophes folded.
pub(crate) fn match_key(lower: &str) -> String {
    lower.replace('\u{2019}', "'")
}

/// Token keys of a phrase, as used for realization matching.
pub fn phrase_keys(phrase: &str) -> Vec<String> {
    tokenize(&normalize(phrase))
        .iter()
        .map(|t| match_key(&t.lower))
        .collect()
}

/// Token keys of an utterance, in order.
pub fn utterance_keys(utterance: &TextUnit) -> Vec<String> {
    utterance.tokens().map(|t| match_key(&t.lower)).collect()
}

/// Start indices of every contiguous occurrence of `needle` in `haystack`.
pub fn find_phrase(haystack: &[String], needle: &[String]) -> Vec<usize> {
    if needle.is_empty() || needle.len() > haystack.len() {
        return Vec::new();
    }
    haystack
        .windows(needle.len())
        .enumerate()
        .filter(|(_, w)| *w == needle)
        .map(|(i, _)| i)
        .collect()
}

/// Surface realizations of attribute values.
///
/// Attribute and value keys are case-insensitive. A value always realizes as
/// itself in addition to whatever the lexicon lists.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SlotLexicon {
    entries: BTreeMap<String, BTreeMap<String, LexiconEntry>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct LexiconEntry {
    value: String,
    realizations: Vec<String>,
}

impl SlotLexicon {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Parses `{attribute: {value: [realization, ...]}}`.
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let raw: BTreeMap<String, BTreeMap<String, Vec<String>>> = serde_json::from_str(text)?;
        let mut lex = Self::identity();
        for (attr, values) in raw {
            for (value, realizations) in values {
                lex.add_value(&attr, &value);
                for r in realizations {
                    lex.add(&attr, &value, &r);
                }
            }
        }
        Ok(lex)
    }

    /// Loads a lexicon file; a missing file yields the identity lexicon.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ResourceError> {
        let path = path.as_ref();
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Self::identity()),
            Err(source) => {
                return Err(ResourceError::Io {
                    path: path.display().to_string(),
                    source,
                })
            }
        };
        Self::from_json(&text).map_err(|e| ResourceError::Malformed {
            path: path.display().to_string(),
            line: e.line(),
            reason: e.to_string(),
        })
    }

    /// Registers `value` in the attribute's inventory.
    pub fn add_value(&mut self, attribute: &str, value: &str) {
        self.entries
            .entry(lexicon_key(attribute))
            .or_default()
            .entry(lexicon_key(value))
            .or_insert_with(|| LexiconEntry {
                value: value.trim().to_string(),
                realizations: Vec::new(),
            });
    }

    pub fn add(&mut self, attribute: &str, value: &str, realization: &str) {
        self.add_value(attribute, value);
        let entry = self
            .entries
            .get_mut(&lexicon_key(attribute))
            .and_then(|m| m.get_mut(&lexicon_key(value)))
            .expect("entry inserted above");
        let r = realization.trim().to_string();
        if !r.is_empty() && !entry.realizations.contains(&r) {
            entry.realizations.push(r);
        }
    }

    /// All strings that realize `(attribute, value)`, the value itself first.
    pub fn realizations<'a>(&'a self, attribute: &str, value: &'a str) -> Vec<&'a str> {
        let mut out = vec![value];
        if let Some(entry) = self
            .entries
            .get(&lexicon_key(attribute))
            .and_then(|m| m.get(&lexicon_key(value)))
        {
            out.extend(entry.realizations.iter().map(String::as_str));
        }
        out
    }

    /// The closed value inventory for an attribute (empty when unknown).
    pub fn values(&self, attribute: &str) -> Vec<&str> {
        self.entries
            .get(&lexicon_key(attribute))
            .map(|m| m.values().map(|e| e.value.as_str()).collect())
            .unwrap_or_default()
    }

    pub fn attributes(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn is_identity(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Token spans `[start, end)` in `keys` where some realization of
/// `(attribute, value)` occurs.
pub(crate) fn realization_spans(
    attribute: &str,
    value: &str,
    keys: &[String],
    lexicon: &SlotLexicon,
) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    for r in lexicon.realizations(attribute, value) {
        let needle = phrase_keys(r);
        spans.extend(find_phrase(keys, &needle).into_iter().map(|i| (i, i + needle.len())));
    }
    spans
}

/// True iff the value, or one of its lexicon realizations, occurs in the
/// utterance as a contiguous, case-insensitive token sequence.
pub fn slot_realized(attribute: &str, value: &str, utterance: &TextUnit, lexicon: &SlotLexicon) -> bool {
    let keys = utterance_keys(utterance);
    !realization_spans(attribute, value, &keys, lexicon).is_empty()
}

/// Fraction of valued slots realized in the utterance; 1.0 when the MR has no
/// valued slots. Slots without a value (`?request(area)`) carry nothing to
/// verbalize and are not counted.
pub fn coverage(mr: &MeaningRepresentation, utterance: &TextUnit, lexicon: &SlotLexicon) -> f64 {
    let keys = utterance_keys(utterance);
    coverage_with_keys(mr, &keys, lexicon)
}

pub(crate) fn coverage_with_keys(mr: &MeaningRepresentation, keys: &[String], lexicon: &SlotLexicon) -> f64 {
    let valued: Vec<&Slot> = mr.slots.iter().filter(|s| !s.value.is_empty()).collect();
    if valued.is_empty() {
        return 1.0;
    }
    let realized = valued
        .iter()
        .filter(|s| !realization_spans(&s.attribute, &s.value, keys, lexicon).is_empty())
        .count();
    realized as f64 / valued.len() as f64
}
