//! Deterministic text segmentation and counting primitives.
//!
//! Everything here is rule based: tokens are maximal runs of letters, digits
//! or single punctuation marks, sentences end at `.`, `!` or `?` followed by
//! whitespace and an uppercase letter, and syllables are counted from vowel
//! groups.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::resources::WordSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TokenKind {
    Word,
    Number,
    Punct,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub lower: String,
    pub kind: TokenKind,
    /// Half-open codepoint range into the text the token was cut from.
    pub char_span: (usize, usize),
}

impl Token {
    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub tokens: Vec<Token>,
    pub raw: String,
}

impl Sentence {
    pub fn words(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(|t| t.is_word())
    }
}

/// A normalized utterance split into sentences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextUnit {
    pub raw: String,
    pub sentences: Vec<Sentence>,
}

impl TextUnit {
    /// Normalizes `text` and splits it with the bundled abbreviation list.
    pub fn new(text: &str) -> Self {
        Self::with_abbreviations(text, default_abbreviations())
    }

    pub fn with_abbreviations(text: &str, abbreviations: &WordSet) -> Self {
        let raw = normalize(text);
        let sentences = split_sentences(&raw, abbreviations);
        Self { raw, sentences }
    }

    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.sentences.iter().flat_map(|s| s.tokens.iter())
    }

    pub fn words(&self) -> impl Iterator<Item = &Token> {
        self.tokens().filter(|t| t.is_word())
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(|s| s.tokens.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

fn default_abbreviations() -> &'static WordSet {
    static ABBREVIATIONS: OnceLock<WordSet> = OnceLock::new();
    ABBREVIATIONS.get_or_init(WordSet::default_abbreviations)
}

/// Simple locale-insensitive lowercase mapping.
pub fn casefold(s: &str) -> String {
    s.to_lowercase()
}

/// Canonical composition plus whitespace collapsing. Idempotent.
pub fn normalize(text: &str) -> String {
    let composed: String = text.nfc().collect();
    composed.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn is_apostrophe(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}')
}

fn is_digit(c: char) -> bool {
    c.is_numeric()
}

pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let kind = if c.is_alphabetic() {
            i += 1;
            while i < chars.len() {
                if chars[i].is_alphabetic() {
                    i += 1;
                } else if (is_apostrophe(chars[i]) || chars[i] == '-')
                    && chars.get(i + 1).is_some_and(|c| c.is_alphabetic())
                {
                    i += 2;
                } else {
                    break;
                }
            }
            TokenKind::Word
        } else if is_digit(c) {
            i += 1;
            while i < chars.len() {
                if is_digit(chars[i]) {
                    i += 1;
                } else if matches!(chars[i], '.' | ',') && chars.get(i + 1).is_some_and(|&c| is_digit(c)) {
                    i += 2;
                } else {
                    break;
                }
            }
            TokenKind::Number
        } else {
            i += 1;
            TokenKind::Punct
        };
        let surface: String = chars[start..i].iter().collect();
        tokens.push(Token {
            lower: casefold(&surface),
            surface,
            kind,
            char_span: (start, i),
        });
    }
    tokens
}

fn is_terminator(t: &Token) -> bool {
    t.kind == TokenKind::Punct && matches!(t.surface.as_str(), "." | "!" | "?")
}

fn is_closer(t: &Token) -> bool {
    t.kind == TokenKind::Punct
        && matches!(
            t.surface.as_str(),
            ")" | "]" | "\"" | "'" | "\u{2019}" | "\u{201d}"
        )
}

/// Lowercased text of the whitespace-free token run that ends just before
/// `tokens[idx]`.
fn attached_prefix(tokens: &[Token], idx: usize) -> String {
    let mut start = idx;
    while start > 0 && tokens[start - 1].char_span.1 == tokens[start].char_span.0 {
        start -= 1;
    }
    tokens[start..idx].iter().map(|t| t.lower.as_str()).collect()
}

pub fn split_sentences(text: &str, abbreviations: &WordSet) -> Vec<Sentence> {
    let tokens = tokenize(text);
    let chars: Vec<char> = text.chars().collect();
    let mut bounds = Vec::new();
    let mut sentence_start = 0;
    let mut i = 0;
    while i < tokens.len() {
        if !is_terminator(&tokens[i]) {
            i += 1;
            continue;
        }
        let mut end = i + 1;
        while end < tokens.len()
            && tokens[end].char_span.0 == tokens[end - 1].char_span.1
            && (is_terminator(&tokens[end]) || is_closer(&tokens[end]))
        {
            end += 1;
        }
        let is_boundary = match tokens.get(end) {
            None => true,
            Some(next) => {
                let gap = next.char_span.0 > tokens[end - 1].char_span.1;
                let upper = next.surface.chars().next().is_some_and(char::is_uppercase);
                let abbreviation = tokens[i].surface == "."
                    && end == i + 1
                    && abbreviations.contains(&attached_prefix(&tokens, i));
                gap && upper && !abbreviation
            }
        };
        if is_boundary {
            bounds.push((sentence_start, end));
            sentence_start = end;
        }
        i = end;
    }
    if sentence_start < tokens.len() {
        bounds.push((sentence_start, tokens.len()));
    }

    let mut tokens = tokens.into_iter();
    bounds
        .into_iter()
        .map(|(start, end)| {
            let sentence_tokens: Vec<Token> = tokens.by_ref().take(end - start).collect();
            let from = sentence_tokens[0].char_span.0;
            let to = sentence_tokens[sentence_tokens.len() - 1].char_span.1;
            Sentence {
                raw: chars[from..to].iter().collect(),
                tokens: sentence_tokens,
            }
        })
        .collect()
}

fn is_vowel(c: char) -> bool {
    matches!(
        c,
        'a' | 'e' | 'i' | 'o' | 'u' | 'y' | 'à' | 'á' | 'â' | 'ä' | 'è' | 'é' | 'ê' | 'ë' | 'ì' | 'í'
            | 'î' | 'ï' | 'ò' | 'ó' | 'ô' | 'ö' | 'ù' | 'ú' | 'û' | 'ü' | 'ý'
    )
}

fn syllables_in_part(part: &[char]) -> u32 {
    let mut groups = 0u32;
    let mut in_group = false;
    for &c in part {
        let vowel = is_vowel(c);
        if vowel && !in_group {
            groups += 1;
        }
        in_group = vowel;
    }
    let n = part.len();
    // terminal silent e: consonant + e, except consonant + l + e ("table")
    if groups > 1 && n >= 2 && part[n - 1] == 'e' && !is_vowel(part[n - 2]) {
        let syllabic_le = part[n - 2] == 'l' && n >= 3 && !is_vowel(part[n - 3]);
        if !syllabic_le {
            groups -= 1;
        }
    }
    groups
}

/// Heuristic syllable count: vowel groups minus a terminal silent `e`,
/// floored at one. Hyphenated compounds are counted part by part.
pub fn count_syllables(word: &str) -> u32 {
    let lower: Vec<char> = casefold(word)
        .chars()
        .filter(|c| c.is_alphabetic() || *c == '-')
        .collect();
    let total: u32 = lower.split(|&c| c == '-').map(syllables_in_part).sum();
    total.max(1)
}
