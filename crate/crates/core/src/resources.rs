//! Plain-text word lists: dictionaries, stopwords, basic-frequency lists and
//! abbreviations. Every list is one lowercase entry per line.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use crate::error::ResourceError;

const DICTIONARY: &str = include_str!("../../../data/dictionary.txt");
const BASIC_WORDS: &str = include_str!("../../../data/basic_words.txt");
const STOPWORDS: &str = include_str!("../../../data/stopwords.txt");
const ABBREVIATIONS: &str = include_str!("../../../data/abbreviations.txt");

/// An immutable set of lowercase words.
///
/// Lines are trimmed and lowercased on load; blank lines and lines starting
/// with `#` are skipped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordSet {
    words: HashSet<String>,
}

impl WordSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses a word list, keeping at most `limit` entries in file order.
    pub fn parse_limited(text: &str, limit: Option<usize>) -> Self {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .take(limit.unwrap_or(usize::MAX))
            .map(|l| l.to_lowercase())
            .collect();
        Self { words }
    }

    pub fn parse(text: &str) -> Self {
        Self::parse_limited(text, None)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ResourceError> {
        Self::load_limited(path, None)
    }

    pub fn load_limited(path: impl AsRef<Path>, limit: Option<usize>) -> Result<Self, ResourceError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| ResourceError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(Self::parse_limited(&text, limit))
    }

    /// The bundled ~50k-word English spelling dictionary.
    pub fn default_dictionary() -> Self {
        Self::parse(DICTIONARY)
    }

    /// The bundled frequency-ordered basic list, truncated to the `k` most
    /// frequent entries.
    pub fn default_basic_words(k: usize) -> Self {
        Self::parse_limited(BASIC_WORDS, Some(k))
    }

    pub fn default_stopwords() -> Self {
        Self::parse(STOPWORDS)
    }

    pub fn default_abbreviations() -> Self {
        Self::parse(ABBREVIATIONS)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn insert(&mut self, word: impl Into<String>) -> bool {
        self.words.insert(word.into().to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

impl<S: Into<String>> FromIterator<S> for WordSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Self {
            words: iter.into_iter().map(|w| w.into().to_lowercase()).collect(),
        }
    }
}

impl<S: Into<String>> Extend<S> for WordSet {
    fn extend<I: IntoIterator<Item = S>>(&mut self, iter: I) {
        self.words.extend(iter.into_iter().map(|w| w.into().to_lowercase()));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_skips_comments_and_blanks() {
        let set = WordSet::parse("# header\n\nCat\n dog \n");
        assert_eq!(set.len(), 2);
        assert!(set.contains("cat"));
        assert!(set.contains("dog"));
    }

    #[test]
    fn limit_keeps_file_order_prefix() {
        let set = WordSet::parse_limited("the\nof\nand\nto\n", Some(2));
        assert!(set.contains("the") && set.contains("of"));
        assert!(!set.contains("and"));
    }

    #[test]
    fn bundled_lists_load() {
        let dict = WordSet::default_dictionary();
        assert!(dict.len() > 45_000);
        assert!(dict.contains("restaurant"));
        assert!(!dict.contains("teh"));
        assert_eq!(WordSet::default_basic_words(2000).len(), 2000);
        assert!(WordSet::default_stopwords().contains("the"));
        assert!(WordSet::default_abbreviations().contains("e.g"));
    }

    #[test]
    fn missing_file_is_an_error() {
        assert!(WordSet::load("/nonexistent/words.txt").is_err());
    }
}
