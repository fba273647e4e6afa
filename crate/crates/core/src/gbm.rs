//! Grammar-based metrics computed from a candidate alone.

use serde::{Deserialize, Serialize};

use crate::mr::match_key;
use crate::resources::WordSet;
use crate::textproc::{count_syllables, TextUnit};

pub const READABILITY_FORMULA: &str = "flesch_reading_ease";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbmProfile {
    /// Flesch Reading Ease; `0.0` when there are no words.
    pub readability: f64,
    pub readability_defined: bool,
    pub chars_per_utterance: f64,
    pub chars_per_word: f64,
    pub syllables_per_sentence: f64,
    pub syllables_per_word: f64,
    pub misspellings: usize,
    pub word_count: usize,
    pub sentence_count: usize,
}

/// Whether `word` (lowercase) is a known spelling. Hyphenated compounds pass
/// when every part is known.
fn is_known(word: &str, dictionary: &WordSet, exemptions: &WordSet) -> bool {
    let key = match_key(word);
    let known = |w: &str| dictionary.contains(w) || exemptions.contains(w);
    known(&key) || (key.contains('-') && key.split('-').all(known))
}

pub fn gbm_profile(text: &TextUnit, dictionary: &WordSet, exemptions: &WordSet) -> GbmProfile {
    let chars_per_utterance = text.raw.chars().filter(|c| !c.is_whitespace()).count() as f64;
    let sentence_count = text.sentences.len();
    let mut word_count = 0usize;
    let mut chars = 0usize;
    let mut syllables = 0u64;
    let mut misspellings = 0usize;
    for word in text.words() {
        word_count += 1;
        chars += word.surface.chars().count();
        syllables += u64::from(count_syllables(&word.surface));
        if !is_known(&word.lower, dictionary, exemptions) {
            misspellings += 1;
        }
    }
    if word_count == 0 {
        return GbmProfile {
            readability: 0.0,
            readability_defined: false,
            chars_per_utterance,
            chars_per_word: 0.0,
            syllables_per_sentence: 0.0,
            syllables_per_word: 0.0,
            misspellings: 0,
            word_count: 0,
            sentence_count,
        };
    }
    let words = word_count as f64;
    // a text with words has at least one sentence
    let sentences = sentence_count.max(1) as f64;
    let syllables = syllables as f64;
    GbmProfile {
        readability: 206.835 - 1.015 * (words / sentences) - 84.6 * (syllables / words),
        readability_defined: true,
        chars_per_utterance,
        chars_per_word: chars as f64 / words,
        syllables_per_sentence: syllables / sentences,
        syllables_per_word: syllables / words,
        misspellings,
        word_count,
        sentence_count,
    }
}

/// Exemption set made of every word token in the MR's slot values.
pub fn value_exemptions(mr: &crate::mr::MeaningRepresentation) -> WordSet {
    TextUnit::new(&mr.values_text())
        .words()
        .map(|t| match_key(&t.lower))
        .collect()
}
