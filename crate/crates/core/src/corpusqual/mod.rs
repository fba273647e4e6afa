//! Corpus-level quality statistics: lexical richness (MSTTR, TTR, lexical
//! sophistication), D-level syntactic complexity and content-selection rate.
//!
//! Aggregation goes through [`CorpusAccumulator`], whose partial results
//! merge exactly. The word stream feeding MSTTR keeps input order, so a
//! corpus split into consecutive chunks and merged in order gives the same
//! statistics as a single pass.

pub mod dlevel;

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::CorpusError;
use crate::mr::{coverage, match_key, MeaningRepresentation, SlotLexicon};
use crate::resources::WordSet;
use crate::textproc::{TextUnit, Token};

pub use dlevel::{dlevel, detect_cues, Cue, CueKind, DLevelRuleSet, RULESET_VERSION};

pub const DEFAULT_SEGMENT_SIZE: usize = 50;
pub const DEFAULT_BASIC_LIST_SIZE: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Msttr {
    pub value: f64,
    pub segments: usize,
    /// Fewer tokens than one segment; `value` is the plain TTR.
    pub short_input: bool,
}

fn word_keys(tokens: &[Token]) -> Vec<String> {
    tokens.iter().filter(|t| t.is_word()).map(|t| match_key(&t.lower)).collect()
}

fn type_token_ratio<S: AsRef<str>>(words: &[S]) -> f64 {
    let types: HashSet<&str> = words.iter().map(AsRef::as_ref).collect();
    types.len() as f64 / words.len() as f64
}

/// Mean segmental type-token ratio over lowercase word keys.
pub fn msttr_of_words<S: AsRef<str>>(words: &[S], segment_size: usize) -> Result<Msttr, CorpusError> {
    if segment_size == 0 {
        return Err(CorpusError::InvalidSegmentSize);
    }
    if words.is_empty() {
        return Err(CorpusError::EmptyInput);
    }
    if words.len() < segment_size {
        return Ok(Msttr {
            value: type_token_ratio(words),
            segments: 0,
            short_input: true,
        });
    }
    let ratios: Vec<f64> = words.chunks_exact(segment_size).map(type_token_ratio).collect();
    Ok(Msttr {
        value: ratios.iter().sum::<f64>() / ratios.len() as f64,
        segments: ratios.len(),
        short_input: false,
    })
}

/// MSTTR over the word tokens of `tokens`; the trailing partial segment is
/// discarded.
pub fn msttr(tokens: &[Token], segment_size: usize) -> Result<Msttr, CorpusError> {
    msttr_of_words(&word_keys(tokens), segment_size)
}

pub fn ttr(tokens: &[Token]) -> Result<f64, CorpusError> {
    let words = word_keys(tokens);
    if words.is_empty() {
        return Err(CorpusError::EmptyInput);
    }
    Ok(type_token_ratio(&words))
}

/// Counts of lexical (non-stopword) word tokens and of those outside the
/// basic list.
fn sophistication_counts<'a>(
    words: impl Iterator<Item = &'a Token>,
    basic_list: &WordSet,
    stopwords: &WordSet,
) -> (u64, u64) {
    let mut lexical = 0;
    let mut sophisticated = 0;
    for t in words.filter(|t| t.is_word()) {
        let key = match_key(&t.lower);
        if stopwords.contains(&key) {
            continue;
        }
        lexical += 1;
        if !basic_list.contains(&key) {
            sophisticated += 1;
        }
    }
    (lexical, sophisticated)
}

/// Share of lexical word tokens that are not in the basic list; 0 when there
/// are no lexical words.
pub fn lexical_sophistication(tokens: &[Token], basic_list: &WordSet, stopwords: &WordSet) -> f64 {
    let (lexical, sophisticated) = sophistication_counts(tokens.iter(), basic_list, stopwords);
    if lexical == 0 {
        0.0
    } else {
        sophisticated as f64 / lexical as f64
    }
}

/// Fraction of pairs whose utterance leaves at least one slot unrealized.
pub fn content_selection_rate(
    pairs: &[(MeaningRepresentation, TextUnit)],
    lexicon: &SlotLexicon,
) -> Result<f64, CorpusError> {
    if pairs.is_empty() {
        return Err(CorpusError::EmptyInput);
    }
    let skipped = pairs.iter().filter(|(mr, text)| coverage(mr, text, lexicon) < 1.0).count();
    Ok(skipped as f64 / pairs.len() as f64)
}

/// Resources and parameters for [`corpus_stats`].
#[derive(Debug, Clone)]
pub struct CorpusConfig {
    pub segment_size: usize,
    pub basic_words: WordSet,
    pub stopwords: WordSet,
    pub lexicon: SlotLexicon,
    pub rules: DLevelRuleSet,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self {
            segment_size: DEFAULT_SEGMENT_SIZE,
            basic_words: WordSet::default_basic_words(DEFAULT_BASIC_LIST_SIZE),
            stopwords: WordSet::default_stopwords(),
            lexicon: SlotLexicon::identity(),
            rules: DLevelRuleSet::default(),
        }
    }
}

/// Mergeable partial statistics of a corpus slice.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusAccumulator {
    words: Vec<String>,
    lexical_tokens: u64,
    sophisticated_tokens: u64,
    dlevel_counts: [u64; 8],
    pairs_with_mr: u64,
    pairs_with_skips: u64,
    n_pairs: u64,
    n_sentences: u64,
    n_tokens: u64,
}

impl CorpusAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, mr: Option<&MeaningRepresentation>, text: &TextUnit, config: &CorpusConfig) {
        self.n_pairs += 1;
        self.n_sentences += text.sentences.len() as u64;
        self.n_tokens += text.token_count() as u64;
        self.words.extend(text.words().map(|t| match_key(&t.lower)));
        let (lexical, sophisticated) = sophistication_counts(text.tokens(), &config.basic_words, &config.stopwords);
        self.lexical_tokens += lexical;
        self.sophisticated_tokens += sophisticated;
        for sentence in &text.sentences {
            let level = dlevel(sentence, &config.rules).min(7);
            self.dlevel_counts[usize::from(level)] += 1;
        }
        if let Some(mr) = mr {
            self.pairs_with_mr += 1;
            if coverage(mr, text, &config.lexicon) < 1.0 {
                self.pairs_with_skips += 1;
            }
        }
    }

    /// Appends `other`, which must cover the input that follows `self`.
    pub fn merge(&mut self, other: CorpusAccumulator) {
        self.words.extend(other.words);
        self.lexical_tokens += other.lexical_tokens;
        self.sophisticated_tokens += other.sophisticated_tokens;
        for (a, b) in self.dlevel_counts.iter_mut().zip(other.dlevel_counts) {
            *a += b;
        }
        self.pairs_with_mr += other.pairs_with_mr;
        self.pairs_with_skips += other.pairs_with_skips;
        self.n_pairs += other.n_pairs;
        self.n_sentences += other.n_sentences;
        self.n_tokens += other.n_tokens;
    }

    pub fn finish(&self, segment_size: usize) -> Result<CorpusStats, CorpusError> {
        let msttr = msttr_of_words(&self.words, segment_size)?;
        let total: u64 = self.dlevel_counts.iter().sum();
        let mut dlevel_hist = [0.0; 8];
        if total > 0 {
            for (h, &c) in dlevel_hist.iter_mut().zip(&self.dlevel_counts) {
                *h = c as f64 / total as f64;
            }
        }
        let frac_level01 = dlevel_hist[0] + dlevel_hist[1];
        let frac_level67 = dlevel_hist[6] + dlevel_hist[7];
        Ok(CorpusStats {
            ls: if self.lexical_tokens == 0 {
                0.0
            } else {
                self.sophisticated_tokens as f64 / self.lexical_tokens as f64
            },
            msttr: msttr.value,
            msttr_short_input: msttr.short_input,
            ttr: type_token_ratio(&self.words),
            dlevel_counts: self.dlevel_counts,
            dlevel_hist,
            frac_level01,
            frac_level67,
            frac_above_level1: 1.0 - frac_level01,
            content_selection_rate: (self.pairs_with_mr > 0)
                .then(|| self.pairs_with_skips as f64 / self.pairs_with_mr as f64),
            n_pairs: self.n_pairs,
            n_pairs_with_mr: self.pairs_with_mr,
            n_sentences: self.n_sentences,
            n_tokens: self.n_tokens,
            n_words: self.words.len() as u64,
        })
    }
}

/// One row of a corpus comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub ls: f64,
    pub msttr: f64,
    pub msttr_short_input: bool,
    pub ttr: f64,
    pub dlevel_counts: [u64; 8],
    pub dlevel_hist: [f64; 8],
    pub frac_level01: f64,
    pub frac_level67: f64,
    pub frac_above_level1: f64,
    /// `None` when no entry carries an MR.
    pub content_selection_rate: Option<f64>,
    pub n_pairs: u64,
    pub n_pairs_with_mr: u64,
    pub n_sentences: u64,
    pub n_tokens: u64,
    pub n_words: u64,
}

const CHUNK: usize = 512;

/// Statistics over `(optional MR, utterance)` entries, in input order.
pub fn corpus_stats(
    corpus: &[(Option<MeaningRepresentation>, TextUnit)],
    config: &CorpusConfig,
) -> Result<CorpusStats, CorpusError> {
    if corpus.is_empty() {
        return Err(CorpusError::EmptyInput);
    }
    let parts: Vec<CorpusAccumulator> = corpus
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = CorpusAccumulator::new();
            for (mr, text) in chunk {
                acc.add(mr.as_ref(), text, config);
            }
            acc
        })
        .collect();
    let mut total = CorpusAccumulator::new();
    for part in parts {
        total.merge(part);
    }
    total.finish(config.segment_size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mr::parse_mr;
    use crate::textproc::tokenize;

    fn words(n_distinct: usize, repeats: &[&str]) -> Vec<Token> {
        let mut text: Vec<String> = (0..n_distinct).map(|i| format!("w{}", to_letters(i))).collect();
        text.extend(repeats.iter().map(|s| s.to_string()));
        tokenize(&text.join(" "))
    }

    fn to_letters(mut i: usize) -> String {
        let mut s = String::new();
        loop {
            s.push((b'a' + (i % 26) as u8) as char);
            i /= 26;
            if i == 0 {
                break s;
            }
        }
    }

    #[test]
    fn msttr_examples() {
        let all_distinct = words(100, &[]);
        assert_eq!(msttr(&all_distinct, 50).unwrap().value, 1.0);

        let the = tokenize(&vec!["the"; 100].join(" "));
        assert_eq!(msttr(&the, 50).unwrap().value, 0.02);

        // 50 distinct then 25 repeats: only the first segment counts
        let mut toks = words(50, &[]);
        toks.extend(tokenize(&vec!["wa"; 25].join(" ")));
        let m = msttr(&toks, 50).unwrap();
        assert_eq!(m.segments, 1);
        assert_eq!(m.value, 1.0);
    }

    #[test]
    fn msttr_short_and_empty() {
        let toks = tokenize("the cat the dog");
        let m = msttr(&toks, 50).unwrap();
        assert!(m.short_input);
        assert_eq!(m.value, 0.75);
        assert_eq!(msttr(&tokenize("..."), 50), Err(CorpusError::EmptyInput));
        assert_eq!(msttr(&toks, 0), Err(CorpusError::InvalidSegmentSize));
    }

    #[test]
    fn punctuation_is_ignored_by_msttr() {
        let a = msttr(&tokenize("a b , c ."), 2).unwrap();
        let b = msttr(&tokenize("a b c"), 2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sophistication_examples() {
        let basic: WordSet = ["pub", "cheap", "food"].into_iter().collect();
        let stop = WordSet::default_stopwords();
        assert_eq!(lexical_sophistication(&tokenize("the cheap pub food"), &basic, &stop), 0.0);
        assert_eq!(lexical_sophistication(&tokenize("an exquisite brasserie"), &basic, &stop), 1.0);
        assert_eq!(lexical_sophistication(&tokenize("a cheap brasserie"), &basic, &stop), 0.5);
        assert_eq!(lexical_sophistication(&tokenize("the of"), &basic, &stop), 0.0);
    }

    #[test]
    fn content_selection_examples() {
        let lex = SlotLexicon::identity();
        let mr = parse_mr("inform(name = Zizzi, food = Italian)").unwrap();
        let full = TextUnit::new("Zizzi serves Italian food.");
        let part = TextUnit::new("Zizzi is nice.");
        let rate = content_selection_rate(&[(mr.clone(), full.clone())], &lex).unwrap();
        assert_eq!(rate, 0.0);
        let rate = content_selection_rate(&[(mr.clone(), part.clone())], &lex).unwrap();
        assert_eq!(rate, 1.0);
        let rate = content_selection_rate(&[(mr.clone(), full), (mr, part)], &lex).unwrap();
        assert_eq!(rate, 0.5);
        assert_eq!(content_selection_rate(&[], &lex), Err(CorpusError::EmptyInput));
    }

    #[test]
    fn single_pair_corpus() {
        let mr = parse_mr("inform(name = Zizzi)").unwrap();
        let corpus = vec![(Some(mr), TextUnit::new("Zizzi is cheap."))];
        let stats = corpus_stats(&corpus, &CorpusConfig::default()).unwrap();
        assert_eq!(stats.content_selection_rate, Some(0.0));
        assert_eq!(stats.frac_level01, 1.0);
        assert_eq!(stats.frac_above_level1, 0.0);
        assert_eq!(stats.n_pairs, 1);
        assert_eq!(stats.n_sentences, 1);
        assert!(stats.msttr_short_input);
    }

    #[test]
    fn corpus_without_mrs_has_no_selection_rate() {
        let corpus = vec![(None, TextUnit::new("It is a pub."))];
        let stats = corpus_stats(&corpus, &CorpusConfig::default()).unwrap();
        assert_eq!(stats.content_selection_rate, None);
        assert!(corpus_stats(&[], &CorpusConfig::default()).is_err());
    }

    #[test]
    fn merged_partials_match_single_pass() {
        let cfg = CorpusConfig::default();
        let texts = [
            "The pub that serves pasta is cheap and it is near the river.",
            "I want to eat.",
            "Zizzi is cheaper than Strada.",
            "The restaurant is cheap.",
        ];
        let mut single = CorpusAccumulator::new();
        let mut a = CorpusAccumulator::new();
        let mut b = CorpusAccumulator::new();
        for (i, t) in texts.iter().enumerate() {
            let unit = TextUnit::new(t);
            single.add(None, &unit, &cfg);
            if i < 2 { a.add(None, &unit, &cfg) } else { b.add(None, &unit, &cfg) }
        }
        a.merge(b);
        assert_eq!(a, single);
        assert_eq!(a.finish(3).unwrap(), single.finish(3).unwrap());
    }
}
