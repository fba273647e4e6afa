//! Evaluation toolkit for data-driven natural language generation.
//!
//! * [`wbm`]: reference-based word metrics (BLEU, TER, ROUGE-N, ROUGE-L,
//!   semantic similarity).
//! * [`gbm`]: reference-less grammar metrics (readability, length and
//!   syllable ratios, misspellings).
//! * [`stats`]: metric reliability against human ratings.
//! * [`mr`], [`validate`], [`corpusqual`]: dialogue-act meaning
//!   representations, crowdsourcing quality gates and corpus-level lexical
//!   and syntactic statistics.

pub mod corpusqual;
pub mod error;
pub mod eval;
pub mod gbm;
pub mod mr;
pub mod resources;
pub mod stats;
pub mod textproc;
pub mod validate;
pub mod wbm;

pub use error::{CorpusError, EvalError, MrError, ResourceError, StatsError, ValidateError, WbmError};
pub use mr::{MeaningRepresentation, Slot, SlotLexicon};
pub use resources::WordSet;
pub use textproc::{Sentence, TextUnit, Token, TokenKind};
