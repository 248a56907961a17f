//! Tokenization, sentence segmentation and the LIX readability index.
//!
//! Everything here is a pure function of its input text. The conventions
//! that the ground-truth numbers depend on (whether numerals count as words,
//! how a "long" word is measured, which abbreviations suppress a sentence
//! break) are collected in [`LixOptions`] so alternative conventions can be
//! compared side by side.

mod lix;
mod sentences;
mod tokenize;

pub use lix::{
    classify_lix, compute_lix, compute_lix_with, LixBreakdown, LixOptions, LongWordMeasure, ReadabilityBand,
};
pub use sentences::{segment_sentences, segment_sentences_with};
pub use tokenize::{tokenize, Token, TokenKind};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TextError {
    /// LIX divides by the word count.
    #[error("text contains no words")]
    NoWords,
}
