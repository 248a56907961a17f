use serde::{Deserialize, Serialize};

use super::{segment_sentences_with, tokenize, TextError, Token, TokenKind};

/// How the length of a word is measured against the long-word threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LongWordMeasure {
    /// Alphabetic code points only; `2-åring` has five.
    #[default]
    Letters,
    /// All code points of the token.
    Characters,
}

/// Counting conventions for [`compute_lix_with`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct LixOptions {
    /// Count letterless tokens such as `1945` toward the word total.
    /// They never count as long words.
    pub count_numerals: bool,
    pub long_word_measure: LongWordMeasure,
    /// A word is long when its measured length exceeds this.
    pub long_word_threshold: usize,
    /// Passed to sentence segmentation.
    pub abbreviations: Vec<String>,
}

impl Default for LixOptions {
    fn default() -> Self {
        Self {
            count_numerals: true,
            long_word_measure: LongWordMeasure::Letters,
            long_word_threshold: 6,
            abbreviations: Vec::new(),
        }
    }
}

/// Word, sentence and long-word counts of a text and its LIX score.
///
/// `long_words_by_letters` and `long_words_by_chars` are diagnostics: they
/// show how `long_words` would change under the other length measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LixBreakdown {
    pub words: usize,
    pub sentences: usize,
    pub long_words: usize,
    pub score: f64,
    pub long_words_by_letters: usize,
    pub long_words_by_chars: usize,
    pub numerals: usize,
}

impl LixBreakdown {
    /// Average sentence length, `words / sentences`.
    pub fn sentence_length(&self) -> f64 {
        self.words as f64 / self.sentences as f64
    }

    /// Percentage of long words, `100 * long_words / words`.
    pub fn long_word_percentage(&self) -> f64 {
        100.0 * self.long_words as f64 / self.words as f64
    }

    pub fn band(&self) -> ReadabilityBand {
        classify_lix(self.score)
    }
}

pub fn compute_lix(text: &str) -> Result<LixBreakdown, TextError> {
    compute_lix_with(text, &LixOptions::default())
}

pub fn compute_lix_with(text: &str, options: &LixOptions) -> Result<LixBreakdown, TextError> {
    let tokens = tokenize(text);
    let counted = |t: &Token| match t.kind {
        TokenKind::Word => true,
        TokenKind::Numeral => options.count_numerals,
        TokenKind::Punct => false,
    };

    let words = tokens.iter().filter(|t| counted(t)).count();
    if words == 0 {
        return Err(TextError::NoWords);
    }

    let spans = segment_sentences_with(text, &options.abbreviations);
    let mut sentences = 0;
    let mut tok = tokens.iter().peekable();
    for span in &spans {
        let mut has_word = false;
        while let Some(t) = tok.next_if(|t| t.span.start < span.end) {
            has_word |= counted(t);
        }
        if has_word {
            sentences += 1;
        }
    }

    let threshold = options.long_word_threshold;
    let long_by = |measure: fn(&Token) -> usize| {
        tokens.iter().filter(|t| t.kind == TokenKind::Word && measure(t) > threshold).count()
    };
    let long_words_by_letters = long_by(Token::letter_count);
    let long_words_by_chars = long_by(Token::char_count);
    let long_words = match options.long_word_measure {
        LongWordMeasure::Letters => long_words_by_letters,
        LongWordMeasure::Characters => long_words_by_chars,
    };

    let score = words as f64 / sentences as f64 + 100.0 * long_words as f64 / words as f64;
    Ok(LixBreakdown {
        words,
        sentences,
        long_words,
        score,
        long_words_by_letters,
        long_words_by_chars,
        numerals: tokens.iter().filter(|t| t.kind == TokenKind::Numeral).count(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReadabilityBand {
    /// Below 30.
    Easy,
    /// 30 to 50 inclusive.
    Medium,
    /// Above 50, up to and including 60.
    Advanced,
    /// Above 60.
    VeryAdvanced,
}

impl std::fmt::Display for ReadabilityBand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Easy => "easy",
            Self::Medium => "medium",
            Self::Advanced => "advanced",
            Self::VeryAdvanced => "very_advanced",
        })
    }
}

pub fn classify_lix(score: f64) -> ReadabilityBand {
    if score < 30.0 {
        ReadabilityBand::Easy
    } else if score <= 50.0 {
        ReadabilityBand::Medium
    } else if score <= 60.0 {
        ReadabilityBand::Advanced
    } else {
        ReadabilityBand::VeryAdvanced
    }
}
