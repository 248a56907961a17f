use std::ops::Range;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    /// Contains at least one alphabetic character.
    Word,
    /// Alphanumeric but without letters, e.g. `1945` or `2000-3000`.
    Numeral,
    /// A single punctuation or symbol character.
    Punct,
}

/// A token of the source text.
///
/// `span` is a half-open byte range into the text the token came from, so
/// `&text[token.span.clone()] == token.form` always holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    /// 1-based position in the text.
    pub ordinal: usize,
    pub form: String,
    pub span: Range<usize>,
    pub kind: TokenKind,
}

impl Token {
    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }

    /// Number of alphabetic code points. `å`, `ä` and `ö` count once each.
    pub fn letter_count(&self) -> usize {
        self.form.chars().filter(|c| c.is_alphabetic()).count()
    }

    pub fn char_count(&self) -> usize {
        self.form.chars().count()
    }
}

/// Splits text into word, numeral and punctuation tokens.
///
/// A word is a maximal run of alphanumeric characters. Hyphens and
/// apostrophes join two alphanumeric characters (`2-åring`, `1600-talet`),
/// and `.`, `,`, `:` join two digits (`3.5`, `10:30`). Every other
/// non-whitespace character is a token of its own.
pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut tokens = Vec::new();
    let mut i = 0;

    while i < chars.len() {
        let (start, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }

        let end_idx = if c.is_alphanumeric() {
            let mut j = i + 1;
            while j < chars.len() {
                let cur = chars[j].1;
                if cur.is_alphanumeric() {
                    j += 1;
                    continue;
                }
                let prev = chars[j - 1].1;
                let next = chars.get(j + 1).map(|&(_, n)| n);
                let joins = match next {
                    Some(next) if is_word_joiner(cur) => prev.is_alphanumeric() && next.is_alphanumeric(),
                    Some(next) if is_digit_joiner(cur) => prev.is_numeric() && next.is_numeric(),
                    _ => false,
                };
                if !joins {
                    break;
                }
                j += 2;
            }
            j
        } else {
            i + 1
        };

        let end = chars.get(end_idx).map_or(text.len(), |&(b, _)| b);
        let form = &text[start..end];
        let kind = if form.chars().any(char::is_alphabetic) {
            TokenKind::Word
        } else if form.chars().any(char::is_alphanumeric) {
            TokenKind::Numeral
        } else {
            TokenKind::Punct
        };
        tokens.push(Token { ordinal: tokens.len() + 1, form: form.to_owned(), span: start..end, kind });
        i = end_idx;
    }

    tokens
}

fn is_word_joiner(c: char) -> bool {
    matches!(c, '-' | '\u{2010}' | '\'' | '\u{2019}')
}

fn is_digit_joiner(c: char) -> bool {
    matches!(c, '.' | ',' | ':')
}
