use std::ops::Range;

/// Splits text into sentence spans (byte ranges) with no abbreviation list.
///
/// `.`, `!` and `?` end a sentence when followed by whitespace, the end of
/// the text, or directly by an uppercase letter (`sig?Situation`). Closing
/// quotes and brackets right after the terminal stay with the sentence.
/// Runs of two or more dots are an ellipsis and never end a sentence; colons
/// and semicolons never do.
pub fn segment_sentences(text: &str) -> Vec<Range<usize>> {
    segment_sentences_with::<&str>(text, &[])
}

/// As [`segment_sentences`], but a terminal that completes one of
/// `abbreviations` (compared case-insensitively against the whitespace
/// delimited chunk ending at the terminal, e.g. `"t.ex."`) is not a break.
pub fn segment_sentences_with<S: AsRef<str>>(text: &str, abbreviations: &[S]) -> Vec<Range<usize>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let byte_at = |idx: usize| chars.get(idx).map_or(text.len(), |&(b, _)| b);

    let mut spans = Vec::new();
    let mut start: Option<usize> = None;
    let mut last_content_end = 0;
    let mut i = 0;

    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if start.is_none() {
            start = Some(pos);
        }

        if !is_terminal(c) {
            i += 1;
            last_content_end = byte_at(i);
            continue;
        }

        let run_start = i;
        let mut j = i + 1;
        while j < chars.len() && is_terminal(chars[j].1) {
            j += 1;
        }
        let ellipsis = j - run_start >= 2 && chars[run_start..j].iter().all(|&(_, t)| t == '.');
        while j < chars.len() && is_closer(chars[j].1) {
            j += 1;
        }
        let follows_break = match chars.get(j) {
            None => true,
            Some(&(_, n)) => n.is_whitespace() || n.is_uppercase(),
        };

        i = j;
        last_content_end = byte_at(j);
        if ellipsis || !follows_break {
            continue;
        }
        if !abbreviations.is_empty() {
            let chunk_start =
                chars[..run_start].iter().rposition(|&(_, ch)| ch.is_whitespace()).map_or(0, |k| byte_at(k + 1));
            let chunk = text[chunk_start..byte_at(run_start + 1)].to_lowercase();
            if abbreviations.iter().any(|a| a.as_ref().to_lowercase() == chunk) {
                continue;
            }
        }
        if let Some(s) = start.take() {
            spans.push(s..last_content_end);
        }
    }

    if let Some(s) = start {
        spans.push(s..last_content_end);
    }
    spans
}

fn is_terminal(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '»' | '\u{201D}' | '\u{2019}')
}
