use std::collections::BTreeSet;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlignKind {
    /// One gold token and one predicted token cover each other.
    Exact,
    /// The gold token was cut into several predicted tokens; it pairs with
    /// the piece of largest overlap.
    Split,
    /// Several gold tokens fell into one predicted token.
    Merge,
}

/// Indices are 1-based row positions in the two sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignedPair {
    pub gold: usize,
    pub pred: usize,
    pub kind: AlignKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AlignmentMap {
    pub pairs: Vec<AlignedPair>,
    pub unmatched_gold: BTreeSet<usize>,
    pub unmatched_pred: BTreeSet<usize>,
}

impl AlignmentMap {
    pub fn pred_for_gold(&self, gold: usize) -> Option<usize> {
        self.pairs.binary_search_by_key(&gold, |p| p.gold).ok().map(|i| self.pairs[i].pred)
    }

    pub fn is_monotone(&self) -> bool {
        self.pairs.windows(2).all(|w| w[0].gold < w[1].gold && w[0].pred <= w[1].pred)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignOptions {
    /// Largest tolerated edit distance between the two character streams,
    /// as a fraction of the longer stream.
    pub edit_budget: f64,
}

impl Default for AlignOptions {
    fn default() -> Self {
        Self { edit_budget: 0.10 }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlignError {
    #[error("cannot align an empty token sequence")]
    Empty,
    #[error("token streams differ by {distance} edits, budget is {budget}")]
    Unalignable { distance: usize, budget: usize },
}

pub fn align_tokens<G: AsRef<str>, P: AsRef<str>>(gold: &[G], pred: &[P]) -> Result<AlignmentMap, AlignError> {
    align_tokens_with(gold, pred, AlignOptions::default())
}

/// Aligns two tokenizations of the same sentence by character overlap.
///
/// Each sequence is flattened to a character stream (NFC, whitespace
/// removed) and each token owns a span of it. When the streams differ, a
/// minimum-edit alignment maps predicted characters onto gold characters.
/// A gold token then pairs with the predicted token that covers most of its
/// characters, leftmost on ties, which keeps the map monotone.
pub fn align_tokens_with<G: AsRef<str>, P: AsRef<str>>(
    gold: &[G],
    pred: &[P],
    options: AlignOptions,
) -> Result<AlignmentMap, AlignError> {
    if gold.is_empty() || pred.is_empty() {
        return Err(AlignError::Empty);
    }
    let (gold_chars, gold_spans) = char_stream(gold);
    let (pred_chars, pred_spans) = char_stream(pred);

    let char_map: Vec<Option<usize>> = if gold_chars == pred_chars {
        (0..pred_chars.len()).map(Some).collect()
    } else {
        let longest = gold_chars.len().max(pred_chars.len());
        let budget = (options.edit_budget * longest as f64).floor() as usize;
        let distance_floor = gold_chars.len().abs_diff(pred_chars.len());
        if distance_floor > budget {
            return Err(AlignError::Unalignable { distance: distance_floor, budget });
        }
        let (distance, map) = edit_alignment(&gold_chars, &pred_chars);
        if distance > budget {
            return Err(AlignError::Unalignable { distance, budget });
        }
        map
    };

    let mut gold_owner = vec![0usize; gold_chars.len()];
    for (g, span) in gold_spans.iter().enumerate() {
        gold_owner[span.clone()].iter_mut().for_each(|o| *o = g);
    }

    // overlaps[p] = (gold token, shared chars), ascending by gold token.
    let overlaps: Vec<Vec<(usize, usize)>> = pred_spans
        .iter()
        .map(|span| {
            let mut out: Vec<(usize, usize)> = Vec::new();
            for g in char_map[span.clone()].iter().flatten().map(|&c| gold_owner[c]) {
                match out.last_mut() {
                    Some((last, n)) if *last == g => *n += 1,
                    _ => out.push((g, 1)),
                }
            }
            out
        })
        .collect();

    let mut by_gold: Vec<Vec<(usize, usize)>> = vec![Vec::new(); gold.len()];
    for (p, list) in overlaps.iter().enumerate() {
        for &(g, n) in list {
            by_gold[g].push((p, n));
        }
    }

    let mut map = AlignmentMap::default();
    let mut used_pred = vec![false; pred.len()];
    for (g, candidates) in by_gold.iter().enumerate() {
        let Some(&(best, _)) = candidates.iter().rev().max_by_key(|&&(_, n)| n) else {
            map.unmatched_gold.insert(g + 1);
            continue;
        };
        let kind = if overlaps[best].len() > 1 {
            AlignKind::Merge
        } else if candidates.len() > 1 {
            AlignKind::Split
        } else {
            AlignKind::Exact
        };
        used_pred[best] = true;
        map.pairs.push(AlignedPair { gold: g + 1, pred: best + 1, kind });
    }
    map.unmatched_pred = (0..pred.len()).filter(|&p| !used_pred[p]).map(|p| p + 1).collect();
    Ok(map)
}

fn char_stream<S: AsRef<str>>(forms: &[S]) -> (Vec<char>, Vec<Range<usize>>) {
    let mut chars = Vec::new();
    let mut spans = Vec::with_capacity(forms.len());
    for form in forms {
        let start = chars.len();
        chars.extend(form.as_ref().nfc().filter(|c| !c.is_whitespace()));
        spans.push(start..chars.len());
    }
    (chars, spans)
}

/// Levenshtein distance plus, for every `b` character, the `a` character it
/// is matched or substituted with on one optimal path.
fn edit_alignment(a: &[char], b: &[char]) -> (usize, Vec<Option<usize>>) {
    let (n, m) = (a.len(), b.len());
    let w = m + 1;
    let mut dp = vec![0u32; (n + 1) * w];
    for (j, cell) in dp[..w].iter_mut().enumerate() {
        *cell = j as u32;
    }
    for i in 1..=n {
        dp[i * w] = i as u32;
        for j in 1..=m {
            let sub = dp[(i - 1) * w + j - 1] + u32::from(a[i - 1] != b[j - 1]);
            let del = dp[(i - 1) * w + j] + 1;
            let ins = dp[i * w + j - 1] + 1;
            dp[i * w + j] = sub.min(del).min(ins);
        }
    }

    let mut map = vec![None; m];
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = dp[i * w + j];
        if i > 0 && j > 0 && here == dp[(i - 1) * w + j - 1] + u32::from(a[i - 1] != b[j - 1]) {
            map[j - 1] = Some(i - 1);
            i -= 1;
            j -= 1;
        } else if i > 0 && here == dp[(i - 1) * w + j] + 1 {
            i -= 1;
        } else {
            j -= 1;
        }
    }
    (dp[n * w + m] as usize, map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(gold: usize, pred: usize, kind: AlignKind) -> AlignedPair {
        AlignedPair { gold, pred, kind }
    }

    #[test]
    fn identical_sequences() {
        let m = align_tokens(&["Han", "sover", "."], &["Han", "sover", "."]).unwrap();
        assert_eq!(m.pairs, [pair(1, 1, AlignKind::Exact), pair(2, 2, AlignKind::Exact), pair(3, 3, AlignKind::Exact)]);
        assert!(m.unmatched_gold.is_empty() && m.unmatched_pred.is_empty());
    }

    #[test]
    fn quoted_word_split_into_three() {
        let m = align_tokens(&["\"hårda\""], &["\"", "hårda", "\""]).unwrap();
        assert_eq!(m.pairs, [pair(1, 2, AlignKind::Split)]);
        assert_eq!(m.unmatched_pred, BTreeSet::from([1, 3]));
    }

    #[test]
    fn ordinal_merged_into_one() {
        let m = align_tokens(&["Efter", "2:", "a", "världskriget"], &["Efter", "2:a", "världskriget"]).unwrap();
        assert_eq!(
            m.pairs,
            [
                pair(1, 1, AlignKind::Exact),
                pair(2, 2, AlignKind::Merge),
                pair(3, 2, AlignKind::Merge),
                pair(4, 3, AlignKind::Exact)
            ]
        );
    }

    #[test]
    fn dropped_punctuation_is_unmatched_gold() {
        let gold = ["Urbaniseringen", ",", "som", "detta", "kallas", ",", "har", "gjort", "."];
        let pred = ["Urbaniseringen", "som", "detta", "kallas", "har", "gjort", "."];
        let m = align_tokens(&gold, &pred).unwrap();
        assert_eq!(m.unmatched_gold, BTreeSet::from([2, 6]));
        assert!(m.unmatched_pred.is_empty());
        assert_eq!(m.pred_for_gold(7), Some(5));
        assert!(m.is_monotone());
    }

    #[test]
    fn duplicate_words_resolve_by_position() {
        let gold = ["the", "pie", "in", "the", "fridge"];
        let m = align_tokens(&gold, &gold).unwrap();
        assert_eq!(m.pred_for_gold(4), Some(4));
    }

    #[test]
    fn nfc_normalization() {
        let decomposed = "ha\u{030A}rda";
        let m = align_tokens(&["hårda"], &[decomposed]).unwrap();
        assert_eq!(m.pairs, [pair(1, 1, AlignKind::Exact)]);
    }

    #[test]
    fn paraphrase_is_unalignable() {
        let err = align_tokens(&["Han", "sover", "."], &["Hon", "äter", "glass", "."]).unwrap_err();
        assert!(matches!(err, AlignError::Unalignable { .. }));
        assert_eq!(align_tokens::<&str, &str>(&[], &["a"]), Err(AlignError::Empty));
    }

    #[test]
    fn small_spelling_difference_is_tolerated() {
        let gold = ["Långt", "senare", "började", "en", "resturang", "."];
        let pred = ["Långt", "senare", "började", "en", "restaurang", "."];
        let m = align_tokens(&gold, &pred).unwrap();
        assert_eq!(m.pairs.len(), 6);
        assert!(m.pairs.iter().all(|p| p.kind == AlignKind::Exact && p.gold == p.pred));
    }
}
