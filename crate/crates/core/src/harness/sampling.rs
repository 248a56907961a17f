use std::path::{Path, PathBuf};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{read_file, HarnessError, SourceLevel};
use crate::textmetrics::segment_sentences;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Essay {
    pub id: String,
    pub level: SourceLevel,
    pub text: String,
}

#[derive(Debug, Clone, Deserialize)]
struct EssayEntry {
    id: String,
    level: SourceLevel,
    path: PathBuf,
}

/// `[[essay]]` entries with `id`, `level` and a text file `path`.
#[derive(Debug, Clone, Deserialize)]
pub struct EssayManifest {
    #[serde(rename = "essay")]
    entries: Vec<EssayEntry>,
}

impl EssayManifest {
    pub fn load(path: &Path) -> Result<Vec<Essay>, HarnessError> {
        let manifest: EssayManifest = toml::from_str(&read_file(path)?)
            .map_err(|e| HarnessError::Parse { path: path.display().to_string(), message: e.to_string() })?;
        let base = path.parent().unwrap_or(Path::new("."));
        manifest
            .entries
            .into_iter()
            .map(|e| Ok(Essay { text: read_file(&base.join(&e.path))?, id: e.id, level: e.level }))
            .collect()
    }
}

/// A paragraph and a sentence drawn from one essay, before gold annotation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledItem {
    pub item_id: String,
    pub level: SourceLevel,
    pub paragraph: String,
    pub sentence: String,
}

/// Maps a 64-bit draw onto `0..n` by widening multiplication
/// (`(draw * n) >> 64`).
pub fn uniform_index(rng: &mut impl RngCore, n: usize) -> usize {
    ((u128::from(rng.next_u64()) * n as u128) >> 64) as usize
}

/// Picks one paragraph and one sentence per essay.
///
/// Paragraphs are separated by blank lines; sentences are drawn from the
/// whole essay. The generator is ChaCha8 seeded with `seed` through
/// `SeedableRng::seed_from_u64`; essays are visited in order, each taking
/// one draw for the paragraph and then one for the sentence, both mapped
/// with [`uniform_index`].
pub fn sample_corpus(essays: &[Essay], seed: u64) -> Result<Vec<SampledItem>, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    essays
        .iter()
        .map(|essay| {
            let paragraphs = paragraphs(&essay.text);
            let sentences: Vec<&str> =
                paragraphs.iter().flat_map(|p| segment_sentences(p).into_iter().map(move |r| &p[r])).collect();
            if paragraphs.is_empty() || sentences.is_empty() {
                return Err(HarnessError::EmptyEssay(essay.id.clone()));
            }
            let paragraph = paragraphs[uniform_index(&mut rng, paragraphs.len())];
            let sentence = sentences[uniform_index(&mut rng, sentences.len())];
            Ok(SampledItem {
                item_id: essay.id.clone(),
                level: essay.level,
                paragraph: paragraph.to_owned(),
                sentence: sentence.to_owned(),
            })
        })
        .collect()
}

fn paragraphs(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let mut end = 0;
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        if line.trim().is_empty() {
            if let Some(s) = start.take() {
                out.push(text[s..end].trim());
            }
        } else {
            start.get_or_insert(offset);
            end = offset + line.len();
        }
        offset += line.len();
    }
    if let Some(s) = start {
        out.push(text[s..end].trim());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn essay(id: &str, text: &str) -> Essay {
        Essay { id: id.into(), level: SourceLevel::University, text: text.into() }
    }

    #[test]
    fn paragraphs_split_on_blank_lines() {
        assert_eq!(paragraphs("a b.\nc d.\n\n  \ne f.\n"), ["a b.\nc d.", "e f."]);
        assert_eq!(paragraphs("ett stycke"), ["ett stycke"]);
        assert!(paragraphs("\n \n").is_empty());
    }

    #[test]
    fn single_choice_is_forced() {
        let e = [essay("e", "Bara en mening.")];
        for seed in 0..20 {
            let s = sample_corpus(&e, seed).unwrap();
            assert_eq!(s[0].paragraph, "Bara en mening.");
            assert_eq!(s[0].sentence, "Bara en mening.");
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let e: Vec<Essay> = (0..5).map(|i| essay(&i.to_string(), "A b. C d.\n\nE f. G h. I j.")).collect();
        assert_eq!(sample_corpus(&e, 9).unwrap(), sample_corpus(&e, 9).unwrap());
    }

    #[test]
    fn empty_essay() {
        assert!(matches!(sample_corpus(&[essay("x", "  \n\n")], 1), Err(HarnessError::EmptyEssay(id)) if id == "x"));
    }
}
