use std::collections::HashMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{read_file, HarnessError};
use crate::deptree::{parse_conllu, DependencyTree, GoldTree};
use crate::textmetrics::{compute_lix_with, tokenize, LixBreakdown, LixOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceLevel {
    University,
    HighSchool,
}

/// One evaluation item: a paragraph for the LIX task and a sentence with
/// its gold tree for the parsing task.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusItem {
    pub item_id: String,
    pub source_level: SourceLevel,
    pub paragraph: String,
    pub sentence: String,
    pub gold_tree: GoldTree,
    pub true_lix: LixBreakdown,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestItem {
    pub id: String,
    pub level: SourceLevel,
    /// Path of the paragraph text file.
    pub paragraph: PathBuf,
    /// Overrides the gold tree's `# text` comment.
    #[serde(default)]
    pub sentence: Option<String>,
    /// `sent_id` of the gold tree; defaults to `id`.
    #[serde(default)]
    pub gold_id: Option<String>,
}

/// `corpus.toml`: one CoNLL-U file with all gold trees plus the items.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusManifest {
    pub gold: PathBuf,
    #[serde(rename = "item")]
    pub items: Vec<ManifestItem>,
}

/// Loads and checks a corpus manifest. Each gold tree's forms must spell
/// out the sentence once whitespace is removed.
pub fn load_corpus(manifest_path: &Path, lix: &LixOptions) -> Result<Vec<CorpusItem>, HarnessError> {
    let text = read_file(manifest_path)?;
    let manifest: CorpusManifest = toml::from_str(&text)
        .map_err(|e| HarnessError::Parse { path: manifest_path.display().to_string(), message: e.to_string() })?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));

    let gold_path = base.join(&manifest.gold);
    let trees = parse_conllu(&read_file(&gold_path)?)
        .map_err(|e| HarnessError::Parse { path: gold_path.display().to_string(), message: e.to_string() })?;
    let mut by_id: HashMap<String, GoldTree> = trees.into_iter().map(|t| (t.sentence_id().to_owned(), t)).collect();

    let mut items = Vec::with_capacity(manifest.items.len());
    for m in manifest.items {
        let err = |message: String| HarnessError::Corpus { item: m.id.clone(), message };
        let gold_id = m.gold_id.as_deref().unwrap_or(&m.id);
        let gold_tree = by_id.remove(gold_id).ok_or_else(|| err(format!("no gold tree with sent_id `{gold_id}`")))?;
        let sentence = m
            .sentence
            .clone()
            .or_else(|| gold_tree.text().map(str::to_owned))
            .ok_or_else(|| err("no sentence text and the gold tree has no `# text`".into()))?;

        let squash = |s: &str| s.chars().filter(|c| !c.is_whitespace()).collect::<String>();
        if squash(&sentence) != gold_tree.forms().concat() {
            return Err(err("gold tree forms do not spell out the sentence".into()));
        }

        let paragraph = read_file(&base.join(&m.paragraph))?.trim_end().to_owned();
        let true_lix = compute_lix_with(&paragraph, lix).map_err(|e| err(e.to_string()))?;
        items.push(CorpusItem { item_id: m.id, source_level: m.level, paragraph, sentence, gold_tree, true_lix });
    }
    Ok(items)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanSd {
    pub mean: f64,
    /// Sample standard deviation.
    pub sd: f64,
}

impl MeanSd {
    fn of(values: &[usize]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<usize>() as f64 / n;
        let var = values.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0);
        Self { mean, sd: var.sqrt() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub items: usize,
    pub paragraph_tokens: MeanSd,
    pub sentence_tokens: MeanSd,
}

/// Token counts (punctuation included) of paragraphs and sentences.
pub fn corpus_stats<'a, I>(items: I) -> Result<CorpusStats, HarnessError>
where
    I: IntoIterator<Item = (&'a str, &'a str)>,
{
    let (para, sent): (Vec<usize>, Vec<usize>) =
        items.into_iter().map(|(p, s)| (tokenize(p).len(), tokenize(s).len())).unzip();
    if para.len() < 2 {
        return Err(HarnessError::InsufficientItems(para.len()));
    }
    Ok(CorpusStats { items: para.len(), paragraph_tokens: MeanSd::of(&para), sentence_tokens: MeanSd::of(&sent) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_sample_sd() {
        let a = "ord ".repeat(70);
        let b = "ord ".repeat(72);
        let s = corpus_stats([(a.as_str(), "x"), (b.as_str(), "y")]).unwrap();
        assert_eq!(s.paragraph_tokens.mean, 71.0);
        assert!((s.paragraph_tokens.sd - 2f64.sqrt()).abs() < 1e-12);
        assert!(matches!(corpus_stats([("a", "b")]), Err(HarnessError::InsufficientItems(1))));
    }

    #[test]
    fn loads_and_checks_gold_spelling() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path();
        std::fs::write(p.join("a.txt"), "Han sover. Hon vaknar.\n").unwrap();
        std::fs::write(
            p.join("gold.conllu"),
            "# sent_id = a\n# text = Han sover.\n1\tHan\t_\tPRON\t_\t_\t2\t_\t_\t_\n2\tsover\t_\tVERB\t_\t_\t0\t_\t_\t_\n3\t.\t_\tPUNCT\t_\t_\t2\t_\t_\t_\n\n",
        )
        .unwrap();
        let manifest = "gold = \"gold.conllu\"\n[[item]]\nid = \"a\"\nlevel = \"high_school\"\nparagraph = \"a.txt\"\n";
        std::fs::write(p.join("corpus.toml"), manifest).unwrap();
        let items = load_corpus(&p.join("corpus.toml"), &LixOptions::default()).unwrap();
        assert_eq!(items[0].sentence, "Han sover.");
        assert_eq!(items[0].paragraph, "Han sover. Hon vaknar.");
        assert_eq!((items[0].true_lix.words, items[0].true_lix.sentences), (4, 2));

        let bad = format!("{manifest}sentence = \"Han sov.\"\n");
        std::fs::write(p.join("corpus.toml"), bad).unwrap();
        assert!(matches!(
            load_corpus(&p.join("corpus.toml"), &LixOptions::default()),
            Err(HarnessError::Corpus { .. })
        ));
    }
}
