use std::fmt::Write as _;

use thiserror::Error;

use super::{DepNode, DependencyTree, GoldTree, TreeDefect, Upos};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConlluError {
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    /// `line` is the first token line of the offending sentence.
    #[error("line {line}: sentence `{sentence_id}` is not a tree: {defect}")]
    NonTree { line: usize, sentence_id: String, defect: TreeDefect },
}

/// Reads gold trees from CoNLL-U.
///
/// Only ID, FORM, UPOS and HEAD are used. Multiword ranges (`1-2`) and
/// empty nodes (`5.1`) are skipped. `# sent_id` and `# text` comments are
/// kept; sentences without an id are named `s1`, `s2`, ... by position.
pub fn parse_conllu(text: &str) -> Result<Vec<GoldTree>, ConlluError> {
    let mut trees = Vec::new();
    let mut block = Block::default();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            block.finish(&mut trees)?;
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(v) = comment.strip_prefix("sent_id").and_then(|r| r.trim_start().strip_prefix('=')) {
                block.sentence_id = Some(v.trim().to_owned());
            } else if let Some(v) = comment.strip_prefix("text").and_then(|r| r.trim_start().strip_prefix('=')) {
                block.text = Some(v.trim().to_owned());
            }
            continue;
        }

        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(malformed(line_no, format!("expected 10 tab-separated columns, found {}", cols.len())));
        }
        let id = cols[0];
        if id.contains('-') || id.contains('.') {
            continue;
        }
        let index = id.parse::<usize>().map_err(|_| malformed(line_no, format!("bad ID `{id}`")))?;
        let head = cols[6].parse::<usize>().map_err(|_| malformed(line_no, format!("bad HEAD `{}`", cols[6])))?;
        let pos = match cols[3] {
            "_" => None,
            tag => Some(tag.parse::<Upos>().map_err(|e| malformed(line_no, e.to_string()))?),
        };
        block.first_line.get_or_insert(line_no);
        block.nodes.push(DepNode { index, form: cols[1].to_owned(), head, pos });
    }
    block.finish(&mut trees)?;
    Ok(trees)
}

/// Writes trees back out with only ID, FORM, UPOS and HEAD populated.
pub fn to_conllu(trees: &[GoldTree]) -> String {
    let mut out = String::new();
    for tree in trees {
        let _ = writeln!(out, "# sent_id = {}", tree.sentence_id());
        if let Some(text) = tree.text() {
            let _ = writeln!(out, "# text = {text}");
        }
        for n in tree.nodes() {
            let pos = n.pos.map_or("_", Upos::as_str);
            let _ = writeln!(out, "{}\t{}\t_\t{}\t_\t_\t{}\t_\t_\t_", n.index, n.form, pos, n.head);
        }
        out.push('\n');
    }
    out
}

fn malformed(line: usize, reason: String) -> ConlluError {
    ConlluError::MalformedLine { line, reason }
}

#[derive(Default)]
struct Block {
    sentence_id: Option<String>,
    text: Option<String>,
    nodes: Vec<DepNode>,
    first_line: Option<usize>,
}

impl Block {
    fn finish(&mut self, trees: &mut Vec<GoldTree>) -> Result<(), ConlluError> {
        let block = std::mem::take(self);
        let Some(line) = block.first_line else {
            return Ok(());
        };
        let sentence_id = block.sentence_id.unwrap_or_else(|| format!("s{}", trees.len() + 1));
        let tree = GoldTree::new(sentence_id.clone(), block.nodes).map_err(|defect| ConlluError::NonTree {
            line,
            sentence_id,
            defect,
        })?;
        trees.push(match block.text {
            Some(t) => tree.with_text(t),
            None => tree,
        });
        Ok(())
    }
}
