use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Upos;

/// One word of a dependency tree. `head == 0` attaches to the virtual root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepNode {
    pub index: usize,
    pub form: String,
    pub head: usize,
    pub pos: Option<Upos>,
}

impl DepNode {
    pub fn new(index: usize, form: impl Into<String>, head: usize) -> Self {
        Self { index, form: form.into(), head, pos: None }
    }

    pub fn with_pos(mut self, pos: Upos) -> Self {
        self.pos = Some(pos);
        self
    }
}

/// Common read access for gold and predicted trees.
pub trait DependencyTree {
    fn nodes(&self) -> &[DepNode];

    fn forms(&self) -> Vec<&str> {
        self.nodes().iter().map(|n| n.form.as_str()).collect()
    }

    fn len(&self) -> usize {
        self.nodes().len()
    }

    fn is_empty(&self) -> bool {
        self.nodes().is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeDefect {
    #[error("tree has no nodes")]
    Empty,
    #[error("node at position {position} has index {index}")]
    IndexOutOfSequence { position: usize, index: usize },
    #[error("no root node")]
    NoRoot,
    #[error("multiple root nodes: {0:?}")]
    MultipleRoots(Vec<usize>),
    #[error("node {index} has head {head} outside 0..={len}")]
    HeadOutOfRange { index: usize, head: usize, len: usize },
    #[error("node {0} is on a cycle")]
    Cycle(usize),
}

/// A validated single-rooted tree with indices `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldTree {
    sentence_id: String,
    text: Option<String>,
    nodes: Vec<DepNode>,
}

impl GoldTree {
    pub fn new(sentence_id: impl Into<String>, nodes: Vec<DepNode>) -> Result<Self, TreeDefect> {
        validate(&nodes)?;
        Ok(Self { sentence_id: sentence_id.into(), text: None, nodes })
    }

    pub fn with_text(mut self, text: impl Into<String>) -> Self {
        self.text = Some(text.into());
        self
    }

    pub fn sentence_id(&self) -> &str {
        &self.sentence_id
    }

    /// The `# text` of the sentence, when the source provided one.
    pub fn text(&self) -> Option<&str> {
        self.text.as_deref()
    }

    pub fn root(&self) -> &DepNode {
        self.nodes.iter().find(|n| n.head == 0).expect("validated tree has a root")
    }
}

impl DependencyTree for GoldTree {
    fn nodes(&self) -> &[DepNode] {
        &self.nodes
    }
}

fn validate(nodes: &[DepNode]) -> Result<(), TreeDefect> {
    if nodes.is_empty() {
        return Err(TreeDefect::Empty);
    }
    let n = nodes.len();
    for (pos, node) in nodes.iter().enumerate() {
        if node.index != pos + 1 {
            return Err(TreeDefect::IndexOutOfSequence { position: pos + 1, index: node.index });
        }
        if node.head > n {
            return Err(TreeDefect::HeadOutOfRange { index: node.index, head: node.head, len: n });
        }
    }
    let roots: Vec<usize> = nodes.iter().filter(|n| n.head == 0).map(|n| n.index).collect();
    match roots.len() {
        0 => return Err(TreeDefect::NoRoot),
        1 => {}
        _ => return Err(TreeDefect::MultipleRoots(roots)),
    }
    for node in nodes {
        let mut cur = node.head;
        let mut steps = 0;
        while cur != 0 {
            steps += 1;
            if steps > n {
                return Err(TreeDefect::Cycle(node.index));
            }
            cur = nodes[cur - 1].head;
        }
    }
    Ok(())
}

/// Structural problems of a model-produced tree. Recorded, never rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NoRoot,
    MultipleRoots {
        positions: Vec<usize>,
    },
    HeadOutOfRange {
        position: usize,
        head: usize,
    },
    DuplicateIndex {
        index: usize,
    },
    /// The stated index differs from the row's position.
    IndexOutOfSequence {
        position: usize,
        index: usize,
    },
}

/// A tree as printed by a model, nodes kept verbatim in row order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictedTree {
    nodes: Vec<DepNode>,
    violations: Vec<Violation>,
}

impl PredictedTree {
    pub fn from_nodes(nodes: Vec<DepNode>) -> Self {
        let violations = find_violations(&nodes);
        Self { nodes, violations }
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    /// Whether `head` of a node names a row of this tree (or the root).
    pub fn head_in_range(&self, head: usize) -> bool {
        head <= self.nodes.len()
    }
}

impl DependencyTree for PredictedTree {
    fn nodes(&self) -> &[DepNode] {
        &self.nodes
    }
}

impl From<&GoldTree> for PredictedTree {
    fn from(gold: &GoldTree) -> Self {
        let nodes = gold.nodes.iter().map(|n| DepNode { pos: None, ..n.clone() }).collect();
        Self::from_nodes(nodes)
    }
}

fn find_violations(nodes: &[DepNode]) -> Vec<Violation> {
    let mut out = Vec::new();
    let roots: Vec<usize> = nodes.iter().enumerate().filter(|(_, n)| n.head == 0).map(|(p, _)| p + 1).collect();
    match roots.len() {
        0 if !nodes.is_empty() => out.push(Violation::NoRoot),
        0 | 1 => {}
        _ => out.push(Violation::MultipleRoots { positions: roots }),
    }

    let mut seen = std::collections::BTreeMap::new();
    for (pos, node) in nodes.iter().enumerate() {
        let position = pos + 1;
        if node.index != position {
            out.push(Violation::IndexOutOfSequence { position, index: node.index });
        }
        if node.head > nodes.len() {
            out.push(Violation::HeadOutOfRange { position, head: node.head });
        }
        *seen.entry(node.index).or_insert(0usize) += 1;
    }
    out.extend(seen.into_iter().filter(|&(_, count)| count > 1).map(|(index, _)| Violation::DuplicateIndex { index }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nodes(heads: &[usize]) -> Vec<DepNode> {
        heads.iter().enumerate().map(|(i, &h)| DepNode::new(i + 1, format!("w{}", i + 1), h)).collect()
    }

    #[test]
    fn gold_validation() {
        assert!(GoldTree::new("s", nodes(&[2, 0])).is_ok());
        assert_eq!(GoldTree::new("s", vec![]), Err(TreeDefect::Empty));
        assert_eq!(GoldTree::new("s", nodes(&[2, 1])), Err(TreeDefect::NoRoot));
        assert_eq!(GoldTree::new("s", nodes(&[0, 0])), Err(TreeDefect::MultipleRoots(vec![1, 2])));
        assert!(matches!(GoldTree::new("s", nodes(&[0, 3, 2])), Err(TreeDefect::Cycle(_))));
        assert!(matches!(GoldTree::new("s", nodes(&[0, 5])), Err(TreeDefect::HeadOutOfRange { .. })));
    }

    #[test]
    fn predicted_violations_are_recorded() {
        let mut ns = nodes(&[2, 0, 4, 2, 9]);
        assert_eq!(
            PredictedTree::from_nodes(ns.clone()).violations(),
            [Violation::HeadOutOfRange { position: 5, head: 9 }]
        );
        ns[3].head = 0;
        ns[4].index = 4;
        let v = PredictedTree::from_nodes(ns).violations().to_vec();
        assert!(v.contains(&Violation::MultipleRoots { positions: vec![2, 4] }));
        assert!(v.contains(&Violation::DuplicateIndex { index: 4 }));
        assert!(v.contains(&Violation::IndexOutOfSequence { position: 5, index: 4 }));
        assert_eq!(PredictedTree::from_nodes(nodes(&[2, 1])).violations(), [Violation::NoRoot]);
    }
}
