use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::DependencyTree;

/// How the root word's distance enters the average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AddConvention {
    /// The root contributes 0, as the prompt instructs models.
    #[default]
    RootZero,
    /// The root contributes its distance to the virtual root at position 0.
    RootIndex,
}

impl fmt::Display for AddConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AddConvention::RootZero => "root_zero",
            AddConvention::RootIndex => "root_index",
        })
    }
}

impl FromStr for AddConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "root_zero" => Ok(AddConvention::RootZero),
            "root_index" => Ok(AddConvention::RootIndex),
            other => Err(format!("unknown ADD convention `{other}` (expected root_zero or root_index)")),
        }
    }
}

/// Average dependency distance as an exact ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddResult {
    pub sum_distance: usize,
    pub word_count: usize,
    pub convention: AddConvention,
    /// Nodes whose head fell outside the tree; counted in `word_count` only.
    pub excluded_heads: usize,
}

impl AddResult {
    pub fn add(&self) -> f64 {
        self.sum_distance as f64 / self.word_count as f64
    }
}

/// Sums `|index - head|` over non-root words; the root adds 0 or its own
/// index depending on `convention`. The denominator is the node count.
///
/// Heads outside `0..=n` are left out of the sum but stay in the
/// denominator. Returns `None` for an empty tree.
pub fn compute_add<T: DependencyTree + ?Sized>(tree: &T, convention: AddConvention) -> Option<AddResult> {
    let nodes = tree.nodes();
    if nodes.is_empty() {
        return None;
    }
    let n = nodes.len();
    let mut sum = 0;
    let mut excluded = 0;
    for node in nodes {
        if node.head == 0 {
            if convention == AddConvention::RootIndex {
                sum += node.index;
            }
        } else if node.head > n {
            excluded += 1;
        } else {
            sum += node.index.abs_diff(node.head);
        }
    }
    Some(AddResult { sum_distance: sum, word_count: n, convention, excluded_heads: excluded })
}
