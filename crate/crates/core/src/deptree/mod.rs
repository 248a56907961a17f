//! Dependency trees: CoNLL-U ingestion, average dependency distance, and
//! unlabeled attachment scoring that tolerates tokenization differences
//! between the gold tree and a model's tree.

mod add;
mod align;
mod conllu;
mod tree;
mod uas;
mod upos;

pub use add::{compute_add, AddConvention, AddResult};
pub use align::{align_tokens, align_tokens_with, AlignError, AlignKind, AlignOptions, AlignedPair, AlignmentMap};
pub use conllu::{parse_conllu, to_conllu, ConlluError};
pub use tree::{DepNode, DependencyTree, GoldTree, PredictedTree, TreeDefect, Violation};
pub use uas::{aggregate_uas, compute_uas, PosTally, UasResult, UasSummary};
pub use upos::{ParseUposError, Upos};
