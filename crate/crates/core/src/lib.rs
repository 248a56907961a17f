//! Scoring kernels and evaluation pipeline for measuring how well language
//! models compute text-complexity metrics.
//!
//! The crate is organised bottom-up:
//!
//! - [`textmetrics`]: tokenization, sentence segmentation, LIX.
//! - [`deptree`]: dependency trees, CoNLL-U, average dependency distance,
//!   tokenization-robust alignment and attachment scoring.
//! - [`modelio`]: prompt templates and parsing of model replies.
//! - [`llmclient`]: cached chat-completion client and model registry.
//! - [`stats`]: Pearson correlation with exact p-values, error aggregation.
//! - [`harness`]: corpus handling, evaluation runs, reports.

pub mod deptree;
pub mod harness;
pub mod llmclient;
pub mod modelio;
pub mod stats;
pub mod textmetrics;

pub use deptree::{AddConvention, AlignmentMap, DepNode, GoldTree, PredictedTree, UasResult, Upos};
pub use harness::{CorpusItem, EvalRecord};
pub use llmclient::ModelRecord;
pub use stats::CorrelationResult;
pub use textmetrics::{LixBreakdown, Token};
