//! Pearson correlation with an exact two-tailed p-value, and mean absolute
//! error aggregation with pairwise deletion of missing values.

mod aggregate;
mod correlation;
mod special;

pub use aggregate::{
    aggregate_model_metrics, mean_abs_error, mean_abs_error_pairs, MeanAbsError, MetricSummary, ModelSummary,
};
pub use correlation::{pearson, student_t_two_tailed_p, CorrelationResult, SIGNIFICANCE_LEVEL};
pub use special::{ln_gamma, regularized_incomplete_beta};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("need at least 3 paired observations, got {0}")]
    InsufficientData(usize),
    #[error("a sequence has zero variance")]
    ZeroVariance,
    #[error("sequences differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("no complete pairs ({excluded} excluded)")]
    NoPairs { excluded: usize },
}
