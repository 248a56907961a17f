use serde::{Deserialize, Serialize};

use super::StatsError;
use crate::harness::EvalRecord;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanAbsError {
    pub mean: f64,
    /// Pairs that entered the mean.
    pub n: usize,
    /// Pairs dropped because a value was missing or not finite.
    pub excluded: usize,
}

/// Mean of `|truth - reported|`, skipping missing reported values.
pub fn mean_abs_error(truth: &[f64], reported: &[Option<f64>]) -> Result<MeanAbsError, StatsError> {
    if truth.len() != reported.len() {
        return Err(StatsError::LengthMismatch(truth.len(), reported.len()));
    }
    mean_abs_error_pairs(truth.iter().map(|&t| Some(t)).zip(reported.iter().copied()))
}

/// Pairwise-deletion form of [`mean_abs_error`]: a pair counts only when
/// both sides are present and finite.
pub fn mean_abs_error_pairs<I>(pairs: I) -> Result<MeanAbsError, StatsError>
where
    I: IntoIterator<Item = (Option<f64>, Option<f64>)>,
{
    let (mut sum, mut n, mut excluded) = (0.0, 0usize, 0usize);
    for pair in pairs {
        match pair {
            (Some(a), Some(b)) if a.is_finite() && b.is_finite() => {
                sum += (a - b).abs();
                n += 1;
            }
            _ => excluded += 1,
        }
    }
    if n == 0 {
        return Err(StatsError::NoPairs { excluded });
    }
    Ok(MeanAbsError { mean: sum / n as f64, n, excluded })
}

/// A mean absolute error that may be undefined for lack of pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub value: Option<f64>,
    pub n: usize,
    pub excluded: usize,
}

impl From<Result<MeanAbsError, StatsError>> for MetricSummary {
    fn from(r: Result<MeanAbsError, StatsError>) -> Self {
        match r {
            Ok(m) => Self { value: Some(m.mean), n: m.n, excluded: m.excluded },
            Err(StatsError::NoPairs { excluded }) => Self { value: None, n: 0, excluded },
            Err(_) => Self { value: None, n: 0, excluded: 0 },
        }
    }
}

/// Per-model error summary.
///
/// - `lix_error`: reported LIX against the LIX of the text.
/// - `add_diff_1`: ADD of the model's tree against ADD of the gold tree.
/// - `add_diff_2`: the model's stated average against ADD of its own tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub model_id: String,
    pub records: usize,
    pub lix_error: MetricSummary,
    pub add_diff_1: MetricSummary,
    pub add_diff_2: MetricSummary,
}

/// Summarises one model's records. Each metric drops incomplete records on
/// its own, so a missing reported ADD does not affect `lix_error`.
pub fn aggregate_model_metrics(model_id: &str, records: &[EvalRecord]) -> ModelSummary {
    let lix = mean_abs_error_pairs(records.iter().map(|r| (Some(r.true_lix), r.reported_lix)));
    let diff1 = mean_abs_error_pairs(records.iter().map(|r| (Some(r.gold_add), r.model_tree_add)));
    let diff2 = mean_abs_error_pairs(records.iter().map(|r| (r.model_tree_add, r.reported_add)));
    for (name, res) in [("lix_error", &lix), ("add_diff_1", &diff1), ("add_diff_2", &diff2)] {
        match res {
            Ok(m) if m.excluded > 0 => {
                log::info!("{model_id}: {name} excludes {} of {} records", m.excluded, records.len())
            }
            Err(e) => log::warn!("{model_id}: {name} undefined: {e}"),
            _ => {}
        }
    }
    ModelSummary {
        model_id: model_id.to_owned(),
        records: records.len(),
        lix_error: lix.into(),
        add_diff_1: diff1.into(),
        add_diff_2: diff2.into(),
    }
}
