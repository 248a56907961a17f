use serde::{Deserialize, Serialize};

use super::{regularized_incomplete_beta, StatsError};

/// Two-tailed significance threshold used in reports.
pub const SIGNIFICANCE_LEVEL: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub r: f64,
    pub p_two_tailed: f64,
    pub n: usize,
    /// `r * sqrt((n - 2) / (1 - r^2))`; infinite when `|r| = 1`.
    pub t_statistic: f64,
}

impl CorrelationResult {
    pub fn is_significant(&self, alpha: f64) -> bool {
        self.p_two_tailed < alpha
    }
}

/// Pearson's r with the two-tailed p-value of the t test on `n - 2`
/// degrees of freedom.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<CorrelationResult, StatsError> {
    if xs.len() != ys.len() {
        return Err(StatsError::LengthMismatch(xs.len(), ys.len()));
    }
    let n = xs.len();
    if n < 3 {
        return Err(StatsError::InsufficientData(n));
    }
    let nf = n as f64;
    let mean_x = xs.iter().sum::<f64>() / nf;
    let mean_y = ys.iter().sum::<f64>() / nf;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    let r = (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0);
    let df = nf - 2.0;
    let one_minus_r2 = 1.0 - r * r;
    let (t_statistic, p_two_tailed) = if one_minus_r2 <= 1e-12 {
        // exact fit up to rounding in r
        (f64::INFINITY.copysign(r), 0.0)
    } else {
        let t = r * (df / one_minus_r2).sqrt();
        (t, student_t_two_tailed_p(t, df))
    };
    Ok(CorrelationResult { r, p_two_tailed, n, t_statistic })
}

/// `P(|T| >= |t|)` for Student's t with `df` degrees of freedom, computed
/// as `I_{df/(df+t^2)}(df/2, 1/2)`.
pub fn student_t_two_tailed_p(t: f64, df: f64) -> f64 {
    assert!(df > 0.0, "degrees of freedom must be positive");
    if t.is_infinite() {
        return 0.0;
    }
    if t == 0.0 {
        return 1.0;
    }
    let x = df / (df + t * t);
    regularized_incomplete_beta(x, df / 2.0, 0.5).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_line() {
        let c = pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap();
        assert!((c.r - 1.0).abs() < 1e-12);
        assert_eq!(c.p_two_tailed, 0.0);
        let c = pearson(&[1.0, 2.0, 3.0], &[6.0, 4.0, 2.0]).unwrap();
        assert!((c.r + 1.0).abs() < 1e-12);
        assert_eq!(c.t_statistic, f64::NEG_INFINITY);
    }

    #[test]
    fn errors() {
        assert_eq!(pearson(&[1.0, 2.0], &[1.0, 2.0]), Err(StatsError::InsufficientData(2)));
        assert_eq!(pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]), Err(StatsError::ZeroVariance));
        assert_eq!(pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0]), Err(StatsError::LengthMismatch(3, 2)));
    }

    #[test]
    fn t_zero_is_one() {
        for df in 1..30 {
            assert_eq!(student_t_two_tailed_p(0.0, df as f64), 1.0);
        }
    }

    #[test]
    fn cauchy_closed_form() {
        // df = 1: p = 1 - 2 atan(|t|) / pi.
        for &t in &[0.3, 1.0, 2.5, 12.0] {
            let expect = 1.0 - 2.0 * f64::atan(t) / std::f64::consts::PI;
            assert!((student_t_two_tailed_p(t, 1.0) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn df_two_closed_form() {
        // df = 2: p = 1 - |t| / sqrt(2 + t^2).
        for &t in &[0.1f64, 1.7, 4.0, -3.3] {
            let expect = 1.0 - t.abs() / (2.0 + t * t).sqrt();
            assert!((student_t_two_tailed_p(t, 2.0) - expect).abs() < 1e-12);
        }
    }
}
