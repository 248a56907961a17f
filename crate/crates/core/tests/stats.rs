use lcmeval_core::stats::*;
use proptest::prelude::*;

const MMLU: [f64; 6] = [85.9, 87.0, 86.0, 86.0, 88.7, 90.8];
const LIX_ERROR: [f64; 6] = [19.72, 10.42, 20.9, 18.64, 9.2, 7.4];
// models with an ADD row, in table order
const MMLU_5: [f64; 5] = [85.9, 87.0, 86.0, 88.7, 90.8];
const ADD_DIFF_1: [f64; 5] = [1.02, 0.66, 0.88, 0.97, 0.64];
const ADD_DIFF_2: [f64; 5] = [3.54, 0.41, 0.64, 1.38, 0.12];

/// Two-tailed t tail by direct integration of the density. With
/// x = sqrt(df) tan θ the density becomes proportional to cos^(df-1) θ on
/// [0, π/2), so p is a ratio of two integrals of that power; composite
/// Simpson handles both.
fn t_tail_oracle(t: f64, df: f64) -> f64 {
    let theta_t = (t.abs() / df.sqrt()).atan();
    let f = |th: f64| th.cos().powf(df - 1.0);
    let simpson = |a: f64, b: f64| {
        let n = 20_000;
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for k in 1..n {
            s += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    simpson(theta_t, half_pi) / simpson(0.0, half_pi)
}

#[test]
fn oracle_sanity() {
    // df = 1 is Cauchy: p = 1 - 2 atan(t) / π
    assert!((t_tail_oracle(1.0, 1.0) - 0.5).abs() < 1e-9);
    // df = 2 has the closed form 1 - t / sqrt(2 + t^2)
    assert!((t_tail_oracle(1.7, 2.0) - (1.0 - 1.7 / (2.0f64 + 1.7 * 1.7).sqrt())).abs() < 1e-9);
}

#[test]
fn table_one_correlation() {
    let c = pearson(&MMLU, &LIX_ERROR).unwrap();
    assert!((c.r - -0.875).abs() < 1e-3, "{}", c.r);
    let oracle = t_tail_oracle(c.t_statistic, 4.0);
    assert!((c.p_two_tailed - oracle).abs() < 5e-4);
    assert!((0.020..=0.027).contains(&c.p_two_tailed));
    assert!(c.is_significant(SIGNIFICANCE_LEVEL));
}

#[test]
fn table_two_correlations() {
    let c = pearson(&MMLU_5, &ADD_DIFF_1).unwrap();
    assert!((c.r - -0.519).abs() < 1e-3, "{}", c.r);
    assert!((c.p_two_tailed - 0.370).abs() < 5e-3, "{}", c.p_two_tailed);
    assert!((c.p_two_tailed - t_tail_oracle(c.t_statistic, 3.0)).abs() < 1e-6);
    let c = pearson(&MMLU_5, &ADD_DIFF_2).unwrap();
    assert!((c.r - -0.513).abs() < 1e-3, "{}", c.r);
    assert!((c.p_two_tailed - t_tail_oracle(c.t_statistic, 3.0)).abs() < 1e-6);
}

#[test]
fn t_kernel_reference_points() {
    assert!((student_t_two_tailed_p(2.776, 4.0) - 0.0500).abs() < 5e-4);
    for df in [1.0, 2.5, 4.0, 30.0, 1000.0] {
        assert_eq!(student_t_two_tailed_p(0.0, df), 1.0);
    }
    for (t, df) in [(0.3, 1.0), (1.2, 3.0), (3.61, 4.0), (2.0, 9.5), (4.5, 25.0)] {
        assert!((student_t_two_tailed_p(t, df) - t_tail_oracle(t, df)).abs() < 1e-7, "t={t} df={df}");
    }
}

#[test]
fn degenerate_inputs() {
    assert_eq!(pearson(&[1.0, 2.0], &[3.0, 4.0]), Err(StatsError::InsufficientData(2)));
    assert_eq!(pearson(&[1.0, 1.0, 1.0], &[3.0, 4.0, 5.0]), Err(StatsError::ZeroVariance));
    assert_eq!(pearson(&[1.0, 2.0, 3.0], &[3.0, 4.0]), Err(StatsError::LengthMismatch(3, 2)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn p_decreases_in_abs_t(t in 0.0f64..20.0, dt in 0.01f64..5.0, df in 1.0f64..200.0) {
        let a = student_t_two_tailed_p(t, df);
        let b = student_t_two_tailed_p(t + dt, df);
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(b <= a + 1e-12, "p({})={} p({})={}", t, a, t + dt, b);
        prop_assert_eq!(student_t_two_tailed_p(-t, df), a);
    }
}

proptest! {
    #[test]
    fn pearson_symmetry_and_affine_invariance(
        xs in prop::collection::vec(-100.0f64..100.0, 3..20),
        seed in prop::collection::vec(-100.0f64..100.0, 20),
        scale in 0.1f64..10.0,
        shift in -50.0f64..50.0,
    ) {
        let ys: Vec<f64> = seed[..xs.len()].to_vec();
        if let Ok(c) = pearson(&xs, &ys) {
            let swapped = pearson(&ys, &xs).unwrap();
            prop_assert!((c.r - swapped.r).abs() < 1e-9);
            let moved: Vec<f64> = xs.iter().map(|x| x * scale + shift).collect();
            let m = pearson(&moved, &ys).unwrap();
            prop_assert!((c.r - m.r).abs() < 1e-9);
            let flipped: Vec<f64> = xs.iter().map(|x| -x).collect();
            prop_assert!((c.r + pearson(&flipped, &ys).unwrap().r).abs() < 1e-9);
            prop_assert!(c.r.abs() <= 1.0);
        }
    }
}
