//! The estimation pipeline: empirical survival statistics over a threshold,
//! the uncensoring-ratio estimator `ρ̂`, the log-excess mean `ζ̂`, and the
//! final truncated ratio estimate of the data tail index.
//!
//! Truncation never produces NaN or infinity: whenever an indicator fires
//! the corresponding estimate is exactly 0 and a flag records which
//! indicator it was.

use serde::{Deserialize, Serialize};

use crate::distributions::CensoredSample;
use crate::error::{Error, Result};

/// Which line of the threshold condition applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// A known lower bound `gamma0` on the tail indices is assumed:
    /// `t = n^β` with `β < γ₀/2` and `β/γ₀ < c < 1/2`.
    A3,
    /// No lower bound is assumed: `t = (log n)^β` with `β > 0`, `0 < c < 1/2`.
    NoA3,
}

/// Thresholds `(t, s, h)` driving the truncated estimators.
///
/// `derive_tuning` is the validated constructor; the fields are public so
/// tests and callers with externally chosen thresholds can build the struct
/// directly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TuningParams {
    /// Exceedance threshold `t(n)`.
    pub t: f64,
    /// Floor `s(n) = n^(−c)` under the empirical survival `p̂(t)`.
    pub s: f64,
    /// Truncation level `H_n = 1/log log n` under `ρ̂`.
    pub h: f64,
    pub n: usize,
    pub beta: f64,
    pub c: f64,
    pub gamma0: Option<f64>,
    pub regime: Regime,
}

/// Everything produced by one estimation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub rho_hat: f64,
    pub zeta_hat: f64,
    pub gamma_x_hat: f64,
    /// `p̂(t)`, fraction of observations at or above the threshold.
    pub p_at_t: f64,
    /// `q̂(t)`, fraction of uncensored observations at or above the threshold.
    pub q_at_t: f64,
    pub exceedance_count: usize,
    /// `p̂(t) < s` fired: `ρ̂` and `ζ̂` are truncated to 0.
    pub truncated_by_s: bool,
    /// `ρ̂ < H_n` fired: the final ratio is truncated to 0.
    pub truncated_by_h: bool,
    pub tuning: TuningParams,
}

/// Derive `(t, s, h)` from the sample size and threshold exponent.
///
/// With `gamma0` present the A3 regime applies (`t = n^β`), otherwise the
/// slow-threshold regime (`t = (log n)^β`). When `c` is absent it defaults
/// to the midpoint of the admissible interval: `(β/γ₀ + 1/2)/2` under A3,
/// `1/4` otherwise. Violated inequalities are reported by name.
pub fn derive_tuning(
    n: usize,
    beta: f64,
    gamma0: Option<f64>,
    c: Option<f64>,
) -> Result<TuningParams> {
    // H_n = 1/log log n needs n > e^e; below 16 the truncation level
    // exceeds 1 and the final indicator can never pass.
    if n < 16 {
        return Err(Error::Constraint {
            constraint: "n >= 16",
            detail: format!("got n = {n}"),
        });
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Constraint {
            constraint: "beta > 0",
            detail: format!("got beta = {beta}"),
        });
    }
    let nf = n as f64;
    let (regime, t) = match gamma0 {
        Some(g0) => {
            if !(g0 > 0.0 && g0.is_finite()) {
                return Err(Error::Constraint {
                    constraint: "gamma0 > 0",
                    detail: format!("got gamma0 = {g0}"),
                });
            }
            if beta >= g0 / 2.0 {
                return Err(Error::Constraint {
                    constraint: "beta < gamma0/2",
                    detail: format!("got beta = {beta}, gamma0/2 = {}", g0 / 2.0),
                });
            }
            (Regime::A3, nf.powf(beta))
        }
        None => (Regime::NoA3, nf.ln().powf(beta)),
    };
    let c = match (regime, c) {
        (Regime::A3, Some(c)) => {
            let g0 = gamma0.expect("A3 regime implies gamma0");
            if c <= beta / g0 {
                return Err(Error::Constraint {
                    constraint: "beta/gamma0 < c",
                    detail: format!("got c = {c}, beta/gamma0 = {}", beta / g0),
                });
            }
            if c >= 0.5 {
                return Err(Error::Constraint {
                    constraint: "c < 1/2",
                    detail: format!("got c = {c}"),
                });
            }
            c
        }
        (Regime::A3, None) => {
            let g0 = gamma0.expect("A3 regime implies gamma0");
            (beta / g0 + 0.5) / 2.0
        }
        (Regime::NoA3, Some(c)) => {
            if c <= 0.0 {
                return Err(Error::Constraint {
                    constraint: "0 < c",
                    detail: format!("got c = {c}"),
                });
            }
            if c >= 0.5 {
                return Err(Error::Constraint {
                    constraint: "c < 1/2",
                    detail: format!("got c = {c}"),
                });
            }
            c
        }
        (Regime::NoA3, None) => 0.25,
    };
    Ok(TuningParams {
        t,
        s: nf.powf(-c),
        h: 1.0 / nf.ln().ln(),
        n,
        beta,
        c,
        gamma0,
        regime,
    })
}

/// `p̂(x) = (1/n)·Σ 1{Z_i ≥ x}` (inclusive comparison).
pub fn empirical_survival(sample: &CensoredSample, x: f64) -> f64 {
    let k = sample.z().iter().filter(|z| **z >= x).count();
    k as f64 / sample.len() as f64
}

/// `q̂(x) = (1/n)·Σ δ_i·1{Z_i ≥ x}`; always `≤ p̂(x)`.
pub fn empirical_uncensored_survival(sample: &CensoredSample, x: f64) -> f64 {
    let k = sample
        .z()
        .iter()
        .zip(sample.delta())
        .filter(|(z, d)| **z >= x && **d)
        .count();
    k as f64 / sample.len() as f64
}

/// `ρ̂ = q̂(t)/p̂(t)·1{p̂(t) ≥ s}`. The boolean reports whether the
/// indicator fired (in which case the value is 0 and no division occurs).
pub fn rho_hat(sample: &CensoredSample, tuning: &TuningParams) -> (f64, bool) {
    if survival_floor_fires(sample, tuning) {
        return (0.0, true);
    }
    let p = empirical_survival(sample, tuning.t);
    (empirical_uncensored_survival(sample, tuning.t) / p, false)
}

/// Pairwise (tree) summation; bounds accumulated rounding at large n.
fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 32 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// The truncation indicator shared by `ρ̂` and `ζ̂`: `p̂(t) < s`.
/// `p̂(t) = 0` truncates as well, which keeps every output finite even for
/// hand-built tunings with a degenerate `s ≤ 0`.
fn survival_floor_fires(sample: &CensoredSample, tuning: &TuningParams) -> bool {
    let p = empirical_survival(sample, tuning.t);
    p < tuning.s || p == 0.0
}

/// `ζ̂ = 1{p̂(t) ≥ s}/(n·p̂(t)) · Σ log(Z_i/t)·1{Z_i ≥ t}`, the truncated
/// mean of log-excesses, estimating the tail index of `Z`.
pub fn zeta_hat(sample: &CensoredSample, tuning: &TuningParams) -> (f64, bool) {
    if survival_floor_fires(sample, tuning) {
        return (0.0, true);
    }
    let t = tuning.t;
    let logs: Vec<f64> = sample
        .z()
        .iter()
        .filter(|z| **z >= t)
        .map(|z| (z / t).ln())
        .collect();
    // n·p̂(t) equals the exceedance count exactly
    (pairwise_sum(&logs) / logs.len() as f64, false)
}

/// The integral form of `ζ̂`: `1/p̂(t) · ∫_t^∞ p̂(y)/y dy`, evaluated exactly
/// over the empirical step function by summing log-increments between order
/// statistics. Agrees with [`zeta_hat`] up to rounding; kept as an
/// independent route for testing that identity.
pub fn zeta_hat_integral(sample: &CensoredSample, tuning: &TuningParams) -> (f64, bool) {
    if survival_floor_fires(sample, tuning) {
        return (0.0, true);
    }
    let t = tuning.t;
    let mut exceedances: Vec<f64> = sample.z().iter().copied().filter(|z| *z >= t).collect();
    let k = exceedances.len();
    exceedances.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite observations"));
    // p̂(y)/p̂(t) is (k - j)/k on the segment between the j-th and (j+1)-th
    // order statistic; each segment contributes its log-increment.
    let mut terms = Vec::with_capacity(k);
    terms.push(k as f64 * (exceedances[0] / t).ln());
    for j in 1..k {
        terms.push((k - j) as f64 * (exceedances[j] / exceedances[j - 1]).ln());
    }
    (pairwise_sum(&terms) / k as f64, false)
}

/// Full estimation run: assembles `ρ̂` and `ζ̂` and applies the final
/// truncation `γ̂_X = ζ̂/ρ̂·1{ρ̂ ≥ H_n}`.
pub fn estimate_gamma_x(sample: &CensoredSample, tuning: &TuningParams) -> EstimateReport {
    let p = empirical_survival(sample, tuning.t);
    let q = empirical_uncensored_survival(sample, tuning.t);
    let exceedance_count = (p * sample.len() as f64).round() as usize;
    let (rho, truncated_by_s) = rho_hat(sample, tuning);
    let (zeta, _) = zeta_hat(sample, tuning);
    let truncated_by_h = rho < tuning.h;
    let gamma_x_hat = if truncated_by_h { 0.0 } else { zeta / rho };
    EstimateReport {
        rho_hat: rho,
        zeta_hat: zeta,
        gamma_x_hat,
        p_at_t: p,
        q_at_t: q,
        exceedance_count,
        truncated_by_s,
        truncated_by_h,
        tuning: *tuning,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(z: &[f64], delta: &[bool]) -> CensoredSample {
        CensoredSample::new(z.to_vec(), delta.to_vec()).unwrap()
    }

    fn manual_tuning(t: f64, s: f64, h: f64) -> TuningParams {
        TuningParams {
            t,
            s,
            h,
            n: 0,
            beta: 0.0,
            c: 0.0,
            gamma0: None,
            regime: Regime::NoA3,
        }
    }

    #[test]
    fn empirical_survival_counts_inclusively() {
        let s = sample(&[1.0, 2.0, 3.0, 4.0], &[true; 4]);
        assert_eq!(empirical_survival(&s, 2.0), 0.75);
        assert_eq!(empirical_survival(&s, 0.5), 1.0);
        assert_eq!(empirical_survival(&s, 1.0), 1.0);
        assert_eq!(empirical_survival(&s, 5.0), 0.0);
    }

    #[test]
    fn uncensored_survival_weights_by_delta() {
        let s = sample(&[1.0, 2.0, 3.0, 4.0], &[true, false, true, true]);
        assert_eq!(empirical_uncensored_survival(&s, 2.0), 0.5);
        let all = sample(&[1.0, 2.0, 3.0], &[true; 3]);
        for x in [0.5, 1.0, 2.5, 10.0] {
            assert_eq!(
                empirical_uncensored_survival(&all, x),
                empirical_survival(&all, x)
            );
        }
        let none = sample(&[1.0, 2.0, 3.0], &[false; 3]);
        for x in [0.5, 2.0, 10.0] {
            assert_eq!(empirical_uncensored_survival(&none, x), 0.0);
        }
    }

    #[test]
    fn derive_tuning_a3_defaults() {
        let t = derive_tuning(10_000, 0.05, Some(0.2), None).unwrap();
        assert_eq!(t.regime, Regime::A3);
        assert!((t.t - 1.5848931924611136).abs() < 1e-12);
        assert!((t.c - 0.375).abs() < 1e-15);
        assert!((t.s - 0.03162277660168379).abs() < 1e-12);
        assert!((t.h - 0.45038414936577037).abs() < 1e-12);
    }

    #[test]
    fn derive_tuning_rejects_large_beta() {
        let err = derive_tuning(10_000, 0.15, Some(0.2), None).unwrap_err();
        match err {
            Error::Constraint { constraint, .. } => {
                assert_eq!(constraint, "beta < gamma0/2")
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn derive_tuning_no_a3() {
        let t = derive_tuning(10_000, 2.0, None, Some(0.25)).unwrap();
        assert_eq!(t.regime, Regime::NoA3);
        assert!((t.t - 84.83036976765439).abs() < 1e-10);
        assert!((t.s - 0.1).abs() < 1e-14);
    }

    #[test]
    fn derive_tuning_rejects_bad_c_and_n() {
        assert!(derive_tuning(15, 0.05, Some(0.2), None).is_err());
        assert!(derive_tuning(100, -0.1, Some(0.2), None).is_err());
        // c below beta/gamma0
        match derive_tuning(10_000, 0.05, Some(0.2), Some(0.2)).unwrap_err() {
            Error::Constraint { constraint, .. } => assert_eq!(constraint, "beta/gamma0 < c"),
            other => panic!("unexpected error {other:?}"),
        }
        match derive_tuning(10_000, 0.05, Some(0.2), Some(0.5)).unwrap_err() {
            Error::Constraint { constraint, .. } => assert_eq!(constraint, "c < 1/2"),
            other => panic!("unexpected error {other:?}"),
        }
        match derive_tuning(10_000, 1.0, None, Some(-0.1)).unwrap_err() {
            Error::Constraint { constraint, .. } => assert_eq!(constraint, "0 < c"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rho_hand_example() {
        let s = sample(&[1.0, 2.0, 3.0, 4.0], &[true, false, true, true]);
        let (v, truncated) = rho_hat(&s, &manual_tuning(2.0, 0.1, 0.3));
        assert!(!truncated);
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rho_truncates_below_s() {
        // p̂(t) = 0.05 < s = 0.1
        let mut z = vec![1.0; 19];
        z.push(10.0);
        let s = sample(&z, &[true; 20]);
        let (v, truncated) = rho_hat(&s, &manual_tuning(5.0, 0.1, 0.3));
        assert_eq!(v, 0.0);
        assert!(truncated);
    }

    #[test]
    fn rho_is_one_when_uncensored() {
        let s = sample(&[1.0, 3.0, 9.0], &[true; 3]);
        let (v, truncated) = rho_hat(&s, &manual_tuning(2.0, 0.1, 0.3));
        assert_eq!(v, 1.0);
        assert!(!truncated);
    }

    fn two_e_sample() -> CensoredSample {
        let e = std::f64::consts::E;
        sample(&[2.0 * e, 1.0, 2.0 * e * e], &[true; 3])
    }

    #[test]
    fn zeta_hand_example() {
        let (v, truncated) = zeta_hat(&two_e_sample(), &manual_tuning(2.0, 0.1, 0.3));
        assert!(!truncated);
        assert!((v - 1.5).abs() < 1e-14);
    }

    #[test]
    fn zeta_truncates_when_no_exceedances() {
        let s = sample(&[1.0, 1.5], &[true; 2]);
        let (v, truncated) = zeta_hat(&s, &manual_tuning(2.0, 0.1, 0.3));
        assert_eq!(v, 0.0);
        assert!(truncated);
    }

    #[test]
    fn zeta_zero_at_threshold_without_truncation() {
        let s = sample(&[2.0, 2.0, 2.0], &[true; 3]);
        let (v, truncated) = zeta_hat(&s, &manual_tuning(2.0, 0.1, 0.3));
        assert_eq!(v, 0.0);
        assert!(!truncated);
    }

    #[test]
    fn integral_form_matches_sum_form() {
        let tuning = manual_tuning(2.0, 0.1, 0.3);
        let s = two_e_sample();
        let (a, ta) = zeta_hat(&s, &tuning);
        let (b, tb) = zeta_hat_integral(&s, &tuning);
        assert_eq!(ta, tb);
        assert!((a - 1.5).abs() < 1e-14);
        assert!((a - b).abs() <= 1e-12 * a.abs());

        // truncated case
        let s = sample(&[1.0], &[true]);
        assert_eq!(zeta_hat_integral(&s, &tuning), (0.0, true));
    }

    #[test]
    fn estimate_combines_rho_and_zeta() {
        // rho = 0.5, zeta = 1.5, h = 0.3 -> gamma = 3
        let e = std::f64::consts::E;
        let s = sample(&[2.0 * e, 1.0, 2.0 * e * e], &[true, true, false]);
        let report = estimate_gamma_x(&s, &manual_tuning(2.0, 0.1, 0.3));
        assert!(!report.truncated_by_s);
        assert!(!report.truncated_by_h);
        assert!((report.rho_hat - 0.5).abs() < 1e-15);
        assert!((report.zeta_hat - 1.5).abs() < 1e-14);
        assert!((report.gamma_x_hat - 3.0).abs() < 1e-14);
        assert_eq!(report.exceedance_count, 2);
        assert!(report.q_at_t <= report.p_at_t);
    }

    #[test]
    fn estimate_truncates_on_small_rho() {
        // rho = 0.2 < h = 0.3
        let s = sample(
            &[3.0, 3.0, 3.0, 3.0, 3.0],
            &[true, false, false, false, false],
        );
        let report = estimate_gamma_x(&s, &manual_tuning(2.0, 0.1, 0.3));
        assert!((report.rho_hat - 0.2).abs() < 1e-15);
        assert!(report.truncated_by_h);
        assert!(!report.truncated_by_s);
        assert_eq!(report.gamma_x_hat, 0.0);
    }

    #[test]
    fn estimate_cascades_s_truncation() {
        let s = sample(&[0.5, 0.9], &[true, false]);
        let report = estimate_gamma_x(&s, &manual_tuning(2.0, 0.1, 0.3));
        assert!(report.truncated_by_s);
        assert!(report.truncated_by_h);
        assert_eq!(report.rho_hat, 0.0);
        assert_eq!(report.zeta_hat, 0.0);
        assert_eq!(report.gamma_x_hat, 0.0);
        assert!(report.gamma_x_hat.is_finite());

        // adversarial single observation below the threshold
        let s = sample(&[1.0], &[false]);
        let report = estimate_gamma_x(&s, &manual_tuning(2.0, 0.1, 0.3));
        assert_eq!(report.gamma_x_hat, 0.0);
        assert!(report.truncated_by_s);
    }
}
