//! Exact heavy-tail models, variate generation, and censoring oracles.
//!
//! Two parametric laws are supported, both with survival function of the
//! regularly varying form `P(x) = L(x)·x^(−α)`, `α = 1/γ`:
//!
//! - **Pareto**: `P(x) = (x/x_min)^(−α)` for `x ≥ x_min` (constant `L`).
//! - **Log-gamma**: density `C·x^(−α−1)·(log x)^(β−1)` on `x ≥ 1`, i.e.
//!   `log X ~ Gamma(shape β, rate α)`, so `P(x) = Q(β, α·log x)` with `Q`
//!   the regularized upper incomplete gamma function.
//!
//! A Pareto law is exactly a log-gamma law with `β = 1` (up to the support
//! shift), and the code takes the closed-form power path whenever `β = 1`.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::tanh_sinh;
use crate::special::{gamma_q, ln_gamma};

/// Relative tolerance for the quadrature-backed oracles.
const QUAD_TOL: f64 = 1e-11;
/// The censoring-rate integral is truncated where the censor tail mass
/// drops below this bound.
const TAIL_BOUND: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailKind {
    Pareto,
    LogGamma,
}

/// A parametric heavy-tail law with exact survival and density functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailModel {
    kind: TailKind,
    gamma: f64,
    shape_beta: f64,
    support_min: f64,
}

impl TailModel {
    /// Pareto law with tail index `gamma` and lower endpoint 1.
    pub fn pareto(gamma: f64) -> Result<Self> {
        Self::pareto_with_support(gamma, 1.0)
    }

    /// Pareto law with tail index `gamma` and lower endpoint `support_min`.
    pub fn pareto_with_support(gamma: f64, support_min: f64) -> Result<Self> {
        let model = TailModel {
            kind: TailKind::Pareto,
            gamma,
            shape_beta: 1.0,
            support_min,
        };
        model.validate()?;
        Ok(model)
    }

    /// Log-gamma law with tail index `gamma` and shape `shape_beta`,
    /// supported on `x ≥ 1`.
    pub fn log_gamma(gamma: f64, shape_beta: f64) -> Result<Self> {
        let model = TailModel {
            kind: TailKind::LogGamma,
            gamma,
            shape_beta,
            support_min: 1.0,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tail index gamma must be positive and finite, got {}",
                self.gamma
            )));
        }
        if !(self.shape_beta > 0.0 && self.shape_beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "shape beta must be positive and finite, got {}",
                self.shape_beta
            )));
        }
        if self.kind == TailKind::Pareto && self.shape_beta != 1.0 {
            return Err(Error::InvalidParameter(format!(
                "Pareto requires shape beta = 1, got {}",
                self.shape_beta
            )));
        }
        if !(self.support_min > 0.0 && self.support_min.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "support_min must be positive and finite, got {}",
                self.support_min
            )));
        }
        if self.kind == TailKind::LogGamma && self.support_min != 1.0 {
            return Err(Error::InvalidParameter(format!(
                "log-gamma is supported on x >= 1, got support_min {}",
                self.support_min
            )));
        }
        Ok(())
    }

    pub fn kind(&self) -> TailKind {
        self.kind
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Pareto exponent `α = 1/γ`.
    pub fn alpha(&self) -> f64 {
        1.0 / self.gamma
    }

    pub fn shape_beta(&self) -> f64 {
        self.shape_beta
    }

    pub fn support_min(&self) -> f64 {
        self.support_min
    }

    /// Exact tail probability `P(K > x)`; 1 for `x ≤ support_min`.
    pub fn survival(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!(
                "survival requires x > 0, got {x}"
            )));
        }
        if x <= self.support_min {
            return Ok(1.0);
        }
        if self.shape_beta == 1.0 {
            Ok((x / self.support_min).powf(-self.alpha()))
        } else {
            gamma_q(self.shape_beta, self.alpha() * x.ln())
        }
    }

    /// `log P(K > e^w)`; avoids materializing `e^w` for large `w`.
    fn ln_survival_at_log(&self, w: f64) -> Result<f64> {
        if w <= self.support_min.ln() {
            return Ok(0.0);
        }
        if self.shape_beta == 1.0 {
            Ok(-self.alpha() * (w - self.support_min.ln()))
        } else {
            let q = gamma_q(self.shape_beta, self.alpha() * w)?;
            if q <= 0.0 {
                return Err(Error::Numerical(format!(
                    "survival underflow at log x = {w}"
                )));
            }
            Ok(q.ln())
        }
    }

    /// Exact density at `x`; 0 below the support.
    pub fn density(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("density requires x > 0, got {x}")));
        }
        if x < self.support_min {
            return Ok(0.0);
        }
        Ok(self.ln_density_at_log(x.ln()).exp())
    }

    /// `log f(e^w)` for `w` strictly inside the support's log image.
    fn ln_density_at_log(&self, w: f64) -> f64 {
        let alpha = self.alpha();
        if self.shape_beta == 1.0 {
            alpha.ln() + alpha * self.support_min.ln() - (alpha + 1.0) * w
        } else {
            self.shape_beta * alpha.ln() - ln_gamma(self.shape_beta) - (alpha + 1.0) * w
                + (self.shape_beta - 1.0) * w.ln()
        }
    }

    fn log_excess_sampler(&self) -> Gamma<f64> {
        // log(K / support_min) ~ Gamma(shape beta, rate alpha); rand_distr
        // parameterizes by scale = 1/rate = gamma.
        Gamma::new(self.shape_beta, self.gamma).expect("validated parameters")
    }

    /// One draw from the model.
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.support_min * self.log_excess_sampler().sample(rng).exp()
    }

    /// `count` i.i.d. draws; deterministic given the RNG state.
    pub fn sample<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<f64> {
        let sampler = self.log_excess_sampler();
        (0..count)
            .map(|_| self.support_min * sampler.sample(rng).exp())
            .collect()
    }
}

/// Independent data law `X` and censoring law `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CensorModel {
    data: TailModel,
    censor: TailModel,
}

impl CensorModel {
    pub fn new(data: TailModel, censor: TailModel) -> Self {
        CensorModel { data, censor }
    }

    pub fn validate(&self) -> Result<()> {
        self.data.validate()?;
        self.censor.validate()
    }

    pub fn data(&self) -> &TailModel {
        &self.data
    }

    pub fn censor(&self) -> &TailModel {
        &self.censor
    }

    /// Tail index of `Z = min(X, Y)`: `γ_Z = γ_X·γ_Y/(γ_X + γ_Y)`.
    pub fn gamma_z(&self) -> f64 {
        let gx = self.data.gamma;
        let gy = self.censor.gamma;
        gx * gy / (gx + gy)
    }

    /// Limit of the uncensoring probability: `γ_Y/(γ_X + γ_Y)`.
    pub fn rho_limit(&self) -> f64 {
        let gx = self.data.gamma;
        let gy = self.censor.gamma;
        gy / (gx + gy)
    }

    /// Draw `n` pairs and return the censored observations
    /// `(min(X_i, Y_i), 1{X_i ≤ Y_i})`. Ties count as uncensored.
    pub fn simulate_censored<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<CensoredSample> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "simulate_censored requires n >= 1".into(),
            ));
        }
        let gx = self.data.log_excess_sampler();
        let gy = self.censor.log_excess_sampler();
        let mut z = Vec::with_capacity(n);
        let mut delta = Vec::with_capacity(n);
        for _ in 0..n {
            let x = self.data.support_min * gx.sample(rng).exp();
            let y = self.censor.support_min * gy.sample(rng).exp();
            z.push(x.min(y));
            delta.push(x <= y);
        }
        CensoredSample::new(z, delta)
    }
}

/// Observed censored data: `z_i = min(x_i, y_i)` with `delta_i = 1{x_i ≤ y_i}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensoredSample {
    z: Vec<f64>,
    delta: Vec<bool>,
}

impl CensoredSample {
    pub fn new(z: Vec<f64>, delta: Vec<bool>) -> Result<Self> {
        if z.is_empty() {
            return Err(Error::InvalidParameter(
                "a censored sample needs at least one observation".into(),
            ));
        }
        if z.len() != delta.len() {
            return Err(Error::InvalidParameter(format!(
                "z and delta lengths differ: {} vs {}",
                z.len(),
                delta.len()
            )));
        }
        if let Some(bad) = z.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidParameter(format!(
                "observations must be positive and finite, got {bad}"
            )));
        }
        Ok(CensoredSample { z, delta })
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn delta(&self) -> &[bool] {
        &self.delta
    }

    /// Fraction of censored observations, `1 − mean(δ)`.
    pub fn censored_fraction(&self) -> f64 {
        let uncensored = self.delta.iter().filter(|d| **d).count();
        1.0 - uncensored as f64 / self.len() as f64
    }
}

/// Conditional uncensoring probability
/// `λ(x) = P(X ≤ Y | Z = x) = f_X(x)P_Y(x) / (f_X(x)P_Y(x) + f_Y(x)P_X(x))`.
///
/// Requires `x` strictly above both supports so that both densities are
/// defined. Evaluated in log space.
pub fn lambda_prob(cm: &CensorModel, x: f64) -> Result<f64> {
    let lo = cm.data().support_min().max(cm.censor().support_min());
    if !(x > lo) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "lambda_prob requires x > {lo}, got {x}"
        )));
    }
    let w = x.ln();
    let ln_num = cm.data().ln_density_at_log(w) + cm.censor().ln_survival_at_log(w)?;
    let ln_alt = cm.censor().ln_density_at_log(w) + cm.data().ln_survival_at_log(w)?;
    if !ln_num.is_finite() || !ln_alt.is_finite() {
        return Err(Error::Numerical(format!(
            "lambda_prob lost precision at x = {x}"
        )));
    }
    Ok(1.0 / (1.0 + (ln_alt - ln_num).exp()))
}

/// Exact censoring probability `P(X > Y) = ∫ P_X(y)·f_Y(y) dy`, evaluated
/// by tanh-sinh quadrature in `u = log y` coordinates. This is the oracle
/// for the Monte Carlo censor rate.
pub fn expected_censor_rate(cm: &CensorModel) -> Result<f64> {
    cm.validate()?;
    let data = cm.data();
    let censor = cm.censor();
    let s_lo = data.support_min().max(censor.support_min());
    // Y below X's support is censored with probability one.
    let base = 1.0 - censor.survival(s_lo)?;
    let u_lo = s_lo.ln();

    let mut u_hi = u_lo.max(0.0) + 5.0;
    while censor.ln_survival_at_log(u_hi)? > TAIL_BOUND.ln() {
        u_hi += 5.0;
        if u_hi > 600.0 {
            return Err(Error::Numerical(
                "censor tail too heavy to truncate the rate integral".into(),
            ));
        }
    }

    let integrand = |u: f64| {
        let ls = data
            .ln_survival_at_log(u)
            .expect("survival defined on the integration range");
        (ls + censor.ln_density_at_log(u) + u).exp()
    };
    let integral = tanh_sinh(integrand, u_lo, u_hi, QUAD_TOL)?;
    Ok((base + integral).clamp(0.0, 1.0))
}

/// Slowly varying flatness diagnostic `|x·L'(x)/L(x)|` where
/// `L(x) = P(x)·x^(1/γ)`.
///
/// For the log-gamma family this equals
/// `|β−1| · ∫_x^∞ y^(−α−1)(log y)^(β−2) dy / ∫_x^∞ y^(−α−1)(log y)^(β−1) dy`,
/// computed by quadrature after substituting `v = log y − log x` so that the
/// common factor `x^(−α)` cancels. The value is bounded by `|β−1|/log x`.
pub fn a2_diagnostic(model: &TailModel, x: f64) -> Result<f64> {
    model.validate()?;
    let lo = model.support_min() * std::f64::consts::E;
    if !(x > lo) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "a2_diagnostic requires x > support_min·e = {lo}, got {x}"
        )));
    }
    let beta = model.shape_beta();
    if beta == 1.0 {
        return Ok(0.0);
    }
    let alpha = model.alpha();
    let w = x.ln();

    // truncate where e^(-alpha v)·((v+w)/w)^max(beta-1, 0) < 1e-18
    let growth = (beta - 1.0).max(0.0);
    let mut v_hi = 40.0 / alpha;
    while -alpha * v_hi + growth * ((v_hi + w) / w).ln() > (1e-18f64).ln() {
        v_hi *= 1.5;
    }

    let moment = |exponent: f64| {
        tanh_sinh(
            |v: f64| (-alpha * v).exp() * (v + w).powf(exponent),
            0.0,
            v_hi,
            QUAD_TOL,
        )
    };
    let num = moment(beta - 2.0)?;
    let den = moment(beta - 1.0)?;
    Ok((beta - 1.0).abs() * num / den)
}
