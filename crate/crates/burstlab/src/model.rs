//! Parameters and closed-form theory of the nonlinear herding model.
//!
//! The model is a two-state imitation (Kirman / noisy voter) system of `N`
//! agents. Writing `x = n/N` for the occupancy of state 1, the per-agent
//! switching rates carry an extra state-dependent time-scale factor
//! `[x(1-x)]^{-alpha}` on top of the usual idiosyncratic-plus-imitation
//! form:
//!
//! ```text
//! mu_1 = h (eps1 + N x)       [x(1-x)]^{-alpha}
//! mu_2 = h (eps2 + N (1-x))   [x(1-x)]^{-alpha}
//! ```
//!
//! For `alpha = 0` this reduces to the plain Kirman model. The stationary
//! occupancy is Beta-distributed with parameters `eps1+alpha`, `eps2+alpha`,
//! and the ratio variable `y = x/(1-x)` obeys a nonlinear SDE whose tail and
//! spectral exponents follow from two derived parameters `eta` and `lambda`.
//! This module holds those closed forms; the stochastic engines and the
//! classifier use them as oracles.

use crate::error::{Error, Result};
use serde::Serialize;

/// Free parameters of the agent model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    /// Idiosyncratic switching rate toward state 1 (dimensionless, >= 0).
    pub eps1: f64,
    /// Idiosyncratic switching rate toward state 2 (dimensionless, >= 0).
    pub eps2: f64,
    /// Exponent of the state-dependent interaction time scale (>= 0).
    pub alpha: f64,
    /// Number of agents (>= 2).
    pub n_agents: u32,
    /// Base time-scale factor `h` (1/time, > 0). Defaults to 1: the model is
    /// analyzed in dimensionless time and `h` only rescales it.
    pub h_scale: f64,
}

impl ModelParams {
    /// Construct with `h_scale = 1` and validate.
    pub fn new(eps1: f64, eps2: f64, alpha: f64, n_agents: u32) -> Result<Self> {
        let p = ModelParams {
            eps1,
            eps2,
            alpha,
            n_agents,
            h_scale: 1.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_h_scale(mut self, h_scale: f64) -> Result<Self> {
        self.h_scale = h_scale;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps1.is_finite() && self.eps1 >= 0.0) {
            return Err(Error::invalid(format!("eps1 = {} must be >= 0", self.eps1)));
        }
        if !(self.eps2.is_finite() && self.eps2 >= 0.0) {
            return Err(Error::invalid(format!("eps2 = {} must be >= 0", self.eps2)));
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::invalid(format!(
                "alpha = {} must be >= 0",
                self.alpha
            )));
        }
        if self.n_agents < 2 {
            return Err(Error::invalid(format!(
                "n_agents = {} must be >= 2",
                self.n_agents
            )));
        }
        if !(self.h_scale.is_finite() && self.h_scale > 0.0) {
            return Err(Error::invalid(format!(
                "h_scale = {} must be > 0",
                self.h_scale
            )));
        }
        // Beta(eps1+alpha, eps2+alpha) must be normalizable.
        if self.eps1 + self.alpha <= 0.0 || self.eps2 + self.alpha <= 0.0 {
            return Err(Error::invalid(
                "eps1+alpha and eps2+alpha must both be > 0 for a normalizable stationary law",
            ));
        }
        Ok(())
    }

    /// Stationary Beta shape parameters `(eps1+alpha, eps2+alpha)`.
    pub fn beta_shape(&self) -> (f64, f64) {
        (self.eps1 + self.alpha, self.eps2 + self.alpha)
    }
}

/// Exponents derived from the model parameters.
///
/// `eta` is the multiplicativity of the reduced ratio SDE, `lambda` the
/// stationary tail exponent of `y`, `beta` the spectral exponent
/// (`S(f) ~ 1/f^beta`) and `hurst` the Hurst parameter implied by
/// `beta = 2H + 1`. `hurst` is only meaningful as a Hurst exponent when it
/// lands in [0, 1]; the formula value is returned unclamped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveParams {
    pub eta: f64,
    pub lambda: f64,
    pub beta: f64,
    pub hurst: f64,
}

impl EffectiveParams {
    /// Order of the Bessel function whose first zero sets the burst-duration
    /// cutoff: `nu = (lambda - 2 eta + 1) / (2 (eta - 1))`.
    pub fn bessel_order(&self) -> f64 {
        (self.lambda - 2.0 * self.eta + 1.0) / (2.0 * (self.eta - 1.0))
    }
}

/// Derived exponents: `eta = (3+alpha)/2`, `lambda = eps2 + alpha + 1`,
/// `beta = 1 + (lambda-3)/(2 eta - 2)`, `H = (beta-1)/2`.
pub fn effective_params(p: &ModelParams) -> EffectiveParams {
    let eta = (3.0 + p.alpha) / 2.0;
    let lambda = p.eps2 + p.alpha + 1.0;
    let beta = 1.0 + (lambda - 3.0) / (2.0 * eta - 2.0);
    EffectiveParams {
        eta,
        lambda,
        beta,
        hurst: (beta - 1.0) / 2.0,
    }
}

/// `base^(-alpha)` with a multiply-only fast path for small integer `alpha`;
/// the simulation loops hit this with `alpha` fixed per run.
#[inline]
pub(crate) fn inv_pow(base: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        1.0
    } else if alpha.fract() == 0.0 && (0.0..=32.0).contains(&alpha) {
        base.powi(alpha as i32).recip()
    } else {
        base.powf(-alpha)
    }
}

/// Per-agent switching rates `(mu1, mu2)` at occupancy `x`.
pub fn per_agent_rates(x: f64, p: &ModelParams) -> Result<(f64, f64)> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain(format!(
            "per-agent rates need 0 < x < 1, got {x}"
        )));
    }
    let n = p.n_agents as f64;
    let g = inv_pow(x * (1.0 - x), p.alpha);
    let mu1 = p.h_scale * (p.eps1 + n * x) * g;
    let mu2 = p.h_scale * (p.eps2 + n * (1.0 - x)) * g;
    if !(mu1.is_finite() && mu2.is_finite()) {
        return Err(Error::Numeric(format!("per-agent rate overflow at x = {x}")));
    }
    Ok((mu1, mu2))
}

/// System-wide one-step transition rates `(p_up, p_down)` at agent count `n`.
///
/// `p_up = (N-n) mu1(n/N)`, `p_down = n mu2(n/N)`. The boundary states keep
/// only the transition whose combined product has a finite limit; a
/// divergent boundary rate (possible when `alpha > 0`) is a numeric error.
/// The jump engine never requests such states: for `alpha > 0` it reflects
/// at `n = 1` and `n = N-1`.
pub fn system_rates(n: u32, p: &ModelParams) -> Result<(f64, f64)> {
    let n_tot = p.n_agents;
    if n > n_tot {
        return Err(Error::domain(format!(
            "agent count {n} outside [0, {n_tot}]"
        )));
    }
    let nf = n_tot as f64;
    if n == 0 || n == n_tot {
        // Combined-limit boundary rates. One prefactor vanishes, killing that
        // transition; the surviving product is finite only if the rate's
        // numerator tames the singular time-scale factor.
        let eps_in = if n == 0 { p.eps1 } else { p.eps2 };
        let inward = if p.alpha == 0.0 {
            nf * p.h_scale * eps_in
        } else if eps_in == 0.0 && p.alpha < 1.0 {
            0.0
        } else if eps_in == 0.0 && p.alpha == 1.0 {
            nf * nf * p.h_scale
        } else {
            return Err(Error::Numeric(format!(
                "boundary rate diverges at n = {n} for alpha = {}",
                p.alpha
            )));
        };
        return Ok(if n == 0 { (inward, 0.0) } else { (0.0, inward) });
    }
    let x = n as f64 / nf;
    let (mu1, mu2) = per_agent_rates(x, p)?;
    let p_up = (nf - n as f64) * mu1;
    let p_down = n as f64 * mu2;
    if !(p_up.is_finite() && p_down.is_finite()) {
        return Err(Error::Numeric(format!("system rate overflow at n = {n}")));
    }
    Ok((p_up, p_down))
}

/// Stationary density of the occupancy: Beta(eps1+alpha, eps2+alpha).
pub fn stationary_pdf_x(x: f64, p: &ModelParams) -> Result<f64> {
    let (a, b) = p.beta_shape();
    if a <= 0.0 || b <= 0.0 {
        return Err(Error::domain(
            "Beta shape parameters must be positive".to_string(),
        ));
    }
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain(format!(
            "stationary density defined on 0 < x < 1, got {x}"
        )));
    }
    use statrs::function::gamma::ln_gamma;
    let ln_norm = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b);
    Ok((ln_norm + (a - 1.0) * x.ln() + (b - 1.0) * (1.0 - x).ln()).exp())
}

/// Ratio transform `y = x / (1 - x)`.
pub fn to_y(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain(format!("to_y needs 0 < x < 1, got {x}")));
    }
    Ok(x / (1.0 - x))
}

/// Inverse ratio transform `x = y / (1 + y)`.
pub fn from_y(y: f64) -> Result<f64> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::domain(format!("from_y needs y > 0, got {y}")));
    }
    Ok(y / (1.0 + y))
}

/// Time separating the `T^{-3/2}` regime of the burst-duration PDF from its
/// exponential cutoff: `T_c = 2 / ((eta-1)^2 h_y^{2(eta-1)} j^2)` where `j`
/// is the first zero of the Bessel function of order [`EffectiveParams::bessel_order`].
///
/// The threshold `h_y` is expressed in ratio (y) units; convert occupancy
/// thresholds with [`to_y`] first. For `eta = 1` (additive noise) there is
/// no cutoff and the result is infinite.
pub fn burst_cutoff_time(h_y: f64, ep: &EffectiveParams, nu_zero: f64) -> Result<f64> {
    if !(h_y > 0.0) {
        return Err(Error::domain(format!("threshold h_y = {h_y} must be > 0")));
    }
    if !(nu_zero > 0.0) {
        return Err(Error::domain(format!(
            "Bessel zero {nu_zero} must be > 0"
        )));
    }
    if ep.eta < 1.0 {
        return Err(Error::domain(format!(
            "cutoff defined for eta >= 1, got {}",
            ep.eta
        )));
    }
    let em1 = ep.eta - 1.0;
    Ok(2.0 / (em1 * em1 * h_y.powf(2.0 * em1) * nu_zero * nu_zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(eps1: f64, eps2: f64, alpha: f64, n: u32) -> ModelParams {
        ModelParams::new(eps1, eps2, alpha, n).unwrap()
    }

    #[test]
    fn validation_rejects_bad_params() {
        assert!(ModelParams::new(-0.1, 0.0, 2.0, 100).is_err());
        assert!(ModelParams::new(0.0, -0.1, 2.0, 100).is_err());
        assert!(ModelParams::new(0.0, 0.0, -1.0, 100).is_err());
        assert!(ModelParams::new(0.0, 0.0, 2.0, 1).is_err());
        // eps = alpha = 0 has no normalizable stationary law
        assert!(ModelParams::new(0.0, 0.0, 0.0, 100).is_err());
        assert!(params(0.0, 0.0, 2.0, 100).with_h_scale(0.0).is_err());
    }

    #[test]
    fn per_agent_rates_match_hand_values() {
        // x=0.5, eps1=0, alpha=2, N=4, h=1: mu1 = (4*0.5) * 0.5^-2 * 0.5^-2 = 32
        let p = params(0.0, 0.0, 2.0, 4);
        let (mu1, _) = per_agent_rates(0.5, &p).unwrap();
        assert_relative_eq!(mu1, 32.0, max_relative = 1e-12);

        // alpha=0 reduces to plain Kirman rates: eps1=1, N=100, x=0.5 -> 51
        let p = params(1.0, 1.0, 0.0, 100);
        let (mu1, _) = per_agent_rates(0.5, &p).unwrap();
        assert_relative_eq!(mu1, 51.0, max_relative = 1e-12);
    }

    #[test]
    fn per_agent_rates_symmetric_at_midpoint() {
        let p = params(0.7, 0.7, 1.3, 50);
        let (mu1, mu2) = per_agent_rates(0.5, &p).unwrap();
        assert_relative_eq!(mu1, mu2, max_relative = 1e-12);
    }

    #[test]
    fn per_agent_rates_reject_boundaries() {
        let p = params(0.0, 0.0, 2.0, 10);
        assert!(per_agent_rates(0.0, &p).is_err());
        assert!(per_agent_rates(1.0, &p).is_err());
        assert!(per_agent_rates(-0.5, &p).is_err());
    }

    #[test]
    fn mirror_symmetry_of_rates() {
        // eps1 = eps2: mu1(x) = mu2(1-x) across the interval
        let p = params(0.4, 0.4, 2.0, 30);
        for &x in &[0.05, 0.2, 0.37, 0.5, 0.71, 0.95] {
            let (mu1, _) = per_agent_rates(x, &p).unwrap();
            let (_, mu2m) = per_agent_rates(1.0 - x, &p).unwrap();
            assert_relative_eq!(mu1, mu2m, max_relative = 1e-10);
        }
    }

    #[test]
    fn system_rates_hand_values() {
        // n=2, N=4, eps=0, alpha=2: p_up = p_down = 2*32 = 64
        let p = params(0.0, 0.0, 2.0, 4);
        let (up, down) = system_rates(2, &p).unwrap();
        assert_relative_eq!(up, 64.0, max_relative = 1e-12);
        assert_relative_eq!(down, 64.0, max_relative = 1e-12);

        // n=0, eps1=0, alpha=0: absorbing without idiosyncratic switching.
        // Such parameters have no normalizable stationary law, so they fail
        // construction; the rates themselves are still well-defined.
        let p = ModelParams {
            eps1: 0.0,
            eps2: 1.0,
            alpha: 0.0,
            n_agents: 4,
            h_scale: 1.0,
        };
        let (up, down) = system_rates(0, &p).unwrap();
        assert_eq!(up, 0.0);
        assert_eq!(down, 0.0);

        // n=0, eps1=1, alpha=0, N=4: p_up = 4
        let p = params(1.0, 1.0, 0.0, 4);
        let (up, _) = system_rates(0, &p).unwrap();
        assert_relative_eq!(up, 4.0, max_relative = 1e-12);
    }

    #[test]
    fn system_rates_boundary_policy() {
        let p = params(0.0, 0.0, 2.0, 10);
        // alpha > 0 boundary: inward rate diverges, surfaced as numeric error
        assert!(matches!(system_rates(0, &p), Err(Error::Numeric(_))));
        assert!(system_rates(11, &p).is_err());
        // sub-linear singularity vanishes in the limit
        let p = params(0.0, 0.0, 0.5, 10);
        let (up, down) = system_rates(0, &p).unwrap();
        assert_eq!((up, down), (0.0, 0.0));
    }

    #[test]
    fn stationary_pdf_hand_value_and_symmetry() {
        // alpha=2, eps=0, x=0.5: Gamma(4)/(Gamma(2)Gamma(2)) * 0.25 = 1.5
        let p = params(0.0, 0.0, 2.0, 100);
        assert_relative_eq!(stationary_pdf_x(0.5, &p).unwrap(), 1.5, max_relative = 1e-12);
        for &x in &[0.1, 0.25, 0.4] {
            assert_relative_eq!(
                stationary_pdf_x(x, &p).unwrap(),
                stationary_pdf_x(1.0 - x, &p).unwrap(),
                max_relative = 1e-10
            );
        }
        assert!(stationary_pdf_x(0.0, &p).is_err());
        assert!(stationary_pdf_x(1.0, &p).is_err());
    }

    #[test]
    fn stationary_pdf_integrates_to_one() {
        // midpoint rule at 1e-6 resolution near the well-behaved interior,
        // Beta(2,2) has no boundary mass concentration
        let p = params(0.0, 0.0, 2.0, 100);
        let n = 200_000;
        let dx = 1.0 / n as f64;
        let integral: f64 = (0..n)
            .map(|i| stationary_pdf_x((i as f64 + 0.5) * dx, &p).unwrap() * dx)
            .sum();
        assert!((integral - 1.0).abs() < 1e-6, "integral = {integral}");
    }

    #[test]
    fn ratio_transform_roundtrip_and_hand_values() {
        assert_relative_eq!(to_y(0.5).unwrap(), 1.0);
        assert_relative_eq!(to_y(2.0 / 3.0).unwrap(), 2.0, max_relative = 1e-12);
        assert_relative_eq!(from_y(2.0).unwrap(), 2.0 / 3.0, max_relative = 1e-12);
        assert!(to_y(0.0).is_err());
        assert!(to_y(1.0).is_err());
        assert!(from_y(0.0).is_err());
        assert!(from_y(-1.0).is_err());
    }

    #[test]
    fn effective_params_formulas() {
        // alpha=2, eps2=0: eta=2.5, lambda=3, beta=1, H=0
        let ep = effective_params(&params(0.0, 0.0, 2.0, 100));
        assert_relative_eq!(ep.eta, 2.5);
        assert_relative_eq!(ep.lambda, 3.0);
        assert_relative_eq!(ep.beta, 1.0);
        assert_relative_eq!(ep.hurst, 0.0);

        // alpha=2, eps2=3: lambda=6, beta=2, H=0.5
        let ep = effective_params(&params(3.0, 3.0, 2.0, 100));
        assert_relative_eq!(ep.lambda, 6.0);
        assert_relative_eq!(ep.beta, 2.0, max_relative = 1e-12);
        assert_relative_eq!(ep.hurst, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn effective_params_hurst_family() {
        // the (eps, H) pairs used throughout the comparison study
        for (eps, h) in [(0.6, 0.1), (1.2, 0.2), (1.8, 0.3), (2.4, 0.4), (3.0, 0.5)] {
            let ep = effective_params(&params(eps, eps, 2.0, 100));
            assert_relative_eq!(ep.hurst, h, epsilon = 1e-12);
        }
    }

    #[test]
    fn burst_cutoff_hand_value_and_scaling() {
        let ep = EffectiveParams {
            eta: 2.5,
            lambda: 3.0,
            beta: 1.0,
            hurst: 0.0,
        };
        // eta=2.5, h_y=1, j=2: T_c = 2 / (1.5^2 * 1 * 4) = 2/9
        assert_relative_eq!(
            burst_cutoff_time(1.0, &ep, 2.0).unwrap(),
            2.0 / 9.0,
            max_relative = 1e-12
        );
        // doubling h_y divides T_c by 2^{2(eta-1)} = 8
        let r = burst_cutoff_time(1.0, &ep, 2.0).unwrap() / burst_cutoff_time(2.0, &ep, 2.0).unwrap();
        assert_relative_eq!(r, 8.0, max_relative = 1e-12);
        // eta -> 1+: no cutoff
        let ep1 = EffectiveParams {
            eta: 1.0,
            lambda: 1.0,
            beta: 1.0,
            hurst: 0.0,
        };
        assert!(burst_cutoff_time(1.0, &ep1, 2.0).unwrap().is_infinite());
        assert!(burst_cutoff_time(0.0, &ep, 2.0).is_err());
        assert!(burst_cutoff_time(1.0, &ep, 0.0).is_err());
    }

    #[test]
    fn bessel_order_matches_hand_value() {
        // alpha=2, eps2=0: nu = (3 - 5 + 1)/3 = -1/3
        let ep = effective_params(&params(0.0, 0.0, 2.0, 100));
        assert_relative_eq!(ep.bessel_order(), -1.0 / 3.0, max_relative = 1e-12);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn ratio_transform_roundtrips(x in 1e-6f64..=0.999999) {
                let back = from_y(to_y(x).unwrap()).unwrap();
                prop_assert!((back - x).abs() < 1e-12, "x = {x}, back = {back}");
            }

            #[test]
            fn ratio_transform_reciprocal_symmetry(x in 1e-6f64..=0.999999) {
                // y and 1/y swap under x <-> 1-x
                let prod = to_y(x).unwrap() * to_y(1.0 - x).unwrap();
                prop_assert!((prod - 1.0).abs() < 1e-9, "product = {prod}");
            }

            #[test]
            fn transform_is_monotone(a in 1e-6f64..=0.999999, b in 1e-6f64..=0.999999) {
                prop_assume!(a < b);
                prop_assert!(to_y(a).unwrap() < to_y(b).unwrap());
            }
        }
    }
}
