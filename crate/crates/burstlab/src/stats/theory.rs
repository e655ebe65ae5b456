//! Asymptotic burst-duration density of the nonlinear ratio SDE.
//!
//! For a one-dimensional diffusion with multiplicativity `eta > 1`, the
//! burst-duration PDF at threshold `h_y` behaves as `T^{-3/2}` well below a
//! cutoff time `T_c` and decays as `exp(-T/T_c)/T` well above it, where
//! `1/T_c = (eta-1)^2 h_y^{2(eta-1)} j^2 / 2` and `j` is the first zero of
//! the Bessel function of order `nu = (lambda - 2 eta + 1)/(2(eta-1))`.

use crate::error::{Error, Result};
use crate::model::{burst_cutoff_time, EffectiveParams};
use crate::stats::bessel::bessel_first_zero;

/// Precomputed unnormalized burst-duration shape for one threshold.
///
/// The two asymptotic regimes are joined continuously at `T_c`; the joint is
/// plotting glue, not physics, and only the regimes themselves are
/// quantitative.
#[derive(Debug, Clone, Copy)]
pub struct BurstPdfShape {
    /// Regime-separating time.
    pub t_c: f64,
    /// Exponential cutoff rate `1/T_c`.
    pub rate: f64,
}

impl BurstPdfShape {
    /// Build the shape for threshold `h_y` (ratio units).
    pub fn new(h_y: f64, ep: &EffectiveParams) -> Result<Self> {
        if ep.eta < 1.0 {
            return Err(Error::domain(format!(
                "burst asymptotics need eta >= 1, got {}",
                ep.eta
            )));
        }
        if ep.eta == 1.0 {
            // additive noise: no cutoff
            return Ok(BurstPdfShape {
                t_c: f64::INFINITY,
                rate: 0.0,
            });
        }
        let zero = bessel_first_zero(ep.bessel_order())?;
        let t_c = burst_cutoff_time(h_y, ep, zero)?;
        Ok(BurstPdfShape { t_c, rate: 1.0 / t_c })
    }

    /// Unnormalized density at duration `t > 0`.
    pub fn density(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::domain(format!("duration {t} must be > 0")));
        }
        if t <= self.t_c {
            Ok(t.powf(-1.5))
        } else {
            // continuity at t_c: t_c^{-3/2} = c exp(-1)/t_c
            let c = self.t_c.sqrt().recip() * std::f64::consts::E;
            Ok(c * (-self.rate * t).exp() / t)
        }
    }
}

/// One-shot evaluation of the burst-duration shape; see [`BurstPdfShape`].
pub fn theoretical_burst_pdf(t: f64, h_y: f64, ep: &EffectiveParams) -> Result<f64> {
    BurstPdfShape::new(h_y, ep)?.density(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{effective_params, ModelParams};
    use approx::assert_relative_eq;

    fn ep_alpha2_eps0() -> EffectiveParams {
        effective_params(&ModelParams::new(0.0, 0.0, 2.0, 1000).unwrap())
    }

    #[test]
    fn small_t_slope_is_exactly_three_halves() {
        let shape = BurstPdfShape::new(1.0, &ep_alpha2_eps0()).unwrap();
        let (t1, t2) = (shape.t_c * 1e-6, shape.t_c * 1e-5);
        let slope = (shape.density(t2).unwrap().ln() - shape.density(t1).unwrap().ln())
            / (t2.ln() - t1.ln());
        assert_relative_eq!(slope, -1.5, max_relative = 1e-12);
    }

    #[test]
    fn cutoff_rate_scales_with_threshold() {
        let ep = ep_alpha2_eps0();
        let a = BurstPdfShape::new(1.0, &ep).unwrap();
        let b = BurstPdfShape::new(2.0, &ep).unwrap();
        // rate ~ h_y^{2(eta-1)} = h_y^3
        assert_relative_eq!(b.rate / a.rate, 8.0, max_relative = 1e-10);
    }

    #[test]
    fn deep_cutoff_ratio() {
        let shape = BurstPdfShape::new(1.0, &ep_alpha2_eps0()).unwrap();
        let t = shape.t_c * 50.0;
        let ratio = shape.density(2.0 * t).unwrap() / shape.density(t).unwrap();
        let expect = 0.5 * (-shape.rate * t).exp();
        assert_relative_eq!(ratio, expect, max_relative = 1e-10);
    }

    #[test]
    fn continuous_at_cutoff() {
        let shape = BurstPdfShape::new(0.7, &ep_alpha2_eps0()).unwrap();
        let below = shape.density(shape.t_c * (1.0 - 1e-9)).unwrap();
        let above = shape.density(shape.t_c * (1.0 + 1e-9)).unwrap();
        assert_relative_eq!(below, above, max_relative = 1e-6);
    }

    #[test]
    fn domain_errors() {
        let ep = ep_alpha2_eps0();
        assert!(theoretical_burst_pdf(0.0, 1.0, &ep).is_err());
        assert!(theoretical_burst_pdf(-1.0, 1.0, &ep).is_err());
        assert!(BurstPdfShape::new(0.0, &ep).is_err());
    }
}
