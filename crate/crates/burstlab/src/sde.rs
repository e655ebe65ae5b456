//! Adaptive Euler-Maruyama integration of the herding-model diffusion limit.
//!
//! Two coordinate systems are supported: the occupancy `x` on (0, 1) and the
//! ratio `y = x/(1-x)` on (0, inf). Both SDEs violate the Lipschitz
//! condition near their boundaries, so trajectories are confined by mirror
//! reflection and the time step is chosen adaptively: each step keeps the
//! drift displacement within `kappa` and the diffusion variance within
//! `kappa^2` of the local state scale. Internal steps are resampled onto a
//! uniform output grid by sample-and-hold.

use crate::error::{Error, Result};
use crate::model::{from_y, inv_pow, ModelParams};
use crate::timeseries::TimeSeries;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Beta, Distribution, StandardNormal};

/// Integration controls shared by both coordinate systems.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SdeConfig {
    /// Relative step-accuracy parameter; per-step displacements stay below
    /// `kappa` times the state scale. Values above 0.1 trade accuracy for
    /// speed and are accepted but not recommended.
    pub kappa: f64,
    /// Lower reflective bound in ratio units.
    pub y_min: f64,
    /// Upper reflective bound in ratio units.
    pub y_max: f64,
    /// Simulated duration after burn-in.
    pub t_total: f64,
    /// Output grid spacing.
    pub grid_dt: f64,
    /// Reproducibility seed; equal seeds give bit-identical output.
    pub seed: u64,
}

impl SdeConfig {
    /// Defaults: `kappa = 0.03`, reflective bounds `y in [1e-5, 1e5]`.
    pub fn new(t_total: f64, grid_dt: f64, seed: u64) -> Result<Self> {
        let c = SdeConfig {
            kappa: 0.03,
            y_min: 1e-5,
            y_max: 1e5,
            t_total,
            grid_dt,
            seed,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn with_kappa(mut self, kappa: f64) -> Result<Self> {
        self.kappa = kappa;
        self.validate()?;
        Ok(self)
    }

    pub fn with_bounds(mut self, y_min: f64, y_max: f64) -> Result<Self> {
        self.y_min = y_min;
        self.y_max = y_max;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0 && self.kappa < 1.0) {
            return Err(Error::invalid(format!(
                "kappa = {} must lie in (0, 1)",
                self.kappa
            )));
        }
        if !(self.y_min > 0.0 && self.y_max > self.y_min && self.y_max.is_finite()) {
            return Err(Error::invalid(format!(
                "need 0 < y_min < y_max, got [{}, {}]",
                self.y_min, self.y_max
            )));
        }
        if !(self.grid_dt > 0.0 && self.grid_dt.is_finite()) {
            return Err(Error::invalid(format!(
                "grid_dt = {} must be > 0",
                self.grid_dt
            )));
        }
        if !(self.t_total >= 100.0 * self.grid_dt) {
            return Err(Error::invalid(format!(
                "t_total = {} must cover at least 100 grid steps",
                self.t_total
            )));
        }
        Ok(())
    }

    /// Output sample count: `floor(t_total/grid_dt) + 1`.
    pub fn n_samples(&self) -> usize {
        (self.t_total / self.grid_dt).floor() as usize + 1
    }
}

/// Drift and diffusion of the occupancy SDE,
/// `a = (1-x) mu1 - x mu2`, `b = sqrt(((1-x) mu1 + x mu2)/N)`.
pub fn drift_diffusion_x(x: f64, p: &ModelParams) -> Result<(f64, f64)> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain(format!(
            "x-dynamics defined on 0 < x < 1, got {x}"
        )));
    }
    let c = XCoeffs::new(p);
    let (a, b) = c.eval(x);
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Numeric(format!("x-coefficients overflow at x = {x}")));
    }
    Ok((a, b))
}

/// Drift and diffusion of the ratio SDE,
/// `a = h (eps1 y^-alpha + (2-eps2) y^(1-alpha)) (y+1)^(2 alpha + 1)`,
/// `b = sqrt(2 h y^(1-alpha)) (y+1)^(alpha+1)`.
pub fn drift_diffusion_y(y: f64, p: &ModelParams) -> Result<(f64, f64)> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::domain(format!(
            "y-dynamics defined on y > 0, got {y}"
        )));
    }
    let c = YCoeffs::new(p);
    let (a, b) = c.eval(y);
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Numeric(format!("y-coefficients overflow at y = {y}")));
    }
    Ok((a, b))
}

/// Adaptive step: `dt = min(kappa^2 y^2 / b^2, kappa y / |a|, grid_dt)`.
///
/// The first bound keeps the per-step diffusion displacement near `kappa y`,
/// the second the drift displacement; the cap keeps steps no coarser than
/// the output grid.
pub fn adaptive_dt(y: f64, a: f64, b: f64, cfg: &SdeConfig) -> f64 {
    relative_step(y, a, b, cfg.kappa, cfg.grid_dt)
}

#[inline]
fn relative_step(scale: f64, a: f64, b: f64, kappa: f64, cap: f64) -> f64 {
    let ks = kappa * scale;
    let mut dt = ks * ks / (b * b);
    if a != 0.0 {
        dt = dt.min(ks / a.abs());
    }
    dt.min(cap)
}

/// `base^e` with integer fast path, decided once per run.
#[derive(Debug, Clone, Copy)]
enum Pow {
    Int(i32),
    Gen(f64),
}

impl Pow {
    fn of(e: f64) -> Pow {
        if e.fract() == 0.0 && e.abs() <= 64.0 {
            Pow::Int(e as i32)
        } else {
            Pow::Gen(e)
        }
    }

    #[inline]
    fn apply(self, base: f64) -> f64 {
        match self {
            Pow::Int(k) => base.powi(k),
            Pow::Gen(e) => base.powf(e),
        }
    }
}

struct XCoeffs {
    eps1: f64,
    eps2: f64,
    alpha: f64,
    n: f64,
    h: f64,
}

impl XCoeffs {
    fn new(p: &ModelParams) -> Self {
        XCoeffs {
            eps1: p.eps1,
            eps2: p.eps2,
            alpha: p.alpha,
            n: p.n_agents as f64,
            h: p.h_scale,
        }
    }

    #[inline]
    fn eval(&self, x: f64) -> (f64, f64) {
        let xm = 1.0 - x;
        let g = inv_pow(x * xm, self.alpha);
        let a = self.h * g * (self.eps1 * xm - self.eps2 * x);
        let b2 = self.h * g * (self.eps1 * xm + self.eps2 * x + 2.0 * self.n * x * xm) / self.n;
        (a, b2.sqrt())
    }
}

struct YCoeffs {
    eps1: f64,
    two_minus_eps2: f64,
    alpha: f64,
    h: f64,
    pow_drift: Pow,
    pow_diff: Pow,
}

impl YCoeffs {
    fn new(p: &ModelParams) -> Self {
        YCoeffs {
            eps1: p.eps1,
            two_minus_eps2: 2.0 - p.eps2,
            alpha: p.alpha,
            h: p.h_scale,
            pow_drift: Pow::of(2.0 * p.alpha + 1.0),
            pow_diff: Pow::of(p.alpha + 1.0),
        }
    }

    #[inline]
    fn eval(&self, y: f64) -> (f64, f64) {
        let g = inv_pow(y, self.alpha); // y^-alpha
        let yp1 = y + 1.0;
        let a = self.h * g * (self.eps1 + self.two_minus_eps2 * y) * self.pow_drift.apply(yp1);
        let b = (2.0 * self.h * y * g).sqrt() * self.pow_diff.apply(yp1);
        (a, b)
    }
}

/// Shared integration loop; `scale_of` supplies the state scale used by the
/// relative step rule (y itself in ratio coordinates, x(1-x) in occupancy
/// coordinates, which agree under the transform).
fn integrate(
    s0: f64,
    coeffs: impl Fn(f64) -> (f64, f64),
    scale_of: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    cfg: &SdeConfig,
    rng: &mut ChaCha12Rng,
) -> Result<Vec<f64>> {
    let n_out = cfg.n_samples();
    let mut out = Vec::with_capacity(n_out);
    let burn_in = 0.01 * cfg.t_total;
    let mut t = -burn_in;
    let mut s = s0.clamp(lo, hi);
    let mut idx = 0usize;
    let mut next_grid = 0.0f64;
    while idx < n_out {
        let (a, b) = coeffs(s);
        let dt = relative_step(scale_of(s), a, b, cfg.kappa, cfg.grid_dt);
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Numeric(format!(
                "adaptive step collapsed at state {s} (dt = {dt})"
            )));
        }
        let t_new = t + dt;
        // sample-and-hold: grid instants passed by this step take the
        // pre-step value
        while idx < n_out && next_grid <= t_new {
            out.push(s);
            idx += 1;
            next_grid = idx as f64 * cfg.grid_dt;
        }
        let z: f64 = rng.sample(StandardNormal);
        let mut s_new = s + a * dt + b * dt.sqrt() * z;
        // mirror reflection, refolded until inside
        let mut folds = 0;
        while (s_new < lo || s_new > hi) && folds < 64 {
            s_new = if s_new < lo {
                2.0 * lo - s_new
            } else {
                2.0 * hi - s_new
            };
            folds += 1;
        }
        if !(s_new >= lo && s_new <= hi) {
            s_new = s_new.clamp(lo, hi);
        }
        if !s_new.is_finite() {
            return Err(Error::Numeric(format!(
                "integration produced a non-finite state from {s}"
            )));
        }
        s = s_new;
        t = t_new;
    }
    Ok(out)
}

fn draw_initial_x(p: &ModelParams, rng: &mut ChaCha12Rng) -> Result<f64> {
    let (sa, sb) = p.beta_shape();
    let beta = Beta::new(sa, sb)
        .map_err(|e| Error::invalid(format!("stationary Beta undefined: {e}")))?;
    Ok(beta.sample(rng))
}

/// Simulate the occupancy SDE on a uniform grid over `[0, t_total]`.
///
/// The initial state is drawn from the stationary Beta law and the first 1%
/// of the time span is discarded as burn-in. Values stay inside
/// `(from_y(y_min), from_y(y_max))` by reflection.
pub fn simulate_x(p: &ModelParams, cfg: &SdeConfig) -> Result<TimeSeries> {
    p.validate()?;
    cfg.validate()?;
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let x_lo = from_y(cfg.y_min)?;
    let x_hi = from_y(cfg.y_max)?;
    let x0 = draw_initial_x(p, &mut rng)?;
    let c = XCoeffs::new(p);
    let values = integrate(
        x0,
        |x| c.eval(x),
        |x| x * (1.0 - x),
        x_lo,
        x_hi,
        cfg,
        &mut rng,
    )?;
    TimeSeries::new(0.0, cfg.grid_dt, values)
}

/// Simulate the ratio SDE on a uniform grid over `[0, t_total]`.
///
/// Statistically equivalent to applying `to_y` to [`simulate_x`] output with
/// the same parameters; reflective at `y_min` and `y_max`.
pub fn simulate_y(p: &ModelParams, cfg: &SdeConfig) -> Result<TimeSeries> {
    p.validate()?;
    cfg.validate()?;
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let x0 = draw_initial_x(p, &mut rng)?;
    let y0 = (x0 / (1.0 - x0)).clamp(cfg.y_min, cfg.y_max);
    let c = YCoeffs::new(p);
    let values = integrate(
        y0,
        |y| c.eval(y),
        |y| y,
        cfg.y_min,
        cfg.y_max,
        cfg,
        &mut rng,
    )?;
    TimeSeries::new(0.0, cfg.grid_dt, values)
}
