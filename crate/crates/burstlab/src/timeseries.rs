//! Uniformly sampled scalar trajectories.
//!
//! Every engine in this crate emits its output as a [`TimeSeries`]: a start
//! time, a fixed grid spacing and one finite value per grid instant. All
//! estimators consume the same type, so trajectories can be piped from any
//! engine into any analysis without conversion.

use crate::error::{Error, Result};

/// A uniformly sampled scalar time series.
///
/// Invariants enforced at construction: at least one sample, strictly
/// positive grid spacing, every value finite.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    t0: f64,
    dt: f64,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(t0: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        if !t0.is_finite() {
            return Err(Error::invalid("time series t0 must be finite"));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::invalid("time series dt must be finite and > 0"));
        }
        if values.is_empty() {
            return Err(Error::invalid("time series must contain at least one sample"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!(
                "time series sample {i} is not finite"
            )));
        }
        Ok(TimeSeries { t0, dt, values })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// A series is never empty; provided for clippy-friendliness.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Time stamp of sample `i`.
    pub fn time_at(&self, i: usize) -> f64 {
        self.t0 + self.dt * i as f64
    }

    /// Time spanned from the first to the last sample.
    pub fn duration(&self) -> f64 {
        self.dt * (self.values.len() - 1) as f64
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Population variance.
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / self.values.len() as f64
    }

    /// Empirical quantile with linear interpolation, `q` in [0, 1].
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::domain(format!("quantile {q} outside [0, 1]")));
        }
        let mut sorted = self.values.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let pos = q * (sorted.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        let frac = pos - lo as f64;
        Ok(sorted[lo] * (1.0 - frac) + sorted[hi] * frac)
    }

    /// Apply a pointwise transform, keeping the time grid.
    ///
    /// Fails if the transform produces a non-finite value anywhere.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<TimeSeries> {
        TimeSeries::new(self.t0, self.dt, self.values.iter().map(|&v| f(v)).collect())
    }

    /// View of the first `n` samples (or the whole series if shorter).
    pub fn truncated(&self, n: usize) -> Result<TimeSeries> {
        let n = n.min(self.values.len());
        TimeSeries::new(self.t0, self.dt, self.values[..n].to_vec())
    }
}
