//! Segment-averaged periodogram power spectral density estimation.
//!
//! Rectangular window, no overlap, per-segment mean removal, one-sided
//! density normalization: summing `power * df` over all bins recovers the
//! (within-segment) variance exactly, up to rounding.

use crate::error::{Error, Result};
use crate::timeseries::TimeSeries;
use rustfft::{num_complex::Complex, FftPlanner};

/// One-sided PSD estimate on the frequency grid `k / (L dt)`.
#[derive(Debug, Clone)]
pub struct PsdEstimate {
    /// Positive frequencies, strictly increasing (1/time units).
    pub freqs: Vec<f64>,
    /// Spectral density per frequency bin (value^2 * time).
    pub power: Vec<f64>,
    /// Number of averaged segments.
    pub n_segments: usize,
}

impl PsdEstimate {
    /// `sum(power) * df`, which the normalization ties to the series variance.
    pub fn integrated_power(&self) -> f64 {
        let df = self.freqs[0];
        self.power.iter().sum::<f64>() * df
    }
}

/// Estimate the PSD of `s` by averaging `n_segments` non-overlapping
/// rectangular-window periodograms.
pub fn estimate_psd(s: &TimeSeries, n_segments: usize) -> Result<PsdEstimate> {
    if n_segments == 0 {
        return Err(Error::invalid("n_segments must be >= 1"));
    }
    if s.len() < 2 * n_segments * 8 {
        return Err(Error::InsufficientData(format!(
            "series of {} samples too short for {} segments",
            s.len(),
            n_segments
        )));
    }
    let seg_len = s.len() / n_segments;
    let dt = s.dt();
    let n_freq = seg_len / 2;

    let fft = FftPlanner::<f64>::new().plan_fft_forward(seg_len);
    let mut acc = vec![0.0f64; n_freq];
    let mut buf = vec![Complex::new(0.0, 0.0); seg_len];
    for seg in 0..n_segments {
        let chunk = &s.values()[seg * seg_len..(seg + 1) * seg_len];
        let mean = chunk.iter().sum::<f64>() / seg_len as f64;
        for (b, &v) in buf.iter_mut().zip(chunk) {
            *b = Complex::new(v - mean, 0.0);
        }
        fft.process(&mut buf);
        for (a, b) in acc.iter_mut().zip(&buf[1..=n_freq]) {
            *a += b.norm_sqr();
        }
    }

    // density normalization: P_k = 2 |X_k|^2 dt / L (Nyquist bin unmirrored)
    let base = dt / (seg_len as f64 * n_segments as f64);
    let nyquist_unmirrored = seg_len.is_multiple_of(2);
    let power: Vec<f64> = acc
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let two_sided = nyquist_unmirrored && i + 1 == n_freq;
            a * base * if two_sided { 1.0 } else { 2.0 }
        })
        .collect();
    let freqs = (1..=n_freq)
        .map(|k| k as f64 / (seg_len as f64 * dt))
        .collect();
    Ok(PsdEstimate {
        freqs,
        power,
        n_segments,
    })
}
