//! Power-law exponent fitting on log-log axes.

use crate::error::{Error, Result};
use crate::stats::binning::LogBinnedPdf;
use crate::stats::psd::PsdEstimate;

/// Result of a least-squares line through log-log points.
///
/// `exponent` is the magnitude of the power-law slope: a density
/// `p(T) ~ T^{-a}` or spectrum `S(f) ~ f^{-a}` fits with `exponent = a`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub stderr: f64,
    pub fit_lo: f64,
    pub fit_hi: f64,
    pub n_points: usize,
}

fn fit_loglog(points: &[(f64, f64)], window: (f64, f64)) -> Result<PowerLawFit> {
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::domain(format!(
            "fit window ({lo}, {hi}) must satisfy 0 < lo < hi"
        )));
    }
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x >= lo && *x <= hi && *y > 0.0)
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = pts.len();
    if n < 4 {
        return Err(Error::InsufficientData(format!(
            "need >= 4 nonempty points in window, found {n}"
        )));
    }
    let nf = n as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Numeric("degenerate fit abscissa".to_string()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts
        .iter()
        .map(|p| {
            let r = p.1 - (slope * p.0 + intercept);
            r * r
        })
        .sum();
    let stderr = (ss_res / (nf - 2.0) / sxx).sqrt();
    Ok(PowerLawFit {
        exponent: -slope,
        stderr,
        fit_lo: lo,
        fit_hi: hi,
        n_points: n,
    })
}

/// Fit `density ~ T^{-exponent}` over bins whose centers lie in `window`.
pub fn fit_powerlaw(pdf: &LogBinnedPdf, window: (f64, f64)) -> Result<PowerLawFit> {
    let pts: Vec<(f64, f64)> = pdf
        .centers()
        .into_iter()
        .zip(pdf.density.iter().copied())
        .filter(|&(_, d)| d > 0.0)
        .collect();
    fit_loglog(&pts, window)
}

/// Fit `S(f) ~ f^{-exponent}` over `window`.
///
/// The raw periodogram grid is linear in frequency, which would let the top
/// decade dominate a log-log fit; the spectrum is first averaged into
/// geometric frequency bins (16 per decade) so every decade carries equal
/// weight.
pub fn fit_powerlaw_psd(psd: &PsdEstimate, window: (f64, f64)) -> Result<PowerLawFit> {
    const BINS_PER_DECADE: f64 = 16.0;
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::domain(format!(
            "fit window ({lo}, {hi}) must satisfy 0 < lo < hi"
        )));
    }
    let ln_ratio = std::f64::consts::LN_10 / BINS_PER_DECADE;
    let mut sums: std::collections::BTreeMap<i64, (f64, f64, usize)> = Default::default();
    for (&f, &p) in psd.freqs.iter().zip(&psd.power) {
        if f < lo || f > hi {
            continue;
        }
        let idx = ((f / lo).ln() / ln_ratio).floor() as i64;
        let e = sums.entry(idx).or_insert((0.0, 0.0, 0));
        e.0 += f.ln();
        e.1 += p;
        e.2 += 1;
    }
    let pts: Vec<(f64, f64)> = sums
        .values()
        .filter(|(_, p, n)| *n > 0 && *p > 0.0)
        .map(|&(lf, p, n)| ((lf / n as f64).exp(), p / n as f64))
        .collect();
    fit_loglog(&pts, window)
}

/// Hurst exponent implied by a spectral exponent: `H = (beta - 1) / 2`.
///
/// Meaningful as a Hurst parameter for `beta` in [1, 3]; outside that range
/// the formula value is returned but does not correspond to an fBm regime.
pub fn hurst_from_beta(beta: f64) -> f64 {
    (beta - 1.0) / 2.0
}
