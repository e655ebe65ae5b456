//! Memory-origin classification from burst-duration statistics.
//!
//! A one-dimensional Markov process shows a burst-duration PDF exponent of
//! 3/2 regardless of how heavy its tails or how 1/f-like its spectrum; an
//! fBm-driven process shows `2 - H`. The classifier extracts durations at
//! several thresholds, fits the pre-cutoff exponent, and labels the series
//! `Spurious` when the pooled exponent is compatible with 3/2 and
//! `TrueLongMemory` when it sits clearly above. A PSD-derived Hurst estimate
//! is attached for cross-checking but does not decide.

use crate::error::Result;
use crate::stats::bursts::{durations_of, extract_durations, DurationKind};
use crate::stats::fit::{fit_powerlaw, fit_powerlaw_psd, hurst_from_beta, PowerLawFit};
use crate::stats::psd::estimate_psd;
use crate::timeseries::TimeSeries;
use serde::Serialize;

/// Classifier decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Label {
    /// Markov-compatible: burst exponent indistinguishable from 3/2.
    Spurious,
    /// fBm-compatible: exponent clearly above 3/2, `H = 2 - exponent`.
    TrueLongMemory,
    /// Not enough events, too noisy a fit, or an exponent outside both bands.
    Inconclusive,
}

/// Tuning knobs; the defaults operationalize "compatible with 3/2" as
/// `|exponent - 1.5| <= 0.1`, surfaced in every report.
#[derive(Debug, Clone, Serialize)]
pub struct ClassifierConfig {
    /// Half-width of the Spurious band around 3/2.
    pub tol: f64,
    /// Minimum pooled burst count before a verdict is attempted.
    pub n_min: usize,
    /// Maximum acceptable stderr of the pooled exponent.
    pub stderr_max: f64,
    pub bins_per_decade: u32,
    /// Segments for the informational PSD cross-check.
    pub psd_segments: usize,
    /// Manual fit window (durations); when absent the window is
    /// `[10 grid_dt, min(99th percentile, 10 grid_dt * 10^auto_window_decades)]`
    /// per threshold and kind.
    pub fit_window: Option<(f64, f64)>,
    /// Width of the automatic fit window in decades. Keeping it moderate
    /// holds the fit below the exponential cutoff; the data must resolve the
    /// pre-cutoff regime (cutoff time well above ~300 grid steps).
    pub auto_window_decades: f64,
    /// Agreement tolerance between duration- and PSD-derived H.
    pub h_agree_tol: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            tol: 0.1,
            n_min: 10_000,
            stderr_max: 0.1,
            bins_per_decade: 8,
            psd_segments: 16,
            fit_window: None,
            auto_window_decades: 1.5,
            h_agree_tol: 0.15,
        }
    }
}

/// Per-threshold fit detail attached to the verdict.
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdFit {
    pub threshold: f64,
    pub exponent: f64,
    pub stderr: f64,
    pub n_bursts: usize,
    pub n_interbursts: usize,
    /// True when burst and inter-burst fits agreed within 2 stderr and were
    /// pooled; false means the burst fit alone decided (asymmetry).
    pub pooled: bool,
}

/// Classification outcome with the evidence that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct ClassifierVerdict {
    pub label: Label,
    pub exponent_est: Option<f64>,
    pub exponent_stderr: Option<f64>,
    /// `2 - exponent`, present when the exponent lies in (1, 2).
    pub h_from_duration: Option<f64>,
    /// `(beta - 1)/2` from the PSD fit, present when `beta` is in [1, 3].
    pub h_from_psd: Option<f64>,
    pub psd_beta: Option<f64>,
    /// Whether the two H estimates agree within `h_agree_tol`; informational.
    pub h_agreement: Option<bool>,
    /// Pooled burst count across thresholds.
    pub n_bursts: usize,
    pub thresholds_used: Vec<f64>,
    pub per_threshold: Vec<ThresholdFit>,
    /// Populated when the label is `Inconclusive`.
    pub reason: Option<String>,
    /// The tolerance that operationalized the decision boundary.
    pub tol: f64,
}

impl ClassifierVerdict {
    /// Flat `key = value` report.
    pub fn to_kv_text(&self) -> String {
        let mut out = String::new();
        let fmt_opt = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{x:.6}"));
        out.push_str(&format!("label = {:?}\n", self.label));
        out.push_str(&format!("exponent = {}\n", fmt_opt(self.exponent_est)));
        out.push_str(&format!(
            "exponent_stderr = {}\n",
            fmt_opt(self.exponent_stderr)
        ));
        out.push_str(&format!(
            "h_from_duration = {}\n",
            fmt_opt(self.h_from_duration)
        ));
        out.push_str(&format!("h_from_psd = {}\n", fmt_opt(self.h_from_psd)));
        out.push_str(&format!("psd_beta = {}\n", fmt_opt(self.psd_beta)));
        out.push_str(&format!(
            "h_agreement = {}\n",
            self.h_agreement
                .map_or("n/a".to_string(), |b| b.to_string())
        ));
        out.push_str(&format!("n_bursts = {}\n", self.n_bursts));
        out.push_str(&format!("decision_tolerance = {}\n", self.tol));
        out.push_str(&format!(
            "thresholds = {}\n",
            self.thresholds_used
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(",")
        ));
        for t in &self.per_threshold {
            out.push_str(&format!(
                "threshold {} : exponent = {:.4} +- {:.4}, bursts = {}, interbursts = {}, pooled = {}\n",
                t.threshold, t.exponent, t.stderr, t.n_bursts, t.n_interbursts, t.pooled
            ));
        }
        if let Some(r) = &self.reason {
            out.push_str(&format!("reason = {r}\n"));
        }
        out
    }
}

/// Default thresholds: empirical quantiles 0.6, 0.7 and 0.8 of the series.
/// Burst statistics need excursions, and quantile thresholds work without
/// knowing the units.
pub fn default_thresholds(s: &TimeSeries) -> Result<Vec<f64>> {
    Ok(vec![
        s.quantile(0.6)?,
        s.quantile(0.7)?,
        s.quantile(0.8)?,
    ])
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] * (1.0 - frac) + sorted[hi] * frac
}

fn fit_kind(
    durations: &[f64],
    grid_dt: f64,
    cfg: &ClassifierConfig,
) -> Option<PowerLawFit> {
    if durations.len() < 100 {
        return None;
    }
    let window = cfg.fit_window.unwrap_or_else(|| {
        let mut sorted = durations.to_vec();
        sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        let lo = 10.0 * grid_dt;
        let hi = percentile(&sorted, 0.99).min(lo * 10f64.powf(cfg.auto_window_decades));
        (lo, hi)
    });
    let pdf = crate::stats::binning::log_binned_pdf(durations, cfg.bins_per_decade).ok()?;
    fit_powerlaw(&pdf, window).ok()
}

fn inverse_variance_pool(fits: &[(f64, f64)]) -> (f64, f64) {
    let mut wsum = 0.0;
    let mut esum = 0.0;
    for &(e, se) in fits {
        let w = 1.0 / (se * se).max(1e-12);
        wsum += w;
        esum += w * e;
    }
    (esum / wsum, (1.0 / wsum).sqrt())
}

fn inconclusive(
    reason: String,
    n_bursts: usize,
    thresholds: Vec<f64>,
    per_threshold: Vec<ThresholdFit>,
    psd_beta: Option<f64>,
    h_from_psd: Option<f64>,
    tol: f64,
) -> ClassifierVerdict {
    ClassifierVerdict {
        label: Label::Inconclusive,
        exponent_est: None,
        exponent_stderr: None,
        h_from_duration: None,
        h_from_psd,
        psd_beta,
        h_agreement: None,
        n_bursts,
        thresholds_used: thresholds,
        per_threshold,
        reason: Some(reason),
        tol,
    }
}

/// Classify the memory origin of `s` from burst durations at the given
/// thresholds. Insufficient or pathological data never fails, it yields
/// `Inconclusive` with a reason.
pub fn classify(s: &TimeSeries, thresholds: &[f64], cfg: &ClassifierConfig) -> ClassifierVerdict {
    // informational PSD cross-check
    let (psd_beta, h_from_psd) = match estimate_psd(s, cfg.psd_segments) {
        Ok(psd) => {
            // fit the steep upper band; low frequencies flatten once the
            // process decorrelates and would drag the slope toward zero
            let f_max = psd.freqs[psd.freqs.len() - 1];
            let lo = (f_max / 300.0).max(psd.freqs[0] * 4.0);
            let hi = f_max / 10.0;
            match fit_powerlaw_psd(&psd, (lo, hi)) {
                Ok(f) => {
                    let beta = f.exponent;
                    let h = hurst_from_beta(beta);
                    (Some(beta), (1.0..=3.0).contains(&beta).then_some(h))
                }
                Err(_) => (None, None),
            }
        }
        Err(_) => (None, None),
    };

    if thresholds.is_empty() {
        return inconclusive(
            "no thresholds given".to_string(),
            0,
            vec![],
            vec![],
            psd_beta,
            h_from_psd,
            cfg.tol,
        );
    }

    let mut per_threshold = Vec::new();
    let mut pooled_fits: Vec<(f64, f64)> = Vec::new();
    let mut n_bursts_total = 0usize;
    for &thr in thresholds {
        let samples = extract_durations(s, thr);
        let bursts = durations_of(&samples, Some(DurationKind::Burst));
        let inter = durations_of(&samples, Some(DurationKind::InterBurst));
        n_bursts_total += bursts.len();
        let Some(bfit) = fit_kind(&bursts, s.dt(), cfg) else {
            continue;
        };
        let ifit = fit_kind(&inter, s.dt(), cfg);
        let (exp, se, pooled) = match ifit {
            Some(i)
                if (bfit.exponent - i.exponent).abs()
                    <= 2.0 * (bfit.stderr.powi(2) + i.stderr.powi(2)).sqrt() =>
            {
                let (e, s) = inverse_variance_pool(&[
                    (bfit.exponent, bfit.stderr),
                    (i.exponent, i.stderr),
                ]);
                (e, s, true)
            }
            // asymmetric burst/inter-burst statistics: burst fit decides
            _ => (bfit.exponent, bfit.stderr, false),
        };
        per_threshold.push(ThresholdFit {
            threshold: thr,
            exponent: exp,
            stderr: se,
            n_bursts: bursts.len(),
            n_interbursts: inter.len(),
            pooled,
        });
        pooled_fits.push((exp, se));
    }

    if pooled_fits.is_empty() {
        return inconclusive(
            "no threshold produced a usable duration fit".to_string(),
            n_bursts_total,
            thresholds.to_vec(),
            per_threshold,
            psd_beta,
            h_from_psd,
            cfg.tol,
        );
    }
    if n_bursts_total < cfg.n_min {
        return inconclusive(
            format!(
                "only {n_bursts_total} bursts pooled across thresholds (need {})",
                cfg.n_min
            ),
            n_bursts_total,
            thresholds.to_vec(),
            per_threshold,
            psd_beta,
            h_from_psd,
            cfg.tol,
        );
    }
    let (exponent, stderr) = inverse_variance_pool(&pooled_fits);
    if stderr > cfg.stderr_max {
        return inconclusive(
            format!("pooled exponent stderr {stderr:.4} exceeds {}", cfg.stderr_max),
            n_bursts_total,
            thresholds.to_vec(),
            per_threshold,
            psd_beta,
            h_from_psd,
            cfg.tol,
        );
    }

    let h_from_duration = (exponent > 1.0 && exponent < 2.0).then_some(2.0 - exponent);
    let label = if (exponent - 1.5).abs() <= cfg.tol {
        Label::Spurious
    } else if exponent > 1.5 + cfg.tol && exponent < 2.0 {
        Label::TrueLongMemory
    } else {
        Label::Inconclusive
    };
    let h_agreement = match (h_from_duration, h_from_psd) {
        (Some(hd), Some(hp)) => Some((hd - hp).abs() <= cfg.h_agree_tol),
        _ => None,
    };
    ClassifierVerdict {
        label,
        exponent_est: Some(exponent),
        exponent_stderr: Some(stderr),
        h_from_duration,
        h_from_psd,
        psd_beta,
        h_agreement,
        n_bursts: n_bursts_total,
        thresholds_used: thresholds.to_vec(),
        per_threshold,
        reason: (label == Label::Inconclusive)
            .then(|| format!("exponent {exponent:.3} outside both decision bands")),
        tol: cfg.tol,
    }
}

/// [`classify`] with [`default_thresholds`].
pub fn classify_auto(s: &TimeSeries, cfg: &ClassifierConfig) -> ClassifierVerdict {
    match default_thresholds(s) {
        Ok(thr) => classify(s, &thr, cfg),
        Err(e) => inconclusive(
            format!("could not derive thresholds: {e}"),
            0,
            vec![],
            vec![],
            None,
            None,
            cfg.tol,
        ),
    }
}
