//! Logarithmically binned probability densities for heavy-tailed samples.

use crate::error::{Error, Result};
use crate::stats::bursts::{durations_of, DurationKind, DurationSample};

/// Histogram on geometric bins, normalized to a density per unit value.
///
/// `density[i] = count[i] / (n_total * (bin_hi[i] - bin_lo[i]))`, so the
/// density integrates to at most 1 (exactly 1 when the bins cover every
/// sample, as they do when built by [`log_binned_pdf`]).
#[derive(Debug, Clone)]
pub struct LogBinnedPdf {
    pub bin_lo: Vec<f64>,
    pub bin_hi: Vec<f64>,
    pub density: Vec<f64>,
    pub count: Vec<u64>,
}

impl LogBinnedPdf {
    pub fn len(&self) -> usize {
        self.bin_lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bin_lo.is_empty()
    }

    /// Geometric bin centers.
    pub fn centers(&self) -> Vec<f64> {
        self.bin_lo
            .iter()
            .zip(&self.bin_hi)
            .map(|(&lo, &hi)| (lo * hi).sqrt())
            .collect()
    }

    pub fn total_count(&self) -> u64 {
        self.count.iter().sum()
    }
}

/// Bin strictly positive `values` into geometric bins spanning their range.
pub fn log_binned_pdf(values: &[f64], bins_per_decade: u32) -> Result<LogBinnedPdf> {
    if values.is_empty() {
        return Err(Error::InsufficientData(
            "cannot bin an empty sample".to_string(),
        ));
    }
    if bins_per_decade == 0 {
        return Err(Error::invalid("bins_per_decade must be >= 1"));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::domain(format!(
                "log binning requires positive finite values, got {v}"
            )));
        }
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let ln_ratio = std::f64::consts::LN_10 / bins_per_decade as f64;
    let n_bins = if hi > lo {
        ((hi / lo).ln() / ln_ratio).ceil() as usize
    } else {
        1
    }
    .max(1);

    let mut count = vec![0u64; n_bins];
    for &v in values {
        let idx = (((v / lo).ln() / ln_ratio).floor() as isize).clamp(0, n_bins as isize - 1);
        count[idx as usize] += 1;
    }
    let total = values.len() as f64;
    let edge = |i: usize| lo * (ln_ratio * i as f64).exp();
    let bin_lo: Vec<f64> = (0..n_bins).map(edge).collect();
    let bin_hi: Vec<f64> = (1..=n_bins).map(edge).collect();
    let density = count
        .iter()
        .zip(bin_lo.iter().zip(&bin_hi))
        .map(|(&c, (&l, &h))| c as f64 / (total * (h - l)))
        .collect();
    Ok(LogBinnedPdf {
        bin_lo,
        bin_hi,
        density,
        count,
    })
}

/// Log-binned PDF of burst (or inter-burst, or pooled) durations.
///
/// Estimates are statistically meaningful from roughly a hundred events
/// upward; callers presenting fewer should treat the result as indicative
/// only.
pub fn duration_pdf(
    samples: &[DurationSample],
    kind: Option<DurationKind>,
    bins_per_decade: u32,
) -> Result<LogBinnedPdf> {
    let durations = durations_of(samples, kind);
    if durations.is_empty() {
        return Err(Error::InsufficientData(
            "no durations of the requested kind".to_string(),
        ));
    }
    log_binned_pdf(&durations, bins_per_decade)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_distr::Distribution;

    #[test]
    fn bins_are_geometric_and_cover_all_samples() {
        let values = vec![0.001, 0.01, 0.5, 3.0, 42.0, 999.0];
        let pdf = log_binned_pdf(&values, 4).unwrap();
        assert_eq!(pdf.total_count(), values.len() as u64);
        let r0 = pdf.bin_hi[0] / pdf.bin_lo[0];
        for (lo, hi) in pdf.bin_lo.iter().zip(&pdf.bin_hi) {
            assert!((hi / lo - r0).abs() < 1e-9);
            assert!(hi > lo && *lo > 0.0);
        }
        // integral of density over the bins = 1 (all samples inside)
        let integral: f64 = pdf
            .density
            .iter()
            .zip(pdf.bin_lo.iter().zip(&pdf.bin_hi))
            .map(|(d, (l, h))| d * (h - l))
            .sum();
        assert!((integral - 1.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_single_value() {
        let pdf = log_binned_pdf(&[2.5; 10], 8).unwrap();
        assert_eq!(pdf.len(), 1);
        assert_eq!(pdf.count[0], 10);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(log_binned_pdf(&[], 8).is_err());
        assert!(log_binned_pdf(&[1.0, -2.0], 8).is_err());
        assert!(log_binned_pdf(&[1.0, 0.0], 8).is_err());
        assert!(log_binned_pdf(&[1.0], 0).is_err());
    }

    #[test]
    fn exponential_durations_match_analytic_density() {
        // 1e5 Exp(1) draws: fitted density near T=1 within 5% of exp(-1)
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(99);
        let exp = rand_distr::Exp::new(1.0).unwrap();
        let draws: Vec<f64> = (0..100_000).map(|_| exp.sample(&mut rng)).collect();
        let pdf = log_binned_pdf(&draws, 8).unwrap();
        let centers = pdf.centers();
        let i = centers
            .iter()
            .enumerate()
            .min_by(|a, b| {
                (a.1 - 1.0)
                    .abs()
                    .partial_cmp(&(b.1 - 1.0).abs())
                    .unwrap()
            })
            .unwrap()
            .0;
        let expect = (-centers[i]).exp();
        assert!(
            (pdf.density[i] - expect).abs() / expect < 0.05,
            "density {} vs analytic {expect} at T = {}",
            pdf.density[i],
            centers[i]
        );
    }
}
