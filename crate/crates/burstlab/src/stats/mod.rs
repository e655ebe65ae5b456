//! Time-series estimators: spectra, log-binned PDFs, burst extraction,
//! power-law fits and the Bessel-zero burst-duration asymptotics.

pub mod bessel;
pub mod binning;
pub mod bursts;
pub mod fit;
pub mod ks;
pub mod psd;
pub mod theory;

pub use bessel::{bessel_first_zero, bessel_j};
pub use binning::{duration_pdf, log_binned_pdf, LogBinnedPdf};
pub use bursts::{durations_of, extract_durations, DurationKind, DurationSample};
pub use fit::{fit_powerlaw, fit_powerlaw_psd, hurst_from_beta, PowerLawFit};
pub use ks::{ks_one_sample, ks_two_sample};
pub use psd::{estimate_psd, PsdEstimate};
pub use theory::{theoretical_burst_pdf, BurstPdfShape};
