//! burstlab: stochastic engines and burst statistics for the long-range
//! memory question.
//!
//! Power-law spectra and heavy-tailed distributions show up both in genuinely
//! long-memory processes (fractional Brownian motion) and in memoryless
//! nonlinear diffusions that merely look long-memory. The two families can be
//! told apart by the distribution of burst durations — the times a series
//! spends above a threshold between consecutive crossings: one-dimensional
//! Markov processes give a universal `T^{-3/2}` law, fBm gives `T^{H-2}`.
//!
//! The crate provides:
//!
//! - [`model`]: the nonlinear herding (Kirman / noisy voter) model and its
//!   closed-form stationary and spectral predictions,
//! - [`agents`]: exact continuous-time jump simulation of the N-agent model,
//! - [`sde`]: adaptive Euler-Maruyama integration of the diffusion limit in
//!   occupancy (`x`) and ratio (`y = x/(1-x)`) coordinates,
//! - [`fbm`]: biased fractional Brownian motion via circulant-embedding
//!   fractional Gaussian noise,
//! - [`stats`]: PSD, log-binned PDFs, threshold-crossing burst extraction,
//!   power-law fitting and Bessel-zero based duration asymptotics,
//! - [`classify`]: the memory-origin classifier built on top of all of it,
//! - [`traj`]: the CSV/binary trajectory format shared by the engines.

pub mod agents;
pub mod classify;
pub mod error;
pub mod fbm;
pub mod model;
pub mod sde;
pub mod stats;
pub mod timeseries;
pub mod traj;

pub use error::{Error, Result};
pub use model::{effective_params, EffectiveParams, ModelParams};
pub use timeseries::TimeSeries;
