//! `burstlab classify` - memory-origin verdicts for trajectory files.

use crate::analyze::resolve_threshold;
use crate::config::Layered;
use crate::output;
use burstlab::classify::{classify, default_thresholds, ClassifierConfig};
use burstlab::{Result, TimeSeries};
use clap::Args;
use std::path::PathBuf;

#[derive(Args)]
pub struct ClassifyArgs {
    /// Trajectory files to classify.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,

    /// Explicit thresholds in series units (repeatable). Defaults to the
    /// 0.6/0.7/0.8 quantiles of each series.
    #[arg(long, allow_negative_numbers = true)]
    pub threshold: Vec<f64>,
    /// Thresholds in occupancy units, converted per trajectory kind.
    #[arg(long, allow_negative_numbers = true)]
    pub threshold_x: Vec<f64>,

    /// Half-width of the Spurious band around the Markov exponent 3/2.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Minimum pooled burst count for a verdict.
    #[arg(long)]
    pub n_min: Option<usize>,
    /// Emit the verdict as JSON instead of key = value text.
    #[arg(long)]
    pub json: bool,
}

fn thresholds_for(
    args: &ClassifyArgs,
    series: &TimeSeries,
    source_kind: Option<&str>,
) -> Result<Vec<f64>> {
    if !args.threshold.is_empty() {
        return Ok(args.threshold.clone());
    }
    if !args.threshold_x.is_empty() {
        return args
            .threshold_x
            .iter()
            .map(|&hx| resolve_threshold(None, Some(hx), source_kind))
            .collect();
    }
    default_thresholds(series)
}

pub fn run(args: ClassifyArgs, layered: &Layered) -> Result<()> {
    let cfg = ClassifierConfig {
        tol: layered.get("tol", args.tol, 0.1)?,
        n_min: layered.get("n_min", args.n_min, 10_000)?,
        ..Default::default()
    };
    for input in &args.inputs {
        let (series, meta) = burstlab::traj::load(input)?;
        let thresholds = thresholds_for(&args, &series, output::meta_value(&meta, "kind"))?;
        let verdict = classify(&series, &thresholds, &cfg);
        if args.json {
            println!(
                "{}",
                serde_json::json!({
                    "input": input.display().to_string(),
                    "verdict": verdict,
                })
            );
        } else {
            println!("# input = {}", input.display());
            print!("{}", verdict.to_kv_text());
        }
    }
    Ok(())
}
