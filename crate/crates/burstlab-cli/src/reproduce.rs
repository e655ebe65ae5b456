//! `burstlab reproduce` - regenerate the reference figures as data files.
//!
//! Each figure becomes a directory of CSV files: one per measured curve plus
//! the matching theoretical overlay, ready for any plotting tool. Full-size
//! runs take a few minutes; `--fast` produces reduced-statistics data with
//! the same file layout.

use crate::analyze::{write_pdf, write_psd};
use crate::config::Layered;
use crate::output::{self, kv, Meta};
use burstlab::model::{effective_params, stationary_pdf_x, to_y, ModelParams};
use burstlab::sde::{simulate_x, simulate_y, SdeConfig};
use burstlab::stats::binning::{duration_pdf, LogBinnedPdf};
use burstlab::stats::bursts::{extract_durations, DurationKind};
use burstlab::stats::psd::{estimate_psd, PsdEstimate};
use burstlab::stats::theory::BurstPdfShape;
use burstlab::fbm::{simulate_fbm_biased, FbmConfig};
use burstlab::{Result, TimeSeries};
use clap::{Args, ValueEnum};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig4,
    Fig5,
}

#[derive(Args)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub figure: Figure,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Reduced-statistics run with the same file layout.
    #[arg(long)]
    pub fast: bool,
}

const EXCERPT_LEN: usize = 20_000;

fn write_excerpt(path: &Path, s: &TimeSeries, meta: &Meta) -> Result<()> {
    let n = EXCERPT_LEN.min(s.len());
    output::write_table(
        path,
        "burstlab series excerpt v1",
        meta,
        &["t", "value"],
        (0..n).map(|i| vec![s.time_at(i), s.values()[i]]),
    )
}

/// Overlay `c * x^{-exponent}` anchored to measured data near the window's
/// geometric center.
fn powerlaw_overlay(
    points: &[(f64, f64)],
    window: (f64, f64),
    exponent: f64,
) -> Vec<Vec<f64>> {
    let anchor_x = (window.0 * window.1).sqrt();
    let anchor_y = points
        .iter()
        .filter(|(x, y)| *x >= window.0 && *x <= window.1 && *y > 0.0)
        .min_by(|a, b| {
            (a.0.ln() - anchor_x.ln())
                .abs()
                .partial_cmp(&(b.0.ln() - anchor_x.ln()).abs())
                .unwrap()
        })
        .map(|&(_, y)| y)
        .unwrap_or(1.0);
    let n = 64;
    let ratio = (window.1 / window.0).powf(1.0 / (n - 1) as f64);
    (0..n)
        .map(|i| {
            let x = window.0 * ratio.powi(i);
            vec![x, anchor_y * (x / anchor_x).powf(-exponent)]
        })
        .collect()
}

fn psd_points(psd: &PsdEstimate) -> Vec<(f64, f64)> {
    psd.freqs.iter().copied().zip(psd.power.iter().copied()).collect()
}

fn pdf_points(pdf: &LogBinnedPdf) -> Vec<(f64, f64)> {
    pdf.centers()
        .into_iter()
        .zip(pdf.density.iter().copied())
        .collect()
}

fn write_overlay(path: &Path, rows: Vec<Vec<f64>>, meta: &Meta) -> Result<()> {
    output::write_table(path, "burstlab theory overlay v1", meta, &["x", "value"], rows.into_iter())
}

fn model_eps0() -> ModelParams {
    ModelParams {
        eps1: 0.0,
        eps2: 0.0,
        alpha: 2.0,
        n_agents: 1000,
        h_scale: 1.0,
    }
}

fn fig1(dir: &Path, seed: u64, fast: bool) -> Result<()> {
    let p = model_eps0();
    let cfg = SdeConfig {
        kappa: 0.05,
        y_min: 1e-2,
        y_max: 1e2,
        t_total: if fast { 20.0 } else { 150.0 },
        grid_dt: 5e-5,
        seed,
    };
    let meta = vec![
        kv("figure", "fig1"),
        output::version_entry(),
        kv("seed", seed),
        kv("alpha", 2.0),
        kv("eps1", 0.0),
        kv("eps2", 0.0),
        kv("t_total", cfg.t_total),
        kv("grid_dt", cfg.grid_dt),
    ];
    let x = simulate_x(&p, &cfg)?;
    write_excerpt(&output::in_dir(dir, "fig1a_series.csv")?, &x, &meta)?;

    // (b) linear-bin histogram of x against the Beta(2,2) density
    let n_bins = 100usize;
    let mut counts = vec![0u64; n_bins];
    for &v in x.values() {
        let idx = ((v * n_bins as f64) as usize).min(n_bins - 1);
        counts[idx] += 1;
    }
    let total = x.len() as f64;
    let width = 1.0 / n_bins as f64;
    output::write_table(
        &output::in_dir(dir, "fig1b_pdf.csv")?,
        "burstlab linear pdf v1",
        &meta,
        &["bin_lo", "bin_hi", "density", "count"],
        (0..n_bins).map(|i| {
            vec![
                i as f64 * width,
                (i + 1) as f64 * width,
                counts[i] as f64 / (total * width),
                counts[i] as f64,
            ]
        }),
    )?;
    let theory: Vec<Vec<f64>> = (1..400)
        .map(|i| {
            let xv = i as f64 / 400.0;
            vec![xv, stationary_pdf_x(xv, &p).unwrap()]
        })
        .collect();
    write_overlay(&output::in_dir(dir, "fig1b_theory.csv")?, theory, &meta)?;

    // (c) PSD with a 1/f^2 trend line
    let psd = estimate_psd(&x, 16)?;
    write_psd(&output::in_dir(dir, "fig1c_psd.csv")?, &psd, &meta)?;
    let overlay = powerlaw_overlay(&psd_points(&psd), (50.0, 3000.0), 2.0);
    write_overlay(&output::in_dir(dir, "fig1c_theory.csv")?, overlay, &meta)?;
    output::write_sidecar(&dir.join("fig1.meta"), &meta)?;
    Ok(())
}

fn fig2(dir: &Path, seed: u64, fast: bool) -> Result<()> {
    let p = model_eps0();
    let cfg = SdeConfig {
        kappa: 0.1,
        y_min: 1e-2,
        y_max: 3e3,
        t_total: if fast { 25.0 } else { 250.0 },
        grid_dt: 2e-5,
        seed,
    };
    let meta = vec![
        kv("figure", "fig2"),
        output::version_entry(),
        kv("seed", seed),
        kv("alpha", 2.0),
        kv("eps1", 0.0),
        kv("eps2", 0.0),
        kv("t_total", cfg.t_total),
        kv("grid_dt", cfg.grid_dt),
    ];
    let y = simulate_y(&p, &cfg)?;
    write_excerpt(&output::in_dir(dir, "fig2a_series.csv")?, &y, &meta)?;

    let pdf = burstlab::stats::binning::log_binned_pdf(y.values(), 8)?;
    write_pdf(&output::in_dir(dir, "fig2b_pdf.csv")?, &pdf, &meta)?;
    let overlay = powerlaw_overlay(&pdf_points(&pdf), (10.0, 1e3), 3.0);
    write_overlay(&output::in_dir(dir, "fig2b_theory.csv")?, overlay, &meta)?;

    let psd = estimate_psd(&y, 16)?;
    write_psd(&output::in_dir(dir, "fig2c_psd.csv")?, &psd, &meta)?;
    let overlay = powerlaw_overlay(&psd_points(&psd), (8.0, 800.0), 1.0);
    write_overlay(&output::in_dir(dir, "fig2c_theory.csv")?, overlay, &meta)?;
    output::write_sidecar(&dir.join("fig2.meta"), &meta)?;
    Ok(())
}

fn fig4(dir: &Path, seed: u64, fast: bool) -> Result<()> {
    let eps_family = [0.6, 1.2, 1.8, 2.4, 3.0];
    let hurst_family = [0.1, 0.2, 0.3, 0.4, 0.5];
    let mut manifest = vec![
        kv("figure", "fig4"),
        output::version_entry(),
        kv("seed", seed),
        kv("eps_family", "0.6,1.2,1.8,2.4,3.0"),
        kv("hurst_family", "0.1,0.2,0.3,0.4,0.5"),
        kv("fbm_gamma", 2.0),
    ];
    for (i, &eps) in eps_family.iter().enumerate() {
        let p = ModelParams::new(eps, eps, 2.0, 1000)?;
        let ep = effective_params(&p);
        let cfg = SdeConfig {
            kappa: 0.05,
            y_min: 1e-2,
            y_max: 1e2,
            t_total: if fast { 12.0 } else { 120.0 },
            grid_dt: 1e-5,
            seed: seed + i as u64,
        };
        let meta = vec![
            kv("figure", "fig4"),
            kv("eps", eps),
            kv("beta_theory", ep.beta),
            kv("seed", cfg.seed),
        ];
        let y = simulate_y(&p, &cfg)?;
        let psd = estimate_psd(&y, 16)?;
        write_psd(
            &output::in_dir(dir, &format!("fig4a_sde_psd_eps{eps}.csv"))?,
            &psd,
            &meta,
        )?;
        let overlay = powerlaw_overlay(&psd_points(&psd), (100.0, 3000.0), ep.beta);
        write_overlay(
            &output::in_dir(dir, &format!("fig4a_theory_eps{eps}.csv"))?,
            overlay,
            &meta,
        )?;
        let durations = extract_durations(&y, 1.0);
        let pdf = duration_pdf(&durations, Some(DurationKind::Burst), 8)?;
        write_pdf(
            &output::in_dir(dir, &format!("fig4c_sde_bursts_eps{eps}.csv"))?,
            &pdf,
            &meta,
        )?;
        let overlay = powerlaw_overlay(&pdf_points(&pdf), (1e-4, 3e-3), 1.5);
        write_overlay(
            &output::in_dir(dir, &format!("fig4c_theory_eps{eps}.csv"))?,
            overlay,
            &meta,
        )?;
        manifest.push(kv(&format!("sde_seed_eps{eps}"), cfg.seed));
    }
    for (i, &h) in hurst_family.iter().enumerate() {
        let cfg = FbmConfig {
            hurst: h,
            gamma_damp: 2.0,
            dt: 2e-4,
            n_steps: if fast { 1 << 18 } else { 1 << 22 },
            seed: seed + 100 + i as u64,
        };
        let meta = vec![
            kv("figure", "fig4"),
            kv("hurst", h),
            kv("gamma", 2.0),
            kv("seed", cfg.seed),
        ];
        let s = simulate_fbm_biased(&cfg)?;
        let psd = estimate_psd(&s, 16)?;
        write_psd(
            &output::in_dir(dir, &format!("fig4b_fbm_psd_H{h}.csv"))?,
            &psd,
            &meta,
        )?;
        let overlay = powerlaw_overlay(&psd_points(&psd), (2.0, 200.0), 2.0 * h + 1.0);
        write_overlay(
            &output::in_dir(dir, &format!("fig4b_theory_H{h}.csv"))?,
            overlay,
            &meta,
        )?;
        let durations = extract_durations(&s, 0.0);
        let pdf = duration_pdf(&durations, Some(DurationKind::Burst), 8)?;
        write_pdf(
            &output::in_dir(dir, &format!("fig4d_fbm_bursts_H{h}.csv"))?,
            &pdf,
            &meta,
        )?;
        let overlay = powerlaw_overlay(&pdf_points(&pdf), (2e-3, 5e-2), 2.0 - h);
        write_overlay(
            &output::in_dir(dir, &format!("fig4d_theory_H{h}.csv"))?,
            overlay,
            &meta,
        )?;
        manifest.push(kv(&format!("fbm_seed_H{h}"), cfg.seed));
    }
    output::write_sidecar(&dir.join("fig4.meta"), &manifest)?;
    Ok(())
}

fn fig5(dir: &Path, seed: u64, fast: bool) -> Result<()> {
    let p = model_eps0();
    let ep = effective_params(&p);
    let cfg = SdeConfig {
        kappa: 0.05,
        y_min: 1e-2,
        y_max: 1e2,
        t_total: if fast { 3.0 } else { 30.0 },
        grid_dt: 1e-6,
        seed,
    };
    let meta = vec![
        kv("figure", "fig5"),
        output::version_entry(),
        kv("seed", seed),
        kv("t_total", cfg.t_total),
        kv("grid_dt", cfg.grid_dt),
    ];
    let y = simulate_y(&p, &cfg)?;
    for hx in [0.6, 0.7, 0.8, 0.9, 0.5, 0.4, 0.3, 0.2, 0.1] {
        let hy = to_y(hx)?;
        let durations = extract_durations(&y, hy);
        let mut tmeta = meta.clone();
        tmeta.push(kv("h_x", hx));
        tmeta.push(kv("threshold", hy));
        for (kind, tag) in [
            (DurationKind::Burst, "burst"),
            (DurationKind::InterBurst, "inter"),
        ] {
            let pdf = duration_pdf(&durations, Some(kind), 8)?;
            write_pdf(
                &output::in_dir(dir, &format!("fig5_h{hx}_{tag}.csv"))?,
                &pdf,
                &tmeta,
            )?;
            if kind == DurationKind::Burst {
                let guide = powerlaw_overlay(&pdf_points(&pdf), (1e-5, 1e-3), 1.5);
                write_overlay(
                    &output::in_dir(dir, &format!("fig5_h{hx}_guide.csv"))?,
                    guide,
                    &tmeta,
                )?;
                // full asymptotic shape, scaled to the measured density
                if let Ok(shape) = BurstPdfShape::new(hy.max(1.0 / hy), &ep) {
                    let pts = pdf_points(&pdf);
                    if let Some(&(ax, ay)) = pts.iter().find(|(x, y)| *x >= 1e-5 && *y > 0.0) {
                        let scale = ay / shape.density(ax)?;
                        let rows: Vec<Vec<f64>> = (0..80)
                            .map(|k| {
                                let t = 1e-5 * (10f64.powf(k as f64 / 16.0));
                                Ok(vec![t, scale * shape.density(t)?])
                            })
                            .collect::<Result<_>>()?;
                        write_overlay(
                            &output::in_dir(dir, &format!("fig5_h{hx}_theory.csv"))?,
                            rows,
                            &tmeta,
                        )?;
                    }
                }
            }
        }
    }
    output::write_sidecar(&dir.join("fig5.meta"), &meta)?;
    Ok(())
}

pub fn run(args: ReproduceArgs, layered: &Layered) -> Result<()> {
    let seed = layered.seed(args.seed)?;
    let dir = args
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{:?}", args.figure).to_lowercase()));
    match args.figure {
        Figure::Fig1 => fig1(&dir, seed, args.fast)?,
        Figure::Fig2 => fig2(&dir, seed, args.fast)?,
        Figure::Fig4 => fig4(&dir, seed, args.fast)?,
        Figure::Fig5 => fig5(&dir, seed, args.fast)?,
    }
    println!("{}", dir.display());
    Ok(())
}
