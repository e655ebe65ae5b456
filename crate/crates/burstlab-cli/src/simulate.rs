//! `burstlab simulate` - trajectory generation with ensembles.

use crate::config::Layered;
use crate::output::{self, kv, Meta};
use burstlab::fbm::{simulate_fbm_biased_full, FbmConfig};
use burstlab::sde::SdeConfig;
use burstlab::traj::TrajFormat;
use burstlab::{Error, ModelParams, Result, TimeSeries};
use clap::{Args, ValueEnum};
use rayon::prelude::*;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    #[value(name = "sde-x")]
    SdeX,
    #[value(name = "sde-y")]
    SdeY,
    #[value(name = "agents")]
    Agents,
    #[value(name = "fbm")]
    Fbm,
}

impl Kind {
    fn tag(self) -> &'static str {
        match self {
            Kind::SdeX => "sde-x",
            Kind::SdeY => "sde-y",
            Kind::Agents => "agents",
            Kind::Fbm => "fbm",
        }
    }
}

#[derive(Args)]
pub struct SimulateArgs {
    /// Engine to run.
    #[arg(value_enum)]
    pub kind: Kind,

    // model parameters (sde-x, sde-y, agents)
    #[arg(long, allow_negative_numbers = true)]
    pub eps1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub n_agents: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub h_scale: Option<f64>,

    // integration controls
    #[arg(long, allow_negative_numbers = true)]
    pub t_total: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub grid_dt: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub y_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub y_max: Option<f64>,

    // fbm parameters
    #[arg(long, allow_negative_numbers = true)]
    pub hurst: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub n_steps: Option<usize>,

    // run controls
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of independent trajectories (seeds seed, seed+1, ...).
    #[arg(long)]
    pub ensemble: Option<usize>,
    /// Concurrent ensemble members.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Output format: csv or binary.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

struct Resolved {
    model: ModelParams,
    sde: SdeConfig,
    fbm: FbmConfig,
    format: TrajFormat,
    out_dir: PathBuf,
    ensemble: usize,
    jobs: usize,
    seed: u64,
}

fn resolve(args: &SimulateArgs, layered: &Layered) -> Result<Resolved> {
    let seed = layered.seed(args.seed)?;
    let model = ModelParams {
        eps1: layered.get("eps1", args.eps1, 0.0)?,
        eps2: layered.get("eps2", args.eps2, 0.0)?,
        alpha: layered.get("alpha", args.alpha, 2.0)?,
        n_agents: layered.get("n_agents", args.n_agents, 1000)?,
        h_scale: layered.get("h_scale", args.h_scale, 1.0)?,
    };
    let sde = SdeConfig {
        kappa: layered.get("kappa", args.kappa, 0.03)?,
        y_min: layered.get("y_min", args.y_min, 1e-5)?,
        y_max: layered.get("y_max", args.y_max, 1e5)?,
        t_total: layered.get("t_total", args.t_total, 100.0)?,
        grid_dt: layered.get("grid_dt", args.grid_dt, 1e-3)?,
        seed,
    };
    let fbm = FbmConfig {
        hurst: layered.get("hurst", args.hurst, 0.5)?,
        gamma_damp: layered.get("gamma", args.gamma, 2.0)?,
        dt: sde.grid_dt,
        n_steps: layered.get("n_steps", args.n_steps, 1 << 20)?,
        seed,
    };
    let format: TrajFormat = layered
        .get_string("format", args.format.as_deref(), "csv")
        .parse()?;
    let ensemble = layered.get("ensemble", args.ensemble, 1)?;
    if ensemble < 1 {
        return Err(Error::InvalidParameter("ensemble must be >= 1".into()));
    }
    let jobs = layered.get("jobs", args.jobs, 0)?; // 0: rayon default
    Ok(Resolved {
        model,
        sde,
        fbm,
        format,
        out_dir: args.out_dir.clone().unwrap_or_else(|| PathBuf::from(".")),
        ensemble,
        jobs,
        seed,
    })
}

fn base_meta(kind: Kind, r: &Resolved, seed: u64) -> Meta {
    let mut meta = vec![
        kv("kind", kind.tag()),
        output::version_entry(),
        kv("seed", seed),
    ];
    match kind {
        Kind::Fbm => {
            meta.push(kv("hurst", r.fbm.hurst));
            meta.push(kv("gamma", r.fbm.gamma_damp));
            meta.push(kv("grid_dt", r.fbm.dt));
            meta.push(kv("n_steps", r.fbm.n_steps));
        }
        _ => {
            meta.push(kv("eps1", r.model.eps1));
            meta.push(kv("eps2", r.model.eps2));
            meta.push(kv("alpha", r.model.alpha));
            meta.push(kv("n_agents", r.model.n_agents));
            meta.push(kv("h_scale", r.model.h_scale));
            meta.push(kv("t_total", r.sde.t_total));
            meta.push(kv("grid_dt", r.sde.grid_dt));
            if kind != Kind::Agents {
                meta.push(kv("kappa", r.sde.kappa));
                meta.push(kv("y_min", r.sde.y_min));
                meta.push(kv("y_max", r.sde.y_max));
            }
        }
    }
    meta
}

fn run_one(kind: Kind, r: &Resolved, seed: u64) -> Result<(TimeSeries, Meta)> {
    let mut meta = base_meta(kind, r, seed);
    let series = match kind {
        Kind::SdeX => burstlab::sde::simulate_x(&r.model, &SdeConfig { seed, ..r.sde })?,
        Kind::SdeY => burstlab::sde::simulate_y(&r.model, &SdeConfig { seed, ..r.sde })?,
        Kind::Agents => burstlab::agents::simulate_agents(
            &r.model,
            r.sde.t_total,
            r.sde.grid_dt,
            seed,
        )?,
        Kind::Fbm => {
            let out = simulate_fbm_biased_full(&FbmConfig { seed, ..r.fbm })?;
            meta.push(kv("fgn_clipped_fraction", out.clipped_fraction));
            if out.clipped_fraction > 0.01 {
                eprintln!(
                    "warning: fGn eigenvalue clipping fraction {:.3} exceeds 1%",
                    out.clipped_fraction
                );
            }
            out.series
        }
    };
    meta.push(kv("n_samples", series.len()));
    Ok((series, meta))
}

fn write_outputs(kind: Kind, r: &Resolved, seed: u64, dir: &Path) -> Result<PathBuf> {
    let (series, meta) = run_one(kind, r, seed)?;
    let ext = match r.format {
        TrajFormat::Csv => "csv",
        TrajFormat::Binary => "traj",
    };
    let stem = format!("{}_seed{}", kind.tag(), seed);
    let traj_path = output::in_dir(dir, &format!("{stem}.{ext}"))?;
    burstlab::traj::save(&traj_path, &series, r.format, &meta)?;
    output::write_sidecar(&dir.join(format!("{stem}.meta")), &meta)?;
    Ok(traj_path)
}

pub fn run(args: SimulateArgs, layered: &Layered) -> Result<()> {
    let r = resolve(&args, layered)?;
    let seeds: Vec<u64> = (0..r.ensemble as u64).map(|i| r.seed + i).collect();
    if matches!(args.kind, Kind::SdeX | Kind::SdeY) && r.sde.kappa > 0.1 {
        eprintln!(
            "warning: kappa = {} is above 0.1; step accuracy degrades",
            r.sde.kappa
        );
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(r.jobs)
        .build()
        .map_err(|e| Error::Numeric(format!("thread pool: {e}")))?;
    let results: Vec<Result<PathBuf>> = pool.install(|| {
        seeds
            .par_iter()
            .map(|&seed| write_outputs(args.kind, &r, seed, &r.out_dir))
            .collect()
    });
    for res in results {
        let path = res?;
        println!("{}", path.display());
    }
    Ok(())
}
