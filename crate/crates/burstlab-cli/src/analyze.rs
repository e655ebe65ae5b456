//! `burstlab analyze` - estimators over trajectory and result files.

use crate::config::Layered;
use crate::output::{self, kv, Meta};
use burstlab::model::to_y;
use burstlab::stats::binning::{log_binned_pdf, LogBinnedPdf};
use burstlab::stats::bursts::{extract_durations, DurationKind};
use burstlab::stats::fit::{fit_powerlaw, fit_powerlaw_psd};
use burstlab::stats::psd::{estimate_psd, PsdEstimate};
use burstlab::{Error, Result, TimeSeries};
use clap::{Args, Subcommand};
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Args)]
pub struct AnalyzeArgs {
    #[command(subcommand)]
    pub task: Task,
}

#[derive(Subcommand)]
pub enum Task {
    /// Segment-averaged periodogram of a trajectory.
    Psd {
        input: PathBuf,
        #[arg(long)]
        segments: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Log-binned PDF of trajectory values or of extracted durations.
    Pdf {
        input: PathBuf,
        #[arg(long)]
        bins_per_decade: Option<u32>,
        /// For durations input: burst, interburst or both.
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Threshold-crossing burst/inter-burst extraction.
    Bursts {
        input: PathBuf,
        /// Threshold in the series' own units.
        #[arg(long, conflicts_with = "threshold_x", allow_negative_numbers = true)]
        threshold: Option<f64>,
        /// Threshold in occupancy units; converted with y = x/(1-x) for
        /// ratio-coordinate trajectories.
        #[arg(long, allow_negative_numbers = true)]
        threshold_x: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Power-law fit over a window of a psd or pdf result file.
    Fit {
        input: PathBuf,
        /// Window as two values: lower and upper edge.
        #[arg(long, num_args = 2, required = true, allow_negative_numbers = true)]
        window: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_traj(path: &Path) -> Result<(TimeSeries, Meta, Meta)> {
    let (series, meta) = burstlab::traj::load(path)?;
    let mut base = vec![
        kv("input", path.display()),
        kv("input_sha256", output::file_sha256(path)?),
        output::version_entry(),
    ];
    for key in ["kind", "seed"] {
        if let Some(v) = output::meta_value(&meta, key) {
            base.push(kv(&format!("source_{key}"), v));
        }
    }
    Ok((series, meta, base))
}

/// Resolve a threshold, converting occupancy thresholds for y-trajectories.
pub fn resolve_threshold(
    threshold: Option<f64>,
    threshold_x: Option<f64>,
    source_kind: Option<&str>,
) -> Result<f64> {
    match (threshold, threshold_x) {
        (Some(t), None) => Ok(t),
        (None, Some(hx)) => match source_kind {
            Some("sde-y") => to_y(hx),
            Some("sde-x") | Some("agents") => Ok(hx),
            other => Err(Error::InvalidParameter(format!(
                "--threshold-x needs a trajectory in model coordinates; \
                 input kind is {:?}, use --threshold instead",
                other.unwrap_or("unknown")
            ))),
        },
        (None, None) => Err(Error::InvalidParameter(
            "one of --threshold or --threshold-x is required".into(),
        )),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    }
}

fn emit(path: Option<PathBuf>, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let file = std::fs::File::create(&p)?;
            let mut w = std::io::BufWriter::new(file);
            write(&mut w)?;
            w.flush()?;
            println!("{}", p.display());
            Ok(())
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)
        }
    }
}

pub const PSD_TITLE: &str = "burstlab psd v1";
pub const PDF_TITLE: &str = "burstlab pdf v1";
pub const DURATIONS_TITLE: &str = "burstlab durations v1";
pub const FIT_TITLE: &str = "burstlab fit v1";

pub fn write_psd_to(w: &mut dyn Write, psd: &PsdEstimate, meta: &Meta) -> Result<()> {
    let mut meta = meta.clone();
    meta.push(kv("n_segments", psd.n_segments));
    output::write_table_to(
        w,
        PSD_TITLE,
        &meta,
        &["freq", "power"],
        psd.freqs
            .iter()
            .zip(&psd.power)
            .map(|(&f, &p)| vec![f, p]),
    )
}

pub fn write_psd(path: &Path, psd: &PsdEstimate, meta: &Meta) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    write_psd_to(&mut w, psd, meta)
}

pub fn write_pdf_to(w: &mut dyn Write, pdf: &LogBinnedPdf, meta: &Meta) -> Result<()> {
    output::write_table_to(
        w,
        PDF_TITLE,
        meta,
        &["bin_lo", "bin_hi", "density", "count"],
        (0..pdf.len()).map(|i| {
            vec![
                pdf.bin_lo[i],
                pdf.bin_hi[i],
                pdf.density[i],
                pdf.count[i] as f64,
            ]
        }),
    )
}

pub fn write_pdf(path: &Path, pdf: &LogBinnedPdf, meta: &Meta) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    write_pdf_to(&mut w, pdf, meta)
}

fn parse_kind(kind: Option<&str>) -> Result<Option<DurationKind>> {
    match kind.unwrap_or("both") {
        "burst" => Ok(Some(DurationKind::Burst)),
        "interburst" | "inter-burst" => Ok(Some(DurationKind::InterBurst)),
        "both" => Ok(None),
        other => Err(Error::InvalidParameter(format!(
            "unknown duration kind '{other}'"
        ))),
    }
}

pub fn run(args: AnalyzeArgs, layered: &Layered) -> Result<()> {
    match args.task {
        Task::Psd {
            input,
            segments,
            out,
        } => {
            let (series, _, meta) = load_traj(&input)?;
            let segments = layered.get("segments", segments, 16)?;
            let psd = estimate_psd(&series, segments)?;
            emit(out, |w| write_psd_to(w, &psd, &meta))
        }
        Task::Pdf {
            input,
            bins_per_decade,
            kind,
            out,
        } => {
            let bpd = layered.get("bins_per_decade", bins_per_decade, 8)?;
            // durations table or trajectory?
            let as_table = output::read_table(&input);
            let (pdf, meta) = match as_table {
                Ok((title, tmeta, rows)) if title == DURATIONS_TITLE => {
                    let want = parse_kind(kind.as_deref())?;
                    let durations: Vec<f64> = rows
                        .iter()
                        .filter(|r| match want {
                            None => true,
                            Some(DurationKind::Burst) => r[0] == 1.0,
                            Some(DurationKind::InterBurst) => r[0] == 0.0,
                        })
                        .map(|r| r[3])
                        .collect();
                    if durations.len() < 100 {
                        eprintln!(
                            "warning: only {} durations of the requested kind; \
                             the PDF estimate will be noisy",
                            durations.len()
                        );
                    }
                    let mut meta = vec![
                        kv("input", input.display()),
                        kv("input_sha256", output::file_sha256(&input)?),
                        output::version_entry(),
                        kv("kind_filter", kind.as_deref().unwrap_or("both")),
                    ];
                    if let Some(t) = output::meta_value(&tmeta, "threshold") {
                        meta.push(kv("threshold", t));
                    }
                    (log_binned_pdf(&durations, bpd)?, meta)
                }
                _ => {
                    let (series, _, meta) = load_traj(&input)?;
                    (log_binned_pdf(series.values(), bpd)?, meta)
                }
            };
            emit(out, |w| write_pdf_to(w, &pdf, &meta))
        }
        Task::Bursts {
            input,
            threshold,
            threshold_x,
            out,
        } => {
            let (series, smeta, mut meta) = load_traj(&input)?;
            let thr = resolve_threshold(
                threshold,
                threshold_x,
                output::meta_value(&smeta, "kind"),
            )?;
            let durations = extract_durations(&series, thr);
            meta.push(kv("threshold", thr));
            meta.push(kv("n_durations", durations.len()));
            emit(out, |w| {
                output::write_table_to(
                    w,
                    DURATIONS_TITLE,
                    &meta,
                    &["is_burst", "t_start", "t_end", "duration"],
                    durations.iter().map(|d| {
                        vec![
                            (d.kind == DurationKind::Burst) as u8 as f64,
                            d.t_start,
                            d.t_end,
                            d.duration(),
                        ]
                    }),
                )
            })
        }
        Task::Fit { input, window, out } => {
            let (title, tmeta, rows) = output::read_table(&input)?;
            let w = (window[0], window[1]);
            let fit = match title.as_str() {
                PSD_TITLE => {
                    let psd = PsdEstimate {
                        freqs: rows.iter().map(|r| r[0]).collect(),
                        power: rows.iter().map(|r| r[1]).collect(),
                        n_segments: 1,
                    };
                    fit_powerlaw_psd(&psd, w)?
                }
                PDF_TITLE => {
                    let pdf = LogBinnedPdf {
                        bin_lo: rows.iter().map(|r| r[0]).collect(),
                        bin_hi: rows.iter().map(|r| r[1]).collect(),
                        density: rows.iter().map(|r| r[2]).collect(),
                        count: rows.iter().map(|r| r[3] as u64).collect(),
                    };
                    fit_powerlaw(&pdf, w)?
                }
                other => {
                    return Err(Error::Format(format!(
                        "fit expects a psd or pdf result file, found '{other}'"
                    )))
                }
            };
            let mut meta = vec![
                kv("input", input.display()),
                kv("input_sha256", output::file_sha256(&input)?),
                output::version_entry(),
            ];
            if let Some(t) = output::meta_value(&tmeta, "threshold") {
                meta.push(kv("threshold", t));
            }
            emit(out, |w| {
                output::write_table_to(
                    w,
                    FIT_TITLE,
                    &meta,
                    &["exponent", "stderr", "fit_lo", "fit_hi", "n_points"],
                    std::iter::once(vec![
                        fit.exponent,
                        fit.stderr,
                        fit.fit_lo,
                        fit.fit_hi,
                        fit.n_points as f64,
                    ]),
                )
            })
        }
    }
}
