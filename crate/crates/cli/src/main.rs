//! `rsk-traj`: RSK insertion, limit curves, trajectory experiments and
//! acceptance checks from the command line.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rsk_trajectory::io::{CurveKind, Experiment, RunManifest};
use rsk_trajectory::limit_curves::LimitCurves;
use rsk_trajectory::trajectory::{ConvergenceConfig, TrajectoryConfig, DEFAULT_GRID_POINTS};
use rsk_trajectory::verify;

/// Environment variable consulted when `--seed` is absent.
const SEED_ENV: &str = "RSK_TRAJ_SEED";

#[derive(Parser)]
#[command(
    name = "rsk-traj",
    version,
    about = "Marked-box trajectories under RSK insertion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write the result here (atomically) plus `<out>.manifest.json`; stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Seed {
    /// Master seed; defaults to $RSK_TRAJ_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
}

impl Seed {
    fn resolve(&self) -> Result<u64> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .with_context(|| format!("{SEED_ENV}={v:?} is not an unsigned integer")),
            Err(_) => Ok(0),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    G,
    H,
}

#[derive(Subcommand)]
enum Command {
    /// Insertion and recording tableaux of a sequence.
    Rsk {
        /// Comma-separated distinct reals.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        seq: Vec<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Tabulate G on [xmin, xmax] or H on [tmin, tmax].
    Curve {
        #[arg(long, value_enum, ignore_case = true)]
        what: What,
        #[arg(long, alias = "xmin", allow_negative_numbers = true)]
        tmin: Option<f64>,
        #[arg(long, alias = "xmax", allow_negative_numbers = true)]
        tmax: Option<f64>,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Track the box holding w and compare the scaled position with H.
    Trajectory {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        w: f64,
        #[arg(long, default_value_t = 3.0)]
        tmax: f64,
        #[arg(long, default_value_t = 1)]
        stride: usize,
        #[command(flatten)]
        seed: Seed,
        #[command(flatten)]
        output: Output,
    },
    /// Sup and pointwise deviation statistics over many trials for each n.
    Converge {
        #[arg(long, value_delimiter = ',', default_value = "100,400,1600")]
        nlist: Vec<usize>,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0.5)]
        w: f64,
        #[arg(long, default_value_t = 3.0)]
        tmax: f64,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid_points: usize,
        /// Fixed T for the pointwise statistic.
        #[arg(long, default_value_t = 2.0)]
        pointwise_t: f64,
        #[command(flatten)]
        seed: Seed,
        #[command(flatten)]
        output: Output,
    },
    /// Error report of the large-T expansions of H against numerics.
    Asympt {
        /// Comma-separated T values, all ≥ 4; defaults to 4, 8, …, 512.
        #[arg(long, value_delimiter = ',')]
        tlist: Option<Vec<f64>>,
        #[command(flatten)]
        output: Output,
    },
    /// Run all acceptance criteria, one line each.
    Verify,
    /// Fraction of trials with w in the first column after ⌊T n²⌋ insertions.
    ProbeColumn {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        w: f64,
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
        tlist: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        seed: Seed,
        #[command(flatten)]
        output: Output,
    },
    /// Rerun an experiment from its manifest.
    Replay {
        manifest: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

fn check_w(w: f64) -> Result<()> {
    if !(w > 0.0 && w <= 1.0) {
        bail!("--w must lie in (0, 1], got {w}");
    }
    Ok(())
}

fn check_t(name: &str, t: f64) -> Result<()> {
    if !t.is_finite() || t < 1.0 {
        bail!("--{name} must be a finite value ≥ 1, got {t}");
    }
    Ok(())
}

/// An experiment, where to write it, and the curve settings to run it with.
type Plan<'a> = (Experiment, &'a Output, LimitCurves);

/// Builds the plan for a subcommand; `None` for `verify`.
fn plan(command: &Command) -> Result<Option<Plan<'_>>> {
    let curves = LimitCurves::default();
    let exp = match command {
        Command::Rsk { seq, output } => (Experiment::Rsk { seq: seq.clone() }, output),
        Command::Curve {
            what,
            tmin,
            tmax,
            points,
            output,
        } => {
            let (what, lo, hi) = match what {
                What::G => (CurveKind::G, tmin.unwrap_or(0.0), tmax.unwrap_or(1.0)),
                What::H => {
                    let (lo, hi) = (tmin.unwrap_or(1.0), tmax.unwrap_or(3.0));
                    check_t("tmin", lo)?;
                    (CurveKind::H, lo, hi)
                }
            };
            if lo.is_nan() || hi.is_nan() || lo > hi {
                bail!("--tmin must not exceed --tmax ({lo} > {hi})");
            }
            if matches!(what, CurveKind::G) && !(lo >= 0.0 && hi <= 1.0) {
                bail!("G is defined on [0, 1], got [{lo}, {hi}]");
            }
            (
                Experiment::Curve {
                    what,
                    min: lo,
                    max: hi,
                    points: *points,
                },
                output,
            )
        }
        Command::Trajectory {
            n,
            w,
            tmax,
            stride,
            seed,
            output,
        } => {
            check_w(*w)?;
            check_t("tmax", *tmax)?;
            let config = TrajectoryConfig {
                stride: *stride,
                ..TrajectoryConfig::new(*n, *w, *tmax, seed.resolve()?)
            };
            config.validate()?;
            (Experiment::Trajectory { config }, output)
        }
        Command::Converge {
            nlist,
            trials,
            w,
            tmax,
            eps,
            grid_points,
            pointwise_t,
            seed,
            output,
        } => {
            check_w(*w)?;
            check_t("tmax", *tmax)?;
            let config = ConvergenceConfig {
                n_list: nlist.clone(),
                trials: *trials,
                w: *w,
                t_max: *tmax,
                grid_points: *grid_points,
                eps: *eps,
                master_seed: seed.resolve()?,
                pointwise_t: *pointwise_t,
            };
            config.validate()?;
            (Experiment::Converge { config }, output)
        }
        Command::Asympt { tlist, output } => {
            let grid = tlist
                .clone()
                .unwrap_or_else(|| (0..8).map(|k| 4.0 * 2f64.powi(k)).collect());
            (Experiment::Asympt { grid }, output)
        }
        Command::ProbeColumn {
            n,
            w,
            tlist,
            trials,
            seed,
            output,
        } => {
            check_w(*w)?;
            let exp = Experiment::ProbeColumn {
                n: *n,
                w: *w,
                t_list: tlist.clone(),
                trials: *trials,
                seed: seed.resolve()?,
            };
            (exp, output)
        }
        Command::Replay { manifest, output } => {
            let text = std::fs::read_to_string(manifest)
                .with_context(|| format!("reading {}", manifest.display()))?;
            let m = RunManifest::from_json(&text)
                .with_context(|| format!("parsing {}", manifest.display()))?;
            return Ok(Some((m.experiment, output, LimitCurves::new(m.inversion)?)));
        }
        Command::Verify => return Ok(None),
    };
    Ok(Some((exp.0, exp.1, curves)))
}

/// Writes `contents` to `path` through a temporary file in the same directory.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating a file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn run(cli: Cli) -> Result<bool> {
    let Some((exp, output, curves)) = plan(&cli.command)? else {
        let results = verify::run_all();
        for r in &results {
            println!("{r}");
        }
        return Ok(results.iter().all(|r| r.passed));
    };
    let result = exp.run(&curves)?;
    let manifest = RunManifest::new(exp, &curves);
    match output.out.as_deref() {
        Some(path) => {
            write_atomic(path, &result)?;
            write_atomic(&manifest_path(path), &manifest.to_json()?)?;
        }
        None => {
            print!("{result}");
            eprintln!("manifest: {}", manifest.to_json_line()?);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
