//! CSV records, run manifests, and replayable experiment descriptions.
//!
//! Floats are written with 17 significant digits so every record read back
//! from a file equals the one written. A [`RunManifest`] holds everything
//! needed to regenerate an output byte for byte.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asymptotics::{series_error_report, AsymptoticsError, ErrorRow};
use crate::limit_curves::{CurveError, InversionConfig, LimitCurves};
use crate::random_model::PRNG_NAME;
use crate::tableau::{rsk, TableauError};
use crate::trajectory::{
    convergence_experiment, first_column_probe, probe_steps, track_trajectory, ConvergenceConfig,
    ConvergenceRow, TrajectoryConfig, TrajectoryError, NORM,
};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
    #[error(transparent)]
    Asymptotics(#[from] AsymptoticsError),
}

pub type Result<T> = std::result::Result<T, IoError>;

/// Scientific notation with 17 significant digits; parses back to the same bits.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A row type with a fixed CSV header.
pub trait CsvRecord: Serialize + DeserializeOwned {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

pub fn write_csv<R: CsvRecord>(rows: &[R]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(R::HEADER)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    let bytes = w.into_inner().map_err(|e| IoError::Params(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV fields are ASCII"))
}

pub fn read_csv<R: CsvRecord>(text: &str) -> Result<Vec<R>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != R::HEADER {
        return Err(IoError::Params(format!(
            "unexpected header {header:?}, want {:?}",
            R::HEADER
        )));
    }
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    /// `x` for `G`, `T` for `H`.
    pub arg: f64,
    pub x: f64,
    pub y: f64,
}

impl CsvRecord for CurveRow {
    const HEADER: &'static [&'static str] = &["arg", "x", "y"];
    fn fields(&self) -> Vec<String> {
        vec![format_f64(self.arg), format_f64(self.x), format_f64(self.y)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub j: usize,
    #[serde(rename = "T")]
    pub t: f64,
    pub row: usize,
    pub col: usize,
    pub scaled_x: f64,
    pub scaled_y: f64,
    #[serde(rename = "Hx")]
    pub hx: f64,
    #[serde(rename = "Hy")]
    pub hy: f64,
    pub dev: f64,
}

impl CsvRecord for TrajectoryRow {
    const HEADER: &'static [&'static str] = &[
        "j", "T", "row", "col", "scaled_x", "scaled_y", "Hx", "Hy", "dev",
    ];
    fn fields(&self) -> Vec<String> {
        vec![
            self.j.to_string(),
            format_f64(self.t),
            self.row.to_string(),
            self.col.to_string(),
            format_f64(self.scaled_x),
            format_f64(self.scaled_y),
            format_f64(self.hx),
            format_f64(self.hy),
            format_f64(self.dev),
        ]
    }
}

impl CsvRecord for ConvergenceRow {
    const HEADER: &'static [&'static str] = &[
        "n",
        "trials",
        "median_sup",
        "p90_sup",
        "mean_sup",
        "exceed_fraction",
        "median_pointwise",
        "pointwise_exceed_fraction",
    ];
    fn fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.trials.to_string(),
            format_f64(self.median_sup),
            format_f64(self.p90_sup),
            format_f64(self.mean_sup),
            format_f64(self.exceed_fraction),
            format_f64(self.median_pointwise),
            format_f64(self.pointwise_exceed_fraction),
        ]
    }
}

impl CsvRecord for ErrorRow {
    const HEADER: &'static [&'static str] = &[
        "t",
        "h1_numeric",
        "h1_series",
        "h1_abs_err",
        "h1_scaled_err",
        "h2_numeric",
        "h2_series",
        "h2_abs_err",
        "h2_scaled_err",
    ];
    fn fields(&self) -> Vec<String> {
        [
            self.t,
            self.h1_numeric,
            self.h1_series,
            self.h1_abs_err,
            self.h1_scaled_err,
            self.h2_numeric,
            self.h2_series,
            self.h2_abs_err,
            self.h2_scaled_err,
        ]
        .into_iter()
        .map(format_f64)
        .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    #[serde(rename = "T")]
    pub t: f64,
    pub steps: usize,
    pub trials: usize,
    pub fraction: f64,
}

impl CsvRecord for ProbeRow {
    const HEADER: &'static [&'static str] = &["T", "steps", "trials", "fraction"];
    fn fields(&self) -> Vec<String> {
        vec![
            format_f64(self.t),
            self.steps.to_string(),
            self.trials.to_string(),
            format_f64(self.fraction),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveKind {
    G,
    H,
}

/// One runnable experiment with its full parameter set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Experiment {
    Rsk {
        seq: Vec<f64>,
    },
    Curve {
        what: CurveKind,
        min: f64,
        max: f64,
        points: usize,
    },
    Trajectory {
        config: TrajectoryConfig,
    },
    Converge {
        config: ConvergenceConfig,
    },
    Asympt {
        grid: Vec<f64>,
    },
    ProbeColumn {
        n: usize,
        w: f64,
        t_list: Vec<f64>,
        trials: usize,
        seed: u64,
    },
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Rsk { .. } => "rsk",
            Experiment::Curve { .. } => "curve",
            Experiment::Trajectory { .. } => "trajectory",
            Experiment::Converge { .. } => "converge",
            Experiment::Asympt { .. } => "asympt",
            Experiment::ProbeColumn { .. } => "probe-column",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Experiment::Trajectory { config } => Some(config.seed),
            Experiment::Converge { config } => Some(config.master_seed),
            Experiment::ProbeColumn { seed, .. } => Some(*seed),
            _ => None,
        }
    }

    /// The `T` (or `x`) grid the experiment evaluates on, if any.
    pub fn grid(&self) -> Option<Vec<f64>> {
        match self {
            Experiment::Curve {
                min, max, points, ..
            } => Some(linspace(*min, *max, *points)),
            Experiment::Converge { config } => Some(config.grid()),
            Experiment::Asympt { grid } => Some(grid.clone()),
            Experiment::ProbeColumn { t_list, .. } => Some(t_list.clone()),
            _ => None,
        }
    }

    /// Runs the experiment and renders its output (CSV, or text for `rsk`).
    pub fn run(&self, curves: &LimitCurves) -> Result<String> {
        match self {
            Experiment::Rsk { seq } => {
                let (p, q) = rsk(seq)?;
                Ok(format!("P={p}\nQ={q}\n"))
            }
            Experiment::Curve {
                what,
                min,
                max,
                points,
            } => write_csv(&curve_rows(*what, *min, *max, *points, curves)?),
            Experiment::Trajectory { config } => write_csv(&trajectory_rows(config, curves)?),
            Experiment::Converge { config } => write_csv(&convergence_experiment(config, curves)?),
            Experiment::Asympt { grid } => write_csv(&series_error_report(grid, curves)?),
            Experiment::ProbeColumn {
                n,
                w,
                t_list,
                trials,
                seed,
            } => {
                let rows = t_list
                    .iter()
                    .map(|&t| {
                        Ok(ProbeRow {
                            t,
                            steps: probe_steps(*n, t),
                            trials: *trials,
                            fraction: first_column_probe(*n, *w, t, *trials, *seed)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                write_csv(&rows)
            }
        }
    }
}

/// `points` equally spaced values from `min` to `max`.
pub fn linspace(min: f64, max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![min],
        _ => (0..points)
            .map(|i| min + (max - min) * i as f64 / (points - 1) as f64)
            .collect(),
    }
}

pub fn curve_rows(
    what: CurveKind,
    min: f64,
    max: f64,
    points: usize,
    curves: &LimitCurves,
) -> Result<Vec<CurveRow>> {
    if min.is_nan() || max.is_nan() || min > max {
        return Err(IoError::Params(format!(
            "need min ≤ max, got {min} > {max}"
        )));
    }
    linspace(min, max, points)
        .into_iter()
        .map(|arg| {
            let p = match what {
                CurveKind::G => curves.g(arg)?,
                CurveKind::H => curves.h(arg)?,
            };
            Ok(CurveRow {
                arg,
                x: p.x,
                y: p.y,
            })
        })
        .collect()
}

/// Every recorded step of the trajectory with its scaled position and deviation from `H`.
pub fn trajectory_rows(cfg: &TrajectoryConfig, curves: &LimitCurves) -> Result<Vec<TrajectoryRow>> {
    let traj = track_trajectory(cfg)?;
    traj.points
        .iter()
        .map(|p| {
            let t = p.step as f64 / cfg.n as f64;
            let scaled = traj.scaled(p.position);
            let h = curves.h(t)?;
            Ok(TrajectoryRow {
                j: p.step,
                t,
                row: p.position.row,
                col: p.position.column,
                scaled_x: scaled.x,
                scaled_y: scaled.y,
                hx: h.x,
                hy: h.y,
                dev: scaled.distance(h),
            })
        })
        .collect()
}

/// Everything needed to regenerate an output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub experiment: Experiment,
    pub seed: Option<u64>,
    pub prng: String,
    pub version: String,
    pub grid: Option<Vec<f64>>,
    pub norm: String,
    pub inversion: InversionConfig,
}

impl RunManifest {
    pub fn new(experiment: Experiment, curves: &LimitCurves) -> Self {
        RunManifest {
            subcommand: experiment.name().to_owned(),
            seed: experiment.seed(),
            grid: experiment.grid(),
            prng: PRNG_NAME.to_owned(),
            version: ARTIFACT_VERSION.to_owned(),
            norm: NORM.to_owned(),
            inversion: curves.inversion,
            experiment,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Single-line form, for logs.
    pub fn to_json_line(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: RunManifest = serde_json::from_str(text)?;
        if m.subcommand != m.experiment.name() {
            return Err(IoError::Params(format!(
                "manifest subcommand {} does not match experiment {}",
                m.subcommand,
                m.experiment.name()
            )));
        }
        Ok(m)
    }

    /// Reruns the recorded experiment with the recorded inversion settings.
    pub fn replay(&self) -> Result<String> {
        let curves = LimitCurves::new(self.inversion)?;
        self.experiment.run(&curves)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [
            0.1,
            1.0 / 3.0,
            -2.0,
            1e-300,
            f64::MAX,
            0.0,
            2.0 / std::f64::consts::PI,
        ] {
            let s = format_f64(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(format_f64(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn rsk_output() {
        let out = Experiment::Rsk {
            seq: vec![3.0, 1.0, 2.0],
        }
        .run(&LimitCurves::default())
        .unwrap();
        assert_eq!(out, "P=[[1,2],[3]]\nQ=[[1,3],[2]]\n");
    }

    #[test]
    fn curve_rows_round_trip() {
        let rows = curve_rows(CurveKind::H, 1.0, 3.0, 201, &LimitCurves::default()).unwrap();
        assert_eq!(rows.len(), 201);
        assert!(rows.windows(2).all(|w| w[1].x < w[0].x && w[1].y > w[0].y));
        let text = write_csv(&rows).unwrap();
        assert_eq!(read_csv::<CurveRow>(&text).unwrap(), rows);
    }

    #[test]
    fn trajectory_rows_round_trip() {
        let cfg = TrajectoryConfig::new(50, 0.5, 2.0, 11);
        let rows = trajectory_rows(&cfg, &LimitCurves::default()).unwrap();
        assert_eq!(rows.first().unwrap().j, 50);
        assert_eq!(rows.last().unwrap().j, 100);
        let text = write_csv(&rows).unwrap();
        assert!(text.starts_with("j,T,row,col,scaled_x,scaled_y,Hx,Hy,dev\n"));
        assert_eq!(read_csv::<TrajectoryRow>(&text).unwrap(), rows);
        assert!(read_csv::<CurveRow>(&text).is_err());
    }

    #[test]
    fn manifest_replays_bitwise() {
        let curves = LimitCurves::default();
        let exp = Experiment::Trajectory {
            config: TrajectoryConfig::new(40, 0.7, 3.0, 2),
        };
        let out = exp.run(&curves).unwrap();
        let manifest = RunManifest::new(exp, &curves);
        assert_eq!(manifest.seed, Some(2));
        let back = RunManifest::from_json(&manifest.to_json().unwrap()).unwrap();
        assert_eq!(back, manifest);
        assert_eq!(back.replay().unwrap(), out);
    }

    #[test]
    fn manifest_rejects_mismatched_subcommand() {
        let curves = LimitCurves::default();
        let mut m = RunManifest::new(Experiment::Asympt { grid: vec![4.0] }, &curves);
        m.subcommand = "rsk".into();
        assert!(RunManifest::from_json(&m.to_json().unwrap()).is_err());
    }

    #[test]
    fn empty_asympt_grid_gives_header_only() {
        let out = Experiment::Asympt { grid: vec![] }
            .run(&LimitCurves::default())
            .unwrap();
        assert_eq!(out.lines().count(), 1);
    }
}
