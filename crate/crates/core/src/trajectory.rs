//! Trajectory of a marked value `w` through repeated row insertion.
//!
//! The input is `X₁, …, X_n, w, X_{n+1}, …, X_m` with `X_j` i.i.d. uniform
//! on `(0, 1)` and `m = ⌊T_max · n⌋`. Values above `w` never move the box
//! holding `w`, so the simulation inserts only the values below `w`; the
//! unfiltered path exists to check that equivalence.
//!
//! Positions are scaled by `1/√(wn)` and compared with `H(T)` in the plane
//! frame of [`BoxPosition::to_point`] (column first) under the Euclidean norm.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::limit_curves::{CurveError, CurvePoint, LimitCurves};
use crate::random_model::{
    filter_below, order_statistics, rank_permutation, uniform_sequence_avoiding, RandomModelError,
    SeededStream,
};
use crate::tableau::{rsk, BoxPosition, Permutation, Tableau, TableauError};

/// Norm used for every deviation; recorded in run manifests.
pub const NORM: &str = "euclidean";

/// Default number of grid points for the sup statistic.
pub const DEFAULT_GRID_POINTS: usize = 21;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrajectoryError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("T = {t} maps to step {step}, outside the recorded steps {first}..={last}")]
    OutsideRecording {
        t: f64,
        step: usize,
        first: usize,
        last: usize,
    },
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error(transparent)]
    Random(#[from] RandomModelError),
}

pub type Result<T> = std::result::Result<T, TrajectoryError>;

fn default_stride() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryConfig {
    /// Number of values inserted before `w`.
    pub n: usize,
    pub w: f64,
    /// Last time ratio `T = j / n` simulated.
    pub t_max: f64,
    pub seed: u64,
    /// ChaCha stream within `seed`; experiments give every trial its own.
    #[serde(default)]
    pub stream: u64,
    #[serde(default = "default_stride")]
    pub stride: usize,
}

impl TrajectoryConfig {
    pub fn new(n: usize, w: f64, t_max: f64, seed: u64) -> Self {
        TrajectoryConfig {
            n,
            w,
            t_max,
            seed,
            stream: 0,
            stride: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(TrajectoryError::Config("n must be at least 1".into()));
        }
        if !(self.w > 0.0 && self.w <= 1.0) {
            return Err(TrajectoryError::Config(format!(
                "w = {} outside (0, 1]",
                self.w
            )));
        }
        if !self.t_max.is_finite() || self.t_max < 1.0 {
            return Err(TrajectoryError::Config(format!(
                "T_max = {} below 1",
                self.t_max
            )));
        }
        if self.stride == 0 {
            return Err(TrajectoryError::Config("stride must be at least 1".into()));
        }
        Ok(())
    }

    /// Total number of random values, `⌊T_max · n⌋`.
    pub fn total_steps(&self) -> usize {
        step_at(self.t_max, self.n)
    }

    /// The random values `X₁, …, X_m`; never equal to `w`.
    pub fn input(&self) -> Vec<f64> {
        let mut stream =
            SeededStream::with_stream(self.seed, self.stream, 0.0, 1.0).expect("unit interval");
        uniform_sequence_avoiding(self.total_steps(), &mut stream, &[self.w])
    }
}

/// `⌊T n⌋`, read with a relative slack of a few ulps so that a grid value
/// such as `2.2999999999999998` standing for `2.3` maps to step `2.3 n`.
pub fn step_at(t: f64, n: usize) -> usize {
    let exact = t * n as f64;
    (exact + 8.0 * f64::EPSILON * exact.abs()).floor() as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    /// Number of `X` values inserted so far.
    pub step: usize,
    pub position: BoxPosition,
}

/// Recorded positions of the box holding `w`, starting right after `w` is inserted (step `n`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub n: usize,
    pub w: f64,
    pub points: Vec<TrajectoryPoint>,
}

impl Trajectory {
    /// Position at `step`, from the last recorded point not after it.
    pub fn position_at(&self, step: usize) -> Option<BoxPosition> {
        let idx = self.points.partition_point(|p| p.step <= step);
        if idx == 0 || step > self.points.last()?.step {
            return None;
        }
        Some(self.points[idx - 1].position)
    }

    /// `Pos_n(j) / √(wn)` as a point of the plane.
    pub fn scaled(&self, position: BoxPosition) -> CurvePoint {
        (1.0 / (self.w * self.n as f64).sqrt()) * position.to_point()
    }
}

/// Moves `marked` along with a row insertion: when the route passes through
/// the marked cell, the marked value continues to the next route cell.
struct MarkedBox {
    position: BoxPosition,
    bumped: bool,
}

impl MarkedBox {
    fn visit(&mut self, cell: BoxPosition) {
        if self.bumped {
            self.position = cell;
            self.bumped = false;
        } else if cell == self.position {
            self.bumped = true;
        }
    }
}

fn record(
    points: &mut Vec<TrajectoryPoint>,
    step: usize,
    n: usize,
    last: usize,
    stride: usize,
    position: BoxPosition,
) {
    if (step - n).is_multiple_of(stride) || step == last {
        points.push(TrajectoryPoint { step, position });
    }
}

fn track(xs: &[f64], n: usize, w: f64, stride: usize, keep: impl Fn(f64) -> bool) -> Trajectory {
    let m = xs.len();
    let mut tab = Tableau::new();
    for &x in xs[..n].iter().filter(|&&x| keep(x)) {
        tab.insert_unchecked(x, |_| {});
    }
    // w lands in the first route cell; it is a corner only when w is the maximum
    let mut first = None;
    tab.insert_unchecked(w, |cell| {
        first.get_or_insert(cell);
    });
    let mut marked = MarkedBox {
        position: first.expect("route is nonempty"),
        bumped: false,
    };
    let mut points = Vec::with_capacity((m - n) / stride + 2);
    record(&mut points, n, n, m, stride, marked.position);
    for (j, &x) in xs.iter().enumerate().skip(n).map(|(i, x)| (i + 1, x)) {
        if keep(x) {
            tab.insert_unchecked(x, |cell| marked.visit(cell));
        }
        record(&mut points, j, n, m, stride, marked.position);
    }
    Trajectory { n, w, points }
}

/// Tracks `w` inserting only the values below it.
pub fn track_trajectory(cfg: &TrajectoryConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let w = cfg.w;
    Ok(track(&cfg.input(), cfg.n, w, cfg.stride, |x| x < w))
}

/// Tracks `w` inserting every value. Same law, slower; kept for the equivalence check.
pub fn track_trajectory_unfiltered(cfg: &TrajectoryConfig) -> Result<Trajectory> {
    cfg.validate()?;
    Ok(track(&cfg.input(), cfg.n, cfg.w, cfg.stride, |_| true))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationStat {
    pub sup_dev: f64,
    pub argmax_t: f64,
    /// `(T, ‖Pos_n(⌊Tn⌋)/√(wn) − H(T)‖)` for every grid point.
    pub pointwise: Vec<(f64, f64)>,
}

/// `n` equally spaced points on `[1, t_max]`.
pub fn uniform_grid(t_max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![1.0],
        _ => (0..points)
            .map(|i| 1.0 + (t_max - 1.0) * i as f64 / (points - 1) as f64)
            .collect(),
    }
}

/// Deviation of the scaled trajectory from `H` over `grid`.
pub fn scaled_deviation(
    traj: &Trajectory,
    grid: &[f64],
    curves: &LimitCurves,
) -> Result<DeviationStat> {
    let first = traj.points.first().map_or(0, |p| p.step);
    let last = traj.points.last().map_or(0, |p| p.step);
    let mut pointwise = Vec::with_capacity(grid.len());
    for &t in grid {
        let step = step_at(t, traj.n);
        let pos = match traj.position_at(step) {
            Some(p) if t >= 1.0 => p,
            _ => {
                return Err(TrajectoryError::OutsideRecording {
                    t,
                    step,
                    first,
                    last,
                })
            }
        };
        let dev = traj.scaled(pos).distance(curves.h(t)?);
        pointwise.push((t, dev));
    }
    let (argmax_t, sup_dev) = pointwise
        .iter()
        .copied()
        .fold((f64::NAN, 0.0), |best, (t, d)| {
            if d > best.1 || best.0.is_nan() {
                (t, d)
            } else {
                best
            }
        });
    Ok(DeviationStat {
        sup_dev,
        argmax_t,
        pointwise,
    })
}

/// Parameters of the uniform-convergence experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceConfig {
    pub n_list: Vec<usize>,
    pub trials: usize,
    pub w: f64,
    pub t_max: f64,
    pub grid_points: usize,
    pub eps: f64,
    pub master_seed: u64,
    /// Fixed `T` for the pointwise statistic.
    pub pointwise_t: f64,
}

impl ConvergenceConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_list.is_empty() || self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(TrajectoryError::Config(
                "n list must be nonempty and strictly ascending".into(),
            ));
        }
        if self.trials == 0 {
            return Err(TrajectoryError::Config(
                "at least one trial is required".into(),
            ));
        }
        if self.grid_points == 0 {
            return Err(TrajectoryError::Config(
                "grid needs at least one point".into(),
            ));
        }
        if !(self.pointwise_t >= 1.0 && self.pointwise_t <= self.t_max) {
            return Err(TrajectoryError::Config(format!(
                "pointwise T = {} outside [1, {}]",
                self.pointwise_t, self.t_max
            )));
        }
        TrajectoryConfig::new(self.n_list[0], self.w, self.t_max, 0).validate()
    }

    pub fn grid(&self) -> Vec<f64> {
        uniform_grid(self.t_max, self.grid_points)
    }

    /// Stream id of trial `trial` at the `index`-th entry of `n_list`.
    pub fn stream_id(index: usize, trial: usize) -> u64 {
        ((index as u64) << 32) | trial as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub trials: usize,
    pub median_sup: f64,
    pub p90_sup: f64,
    pub mean_sup: f64,
    /// Fraction of trials with `sup_dev > eps`.
    pub exceed_fraction: f64,
    pub median_pointwise: f64,
    /// Fraction of trials whose deviation at `pointwise_t` exceeds `eps`.
    pub pointwise_exceed_fraction: f64,
}

/// Median (mean of the middle pair for even counts).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k == 0 {
        return f64::NAN;
    }
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Nearest-rank quantile.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    if v.is_empty() {
        return f64::NAN;
    }
    let rank = ((q * v.len() as f64).ceil() as usize).clamp(1, v.len());
    v[rank - 1]
}

/// Per-trial `(sup deviation, deviation at pointwise_t)` for one `n`; ordered by trial index.
pub fn convergence_trials(
    cfg: &ConvergenceConfig,
    index: usize,
    curves: &LimitCurves,
) -> Result<Vec<(f64, f64)>> {
    let n = cfg.n_list[index];
    let grid = cfg.grid();
    (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let tc = TrajectoryConfig {
                stream: ConvergenceConfig::stream_id(index, trial),
                ..TrajectoryConfig::new(n, cfg.w, cfg.t_max, cfg.master_seed)
            };
            let traj = track_trajectory(&tc)?;
            let sup = scaled_deviation(&traj, &grid, curves)?.sup_dev;
            let point = scaled_deviation(&traj, &[cfg.pointwise_t], curves)?.sup_dev;
            Ok((sup, point))
        })
        .collect()
}

pub fn convergence_experiment(
    cfg: &ConvergenceConfig,
    curves: &LimitCurves,
) -> Result<Vec<ConvergenceRow>> {
    cfg.validate()?;
    (0..cfg.n_list.len())
        .map(|index| {
            let results = convergence_trials(cfg, index, curves)?;
            let sups: Vec<f64> = results.iter().map(|r| r.0).collect();
            let points: Vec<f64> = results.iter().map(|r| r.1).collect();
            let k = results.len() as f64;
            Ok(ConvergenceRow {
                n: cfg.n_list[index],
                trials: cfg.trials,
                median_sup: median(&sups),
                p90_sup: quantile(&sups, 0.9),
                mean_sup: sups.iter().sum::<f64>() / k,
                exceed_fraction: sups.iter().filter(|&&d| d > cfg.eps).count() as f64 / k,
                median_pointwise: median(&points),
                pointwise_exceed_fraction: points.iter().filter(|&&d| d > cfg.eps).count() as f64
                    / k,
            })
        })
        .collect()
}

/// Cell created by inserting `x` into `p`.
pub fn new_box_position(p: &Tableau, x: f64) -> Result<BoxPosition> {
    Ok(p.new_box_position(x)?)
}

/// `‖□_n(x)/√n − G(x)‖` for `trials` independent insertion tableaux of size `n`.
pub fn new_box_deviations(
    n: usize,
    x: f64,
    trials: usize,
    master_seed: u64,
    curves: &LimitCurves,
) -> Result<Vec<f64>> {
    let target = curves.g(x)?;
    let scale = 1.0 / (n as f64).sqrt();
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut stream = SeededStream::child(master_seed, trial as u64);
            let mut p = Tableau::new();
            for v in uniform_sequence_avoiding(n, &mut stream, &[x]) {
                p.insert_unchecked(v, |_| {});
            }
            let cell = new_box_position(&p, x)?;
            Ok((scale * cell.to_point()).distance(target))
        })
        .collect()
}

/// `⌊T n²⌋`, never fewer than the `n` values inserted before `w`.
pub fn probe_steps(n: usize, t: f64) -> usize {
    step_at(t, n * n).max(n)
}

/// Fraction of trials in which `w` sits in the first column after `⌊T n²⌋`
/// values have been inserted (never fewer than `n`).
pub fn first_column_probe(n: usize, w: f64, t: f64, trials: usize, seed: u64) -> Result<f64> {
    TrajectoryConfig::new(n.max(1), w, 1.0, seed).validate()?;
    if !t.is_finite() || t <= 0.0 {
        return Err(TrajectoryError::Config(format!("T = {t} must be positive")));
    }
    if trials == 0 {
        return Err(TrajectoryError::Config(
            "at least one trial is required".into(),
        ));
    }
    let steps = probe_steps(n, t);
    let hits = (0..trials)
        .into_par_iter()
        .filter(|&trial| {
            let mut stream = SeededStream::child(seed, trial as u64);
            let xs = uniform_sequence_avoiding(steps, &mut stream, &[w]);
            let traj = track(&xs, n, w, steps, |x| x < w);
            traj.points.last().is_some_and(|p| p.position.column == 1)
        })
        .count();
    Ok(hits as f64 / trials as f64)
}

/// Every intermediate object of the reduction from the marked-box position
/// to a new-box position in a uniform insertion tableau, for one input.
///
/// Notation: `X′` are the inputs below `w` (`n′` of them before `w`, `m′`
/// overall), `z` their order statistics extended by `z(m′+1) = w`, `Π` the
/// rank permutation with `X′ = z ∘ Π`, and `Π→` the extension of `Π` that
/// places `m′+1` at index `n′+1`.
#[derive(Debug, Clone)]
pub struct RelabelingChain {
    pub n_prime: usize,
    pub m_prime: usize,
    /// `boxᵥᵥ(P(X₁, …, X_n, w, X_{n+1}, …, X_m))`.
    pub full_position: BoxPosition,
    /// `P(X′₁, …, X′_{n′}, w, X′_{n′+1}, …, X′_{m′})`.
    pub p_filtered: Tableau,
    pub filtered_position: BoxPosition,
    pub pi_extended: Permutation,
    /// `P(Π→)`.
    pub p_extended: Tableau,
    /// `z ∘ P(Π→)`.
    pub p_extended_relabeled: Tableau,
    /// Cell of `m′+1` in `P(Π→)`.
    pub extended_position: BoxPosition,
    /// `Q(Π→⁻¹)`.
    pub q_extended_inverse: Tableau,
    /// Cell of `m′+1` in `Q(Π→⁻¹)`.
    pub recording_position: BoxPosition,
    /// `n′ + ½`.
    pub half: f64,
    /// `Q(Π⁻¹₁, …, Π⁻¹_{m′}, n′ + ½)`.
    pub q_half: Tableau,
    /// `z(n′ + ½) = (z(n′) + z(n′+1)) / 2`, with `z(0) := 0` and `z(m′+1) = w`.
    pub z_half: f64,
    /// `Q(z(Π⁻¹₁), …, z(Π⁻¹_{m′}), z(n′ + ½))`.
    pub q_relabeled: Tableau,
    /// `Y_j = z(Π⁻¹_j) / w`.
    pub y: Vec<f64>,
    /// `A_n = z(n′ + ½) / w`.
    pub a_n: f64,
    /// `Q(Y₁, …, Y_{m′}, A_n)`.
    pub q_uniform: Tableau,
    /// Cell of the last recorded entry `m′+1` of `q_uniform`.
    pub uniform_position: BoxPosition,
    /// `□_{m′}(A_n)`: new cell when `A_n` is inserted into `P(Y)`.
    pub new_box: BoxPosition,
}

/// Builds every stage of the chain for the input of `cfg` at step `⌊T_max n⌋`.
pub fn relabeling_chain(cfg: &TrajectoryConfig) -> Result<RelabelingChain> {
    cfg.validate()?;
    let (n, w) = (cfg.n, cfg.w);
    let xs = cfg.input();

    let full_position = track(&xs, n, w, usize::MAX, |_| true)
        .points
        .last()
        .expect("nonempty")
        .position;

    let report = filter_below(&xs, w, n)?;
    let (n_prime, m_prime) = (report.n_prime, report.m_prime);
    let mut marked_input = report.kept.clone();
    marked_input.insert(n_prime, w);
    let (p_filtered, _) = rsk(&marked_input)?;
    let filtered_position = p_filtered.locate(w)?;

    let z = order_statistics(&report.kept);
    let z_of = |k: f64| -> f64 {
        let k = k as usize;
        if k == m_prime + 1 {
            w
        } else {
            z.z(k)
        }
    };
    let pi = rank_permutation(&report.kept)?;
    let pi_extended = pi.extend(n_prime)?;
    let (p_extended, _) = pi_extended.rsk();
    let p_extended_relabeled = p_extended.relabel(z_of)?;
    let top = (m_prime + 1) as f64;
    let extended_position = p_extended.locate(top)?;

    let (_, q_extended_inverse) = pi_extended.inverse().rsk();
    let recording_position = q_extended_inverse.locate(top)?;

    let half = n_prime as f64 + 0.5;
    let pi_inv = pi.inverse();
    let mut half_input = pi_inv.as_reals();
    half_input.push(half);
    let (_, q_half) = rsk(&half_input)?;

    let lower = if n_prime == 0 { 0.0 } else { z.z(n_prime) };
    let upper = if n_prime == m_prime {
        w
    } else {
        z.z(n_prime + 1)
    };
    let z_half = 0.5 * (lower + upper);
    let mut relabeled_input: Vec<f64> = pi_inv.values().iter().map(|&k| z.z(k)).collect();
    relabeled_input.push(z_half);
    let (_, q_relabeled) = rsk(&relabeled_input)?;

    let y: Vec<f64> = relabeled_input[..m_prime].iter().map(|v| v / w).collect();
    let a_n = z_half / w;
    let mut uniform_input = y.clone();
    uniform_input.push(a_n);
    let (p_y, _) = rsk(&y)?;
    let (_, q_uniform) = rsk(&uniform_input)?;
    let uniform_position = q_uniform.locate(top)?;
    let new_box = p_y.new_box_position(a_n)?;

    Ok(RelabelingChain {
        n_prime,
        m_prime,
        full_position,
        p_filtered,
        filtered_position,
        pi_extended,
        p_extended,
        p_extended_relabeled,
        extended_position,
        q_extended_inverse,
        recording_position,
        half,
        q_half,
        z_half,
        q_relabeled,
        y,
        a_n,
        q_uniform,
        uniform_position,
        new_box,
    })
}

impl RelabelingChain {
    /// Each equality of the chain as a named check, in the order the reduction uses them.
    pub fn checks(&self) -> Vec<(&'static str, bool)> {
        vec![
            (
                "filtering keeps the marked cell",
                self.full_position == self.filtered_position,
            ),
            (
                "z relabels P(extended) into the filtered tableau",
                self.p_extended_relabeled == self.p_filtered,
            ),
            (
                "marked cell equals cell of m'+1 in P(extended)",
                self.filtered_position == self.extended_position,
            ),
            (
                "P(extended) equals Q(extended inverse)",
                self.p_extended == self.q_extended_inverse,
            ),
            (
                "cell of m'+1 agrees in P and Q",
                self.extended_position == self.recording_position,
            ),
            (
                "half-integer replaces the inserted m'+1",
                self.q_extended_inverse == self.q_half,
            ),
            ("relabeling by z keeps Q", self.q_half == self.q_relabeled),
            (
                "rescaling by 1/w keeps Q",
                self.q_relabeled == self.q_uniform,
            ),
            (
                "last recorded cell agrees",
                self.recording_position == self.uniform_position,
            ),
            (
                "last recorded cell is the new box of A_n",
                self.uniform_position == self.new_box,
            ),
        ]
    }

    pub fn holds(&self) -> bool {
        self.checks().iter().all(|c| c.1)
    }
}
