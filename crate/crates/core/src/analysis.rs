//! Decay-rate curves over τ grids, extremum (Zeno/anti-Zeno transition)
//! detection, parameter sweeps and ordering comparisons between curves.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::decay::{gamma, survival, ModelConfig, SpinJ};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;
use crate::spectral::BathPair;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauSpacing {
    Linear,
    Log,
}

impl TauSpacing {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Linear => "linear",
            Self::Log => "log",
        }
    }
}

impl FromStr for TauSpacing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Self::Linear),
            "log" => Ok(Self::Log),
            other => Err(Error::Configuration(format!(
                "unknown tau spacing `{other}`"
            ))),
        }
    }
}

/// `steps` points from `min` to `max` inclusive; a single step yields `[min]`.
pub fn tau_grid(min: f64, max: f64, steps: usize, spacing: TauSpacing) -> Result<Vec<f64>> {
    if !(min > 0.0 && min.is_finite()) {
        return Err(Error::Configuration(format!(
            "tau-min must be positive, got {min}"
        )));
    }
    if steps == 0 {
        return Err(Error::Configuration("tau-steps must be at least 1".into()));
    }
    if steps == 1 {
        return Ok(vec![min]);
    }
    if !(max > min && max.is_finite()) {
        return Err(Error::Configuration(format!(
            "tau-max must exceed tau-min, got {max} <= {min}"
        )));
    }
    let last = (steps - 1) as f64;
    let mut grid: Vec<f64> = (0..steps)
        .map(|i| {
            let x = i as f64 / last;
            match spacing {
                TauSpacing::Linear => min + (max - min) * x,
                TauSpacing::Log => min * (max / min).powf(x),
            }
        })
        .collect();
    grid[steps - 1] = max;
    Ok(grid)
}

/// 60 log-spaced points on `[0.05, 3]`.
pub fn default_tau_grid() -> Vec<f64> {
    tau_grid(0.05, 3.0, 60, TauSpacing::Log).expect("static grid is valid")
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayCurve {
    pub config: ModelConfig,
    pub tau_grid: Vec<f64>,
    pub gamma_values: Vec<f64>,
    pub survival_values: Option<Vec<f64>>,
}

impl DecayCurve {
    pub fn len(&self) -> usize {
        self.tau_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau_grid.is_empty()
    }

    pub fn mean_gamma(&self) -> f64 {
        self.gamma_values.iter().sum::<f64>() / self.gamma_values.len() as f64
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if !grid.iter().all(|t| *t > 0.0 && t.is_finite()) {
        return Err(Error::Configuration(
            "tau grid values must be positive and finite".into(),
        ));
    }
    if !grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Configuration(
            "tau grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Evaluates `f` at every grid point in parallel; the first failure in grid
/// order is reported.
fn evaluate_grid<F>(grid: &[f64], f: F) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let results: Vec<Result<f64>> = grid.par_iter().map(|&tau| f(tau)).collect();
    grid.iter()
        .zip(results)
        .map(|(&tau, r)| {
            r.map_err(|e| Error::AtPoint {
                tau,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Γ at every grid point, spin-boson or large-spin by `cfg`.
pub fn compute_curve(
    cfg: &ModelConfig,
    tau_grid: &[f64],
    q: &QuadratureSpec,
) -> Result<DecayCurve> {
    check_grid(tau_grid)?;
    let gamma_values = evaluate_grid(tau_grid, |tau| gamma(tau, cfg, q))?;
    Ok(DecayCurve {
        config: *cfg,
        tau_grid: tau_grid.to_vec(),
        gamma_values,
        survival_values: None,
    })
}

/// As [`compute_curve`], also recording `s(τ)`.
pub fn compute_curve_with_survival(
    cfg: &ModelConfig,
    tau_grid: &[f64],
    q: &QuadratureSpec,
) -> Result<DecayCurve> {
    let mut curve = compute_curve(cfg, tau_grid, q)?;
    curve.survival_values = Some(evaluate_grid(tau_grid, |tau| survival(tau, cfg, q))?);
    Ok(curve)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    LocalMax,
    LocalMin,
}

impl ExtremumKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::LocalMax => "local_max",
            Self::LocalMin => "local_min",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Refinement {
    GridOnly,
    Parabolic,
}

impl Refinement {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::GridOnly => "grid_only",
            Self::Parabolic => "parabolic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub tau_star: f64,
    pub kind: ExtremumKind,
    pub gamma_at: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionReport {
    /// Sorted by `tau_star`.
    pub extrema: Vec<Extremum>,
    pub refinement: Refinement,
    /// `(start index, point count)` of runs of equal Γ longer than two points.
    pub flat_runs: Vec<(usize, usize)>,
}

impl TransitionReport {
    pub fn first(&self) -> Option<&Extremum> {
        self.extrema.first()
    }
}

/// Vertex of the parabola through three points, clamped to `[x0, x2]`.
/// Falls back to the middle point when the fit is degenerate.
fn parabolic_vertex(x: [f64; 3], y: [f64; 3]) -> (f64, f64) {
    let d1 = (y[1] - y[0]) / (x[1] - x[0]);
    let d2 = (y[2] - y[1]) / (x[2] - x[1]);
    let a = (d2 - d1) / (x[2] - x[0]);
    if a == 0.0 || !a.is_finite() {
        return (x[1], y[1]);
    }
    let vertex = (0.5 * (x[0] + x[1]) - d1 / (2.0 * a)).clamp(x[0], x[2]);
    let value = y[0] + d1 * (vertex - x[0]) + a * (vertex - x[0]) * (vertex - x[1]);
    (vertex, value)
}

pub fn find_transitions(curve: &DecayCurve) -> Result<TransitionReport> {
    find_transitions_with(curve, Refinement::Parabolic)
}

/// Interior points where the Γ differences on either side have strictly
/// opposite signs. Plateaus (zero differences) never qualify.
pub fn find_transitions_with(
    curve: &DecayCurve,
    refinement: Refinement,
) -> Result<TransitionReport> {
    let (tau, g) = (&curve.tau_grid, &curve.gamma_values);
    if tau.len() < 3 || g.len() != tau.len() {
        return Err(Error::InsufficientData {
            needed: 3,
            got: tau.len().min(g.len()),
        });
    }

    let mut extrema = Vec::new();
    for i in 1..tau.len() - 1 {
        let before = g[i] - g[i - 1];
        let after = g[i + 1] - g[i];
        let kind = if before > 0.0 && after < 0.0 {
            ExtremumKind::LocalMax
        } else if before < 0.0 && after > 0.0 {
            ExtremumKind::LocalMin
        } else {
            continue;
        };
        let (tau_star, gamma_at) = match refinement {
            Refinement::GridOnly => (tau[i], g[i]),
            Refinement::Parabolic => {
                parabolic_vertex([tau[i - 1], tau[i], tau[i + 1]], [g[i - 1], g[i], g[i + 1]])
            }
        };
        extrema.push(Extremum {
            tau_star,
            kind,
            gamma_at,
        });
    }

    let mut flat_runs = Vec::new();
    let mut start = 0;
    for i in 1..=g.len() {
        if i == g.len() || g[i] != g[i - 1] {
            if i - start > 2 {
                flat_runs.push((start, i - start));
            }
            start = i;
        }
    }
    if !flat_runs.is_empty() {
        log::debug!("flat runs skipped during extremum search: {flat_runs:?}");
    }

    Ok(TransitionReport {
        extrema,
        refinement,
        flat_runs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    /// Strong coupling `G`.
    G,
    /// Weak coupling `F`.
    F,
    J,
    Delta,
    Epsilon,
}

impl SweepParameter {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::G => "G",
            Self::F => "F",
            Self::J => "j",
            Self::Delta => "delta",
            Self::Epsilon => "eps",
        }
    }

    /// Direction Γ is expected to move as the parameter increases, where one
    /// is known.
    pub fn expected_direction(&self) -> Option<Direction> {
        match self {
            Self::G => Some(Direction::Decreasing),
            Self::F => Some(Direction::Increasing),
            _ => None,
        }
    }

    fn apply(&self, cfg: &ModelConfig, value: f64) -> Result<ModelConfig> {
        let baths = cfg.baths();
        match self {
            Self::G => Ok(cfg.with_baths(BathPair::new(
                baths.strong.with_strength(value)?,
                baths.weak,
            ))),
            Self::F => Ok(cfg.with_baths(BathPair::new(
                baths.strong,
                baths.weak.with_strength(value)?,
            ))),
            Self::J => {
                if cfg.spin_j().is_none() {
                    return Err(Error::Configuration(
                        "cannot sweep j for the spin-boson model".into(),
                    ));
                }
                Ok(cfg.with_spin_j(Some(SpinJ::new(value)?)))
            }
            Self::Delta => cfg.with_delta(value),
            Self::Epsilon => cfg.with_epsilon(value),
        }
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "G" => Ok(Self::G),
            "F" => Ok(Self::F),
            "j" => Ok(Self::J),
            "delta" => Ok(Self::Delta),
            "eps" => Ok(Self::Epsilon),
            other => Err(Error::Configuration(format!(
                "unknown sweep parameter `{other}` (expected G, F, j, delta or eps)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub varied_parameter: SweepParameter,
    pub values: Vec<f64>,
    pub curves: Vec<DecayCurve>,
}

/// One curve per value; the configuration is otherwise unchanged.
pub fn sweep(
    cfg: &ModelConfig,
    parameter: SweepParameter,
    values: &[f64],
    tau_grid: &[f64],
    q: &QuadratureSpec,
) -> Result<SweepResult> {
    if values.is_empty() {
        return Err(Error::Configuration(
            "sweep needs at least one value".into(),
        ));
    }
    let configs = values
        .iter()
        .map(|&v| parameter.apply(cfg, v))
        .collect::<Result<Vec<_>>>()?;
    let curves = configs
        .iter()
        .map(|c| compute_curve(c, tau_grid, q))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        varied_parameter: parameter,
        values: values.to_vec(),
        curves,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// Comparison of two adjacent curves in a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairComparison {
    pub from_value: f64,
    pub to_value: f64,
    /// Fraction of grid points where the later curve is strictly above.
    pub fraction_increasing: f64,
    /// Fraction of grid points where the later curve is strictly below.
    pub fraction_decreasing: f64,
    /// Later mean Γ minus earlier mean Γ.
    pub mean_difference: f64,
}

impl PairComparison {
    pub fn fraction(&self, direction: Direction) -> f64 {
        match direction {
            Direction::Increasing => self.fraction_increasing,
            Direction::Decreasing => self.fraction_decreasing,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderingSummary {
    pub parameter: SweepParameter,
    pub expected: Option<Direction>,
    pub means: Vec<f64>,
    pub pairs: Vec<PairComparison>,
}

impl OrderingSummary {
    /// Every pair follows `direction` at every grid point.
    pub fn pointwise(&self, direction: Direction) -> bool {
        self.pairs.iter().all(|p| p.fraction(direction) == 1.0)
    }

    /// Grid means are strictly monotone in `direction`.
    pub fn means_monotone(&self, direction: Direction) -> bool {
        self.pairs.iter().all(|p| match direction {
            Direction::Increasing => p.mean_difference > 0.0,
            Direction::Decreasing => p.mean_difference < 0.0,
        })
    }
}

pub fn compare_ordering(result: &SweepResult) -> Result<OrderingSummary> {
    let curves = &result.curves;
    if curves.len() < 2 {
        return Err(Error::Comparison(format!(
            "need at least two curves, got {}",
            curves.len()
        )));
    }
    if curves.iter().any(|c| c.tau_grid != curves[0].tau_grid) {
        return Err(Error::Comparison(
            "curves are on different tau grids".into(),
        ));
    }
    let n = curves[0].len() as f64;
    let means: Vec<f64> = curves.iter().map(DecayCurve::mean_gamma).collect();
    let pairs = curves
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let (a, b) = (&w[0].gamma_values, &w[1].gamma_values);
            let up = a.iter().zip(b).filter(|(x, y)| y > x).count() as f64;
            let down = a.iter().zip(b).filter(|(x, y)| y < x).count() as f64;
            PairComparison {
                from_value: result.values[i],
                to_value: result.values[i + 1],
                fraction_increasing: up / n,
                fraction_decreasing: down / n,
                mean_difference: means[i + 1] - means[i],
            }
        })
        .collect();
    Ok(OrderingSummary {
        parameter: result.varied_parameter,
        expected: result.varied_parameter.expected_direction(),
        means,
        pairs,
    })
}
