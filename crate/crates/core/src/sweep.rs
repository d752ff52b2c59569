//! One-dimensional parameter sweeps and golden-section refinement of their
//! maximum.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::params::{BrushParams, MotorParams, RobotParams};
use crate::regime1::{forced_amplitude, ground_speed_r1, lumped_stiffness, natural_frequency, RESONANCE_GUARD};
use crate::regime2::{ground_speed_r2, peak_angle, simulate, SimConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParameter {
    Omega,
    Alpha,
    Length,
    /// `E * I`; the second area moment is kept and `E` rescaled.
    FlexuralRigidity,
    BrushMass,
}

impl SweepParameter {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepParameter::Omega => "omega",
            SweepParameter::Alpha => "alpha",
            SweepParameter::Length => "l",
            SweepParameter::FlexuralRigidity => "EI",
            SweepParameter::BrushMass => "M_b",
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
        Ok(match s {
            "omega" => SweepParameter::Omega,
            "alpha" => SweepParameter::Alpha,
            "l" => SweepParameter::Length,
            "EI" => SweepParameter::FlexuralRigidity,
            "M_b" => SweepParameter::BrushMass,
            other => {
                return Err(Error::Sweep(format!(
                    "unknown sweep parameter `{other}` (expected omega, alpha, l, EI or M_b)"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    /// Flexible-brush ground speed.
    VrRegime1,
    /// Rigid-pivot ground speed from a simulated peak angle.
    VrRegime2,
    /// `|theta_hat(omega)|` of the forced brush oscillator.
    ForcedAmplitudeAbs,
    /// `k_theta`.
    LumpedStiffness,
}

impl Objective {
    pub fn as_str(&self) -> &'static str {
        match self {
            Objective::VrRegime1 => "v_r_regime1",
            Objective::VrRegime2 => "v_r_regime2",
            Objective::ForcedAmplitudeAbs => "forced_amplitude_abs",
            Objective::LumpedStiffness => "lumped_stiffness",
        }
    }

    fn needs_simulation(&self) -> bool {
        matches!(self, Objective::VrRegime2)
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "v_r_regime1" => Objective::VrRegime1,
            "v_r_regime2" => Objective::VrRegime2,
            "forced_amplitude_abs" => Objective::ForcedAmplitudeAbs,
            "lumped_stiffness" => Objective::LumpedStiffness,
            other => {
                return Err(Error::Sweep(format!(
                    "unknown objective `{other}` (expected v_r_regime1, v_r_regime2, \
                     forced_amplitude_abs or lumped_stiffness)"
                )))
            }
        })
    }
}

/// `n` evenly spaced points from `start` to `stop` inclusive.
pub fn linear_grid(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { stop } else { start + step * i as f64 })
                .collect()
        }
    }
}

/// `n` logarithmically spaced points from `start` to `stop` inclusive.
pub fn log_grid(start: f64, stop: f64, n: usize) -> Vec<f64> {
    let (a, b) = (start.ln(), stop.ln());
    linear_grid(a, b, n)
        .into_iter()
        .enumerate()
        .map(|(i, v)| match i {
            0 => start,
            _ if i == n - 1 => stop,
            _ => v.exp(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    parameter: SweepParameter,
    grid: Vec<f64>,
    objective: Objective,
}

impl SweepSpec {
    /// The grid must be non-empty, strictly increasing, and every value must
    /// be admissible for `parameter`.
    pub fn new(parameter: SweepParameter, grid: Vec<f64>, objective: Objective) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::Sweep("grid is empty".into()));
        }
        if let Some(w) = grid
            .windows(2)
            .find(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        {
            return Err(Error::Sweep(format!(
                "grid must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        for &v in &grid {
            let admissible = match parameter {
                SweepParameter::Alpha => v > 0.0 && v < std::f64::consts::FRAC_PI_2,
                _ => v > 0.0,
            };
            if !(v.is_finite() && admissible) {
                return Err(Error::Sweep(format!("grid value {v} is not a valid {parameter}")));
            }
        }
        Ok(Self {
            parameter,
            grid,
            objective,
        })
    }

    pub fn parameter(&self) -> SweepParameter {
        self.parameter
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }
}

/// Fixed parameters a sweep varies one coordinate of.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Baseline {
    pub brush: BrushParams,
    pub motor: MotorParams,
    pub robot: Option<RobotParams>,
    /// For rigid-pivot objectives. When omega is swept the run keeps the
    /// same number of motor periods and steps per period as this config.
    pub sim: Option<SimConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowStatus {
    Ok,
    ResonanceGuard,
    InvalidParameter,
    Config,
    ModelDomain,
    NoCycles,
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::ResonanceGuard => "resonance_guard",
            RowStatus::InvalidParameter => "invalid_parameter",
            RowStatus::Config => "config_error",
            RowStatus::ModelDomain => "model_domain",
            RowStatus::NoCycles => "no_cycles",
        }
    }

    fn from_error(err: &Error) -> Self {
        match err {
            Error::Resonance { .. } => RowStatus::ResonanceGuard,
            Error::Config(_) => RowStatus::Config,
            Error::ModelDomain { .. } => RowStatus::ModelDomain,
            Error::NoCycles => RowStatus::NoCycles,
            _ => RowStatus::InvalidParameter,
        }
    }
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    /// `None` unless `status` is [`RowStatus::Ok`].
    pub objective: Option<f64>,
    pub status: RowStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub parameter: SweepParameter,
    pub objective: Objective,
    pub rows: Vec<SweepRow>,
    /// Grid value of the best `Ok` row (first one on ties); `None` if no row
    /// evaluated.
    pub argmax: Option<f64>,
}

impl SweepResult {
    fn argmax_index(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            if let Some(v) = row.objective {
                if best.map_or(true, |(_, b)| v > b) {
                    best = Some((i, v));
                }
            }
        }
        best.map(|(i, _)| i)
    }
}

fn point(base: &Baseline, parameter: SweepParameter, value: f64) -> Result<Baseline> {
    let mut p = *base;
    match parameter {
        SweepParameter::Omega => {
            p.motor = base.motor.with_omega(value)?;
            if let Some(cfg) = base.sim {
                let periods = cfg.t_end / base.motor.period();
                let steps = base.motor.period() / cfg.dt;
                p.sim = Some(SimConfig {
                    theta0: cfg.theta0,
                    record_stride: cfg.record_stride,
                    ..SimConfig::for_motor(&p.motor, periods, steps)
                });
            }
        }
        SweepParameter::Alpha => p.brush = base.brush.with_alpha(value)?,
        SweepParameter::Length => p.brush = base.brush.with_length(value)?,
        SweepParameter::FlexuralRigidity => p.brush = base.brush.with_flexural_rigidity(value)?,
        SweepParameter::BrushMass => p.brush = base.brush.with_brush_mass(value)?,
    }
    Ok(p)
}

fn evaluate(objective: Objective, p: &Baseline) -> Result<f64> {
    match objective {
        Objective::VrRegime1 => Ok(ground_speed_r1(&p.brush, &p.motor)),
        Objective::ForcedAmplitudeAbs => Ok(forced_amplitude(&p.brush, &p.motor)?.abs()),
        Objective::LumpedStiffness => Ok(lumped_stiffness(&p.brush)),
        Objective::VrRegime2 => {
            let (robot, sim) = p
                .robot
                .zip(p.sim)
                .ok_or_else(|| Error::Sweep("v_r_regime2 needs robot and sim parameters".into()))?;
            let traj = simulate(&robot, &p.motor, &sim)?;
            ground_speed_r2(&robot, &p.motor, peak_angle(&traj)?)
        }
    }
}

fn evaluate_at(spec: &SweepSpec, base: &Baseline, value: f64) -> Result<f64> {
    evaluate(spec.objective, &point(base, spec.parameter, value)?)
}

/// Evaluates the objective at every grid point. Points are independent and
/// evaluated in parallel; rows come back in grid order. A failing point is
/// reported through its row status and never aborts the sweep.
pub fn run_sweep(spec: &SweepSpec, base: &Baseline) -> Result<SweepResult> {
    if spec.objective.needs_simulation() && (base.robot.is_none() || base.sim.is_none()) {
        return Err(Error::Sweep(format!(
            "objective {} needs robot and sim parameters",
            spec.objective
        )));
    }
    let rows: Vec<SweepRow> = spec
        .grid
        .par_iter()
        .map(|&value| match evaluate_at(spec, base, value) {
            Ok(v) => SweepRow {
                value,
                objective: Some(v),
                status: RowStatus::Ok,
            },
            Err(e) => SweepRow {
                value,
                objective: None,
                status: RowStatus::from_error(&e),
            },
        })
        .collect();
    let mut result = SweepResult {
        parameter: spec.parameter,
        objective: spec.objective,
        rows,
        argmax: None,
    };
    result.argmax = result.argmax_index().map(|i| result.rows[i].value);
    Ok(result)
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximizes a unimodal `f` on `[a, b]` by golden-section search until the
/// bracket is no wider than `rel_tol` times the magnitude of its midpoint.
pub fn golden_section_max(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, rel_tol: f64) -> f64 {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..500 {
        let mid = 0.5 * (a + b);
        if (b - a) <= rel_tol * mid.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Result of [`refine_peak`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinedPeak {
    pub value: f64,
    pub objective: f64,
    /// Bracket the search ran on.
    pub bracket: (f64, f64),
}

/// Relative bracket width at which [`refine_peak`] stops.
pub const REFINE_TOLERANCE: f64 = 1e-4;

/// Golden-section refinement between the grid neighbours of the argmax of
/// `result` (which must come from `run_sweep(spec, base)`).
///
/// The objective is assumed unimodal on that bracket. For amplitude sweeps
/// over omega the bracket is cut at the resonance guard band on the side of
/// the argmax.
pub fn refine_peak(spec: &SweepSpec, base: &Baseline, result: &SweepResult) -> Result<RefinedPeak> {
    let i = result
        .argmax_index()
        .ok_or_else(|| Error::Sweep("no grid point evaluated successfully".into()))?;
    let value = result.rows[i].value;
    if i == 0 || i + 1 == result.rows.len() {
        return Err(Error::EndpointArgmax { value });
    }
    let (mut lo, mut hi) = (result.rows[i - 1].value, result.rows[i + 1].value);

    if spec.objective == Objective::ForcedAmplitudeAbs && spec.parameter == SweepParameter::Omega {
        let omega_n = natural_frequency(&base.brush);
        let below = omega_n * (1.0 - RESONANCE_GUARD);
        let above = omega_n * (1.0 + RESONANCE_GUARD);
        // one ulp inside the guard edge still counts as guarded
        if value < omega_n {
            hi = hi.min(below * (1.0 - f64::EPSILON));
        } else {
            lo = lo.max(above * (1.0 + f64::EPSILON));
        }
    }

    let f = |v: f64| evaluate_at(spec, base, v).unwrap_or(f64::NEG_INFINITY);
    let best = golden_section_max(f, lo, hi, REFINE_TOLERANCE);
    Ok(RefinedPeak {
        value: best,
        objective: f(best),
        bracket: (lo, hi),
    })
}
