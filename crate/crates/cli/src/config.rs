//! Run configuration: a sectioned TOML file. Every section is optional at
//! parse time; each command asks for the sections it needs. Unknown keys are
//! rejected.

use std::path::Path;

use brushbot_core::regime2::SimConfig;
use brushbot_core::sweep::{linear_grid, log_grid};
use brushbot_core::{BrushParams, MotorParams, Objective, RobotParams, SweepParameter, SweepSpec, Thresholds};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    brush: Option<RawBrush>,
    motor: Option<RawMotor>,
    robot: Option<RawRobot>,
    sim: Option<RawSim>,
    sweep: Option<RawSweep>,
    classify: Option<RawClassify>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBrush {
    young_modulus: f64,
    second_area_moment: f64,
    length: f64,
    alpha: f64,
    brush_mass: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMotor {
    eccentric_mass: f64,
    eccentricity: f64,
    omega: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRobot {
    body_mass: f64,
    #[serde(default = "default_gravity")]
    gravity: f64,
    pivot_inertia: f64,
    forcing_arm: f64,
    gravity_arm: f64,
    step_height: f64,
}

fn default_gravity() -> f64 {
    brushbot_core::DEFAULT_GRAVITY
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSim {
    t_end: f64,
    dt: f64,
    #[serde(default)]
    theta0: f64,
    #[serde(default = "default_stride")]
    record_stride: usize,
}

fn default_stride() -> usize {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    parameter: String,
    objective: String,
    grid: Option<Vec<f64>>,
    start: Option<f64>,
    stop: Option<f64>,
    points: Option<usize>,
    spacing: Option<Spacing>,
    #[serde(default)]
    refine: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClassify {
    band: Option<f64>,
    alpha_margin: Option<f64>,
}

#[derive(Debug)]
pub struct SweepSection {
    pub spec: SweepSpec,
    pub refine: bool,
}

/// Parsed and validated configuration.
#[derive(Debug, Default)]
pub struct RunConfig {
    pub brush: Option<BrushParams>,
    pub motor: Option<MotorParams>,
    pub robot: Option<RobotParams>,
    pub sim: Option<SimConfig>,
    pub sweep: Option<SweepSection>,
    pub thresholds: Thresholds,
}

fn section<T>(name: &str, r: brushbot_core::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Config(format!("[{name}] {e}")))
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))?;

        let brush = raw
            .brush
            .map(|b| {
                section(
                    "brush",
                    BrushParams::new(b.young_modulus, b.second_area_moment, b.length, b.alpha, b.brush_mass),
                )
            })
            .transpose()?;
        let motor = raw
            .motor
            .map(|m| section("motor", MotorParams::new(m.eccentric_mass, m.eccentricity, m.omega)))
            .transpose()?;
        let robot = raw
            .robot
            .map(|r| {
                section(
                    "robot",
                    RobotParams::new(
                        r.body_mass,
                        r.gravity,
                        r.pivot_inertia,
                        r.forcing_arm,
                        r.gravity_arm,
                        r.step_height,
                    ),
                )
            })
            .transpose()?;

        let sim = match raw.sim {
            None => None,
            Some(s) => {
                let cfg = SimConfig {
                    t_end: s.t_end,
                    dt: s.dt,
                    theta0: s.theta0,
                    record_stride: s.record_stride,
                };
                // the dt and t_end guards depend on the motor period
                if let Some(m) = &motor {
                    section("sim", cfg.validate(m))?;
                }
                Some(cfg)
            }
        };

        let sweep = raw.sweep.map(parse_sweep).transpose()?;

        let mut thresholds = Thresholds::default();
        if let Some(c) = raw.classify {
            if let Some(band) = c.band {
                if !(band.is_finite() && band >= 0.0) {
                    return Err(CliError::Config(format!("[classify] band must be >= 0 (got {band})")));
                }
                thresholds.band = band;
            }
            if let Some(margin) = c.alpha_margin {
                if !(margin.is_finite() && margin >= 0.0) {
                    return Err(CliError::Config(format!(
                        "[classify] alpha_margin must be >= 0 (got {margin})"
                    )));
                }
                thresholds.alpha_margin = margin;
            }
        }

        Ok(Self {
            brush,
            motor,
            robot,
            sim,
            sweep,
            thresholds,
        })
    }

    pub fn brush(&self) -> Result<BrushParams, CliError> {
        self.brush.ok_or_else(|| missing("brush"))
    }

    pub fn motor(&self) -> Result<MotorParams, CliError> {
        self.motor.ok_or_else(|| missing("motor"))
    }

    pub fn robot(&self) -> Result<RobotParams, CliError> {
        self.robot.ok_or_else(|| missing("robot"))
    }

    pub fn sim(&self) -> Result<SimConfig, CliError> {
        self.sim.ok_or_else(|| missing("sim"))
    }

    pub fn sweep(&self) -> Result<&SweepSection, CliError> {
        self.sweep.as_ref().ok_or_else(|| missing("sweep"))
    }
}

fn missing(name: &str) -> CliError {
    CliError::Config(format!("config is missing the [{name}] section"))
}

fn parse_sweep(s: RawSweep) -> Result<SweepSection, CliError> {
    let parameter: SweepParameter = section("sweep", s.parameter.parse())?;
    let objective: Objective = section("sweep", s.objective.parse())?;
    let range = (s.start, s.stop, s.points);
    let grid = match (s.grid, range) {
        (Some(grid), (None, None, None)) if s.spacing.is_none() => grid,
        (None, (Some(start), Some(stop), Some(points))) => match s.spacing.unwrap_or(Spacing::Linear) {
            Spacing::Linear => linear_grid(start, stop, points),
            Spacing::Log => {
                if !(start > 0.0 && stop > 0.0) {
                    return Err(CliError::Config("[sweep] log spacing needs start, stop > 0".into()));
                }
                log_grid(start, stop, points)
            }
        },
        _ => {
            return Err(CliError::Config(
                "[sweep] give either `grid` or all of `start`, `stop`, `points`".into(),
            ))
        }
    };
    Ok(SweepSection {
        spec: section("sweep", SweepSpec::new(parameter, grid, objective))?,
        refine: s.refine,
    })
}
