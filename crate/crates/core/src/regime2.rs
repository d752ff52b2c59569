//! Rigid-brush operation: the brushes act as a pivot `P` and the body rocks
//! about it.
//!
//! While airborne the body angle obeys
//!
//! ```text
//! I_P * theta_r'' = m omega^2 r sin(omega t) w - M g w_G
//! ```
//!
//! with the unilateral constraint `theta_r >= 0`. Impacts are perfectly
//! plastic: at touchdown `theta_r' = theta_r'' = 0` and the body stays on the
//! ground until the net moment turns positive again. Each touchdown moves the
//! robot forward by `h sin(peak)` of the flight that just ended.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};
use crate::params::{MotorParams, RobotParams};

/// Touchdown is located to this accuracy in `theta_r`.
pub const TOUCHDOWN_TOLERANCE: f64 = 1e-10;

/// Upper bound on `dt` as a fraction of the motor period.
pub const MIN_STEPS_PER_PERIOD: f64 = 200.0;

/// Lower bound on `t_end` in motor periods.
pub const MIN_PERIODS: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub t_end: f64,
    /// Fixed integrator step.
    pub dt: f64,
    /// Initial body angle; the body starts at rest (`theta_r' = 0`).
    pub theta0: f64,
    /// Record every `record_stride`-th grid step. Touchdowns are always
    /// recorded.
    pub record_stride: usize,
}

impl SimConfig {
    pub fn new(t_end: f64, dt: f64) -> Self {
        Self {
            t_end,
            dt,
            theta0: 0.0,
            record_stride: 1,
        }
    }

    /// `periods` motor periods sampled with `steps_per_period` steps each.
    pub fn for_motor(motor: &MotorParams, periods: f64, steps_per_period: f64) -> Self {
        let period = motor.period();
        Self::new(periods * period, period / steps_per_period)
    }

    pub fn validate(&self, motor: &MotorParams) -> Result<()> {
        let period = motor.period();
        let slack = 1.0 + 1e-9;
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Config(format!("dt must be > 0 (got {})", self.dt)));
        }
        if self.dt > period / MIN_STEPS_PER_PERIOD * slack {
            return Err(Error::Config(format!(
                "dt = {:e} exceeds T/200 = {:e} for omega = {}",
                self.dt,
                period / MIN_STEPS_PER_PERIOD,
                motor.omega()
            )));
        }
        if !self.t_end.is_finite() || self.t_end * slack < MIN_PERIODS * period {
            return Err(Error::Config(format!(
                "t_end = {:e} is shorter than 5 motor periods ({:e})",
                self.t_end,
                MIN_PERIODS * period
            )));
        }
        if !(self.theta0.is_finite() && (0.0..FRAC_PI_2).contains(&self.theta0)) {
            return Err(Error::Config(format!("theta0 out of [0, π/2) (got {})", self.theta0)));
        }
        if self.record_stride == 0 {
            return Err(Error::Config("record_stride must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub theta: f64,
    pub theta_dot: f64,
    pub theta_ddot: f64,
    pub x: f64,
}

/// One flight: lift-off, apex and touchdown.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlightEvent {
    pub lift_off_time: f64,
    /// Angle at lift-off; zero except for a flight that starts from `theta0`.
    pub lift_off_theta: f64,
    pub touchdown_time: f64,
    pub peak: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Regime2Trajectory {
    pub samples: Vec<Sample>,
    /// Peak angle of every completed flight, in order.
    pub cycle_peaks: Vec<f64>,
    pub events: Vec<FlightEvent>,
    pub t_end: f64,
    /// Motor speed the trajectory was produced with.
    pub omega: f64,
}

impl Regime2Trajectory {
    pub fn final_x(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.x)
    }

    /// Average forward speed over the whole run.
    pub fn mean_speed(&self) -> f64 {
        self.final_x() / self.t_end
    }

    /// Completed flights per motor revolution. The closed-form speed model
    /// assumes exactly one.
    pub fn cycles_per_revolution(&self) -> f64 {
        let revolutions = self.t_end * self.omega / TAU;
        self.cycle_peaks.len() as f64 / revolutions
    }
}

/// `m omega^2 r sin(omega t) w - M g w_G`.
pub fn net_moment(robot: &RobotParams, motor: &MotorParams, t: f64) -> f64 {
    motor.force_amplitude() * (motor.omega() * t).sin() * robot.forcing_arm() - robot.weight() * robot.gravity_arm()
}

/// Whether a body resting on the ground at time `t` starts to rotate.
pub fn lift_off_condition(robot: &RobotParams, motor: &MotorParams, t: f64) -> bool {
    net_moment(robot, motor, t) > 0.0
}

/// Earliest time `>= t` from which the net moment becomes positive, or
/// `None` if it never does. The returned instant is the infimum of the
/// positive window, where the moment is still zero.
pub fn next_lift_off(robot: &RobotParams, motor: &MotorParams, t: f64) -> Option<f64> {
    let drive = motor.force_amplitude() * robot.forcing_arm();
    let hold = robot.weight() * robot.gravity_arm();
    if drive <= 0.0 || hold >= drive {
        return None;
    }
    if lift_off_condition(robot, motor, t) {
        return Some(t);
    }
    let omega = motor.omega();
    let onset = (hold / drive).asin();
    let cycle = (omega * t / TAU).floor();
    for k in 0..3 {
        let candidate = ((cycle + k as f64) * TAU + onset) / omega;
        if candidate >= t {
            return Some(candidate);
        }
    }
    unreachable!("a lift-off window starts in every period")
}

#[derive(Debug, Clone, Copy)]
struct State {
    theta: f64,
    theta_dot: f64,
}

/// Classic RK4 step of `theta'' = net_moment(t) / I_P`.
fn rk4_step(robot: &RobotParams, motor: &MotorParams, t: f64, y: State, h: f64) -> State {
    let accel = |t: f64| net_moment(robot, motor, t) / robot.pivot_inertia();
    let f = |t: f64, y: State| State {
        theta: y.theta_dot,
        theta_dot: accel(t),
    };
    let shift = |y: State, k: State, s: f64| State {
        theta: y.theta + s * k.theta,
        theta_dot: y.theta_dot + s * k.theta_dot,
    };
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, shift(y, k1, 0.5 * h));
    let k3 = f(t + 0.5 * h, shift(y, k2, 0.5 * h));
    let k4 = f(t + h, shift(y, k3, h));
    State {
        theta: y.theta + h / 6.0 * (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta),
        theta_dot: y.theta_dot + h / 6.0 * (k1.theta_dot + 2.0 * k2.theta_dot + 2.0 * k3.theta_dot + k4.theta_dot),
    }
}

/// Bisects the sub-step length in `(lo, hi]` at which `g` of the state
/// changes sign, `g(lo) >= 0 > g(hi)`. Stops once `|g| <= tol` at the
/// midpoint or the bracket can no longer shrink.
#[allow(clippy::too_many_arguments)]
fn bisect_substep(
    robot: &RobotParams,
    motor: &MotorParams,
    t: f64,
    y: State,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    g: impl Fn(State) -> f64,
) -> (f64, State) {
    let mut best = (hi, rk4_step(robot, motor, t, y, hi));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = rk4_step(robot, motor, t, y, mid);
        let v = g(s);
        best = (mid, s);
        if v.abs() <= tol && hi - lo <= f64::EPSILON * (t.abs() + hi) * 4.0 {
            break;
        }
        if v >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    best
}

enum Mode {
    Resting,
    Flying {
        lift_off_time: f64,
        lift_off_theta: f64,
        peak: f64,
    },
}

/// Integrates the rocking motion with a fixed RK4 step, locating touchdowns
/// and flight apexes inside a step by bisection.
pub fn simulate(robot: &RobotParams, motor: &MotorParams, cfg: &SimConfig) -> Result<Regime2Trajectory> {
    cfg.validate(motor)?;

    let n_steps = (cfg.t_end / cfg.dt - 1e-9).ceil().max(1.0) as usize;
    let mut samples = Vec::with_capacity(n_steps / cfg.record_stride + 2);
    let mut cycle_peaks = Vec::new();
    let mut events = Vec::new();

    let mut state = State {
        theta: cfg.theta0,
        theta_dot: 0.0,
    };
    let mut mode = if cfg.theta0 > 0.0 {
        Mode::Flying {
            lift_off_time: 0.0,
            lift_off_theta: cfg.theta0,
            peak: cfg.theta0,
        }
    } else {
        Mode::Resting
    };
    let mut x = 0.0;

    let accel_now = |mode: &Mode, t: f64| match mode {
        Mode::Resting => 0.0,
        Mode::Flying { .. } => net_moment(robot, motor, t) / robot.pivot_inertia(),
    };

    samples.push(Sample {
        t: 0.0,
        theta: state.theta,
        theta_dot: state.theta_dot,
        theta_ddot: accel_now(&mode, 0.0),
        x,
    });

    for k in 1..=n_steps {
        let t0 = ((k - 1) as f64 * cfg.dt).min(cfg.t_end);
        let t1 = (k as f64 * cfg.dt).min(cfg.t_end);
        let mut tc = t0;

        while tc < t1 {
            match mode {
                Mode::Resting => match next_lift_off(robot, motor, tc) {
                    Some(t_lift) if t_lift < t1 => {
                        tc = t_lift;
                        state = State {
                            theta: 0.0,
                            theta_dot: 0.0,
                        };
                        mode = Mode::Flying {
                            lift_off_time: t_lift,
                            lift_off_theta: 0.0,
                            peak: 0.0,
                        };
                    }
                    _ => tc = t1,
                },
                Mode::Flying {
                    lift_off_time,
                    lift_off_theta,
                    mut peak,
                } => {
                    let h = t1 - tc;
                    let next = rk4_step(robot, motor, tc, state, h);

                    if state.theta_dot > 0.0 && next.theta_dot <= 0.0 {
                        let (_, apex) = bisect_substep(robot, motor, tc, state, 0.0, h, 0.0, |s| s.theta_dot);
                        peak = peak.max(apex.theta);
                    }
                    peak = peak.max(next.theta);
                    if peak >= FRAC_PI_2 {
                        return Err(Error::ModelDomain { t: t1, theta: peak });
                    }

                    if next.theta < 0.0 {
                        let (s, _) = bisect_substep(robot, motor, tc, state, 0.0, h, TOUCHDOWN_TOLERANCE, |s| s.theta);
                        let t_touch = (tc + s).min(t1);
                        x += robot.step_height() * peak.sin();
                        cycle_peaks.push(peak);
                        events.push(FlightEvent {
                            lift_off_time,
                            lift_off_theta,
                            touchdown_time: t_touch,
                            peak,
                        });
                        samples.push(Sample {
                            t: t_touch,
                            theta: 0.0,
                            theta_dot: 0.0,
                            theta_ddot: 0.0,
                            x,
                        });
                        state = State {
                            theta: 0.0,
                            theta_dot: 0.0,
                        };
                        mode = Mode::Resting;
                        // A touchdown exactly at the step start would never
                        // advance; finish the step on the ground instead.
                        tc = if t_touch > tc { t_touch } else { t1 };
                    } else {
                        state = next;
                        tc = t1;
                        mode = Mode::Flying {
                            lift_off_time,
                            lift_off_theta,
                            peak,
                        };
                    }
                }
            }
        }

        let on_stride = k % cfg.record_stride == 0;
        let fresh = samples.last().map_or(true, |s: &Sample| s.t < t1);
        if on_stride && fresh {
            samples.push(Sample {
                t: t1,
                theta: state.theta,
                theta_dot: state.theta_dot,
                theta_ddot: accel_now(&mode, t1),
                x,
            });
        }
    }

    Ok(Regime2Trajectory {
        samples,
        cycle_peaks,
        events,
        t_end: cfg.t_end,
        omega: motor.omega(),
    })
}

/// Largest cycle peak over the second half of the completed cycles (the
/// steady part of the run).
pub fn peak_angle(traj: &Regime2Trajectory) -> Result<f64> {
    let n = traj.cycle_peaks.len();
    if n == 0 {
        return Err(Error::NoCycles);
    }
    Ok(traj.cycle_peaks[n / 2..]
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max))
}

fn check_theta_hat(theta_hat: f64) -> Result<f64> {
    if theta_hat.is_finite() && (0.0..FRAC_PI_2).contains(&theta_hat) {
        Ok(theta_hat)
    } else {
        Err(Error::invalid(format!("theta_hat out of [0, π/2) (got {theta_hat})")))
    }
}

/// Forward step per flight, `h sin(theta_hat)`.
pub fn step_displacement_r2(robot: &RobotParams, theta_hat: f64) -> Result<f64> {
    Ok(robot.step_height() * check_theta_hat(theta_hat)?.sin())
}

/// Small-angle ground speed `omega h theta_hat / (2 pi)`.
pub fn ground_speed_r2(robot: &RobotParams, motor: &MotorParams, theta_hat: f64) -> Result<f64> {
    Ok(motor.omega() * robot.step_height() * check_theta_hat(theta_hat)? / (2.0 * PI))
}

/// Ground speed without the small-angle approximation,
/// `omega h sin(theta_hat) / (2 pi)`.
pub fn ground_speed_r2_exact(robot: &RobotParams, motor: &MotorParams, theta_hat: f64) -> Result<f64> {
    Ok(motor.omega() * step_displacement_r2(robot, theta_hat)? / (2.0 * PI))
}
