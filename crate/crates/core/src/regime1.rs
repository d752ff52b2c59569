//! Flexible-brush operation: the body stays parallel to the ground and moves
//! because the brushes bend during the stick phase and spring back during the
//! slip phase.
//!
//! A brush is an inclined Euler-Bernoulli cantilever clamped at the body and
//! loaded at its tip by the vertical component of the motor's centrifugal
//! force. Its dynamics are condensed into a spring-mass oscillator in the
//! brush angle `theta` with stiffness [`lumped_stiffness`] and inertia
//! [`lumped_inertia`].

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::params::{BrushParams, MotorParams, RobotParams};

/// Relative half-width of the band around the natural frequency in which
/// [`forced_amplitude`] refuses to evaluate.
pub const RESONANCE_GUARD: f64 = 1e-3;

/// Transverse deflection `v(xi)` of the brush at arclength `xi` from the
/// clamp, under tip force `force`.
pub fn beam_deflection(brush: &BrushParams, force: f64, xi: f64) -> Result<f64> {
    let l = brush.length();
    if !(0.0..=l).contains(&xi) {
        return Err(Error::invalid(format!("xi out of [0, {l}] (got {xi})")));
    }
    let ei = brush.flexural_rigidity();
    let fc = force * brush.alpha().cos();
    Ok(fc / (6.0 * ei) * xi.powi(3) - fc * l / (2.0 * ei) * xi * xi)
}

/// `|v(l)| = F l^3 cos(alpha) / (3 E I)`.
pub fn tip_displacement(brush: &BrushParams, force: f64) -> f64 {
    (force * brush.length().powi(3) * brush.alpha().cos() / (3.0 * brush.flexural_rigidity())).abs()
}

/// `k_theta = 3 E I / (l^2 cos(alpha))`.
pub fn lumped_stiffness(brush: &BrushParams) -> f64 {
    3.0 * brush.flexural_rigidity() / (brush.length().powi(2) * brush.alpha().cos())
}

/// `I_theta = M_b l^2 / 2`.
pub fn lumped_inertia(brush: &BrushParams) -> f64 {
    brush.brush_mass() * brush.length().powi(2) / 2.0
}

/// Natural frequency of the brush, `sqrt(k_theta / I_theta)`.
pub fn natural_frequency(brush: &BrushParams) -> f64 {
    let l = brush.length();
    (6.0 * brush.flexural_rigidity() / (brush.brush_mass() * l.powi(4) * brush.alpha().cos())).sqrt()
}

/// Time for a released brush to swing back to its undeformed shape: the
/// first zero of `cos(omega_n t)`.
pub fn return_time(brush: &BrushParams) -> f64 {
    FRAC_PI_2 / natural_frequency(brush)
}

/// Motor speed that makes the return time a quarter of the motor period.
/// This is exactly the natural frequency.
pub fn optimal_motor_speed(brush: &BrushParams) -> f64 {
    natural_frequency(brush)
}

/// Brush rotation at the end of the stick phase, from the small-angle
/// relation `|v(l)| = l * theta` at peak force.
pub fn stick_phase_angle(brush: &BrushParams, motor: &MotorParams) -> f64 {
    tip_displacement(brush, motor.force_amplitude()) / brush.length()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDisplacement {
    /// Horizontal displacement per motor revolution.
    pub delta: f64,
    /// Stick angle used to compute `delta`.
    pub theta: f64,
    /// Set when `theta > alpha`: the deformed brush has crossed the vertical
    /// and the triangle behind `delta` no longer describes it.
    pub beyond_geometry: bool,
}

/// `delta = l cos(alpha - theta) - l cos(alpha)`.
pub fn step_displacement_r1(brush: &BrushParams, motor: &MotorParams) -> StepDisplacement {
    let theta = stick_phase_angle(brush, motor);
    StepDisplacement {
        delta: step_for_angle(brush, theta),
        theta,
        beyond_geometry: theta > brush.alpha(),
    }
}

pub(crate) fn step_for_angle(brush: &BrushParams, theta: f64) -> f64 {
    let l = brush.length();
    let a = brush.alpha();
    l * (a - theta).cos() - l * a.cos()
}

/// One step per motor revolution: `v_r = omega / (2 pi) * delta`.
pub fn ground_speed_r1(brush: &BrushParams, motor: &MotorParams) -> f64 {
    motor.omega() / (2.0 * PI) * step_displacement_r1(brush, motor).delta
}

/// Steady-state amplitude of the undamped forced brush oscillator,
/// `m omega^2 r cos(alpha) / (I_theta (omega_n^2 - omega^2))`.
///
/// Negative above resonance (response in anti-phase with the forcing).
/// Within [`RESONANCE_GUARD`] of `omega_n` the amplitude is unbounded and a
/// [`Error::Resonance`] is returned instead.
pub fn forced_amplitude(brush: &BrushParams, motor: &MotorParams) -> Result<f64> {
    let omega = motor.omega();
    let omega_n = natural_frequency(brush);
    if ((omega - omega_n) / omega_n).abs() <= RESONANCE_GUARD {
        return Err(Error::Resonance { omega, omega_n });
    }
    let inertia = lumped_inertia(brush);
    Ok(motor.force_amplitude() * brush.alpha().cos() / (inertia * (omega_n * omega_n - omega * omega)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Validity {
    /// Peak centrifugal force does not exceed the weight, so the brushes
    /// never leave the ground.
    pub valid: bool,
    /// `M g - m omega^2 r`; negative when invalid.
    pub margin: f64,
}

/// The flexible-brush model assumes permanent ground contact. The boundary
/// `m omega^2 r = M g` counts as valid.
pub fn regime1_validity(motor: &MotorParams, robot: &RobotParams) -> Validity {
    let margin = robot.weight() - motor.force_amplitude();
    Validity {
        valid: margin >= 0.0,
        margin,
    }
}

/// Every closed-form quantity for one brush/motor pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regime1Prediction {
    pub k_theta: f64,
    pub i_theta: f64,
    pub omega_n: f64,
    pub t_bar: f64,
    pub omega_star: f64,
    pub theta_hat: f64,
    pub stick_angle: f64,
    pub delta: f64,
    pub v_r: f64,
    pub beyond_geometry: bool,
}

impl Regime1Prediction {
    pub fn new(brush: &BrushParams, motor: &MotorParams) -> Result<Self> {
        let step = step_displacement_r1(brush, motor);
        Ok(Self {
            k_theta: lumped_stiffness(brush),
            i_theta: lumped_inertia(brush),
            omega_n: natural_frequency(brush),
            t_bar: return_time(brush),
            omega_star: optimal_motor_speed(brush),
            theta_hat: forced_amplitude(brush, motor)?,
            stick_angle: step.theta,
            delta: step.delta,
            v_r: ground_speed_r1(brush, motor),
            beyond_geometry: step.beyond_geometry,
        })
    }
}
