//! Validated physical parameters. All quantities are SI.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

pub const DEFAULT_GRAVITY: f64 = 9.81;

fn positive(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::invalid(format!("{name} must be > 0 (got {value})")))
    }
}

fn non_negative(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::invalid(format!("{name} must be >= 0 (got {value})")))
    }
}

/// Geometry and material of one set of brushes, modelled as a cantilever
/// clamped at the robot body.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrushParams {
    young_modulus: f64,
    second_area_moment: f64,
    length: f64,
    alpha: f64,
    brush_mass: f64,
}

impl BrushParams {
    /// `alpha` is the inclination of the brush to the ground and must lie in
    /// the open interval (0, pi/2).
    pub fn new(young_modulus: f64, second_area_moment: f64, length: f64, alpha: f64, brush_mass: f64) -> Result<Self> {
        Ok(Self {
            young_modulus: positive("young_modulus", young_modulus)?,
            second_area_moment: positive("second_area_moment", second_area_moment)?,
            length: positive("length", length)?,
            alpha: check_alpha(alpha)?,
            brush_mass: positive("brush_mass", brush_mass)?,
        })
    }

    pub fn young_modulus(&self) -> f64 {
        self.young_modulus
    }

    pub fn second_area_moment(&self) -> f64 {
        self.second_area_moment
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn brush_mass(&self) -> f64 {
        self.brush_mass
    }

    /// Flexural rigidity `E * I`.
    pub fn flexural_rigidity(&self) -> f64 {
        self.young_modulus * self.second_area_moment
    }

    pub fn with_alpha(self, alpha: f64) -> Result<Self> {
        Self::new(
            self.young_modulus,
            self.second_area_moment,
            self.length,
            alpha,
            self.brush_mass,
        )
    }

    pub fn with_length(self, length: f64) -> Result<Self> {
        Self::new(
            self.young_modulus,
            self.second_area_moment,
            length,
            self.alpha,
            self.brush_mass,
        )
    }

    pub fn with_brush_mass(self, brush_mass: f64) -> Result<Self> {
        Self::new(
            self.young_modulus,
            self.second_area_moment,
            self.length,
            self.alpha,
            brush_mass,
        )
    }

    /// Rescales the Young modulus so that `E * I` equals `rigidity`; the
    /// second area moment is kept.
    pub fn with_flexural_rigidity(self, rigidity: f64) -> Result<Self> {
        positive("flexural_rigidity", rigidity)?;
        Self::new(
            rigidity / self.second_area_moment,
            self.second_area_moment,
            self.length,
            self.alpha,
            self.brush_mass,
        )
    }
}

fn check_alpha(alpha: f64) -> Result<f64> {
    if alpha.is_finite() && alpha > 0.0 && alpha < FRAC_PI_2 {
        Ok(alpha)
    } else {
        Err(Error::invalid(format!("alpha out of (0, π/2) (got {alpha})")))
    }
}

/// Eccentric rotating mass motor: a mass `m` spun at `omega` on radius `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotorParams {
    eccentric_mass: f64,
    eccentricity: f64,
    omega: f64,
}

impl MotorParams {
    pub fn new(eccentric_mass: f64, eccentricity: f64, omega: f64) -> Result<Self> {
        Ok(Self {
            eccentric_mass: non_negative("eccentric_mass", eccentric_mass)?,
            eccentricity: non_negative("eccentricity", eccentricity)?,
            omega: positive("omega", omega)?,
        })
    }

    pub fn eccentric_mass(&self) -> f64 {
        self.eccentric_mass
    }

    pub fn eccentricity(&self) -> f64 {
        self.eccentricity
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn with_omega(self, omega: f64) -> Result<Self> {
        Self::new(self.eccentric_mass, self.eccentricity, omega)
    }

    /// Peak centrifugal force `m * omega^2 * r`.
    pub fn force_amplitude(&self) -> f64 {
        self.eccentric_mass * self.omega * self.omega * self.eccentricity
    }

    /// Motor revolution period `2 pi / omega`.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    pub fn forcing(&self) -> Forcing {
        Forcing {
            amplitude: self.force_amplitude(),
            omega: self.omega,
        }
    }
}

/// Body-level quantities for rigid rotation about the brush pivot `P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobotParams {
    body_mass: f64,
    gravity: f64,
    pivot_inertia: f64,
    forcing_arm: f64,
    gravity_arm: f64,
    step_height: f64,
}

impl RobotParams {
    /// * `forcing_arm` - moment arm `w` of the centrifugal force about `P`
    /// * `gravity_arm` - moment arm `w_G` of the weight about `P`; zero is
    ///   allowed (centre of mass straight above the pivot)
    /// * `step_height` - lever `h` that turns a peak body angle into a step
    pub fn new(
        body_mass: f64,
        gravity: f64,
        pivot_inertia: f64,
        forcing_arm: f64,
        gravity_arm: f64,
        step_height: f64,
    ) -> Result<Self> {
        Ok(Self {
            body_mass: positive("body_mass", body_mass)?,
            gravity: positive("gravity", gravity)?,
            pivot_inertia: positive("pivot_inertia", pivot_inertia)?,
            forcing_arm: positive("forcing_arm", forcing_arm)?,
            gravity_arm: non_negative("gravity_arm", gravity_arm)?,
            step_height: positive("step_height", step_height)?,
        })
    }

    /// Same as [`RobotParams::new`] except that `gravity` may be zero, for
    /// gravity-free test set-ups.
    pub fn new_allowing_zero_gravity(
        body_mass: f64,
        gravity: f64,
        pivot_inertia: f64,
        forcing_arm: f64,
        gravity_arm: f64,
        step_height: f64,
    ) -> Result<Self> {
        let g = non_negative("gravity", gravity)?;
        let mut robot = Self::new(body_mass, 1.0, pivot_inertia, forcing_arm, gravity_arm, step_height)?;
        robot.gravity = g;
        Ok(robot)
    }

    pub fn body_mass(&self) -> f64 {
        self.body_mass
    }

    pub fn gravity(&self) -> f64 {
        self.gravity
    }

    pub fn pivot_inertia(&self) -> f64 {
        self.pivot_inertia
    }

    pub fn forcing_arm(&self) -> f64 {
        self.forcing_arm
    }

    pub fn gravity_arm(&self) -> f64 {
        self.gravity_arm
    }

    pub fn step_height(&self) -> f64 {
        self.step_height
    }

    /// Weight `M * g`.
    pub fn weight(&self) -> f64 {
        self.body_mass * self.gravity
    }
}

/// Sinusoidal centrifugal forcing of a motor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Forcing {
    pub amplitude: f64,
    pub omega: f64,
}

impl Forcing {
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    pub fn at(&self, t: f64) -> f64 {
        self.amplitude * (self.omega * t).sin()
    }
}

/// Centrifugal force `m * omega^2 * r * sin(omega * t)`.
pub fn forcing_at(motor: &MotorParams, t: f64) -> f64 {
    motor.forcing().at(t)
}
