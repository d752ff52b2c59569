//! Which regime a design operates in.
//!
//! The flexible-brush model needs the brushes to stay on the ground, so a
//! peak centrifugal force above the weight means rigid-pivot rocking. Below
//! that, the physical factors that favour one regime over the other are
//! reported and two of them can push a design into the `Transitional` band:
//!
//! * (i) brush rigidity: driving far above the brush natural frequency,
//! * (ii) robot mass: reported only (no threshold exists for `I_P`),
//! * (iii) brush inclination: nearly vertical brushes.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use crate::params::{BrushParams, MotorParams, RobotParams};
use crate::regime1::natural_frequency;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    RegimeI,
    RegimeII,
    Transitional,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::RegimeI => "RegimeI",
            Regime::RegimeII => "RegimeII",
            Regime::Transitional => "Transitional",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// `omega > omega_n * (1 + band)` counts as driving a stiff brush.
    pub band: f64,
    /// `pi/2 - alpha` below this counts as a straight brush (rad).
    pub alpha_margin: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            band: 0.5,
            alpha_margin: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    /// Contact condition `m omega^2 r > M g`.
    Lift,
    Rigidity,
    Mass,
    Inclination,
}

impl Factor {
    pub fn tag(&self) -> &'static str {
        match self {
            Factor::Lift => "(lift)",
            Factor::Rigidity => "(i)",
            Factor::Mass => "(ii)",
            Factor::Inclination => "(iii)",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Criterion {
    pub factor: Factor,
    pub triggered: bool,
    pub detail: String,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.triggered { "triggered" } else { "not triggered" };
        write!(f, "{} {}: {}", self.factor.tag(), mark, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport {
    pub regime: Regime,
    /// `m omega^2 r / (M g)`.
    pub lift_ratio: f64,
    /// `omega / omega_n`.
    pub stiffness_score: f64,
    /// `pi/2 - alpha`.
    pub alpha_margin: f64,
    pub rationale: Vec<Criterion>,
}

/// Four significant digits, switching to exponent form for small or large
/// magnitudes. The exact values are on the report itself.
fn short(v: f64) -> String {
    if v != 0.0 && !(1e-3..1e6).contains(&v.abs()) {
        format!("{v:.3e}")
    } else {
        format!("{v:.4}")
    }
}

pub fn classify(
    brush: &BrushParams,
    motor: &MotorParams,
    robot: &RobotParams,
    thresholds: &Thresholds,
) -> RegimeReport {
    let lift_ratio = motor.force_amplitude() / robot.weight();
    let omega_n = natural_frequency(brush);
    let stiffness_score = motor.omega() / omega_n;
    let alpha_margin = FRAC_PI_2 - brush.alpha();

    let lifts = lift_ratio > 1.0;
    let stiff = stiffness_score > 1.0 + thresholds.band;
    let straight = alpha_margin < thresholds.alpha_margin;

    let rationale = vec![
        Criterion {
            factor: Factor::Lift,
            triggered: lifts,
            detail: format!("lift_ratio = {} (threshold 1)", short(lift_ratio)),
        },
        Criterion {
            factor: Factor::Rigidity,
            triggered: stiff,
            detail: format!(
                "stiffness_score = omega/omega_n = {} (threshold {})",
                short(stiffness_score),
                1.0 + thresholds.band
            ),
        },
        Criterion {
            factor: Factor::Mass,
            triggered: false,
            detail: format!(
                "I_P = {} kg m^2, M = {} kg (reported only)",
                short(robot.pivot_inertia()),
                short(robot.body_mass())
            ),
        },
        Criterion {
            factor: Factor::Inclination,
            triggered: straight,
            detail: format!(
                "alpha_margin = {} rad (threshold {})",
                short(alpha_margin),
                thresholds.alpha_margin
            ),
        },
    ];

    let regime = if lifts {
        Regime::RegimeII
    } else if stiff || straight {
        Regime::Transitional
    } else {
        Regime::RegimeI
    };

    RegimeReport {
        regime,
        lift_ratio,
        stiffness_score,
        alpha_margin,
        rationale,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn robot() -> RobotParams {
        RobotParams::new(0.1, 10.0, 2e-5, 0.03, 0.003, 0.04).unwrap()
    }

    /// omega_n = 1 rad/s at alpha -> 0, scaled by cos(alpha) otherwise.
    fn brush(alpha: f64) -> BrushParams {
        BrushParams::new(1.0, 1.0, 1.0, alpha, 6.0).unwrap()
    }

    fn triggered(report: &RegimeReport, factor: Factor) -> bool {
        report.rationale.iter().any(|c| c.factor == factor && c.triggered)
    }

    #[test]
    fn lift_ratio_two_is_regime_two() {
        let b = brush(0.5);
        let omega = natural_frequency(&b);
        // weight 1 N, m omega^2 r = 2 N
        let m = MotorParams::new(2.0 / (omega * omega), 1.0, omega).unwrap();
        let r = classify(&b, &m, &robot(), &Thresholds::default());
        assert_eq!(r.regime, Regime::RegimeII);
        assert!((r.lift_ratio - 2.0).abs() < 1e-12);
        assert!(triggered(&r, Factor::Lift));
    }

    #[test]
    fn idle_motor_is_regime_one() {
        let b = brush(0.5);
        let m = MotorParams::new(0.0, 1.0, natural_frequency(&b)).unwrap();
        let r = classify(&b, &m, &robot(), &Thresholds::default());
        assert_eq!(r.regime, Regime::RegimeI);
        assert_eq!(r.lift_ratio, 0.0);
        assert!(!r.rationale.is_empty());
    }

    #[test]
    fn fast_drive_is_transitional_by_rigidity() {
        let b = brush(0.5);
        let omega = 5.0 * natural_frequency(&b);
        let m = MotorParams::new(0.5 / (omega * omega), 1.0, omega).unwrap();
        let r = classify(&b, &m, &robot(), &Thresholds::default());
        assert!((r.lift_ratio - 0.5).abs() < 1e-12);
        assert_eq!(r.regime, Regime::Transitional);
        assert!(triggered(&r, Factor::Rigidity));
        assert!(r.rationale.iter().any(|c| c.to_string().starts_with("(i) triggered")));
    }

    #[test]
    fn near_vertical_brush_is_transitional() {
        let b = brush(FRAC_PI_2 - 0.05);
        let m = MotorParams::new(0.0, 1.0, 0.5 * natural_frequency(&b)).unwrap();
        let r = classify(&b, &m, &robot(), &Thresholds::default());
        assert_eq!(r.regime, Regime::Transitional);
        assert!(triggered(&r, Factor::Inclination));

        let heavy = MotorParams::new(3.0, 1.0, 0.5 * natural_frequency(&b)).unwrap();
        let r = classify(&b, &heavy, &robot(), &Thresholds::default());
        assert_eq!(r.regime, Regime::RegimeII);
    }
}
