//! Locomotion models for vibration-driven brush robots ("brushbots").
//!
//! Two operating regimes are covered:
//!
//! * [`regime1`]: flexible brushes bend under the centrifugal force of an
//!   eccentric rotating mass motor. Everything is closed form: beam
//!   deflection, the lumped spring-mass equivalent of a brush, its natural
//!   frequency, and the resulting ground speed.
//! * [`regime2`]: stiff brushes act as a pivot and the body rocks about it.
//!   This is a hybrid system (unilateral ground contact with plastic impacts)
//!   that is integrated numerically.
//!
//! [`select`] decides which regime a design is likely to operate in, and
//! [`sweep`] tabulates objectives over motor speed or brush parameters.

pub mod error;
pub mod params;
pub mod regime1;
pub mod regime2;
pub mod select;
pub mod sweep;

pub use error::{Error, Result};
pub use params::{forcing_at, BrushParams, Forcing, MotorParams, RobotParams, DEFAULT_GRAVITY};
pub use regime1::{Regime1Prediction, StepDisplacement, Validity, RESONANCE_GUARD};
pub use regime2::{FlightEvent, Regime2Trajectory, Sample, SimConfig};
pub use select::{classify, Regime, RegimeReport, Thresholds};
pub use sweep::{Baseline, Objective, RefinedPeak, RowStatus, SweepParameter, SweepResult, SweepRow, SweepSpec};
