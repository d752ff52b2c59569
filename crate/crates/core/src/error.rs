use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A physical parameter violates its invariant. The message names it.
    #[error("{0}")]
    InvalidParameter(String),

    /// Driving frequency inside the guard band around the brush natural
    /// frequency, where the undamped forced response diverges.
    #[error("resonance: omega = {omega} is within the guard band of omega_n = {omega_n}")]
    Resonance { omega: f64, omega_n: f64 },

    #[error("invalid simulation config: {0}")]
    Config(String),

    /// The body rotated to pi/2 or beyond; the pivot model no longer applies.
    #[error("model domain exceeded: theta_r = {theta} rad at t = {t} s (body tipping over)")]
    ModelDomain { t: f64, theta: f64 },

    #[error("trajectory has no completed cycle")]
    NoCycles,

    #[error("invalid sweep: {0}")]
    Sweep(String),

    /// Grid argmax sits on an end of the grid, so there is no bracket to refine.
    #[error("argmax {value} is a grid endpoint; cannot bracket the peak")]
    EndpointArgmax { value: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
