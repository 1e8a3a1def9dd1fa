use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("mode grid must have an odd number of modes, got {0}")]
    EvenModeCount(usize),

    #[error("mode grid needs at least {min} modes, got {got}")]
    TooFewModes { min: usize, got: usize },

    #[error(
        "bandwidth factor {factor} is below the floor {floor}: \
         Lorentzian tails would be truncated too hard"
    )]
    BandwidthTooNarrow { factor: f64, floor: f64 },

    #[error("grid decay rate {grid} does not match atom decay rate {atom}")]
    GridMismatch { grid: f64, atom: f64 },

    #[error("gaussian width {sigma} is under-resolved: {points} grid points within ±3σ (need 10)")]
    UnderResolved { sigma: f64, points: usize },

    #[error("envelope is not normalized: ∫|φ|² dt = {norm}")]
    Unnormalized { norm: f64 },

    #[error("envelope samples invalid: {0}")]
    InvalidSamples(String),

    #[error("time {t} lies outside the recurrence-free window [{lo}, {hi}]")]
    OutsideRecurrenceWindow { t: f64, lo: f64, hi: f64 },

    #[error("time {t} precedes the interaction start {t_in}")]
    BeforeStart { t: f64, t_in: f64 },

    #[error("far-field condition violated: r = {r} < 10·c/ω₀ = {min_r}")]
    NotFarField { r: f64, min_r: f64 },

    #[error("propagator config rejected: {0}")]
    InvalidConfig(String),

    #[error("norm drift {drift:.3e} at t = {t} exceeds the abort threshold {limit:.1e}")]
    NormDrift { t: f64, drift: f64, limit: f64 },

    #[error("empty trajectory")]
    EmptyTrajectory,

    #[error("parameter {value:?} lies outside the bounds {bounds:?}")]
    OutOfBounds {
        value: Vec<f64>,
        bounds: Vec<(f64, f64)>,
    },

    #[error("all {0} scan points failed to evaluate")]
    AllPointsFailed(usize),
}
