//! Error type shared across the library.
//!
//! Numerical guard rails (unit-constraint checks, grid bounds, monitor
//! thresholds) all funnel into [`Error`] so callers can distinguish a
//! diverging integration from a malformed configuration or log file.

use thiserror::Error;

/// Everything that can go wrong while building or running an experiment.
#[derive(Debug, Error)]
pub enum Error {
    /// A quaternion with near-zero norm cannot be normalized.
    #[error("quaternion norm {norm:.3e} is too small to normalize")]
    DegenerateQuaternion { norm: f64 },

    /// Rotation axes must be unit length.
    #[error("rotation axis must be unit length (norm deviates by {deviation:.3e})")]
    NonUnitAxis { deviation: f64 },

    /// A value violates the unit dual-quaternion constraints.
    #[error("unit dual-quaternion constraint violated: {detail}")]
    NotUnit { detail: String },

    /// A frame transform produced a residual scalar part, indicating the
    /// operand was not a proper vector/pose pair.
    #[error("frame transform left a scalar residual of {residual:.3e}")]
    ScalarResidual { residual: f64 },

    /// Inertia matrices must be symmetric.
    #[error("inertia matrix asymmetry {asymmetry:.3e} exceeds tolerance")]
    AsymmetricInertia { asymmetry: f64 },

    /// Inertia matrices must be positive definite.
    #[error("inertia matrix is not positive definite")]
    NotPositiveDefinite,

    /// Mass must be strictly positive.
    #[error("mass must be positive, got {mass}")]
    NonPositiveMass { mass: f64 },

    /// Integration steps must move forward in time.
    #[error("time step must be positive and finite, got {dt}")]
    InvalidTimeStep { dt: f64 },

    /// The state left the numerical envelope (NaN/∞ or unit-constraint blowup).
    #[error("integration diverged: {detail}")]
    Diverged { detail: String },

    /// A time fell outside the segment grid.
    #[error("time {t} lies outside the segment grid [0, {horizon}]")]
    OutsideGrid { t: f64, horizon: f64 },

    /// The segment grid itself is malformed.
    #[error("invalid segment grid: {detail}")]
    InvalidGrid { detail: String },

    /// Estimate profiles from consecutive iterations must share a tick grid.
    #[error("estimate profiles are misaligned: {detail}")]
    ProfileMismatch { detail: String },

    /// The gravity model is singular at the origin.
    #[error("body is {r} m from the attracting center, inside the singular region")]
    GravitySingularity { r: f64 },

    /// Configuration failed validation.
    #[error("invalid configuration: {detail}")]
    InvalidConfig { detail: String },

    /// A runtime sanity monitor tripped during a campaign.
    #[error("campaign monitor tripped at iteration {iteration}: {detail}")]
    MonitorTripped { iteration: usize, detail: String },

    /// A failure with the iteration/tick it occurred at attached.
    #[error("iteration {iteration}, tick {tick} (t = {t} s): {source}")]
    AtTick {
        iteration: usize,
        tick: usize,
        t: f64,
        #[source]
        source: Box<Error>,
    },

    /// Replay disagreed with the logged trajectory.
    #[error("replay mismatch at t = {t}: {detail}")]
    ReplayMismatch { t: f64, detail: String },

    /// A log file could not be parsed.
    #[error("malformed log: {detail}")]
    MalformedLog { detail: String },

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
