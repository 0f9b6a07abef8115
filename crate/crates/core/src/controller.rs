//! Segment-indexed adaptive iterative learning controller.
//!
//! The controller runs two loops over a repeated finite-horizon task. The
//! inner (time-domain) loop is a feedback law on the dual-quaternion pose
//! and twist errors plus a switching robust term scaled by a learned
//! uncertainty magnitude θ̂:
//!
//! ```text
//! f̊ = −θ̂(t)·dir(δω̊, tr(ω̊_d), tr(ω̊̇_d)) − k_d·exch(δω̊)
//!     − ε·k_p·vec(δQ_r) − k_p·vec(δQ_r*∘δQ_d)
//! ```
//!
//! where `dir` is [`robust_direction`] and tr(·) re-expresses reference
//! twists in the actual body frame via the error pose. The outer
//! (iteration-domain) loop learns θ̂ pointwise in time: each repetition k
//! adds a non-negative increment on top of the previous repetition's
//! profile,
//!
//! ```text
//! θ̂_k(t) = proj(θ̂_{k−1})(t) + k_θ·crs(δω̊, dir(…))      (cumulative)
//! θ̂_k(t) = proj(θ̂_{k−1})(t) + min(k_l, k_θ·crs(…))      (saturated)
//! ```
//!
//! with θ̂₀ ≡ 0, so the first repetition is a pure feedback (PD-type) run
//! and no update occurs during it. `proj` is the segment-based dynamic
//! projection: the horizon is split into segments h₀ < … < h_s, and within
//! each segment the profile is floored at (segment max − k_c). The floor
//! spreads isolated learning peaks across their whole segment while the
//! pointwise increments keep the profile from ever shrinking below the
//! projected previous one — together these bound the estimate without any
//! prior knowledge of the uncertainty it tracks.

use serde::{Deserialize, Serialize};

use crate::dual::{robust_direction, DualVector3};
use crate::error::{Error, Result};
use crate::rigid_body::{DesiredState, ErrorState};

/// Time of control tick `index` at a sampling rate of `frequency` Hz.
///
/// Every consumer of tick times (segment binning, disturbance sampling,
/// logging) must go through this one definition: segment membership is
/// decided by floating-point comparisons against the grid boundaries, so two
/// different roundings of the "same" time could land in different segments.
/// Dividing by the frequency (rather than multiplying by a rounded Δt) also
/// makes the final tick of an integral-length horizon land on it exactly.
pub fn tick_time(index: usize, frequency: f64) -> f64 {
    index as f64 / frequency
}

/// Partition of the task horizon \[0, T\] into segments h₀ < h₁ < … < h_s.
///
/// Segment j covers the half-open interval (h_{j−1}, h_j]; t = 0 belongs to
/// segment 1 by convention.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentGrid {
    boundaries: Vec<f64>,
}

impl SegmentGrid {
    /// Builds a grid from explicit boundaries h₀…h_s.
    ///
    /// Requires at least one segment, h₀ = 0 exactly, strict monotonicity,
    /// and finite values.
    pub fn from_boundaries(boundaries: Vec<f64>) -> Result<Self> {
        if boundaries.len() < 2 {
            return Err(Error::InvalidGrid {
                detail: format!(
                    "need at least two boundaries for one segment, got {}",
                    boundaries.len()
                ),
            });
        }
        if boundaries[0] != 0.0 {
            return Err(Error::InvalidGrid {
                detail: format!("first boundary must be exactly 0, got {}", boundaries[0]),
            });
        }
        for pair in boundaries.windows(2) {
            if !pair[1].is_finite() || !(pair[1] > pair[0]) {
                return Err(Error::InvalidGrid {
                    detail: format!(
                        "boundaries must be finite and strictly increasing, got {} then {}",
                        pair[0], pair[1]
                    ),
                });
            }
        }
        Ok(Self { boundaries })
    }

    /// Builds `segments` equal-width segments over \[0, horizon\].
    ///
    /// The last boundary is pinned to `horizon` exactly rather than left to
    /// accumulated rounding.
    pub fn uniform(horizon: f64, segments: usize) -> Result<Self> {
        if !horizon.is_finite() || horizon <= 0.0 {
            return Err(Error::InvalidGrid {
                detail: format!("horizon must be positive and finite, got {horizon}"),
            });
        }
        if segments == 0 {
            return Err(Error::InvalidGrid {
                detail: "need at least one segment".into(),
            });
        }
        let width = horizon / segments as f64;
        let mut boundaries: Vec<f64> = (0..segments).map(|j| j as f64 * width).collect();
        boundaries.push(horizon);
        Self::from_boundaries(boundaries)
    }

    /// Number of segments s.
    pub fn segment_count(&self) -> usize {
        self.boundaries.len() - 1
    }

    /// Task horizon T = h_s.
    pub fn horizon(&self) -> f64 {
        *self.boundaries.last().expect("grid has boundaries")
    }

    /// The boundaries h₀…h_s.
    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    /// Segment index of time `t`: the smallest j ∈ 1..=s with h_j ≥ t.
    ///
    /// Times must lie in \[0, T\]; a relative 10⁻¹² overhang is clamped so a
    /// final tick reconstructed as n/frequency cannot fall off the grid by a
    /// rounding ulp.
    pub fn segment_index(&self, t: f64) -> Result<usize> {
        let horizon = self.horizon();
        if !(t >= 0.0) || !(t <= horizon * (1.0 + 1e-12)) {
            return Err(Error::OutsideGrid { t, horizon });
        }
        let t = t.min(horizon);
        let j = self.boundaries.partition_point(|&h| h < t);
        Ok(j.max(1))
    }
}

/// The learned uncertainty-magnitude profile θ̂ of one repetition, sampled
/// densely on the control tick grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateProfile {
    values: Vec<f64>,
    iteration: usize,
}

impl EstimateProfile {
    /// All-zero profile; with `iteration = 0` this is θ̂₀, the defining
    /// initial condition of the learning loop.
    pub fn zeros(ticks: usize, iteration: usize) -> Self {
        Self {
            values: vec![0.0; ticks],
            iteration,
        }
    }

    /// Number of tick samples.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True when the profile holds no samples.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Repetition index this profile belongs to.
    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// Sample at `tick`.
    pub fn get(&self, tick: usize) -> f64 {
        self.values[tick]
    }

    /// All samples in tick order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn set(&mut self, tick: usize, value: f64) {
        self.values[tick] = value;
    }
}

/// Segment-based dynamic projection of a completed repetition's profile.
///
/// For each tick with segment p: let m be the max of `prev` over the ticks
/// falling in (h_{p−1}, h_p]; the output keeps `prev` where it exceeds
/// m − k_c and floors it at m − k_c elsewhere. Per-segment maxima are
/// preserved, the output never drops below the input, and tick 0 (which
/// belongs to no half-open segment interval) contributes to no maximum.
pub fn segment_project(
    prev: &EstimateProfile,
    grid: &SegmentGrid,
    frequency: f64,
    k_c: f64,
) -> Result<EstimateProfile> {
    if !frequency.is_finite() || frequency <= 0.0 {
        return Err(Error::InvalidConfig {
            detail: format!("control frequency must be positive, got {frequency}"),
        });
    }
    if !k_c.is_finite() || k_c < 0.0 {
        return Err(Error::InvalidConfig {
            detail: format!("projection width must be non-negative, got {k_c}"),
        });
    }
    if prev.is_empty() {
        return Err(Error::ProfileMismatch {
            detail: "cannot project an empty profile".into(),
        });
    }

    let n = prev.len();
    let mut segment_of = vec![0usize; n];
    let mut segment_max = vec![f64::NEG_INFINITY; grid.segment_count() + 1];
    for (tick, slot) in segment_of.iter_mut().enumerate() {
        let j = grid.segment_index(tick_time(tick, frequency))?;
        *slot = j;
        if tick > 0 {
            segment_max[j] = segment_max[j].max(prev.get(tick));
        }
    }

    let mut out = prev.clone();
    for tick in 0..n {
        let m = segment_max[segment_of[tick]];
        if m.is_finite() {
            let floor = m - k_c;
            if prev.get(tick) <= floor {
                out.set(tick, floor);
            }
        }
    }
    Ok(out)
}

/// Gains of the control and update laws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ControllerGains {
    /// Proportional pose gain.
    pub k_p: f64,
    /// Derivative (twist-error) gain.
    pub k_d: f64,
    /// Projection width: how far below its segment max a profile may sit.
    pub k_c: f64,
    /// Learning gain on the update increment.
    #[serde(rename = "k_theta")]
    pub k_theta: f64,
    /// Per-tick increment bound of the saturated update law, if used.
    #[serde(default)]
    pub k_l: Option<f64>,
}

impl Default for ControllerGains {
    /// Gains of the simulated proximity experiment.
    fn default() -> Self {
        Self {
            k_p: 1.0,
            k_d: 1.0,
            k_c: 0.01,
            k_theta: 0.002,
            k_l: Some(0.02),
        }
    }
}

impl ControllerGains {
    /// All gains must be positive and finite (k_l only when present).
    pub fn validate(&self) -> Result<()> {
        let require = |name: &str, value: f64| -> Result<()> {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidConfig {
                    detail: format!("gain {name} must be positive and finite, got {value}"),
                });
            }
            Ok(())
        };
        require("k_p", self.k_p)?;
        require("k_d", self.k_d)?;
        require("k_c", self.k_c)?;
        require("k_theta", self.k_theta)?;
        if let Some(k_l) = self.k_l {
            require("k_l", k_l)?;
        }
        Ok(())
    }
}

/// Which iterative update law grows the estimate profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UpdateLaw {
    /// Unsaturated per-tick increments.
    #[serde(rename = "eq35")]
    Cumulative,
    /// Per-tick increments capped at k_l.
    #[serde(rename = "eq56")]
    Saturated,
}

impl UpdateLaw {
    /// Stable external token for this law (CLI / config / summary files).
    pub fn token(&self) -> &'static str {
        match self {
            UpdateLaw::Cumulative => "eq35",
            UpdateLaw::Saturated => "eq56",
        }
    }
}

impl std::fmt::Display for UpdateLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.token())
    }
}

impl std::str::FromStr for UpdateLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eq35" => Ok(UpdateLaw::Cumulative),
            "eq56" => Ok(UpdateLaw::Saturated),
            other => Err(Error::InvalidConfig {
                detail: format!("unknown update law {other:?}, expected eq35 or eq56"),
            }),
        }
    }
}

fn robust_terms(err: &ErrorState, desired: &DesiredState) -> Result<DualVector3> {
    let twist_ref = err.pose.transform(&desired.twist)?;
    let rate_ref = err.pose.transform(&desired.twist_rate)?;
    Ok(robust_direction(&err.twist, &twist_ref, &rate_ref, 0.0))
}

/// Feedback + robust control law. Returns the wrench (real = force in N,
/// dual = torque in N·m) for the current errors and estimate sample θ̂(t).
pub fn control_law(
    err: &ErrorState,
    desired: &DesiredState,
    theta: f64,
    gains: &ControllerGains,
) -> Result<DualVector3> {
    let direction = robust_terms(err, desired)?;
    let mut wrench = direction * (-theta) - err.twist.swapped() * gains.k_d;
    // Attitude feedback acts on the torque (dual) slot, position feedback —
    // the half translation vec(δQ_r*∘δQ_d) = δP/2 — on the force (real) slot.
    wrench.dual -= gains.k_p * err.attitude_vector;
    wrench.real -= gains.k_p * (err.pose.real().conj() * err.pose.dual()).v;
    Ok(wrench)
}

/// One pointwise estimate update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateUpdate {
    /// New estimate sample θ̂_k(t).
    pub value: f64,
    /// Exactly the increment that was added (already saturated if the law
    /// caps it); non-negative by construction.
    pub increment: f64,
}

/// Grows one estimate sample on top of the previous repetition's projected
/// value. The increment k_θ·crs(δω̊, dir(…)) is a sum of termwise products
/// x·sgn(x) ≥ 0, so the estimate can only grow; the saturated law caps the
/// increment at k_l.
pub fn update_estimate(
    prev_projected: f64,
    err: &ErrorState,
    desired: &DesiredState,
    gains: &ControllerGains,
    law: UpdateLaw,
) -> Result<EstimateUpdate> {
    let direction = robust_terms(err, desired)?;
    let raw = gains.k_theta * err.twist.swap_dot(&direction);
    debug_assert!(raw >= 0.0, "learning increment must be non-negative");
    let increment = match law {
        UpdateLaw::Cumulative => raw,
        UpdateLaw::Saturated => {
            let k_l = gains.k_l.ok_or_else(|| Error::InvalidConfig {
                detail: "saturated update law needs the increment bound k_l".into(),
            })?;
            raw.min(k_l)
        }
    };
    Ok(EstimateUpdate {
        value: prev_projected + increment,
        increment,
    })
}

/// What one controller tick produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TickOutput {
    /// Commanded wrench (real = force, dual = torque).
    pub wrench: DualVector3,
    /// Estimate sample θ̂_k(t) used by the wrench.
    pub theta_hat: f64,
    /// Increment added at this tick (0 during repetition 0).
    pub increment: f64,
}

/// Runs one controller tick: updates the estimate sample (update-then-
/// control), stores it into the current repetition's profile, and returns
/// the wrench computed with it.
///
/// Repetition 0 is special: θ̂₀ ≡ 0 by definition, so no update occurs and
/// the controller acts as a pure PD law. Profile alignment (lengths, tick
/// range, repetition indices) is checked on every call.
#[allow(clippy::too_many_arguments)]
pub fn run_controller_tick(
    tick: usize,
    iteration: usize,
    err: &ErrorState,
    desired: &DesiredState,
    prev_projected: &EstimateProfile,
    current: &mut EstimateProfile,
    gains: &ControllerGains,
    law: UpdateLaw,
) -> Result<TickOutput> {
    if prev_projected.len() != current.len() {
        return Err(Error::ProfileMismatch {
            detail: format!(
                "profile grids disagree: previous has {} ticks, current {}",
                prev_projected.len(),
                current.len()
            ),
        });
    }
    if tick >= current.len() {
        return Err(Error::ProfileMismatch {
            detail: format!("tick {tick} outside the {}-tick profile", current.len()),
        });
    }
    if current.iteration() != iteration || prev_projected.iteration() + 1 < iteration {
        return Err(Error::ProfileMismatch {
            detail: format!(
                "repetition indices disagree: running {iteration}, current profile {}, \
                 previous profile {}",
                current.iteration(),
                prev_projected.iteration()
            ),
        });
    }

    let (theta, increment) = if iteration == 0 {
        (0.0, 0.0)
    } else {
        let update = update_estimate(prev_projected.get(tick), err, desired, gains, law)?;
        (update.value, update.increment)
    };
    debug_assert!(theta >= 0.0, "estimate samples must stay non-negative");
    current.set(tick, theta);
    let wrench = control_law(err, desired, theta, gains)?;
    Ok(TickOutput {
        wrench,
        theta_hat: theta,
        increment,
    })
}
