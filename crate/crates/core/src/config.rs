//! Campaign configuration: a TOML-backed, field-for-field description of one
//! learning experiment.
//!
//! Every field has a default taken from the simulated proximity-operation
//! experiment (20 s at 1 kHz, 200 segments, saturated update law, a 19 kg
//! body on a near-circular low orbit), so an empty config file — or none at
//! all — runs the reference campaign. Partial files override individual
//! fields; unknown keys are rejected rather than silently ignored.

use std::path::PathBuf;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::controller::{ControllerGains, SegmentGrid, UpdateLaw};
use crate::dual::DualInertia;
use crate::dual_quaternion::{Pose, UnitDualQuaternion};
use crate::error::{Error, Result};
use crate::quaternion::Quaternion;
use crate::rigid_body::{DisturbanceModel, SwingTwist};

/// Mass and inertia of a rigid body.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BodyConfig {
    /// Mass in kg.
    pub mass: f64,
    /// Inertia tensor in kg·m², row-major.
    pub inertia: [[f64; 3]; 3],
}

impl BodyConfig {
    /// The inertia rows as a matrix.
    pub fn inertia_matrix(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|r, c| self.inertia[r][c])
    }

    /// Validated dual inertia operator for this body.
    pub fn dual_inertia(&self) -> Result<DualInertia> {
        DualInertia::new(self.mass, self.inertia_matrix())
    }
}

impl Default for BodyConfig {
    /// True plant of the experiment: m = 19 kg.
    fn default() -> Self {
        Self {
            mass: 19.0,
            inertia: [[12.0, 1.0, 1.0], [1.0, 10.0, 2.0], [1.0, 2.0, 10.0]],
        }
    }
}

/// The nominal (design-time) body model. The control and update laws are
/// model-free and never read it; it is carried so a config file states the
/// full experiment, and validated so typos surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NominalBodyConfig {
    /// Nominal mass in kg.
    pub mass: f64,
    /// Nominal inertia tensor in kg·m², row-major.
    pub inertia: [[f64; 3]; 3],
}

impl NominalBodyConfig {
    /// Validated dual inertia operator for the nominal model.
    pub fn dual_inertia(&self) -> Result<DualInertia> {
        DualInertia::new(self.mass, Matrix3::from_fn(|r, c| self.inertia[r][c]))
    }
}

impl Default for NominalBodyConfig {
    /// Nominal model of the experiment: m = 20 kg.
    fn default() -> Self {
        Self {
            mass: 20.0,
            inertia: [[20.0, 2.0, 1.0], [2.0, 15.0, 3.0], [1.0, 3.0, 15.0]],
        }
    }
}

/// Initial reference pose.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DesiredConfig {
    /// Initial attitude quaternion, scalar first. Normalized on load, so
    /// values quoted at limited precision are accepted.
    pub attitude: [f64; 4],
    /// Initial position in the reference body frame, meters.
    pub position: [f64; 3],
}

impl DesiredConfig {
    /// Initial reference pose as a unit dual quaternion.
    pub fn initial_pose(&self) -> Result<UnitDualQuaternion> {
        let [s, x, y, z] = self.attitude;
        let attitude = Quaternion::new(s, x, y, z).normalize()?;
        let [px, py, pz] = self.position;
        let position = Vector3::new(px, py, pz);
        if !position.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidConfig {
                detail: format!("desired position must be finite, got {position:?}"),
            });
        }
        Ok(UnitDualQuaternion::from_pose(&Pose::new(attitude, position)))
    }
}

impl Default for DesiredConfig {
    /// Initial reference of the experiment (quoted to the precision the
    /// source gives, hence the normalization on load).
    fn default() -> Self {
        Self {
            attitude: [0.7055, 0.0471, -0.7055, -0.0471],
            position: [0.0, 0.0, -6_778_200.0],
        }
    }
}

/// Parameters of the [`SwingTwist`] reference twist profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrajectoryConfig {
    /// Roll amplitude in radians.
    pub roll_amplitude: f64,
    /// Roll frequency in rad/s.
    pub roll_frequency: f64,
    /// Orbit rate in rad/s.
    pub orbit_rate: f64,
    /// Along-track speed in m/s.
    pub speed: f64,
}

impl TrajectoryConfig {
    /// The corresponding twist profile.
    pub fn profile(&self) -> SwingTwist {
        SwingTwist {
            roll_amplitude: self.roll_amplitude,
            roll_frequency: self.roll_frequency,
            orbit_rate: self.orbit_rate,
            speed: self.speed,
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("roll_amplitude", self.roll_amplitude),
            ("roll_frequency", self.roll_frequency),
            ("orbit_rate", self.orbit_rate),
            ("speed", self.speed),
        ] {
            if !value.is_finite() {
                return Err(Error::InvalidConfig {
                    detail: format!("trajectory.{name} must be finite, got {value}"),
                });
            }
        }
        Ok(())
    }
}

impl Default for TrajectoryConfig {
    fn default() -> Self {
        let p = SwingTwist::default();
        Self {
            roll_amplitude: p.roll_amplitude,
            roll_frequency: p.roll_frequency,
            orbit_rate: p.orbit_rate,
            speed: p.speed,
        }
    }
}

/// Disturbance environment: per-axis torque and force sinusoids plus
/// point-mass gravity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DisturbanceConfig {
    /// Torque sinusoid periods in s, per body axis (x, y, z).
    pub torque_periods: [f64; 3],
    /// Torque sinusoid magnitudes in N·m.
    pub torque_magnitudes: [f64; 3],
    /// Torque sinusoid phases in rad (fixed across iterations).
    pub torque_phases: [f64; 3],
    /// Force sinusoid periods in s.
    pub force_periods: [f64; 3],
    /// Force sinusoid magnitudes in N.
    pub force_magnitudes: [f64; 3],
    /// Per-iteration force phases are drawn uniformly from [0, phase_range).
    pub phase_range: f64,
    /// Gravitational parameter μ in m³/s²; zero disables gravity.
    pub gravity_mu: f64,
}

impl DisturbanceConfig {
    /// Disturbance model for a body of the given mass under this seed.
    pub fn model(&self, mass: f64, seed: u64) -> DisturbanceModel {
        DisturbanceModel {
            torque_periods: self.torque_periods,
            torque_magnitudes: self.torque_magnitudes,
            torque_phases: self.torque_phases,
            force_periods: self.force_periods,
            force_magnitudes: self.force_magnitudes,
            phase_range: self.phase_range,
            gravity_mu: self.gravity_mu,
            mass,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, values) in [
            ("torque_periods", &self.torque_periods),
            ("force_periods", &self.force_periods),
        ] {
            for value in values {
                if !value.is_finite() || *value <= 0.0 {
                    return Err(Error::InvalidConfig {
                        detail: format!(
                            "disturbance.{name} entries must be positive, got {value}"
                        ),
                    });
                }
            }
        }
        for (name, values) in [
            ("torque_magnitudes", &self.torque_magnitudes),
            ("force_magnitudes", &self.force_magnitudes),
            ("torque_phases", &self.torque_phases),
        ] {
            for value in values {
                if !value.is_finite() {
                    return Err(Error::InvalidConfig {
                        detail: format!("disturbance.{name} entries must be finite, got {value}"),
                    });
                }
            }
        }
        if !self.phase_range.is_finite() || self.phase_range < 0.0 {
            return Err(Error::InvalidConfig {
                detail: format!(
                    "disturbance.phase_range must be non-negative, got {}",
                    self.phase_range
                ),
            });
        }
        if !self.gravity_mu.is_finite() || self.gravity_mu < 0.0 {
            return Err(Error::InvalidConfig {
                detail: format!(
                    "disturbance.gravity_mu must be non-negative, got {}",
                    self.gravity_mu
                ),
            });
        }
        Ok(())
    }
}

impl Default for DisturbanceConfig {
    fn default() -> Self {
        Self {
            torque_periods: [400.0, 500.0, 700.0],
            torque_magnitudes: [0.1, 0.05, 0.08],
            torque_phases: [0.0; 3],
            force_periods: [100.0, 200.0, 300.0],
            force_magnitudes: [0.5, 0.5, 0.5],
            phase_range: 0.1 * std::f64::consts::PI,
            gravity_mu: 3.986_004_418e14,
        }
    }
}

/// Full description of one learning campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// Task horizon T in seconds.
    pub duration_s: f64,
    /// Control rate in Hz; T·frequency must be integral (ticks cover [0, T]).
    pub frequency_hz: f64,
    /// Number of repetitions, counting the initial pure-feedback run: 31
    /// covers k = 0 (no learning) through k = 30.
    pub iterations: usize,
    /// Number of equal-width projection segments (ignored when explicit
    /// boundaries are given).
    pub segments: usize,
    /// Explicit segment boundaries h₀…h_s; overrides `segments`.
    pub segment_boundaries: Option<Vec<f64>>,
    /// Which update law grows the estimate profile.
    pub variant: UpdateLaw,
    /// Seed for the per-iteration disturbance phase draws.
    pub seed: u64,
    /// Directory campaign outputs are written into.
    pub output_dir: PathBuf,
    /// Control and update-law gains.
    pub gains: ControllerGains,
    /// True plant.
    pub body: BodyConfig,
    /// Nominal model (validated, unused by the model-free laws).
    pub nominal: NominalBodyConfig,
    /// Initial reference pose.
    pub desired: DesiredConfig,
    /// Reference twist profile parameters.
    pub trajectory: TrajectoryConfig,
    /// Disturbance environment.
    pub disturbance: DisturbanceConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            duration_s: 20.0,
            frequency_hz: 1000.0,
            iterations: 31,
            segments: 200,
            segment_boundaries: None,
            variant: UpdateLaw::Saturated,
            seed: 0,
            output_dir: PathBuf::from("runs"),
            gains: ControllerGains::default(),
            body: BodyConfig::default(),
            nominal: NominalBodyConfig::default(),
            desired: DesiredConfig::default(),
            trajectory: TrajectoryConfig::default(),
            disturbance: DisturbanceConfig::default(),
        }
    }
}

impl ExperimentConfig {
    /// The default campaign with the coarse two-segment grid (the other
    /// segment count quoted for the experiment).
    pub fn two_segment() -> Self {
        Self {
            segments: 2,
            ..Self::default()
        }
    }

    /// Parses a TOML config.
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::InvalidConfig {
            detail: format!("config parse failure: {e}"),
        })?;
        Ok(config)
    }

    /// Renders this config as TOML.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::InvalidConfig {
            detail: format!("config serialization failure: {e}"),
        })
    }

    /// Loads and parses a TOML config file.
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    /// Number of control ticks: T·frequency + 1 (both endpoints sampled).
    pub fn ticks(&self) -> usize {
        (self.duration_s * self.frequency_hz).round() as usize + 1
    }

    /// Integrator step Δt = 1/frequency.
    pub fn dt(&self) -> f64 {
        1.0 / self.frequency_hz
    }

    /// The projection grid this config describes.
    pub fn grid(&self) -> Result<SegmentGrid> {
        match &self.segment_boundaries {
            Some(boundaries) => SegmentGrid::from_boundaries(boundaries.clone()),
            None => SegmentGrid::uniform(self.duration_s, self.segments),
        }
    }

    /// Checks every invariant a campaign run relies on.
    pub fn validate(&self) -> Result<()> {
        if !self.duration_s.is_finite() || self.duration_s <= 0.0 {
            return Err(Error::InvalidConfig {
                detail: format!("duration_s must be positive, got {}", self.duration_s),
            });
        }
        if !self.frequency_hz.is_finite() || self.frequency_hz <= 0.0 {
            return Err(Error::InvalidConfig {
                detail: format!("frequency_hz must be positive, got {}", self.frequency_hz),
            });
        }
        let tick_count = self.duration_s * self.frequency_hz;
        if (tick_count - tick_count.round()).abs() > 1e-9 * tick_count.max(1.0) {
            return Err(Error::InvalidConfig {
                detail: format!(
                    "duration_s × frequency_hz must be integral so ticks cover [0, T]; \
                     got {tick_count}"
                ),
            });
        }
        if tick_count.round() > 1e9 {
            return Err(Error::InvalidConfig {
                detail: format!("{tick_count} ticks per iteration is unreasonably large"),
            });
        }
        if self.iterations == 0 {
            return Err(Error::InvalidConfig {
                detail: "need at least one iteration".into(),
            });
        }
        let grid = self.grid()?;
        let horizon = grid.horizon();
        if horizon != self.duration_s {
            return Err(Error::InvalidConfig {
                detail: format!(
                    "segment grid must end exactly at duration_s = {}, got {horizon}",
                    self.duration_s
                ),
            });
        }
        self.gains.validate()?;
        if self.variant == UpdateLaw::Saturated && self.gains.k_l.is_none() {
            return Err(Error::InvalidConfig {
                detail: "the saturated update law (eq56) needs gains.k_l".into(),
            });
        }
        self.body.dual_inertia()?;
        self.nominal.dual_inertia()?;
        self.desired.initial_pose()?;
        self.trajectory.validate()?;
        self.disturbance.validate()?;
        Ok(())
    }
}
