//! Rigid-body states, equations of motion, integration, the reference twist
//! profile, and the disturbance model.
//!
//! The pose of the body frame relative to the inertial frame is a unit dual
//! quaternion Q̊; the body twist ω̊ = ω + ε·v collects the angular rate and
//! the body-frame linear rate (v = Ṗ + ω×P for a body-frame position P).
//! Together they obey
//!
//! ```text
//! Q̊̇ = ½·Q̊∘pure(ω̊)                          (kinematics)
//! M̊·ω̊̇ = −ω̊ × (M̊·ω̊) + f̊ + d̊               (momentum balance)
//! ```
//!
//! with the dual inertia M̊ from [`crate::dual::DualInertia`], the applied
//! wrench f̊ = f + ε·τ, and the disturbance wrench d̊. Integration uses the
//! classical fourth-order Runge–Kutta scheme with the wrench and disturbance
//! held constant across the step (they are sampled at the control rate); the
//! pose is renormalized onto the unit set after every step so the
//! constraint-based assertions stay valid over hundreds of thousands of
//! steps.

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

use crate::dual::{DualInertia, DualVector3};
use crate::dual_quaternion::{twist_error, DualQuaternion, Pose, UnitDualQuaternion};
use crate::error::{Error, Result};
use crate::quaternion::Quaternion;

/// Actual body state: pose and twist, both body-frame quantities.
#[derive(Debug, Clone, Copy)]
pub struct RigidBodyState {
    /// Pose of the body frame relative to the inertial frame.
    pub pose: UnitDualQuaternion,
    /// Body twist ω + ε·v.
    pub twist: DualVector3,
}

impl RigidBodyState {
    /// Starts the body exactly on the reference: same pose, same twist.
    ///
    /// Every learning iteration is reset this way, which is what makes
    /// iteration-domain comparisons meaningful.
    pub fn aligned_with(desired: &DesiredState) -> Self {
        Self {
            pose: desired.pose,
            twist: desired.twist,
        }
    }
}

/// Reference state: pose, twist, and the twist rate needed by the controller.
#[derive(Debug, Clone, Copy)]
pub struct DesiredState {
    /// Reference pose relative to the inertial frame.
    pub pose: UnitDualQuaternion,
    /// Reference twist in the reference body frame.
    pub twist: DualVector3,
    /// Time derivative of the reference twist.
    pub twist_rate: DualVector3,
}

/// Tracking error between an actual and a reference state.
///
/// `pose` is the actual pose relative to the reference pose; `twist` is the
/// twist error with the reference twist re-expressed in the actual body
/// frame. `position` and `attitude_vector` are the decoded translation and
/// the vector part of the error attitude — always consistent with `pose`
/// because they are read out of it.
#[derive(Debug, Clone, Copy)]
pub struct ErrorState {
    /// Relative pose (actual with respect to reference).
    pub pose: UnitDualQuaternion,
    /// Twist error in the actual body frame.
    pub twist: DualVector3,
    /// Decoded position error in meters (actual body frame).
    pub position: Vector3<f64>,
    /// Vector part of the error attitude quaternion.
    pub attitude_vector: Vector3<f64>,
}

impl ErrorState {
    /// Principal rotation angle of the error attitude, in radians.
    pub fn angle(&self) -> f64 {
        2.0 * self.pose.real().s.abs().min(1.0).acos()
    }
}

/// Computes the tracking error between an actual and a reference state.
pub fn error_state(actual: &RigidBodyState, desired: &DesiredState) -> Result<ErrorState> {
    let pose = actual.pose.relative_to(&desired.pose);
    let twist = twist_error(&actual.twist, &desired.twist, &pose)?;
    let decoded = pose.to_pose();
    Ok(ErrorState {
        pose,
        twist,
        position: decoded.position,
        attitude_vector: pose.real().v,
    })
}

/// Pose kinematics Q̊̇ = ½·Q̊∘pure(ω̊).
///
/// Takes the raw dual quaternion so Runge–Kutta stages (which drift off the
/// unit set mid-step) can evaluate it directly.
pub fn kinematics_rate(pose: &DualQuaternion, twist: &DualVector3) -> DualQuaternion {
    (*pose * DualQuaternion::pure(twist)) * 0.5
}

/// Twist dynamics from the momentum balance:
/// ω̊̇ = M̊⁻¹·(−ω̊ × (M̊·ω̊) + f̊ + d̊).
pub fn dynamics_rate(
    twist: &DualVector3,
    inertia: &DualInertia,
    wrench: &DualVector3,
    disturbance: &DualVector3,
) -> DualVector3 {
    let momentum = inertia.apply(twist);
    inertia.solve(&(-(twist.cross(&momentum)) + *wrench + *disturbance))
}

fn check_dt(dt: f64) -> Result<()> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::InvalidTimeStep { dt });
    }
    Ok(())
}

/// Advances the actual body one step under a zero-order-hold wrench and
/// disturbance (classical RK4), renormalizing the pose afterwards.
pub fn step_body(
    state: &RigidBodyState,
    inertia: &DualInertia,
    wrench: &DualVector3,
    disturbance: &DualVector3,
    dt: f64,
) -> Result<RigidBodyState> {
    check_dt(dt)?;
    let rates = |pose: &DualQuaternion, twist: &DualVector3| {
        (
            kinematics_rate(pose, twist),
            dynamics_rate(twist, inertia, wrench, disturbance),
        )
    };
    let p0 = *state.pose.as_dq();
    let w0 = state.twist;
    let (kp1, kw1) = rates(&p0, &w0);
    let (kp2, kw2) = rates(&(p0 + kp1 * (dt / 2.0)), &(w0 + kw1 * (dt / 2.0)));
    let (kp3, kw3) = rates(&(p0 + kp2 * (dt / 2.0)), &(w0 + kw2 * (dt / 2.0)));
    let (kp4, kw4) = rates(&(p0 + kp3 * dt), &(w0 + kw3 * dt));
    let pose = p0 + (kp1 + kp2 * 2.0 + kp3 * 2.0 + kp4) * (dt / 6.0);
    let twist = w0 + (kw1 + kw2 * 2.0 + kw3 * 2.0 + kw4) * (dt / 6.0);
    if !twist.is_finite() {
        return Err(Error::Diverged {
            detail: "twist left the finite range".into(),
        });
    }
    Ok(RigidBodyState {
        pose: pose.renormalized()?,
        twist,
    })
}

/// Advances the reference one step: RK4 on the pose with the profile twist
/// evaluated at the stage times, then fresh twist samples at `t + dt`.
pub fn step_desired<P>(desired: &DesiredState, profile: &P, t: f64, dt: f64) -> Result<DesiredState>
where
    P: TwistProfile + ?Sized,
{
    check_dt(dt)?;
    let p0 = *desired.pose.as_dq();
    let kp1 = kinematics_rate(&p0, &profile.twist(t));
    let mid = profile.twist(t + dt / 2.0);
    let kp2 = kinematics_rate(&(p0 + kp1 * (dt / 2.0)), &mid);
    let kp3 = kinematics_rate(&(p0 + kp2 * (dt / 2.0)), &mid);
    let kp4 = kinematics_rate(&(p0 + kp3 * dt), &profile.twist(t + dt));
    let pose = (p0 + (kp1 + kp2 * 2.0 + kp3 * 2.0 + kp4) * (dt / 6.0)).renormalized()?;
    Ok(DesiredState {
        pose,
        twist: profile.twist(t + dt),
        twist_rate: profile.twist_rate(t + dt),
    })
}

/// Advances the coupled actual/reference pair one step.
///
/// The wrench and disturbance are held constant across the step; the
/// reference twist is sampled continuously from `profile`. Both poses are
/// renormalized afterwards, and a unit-constraint violation surviving the
/// renormalization reports as a divergence.
#[allow(clippy::too_many_arguments)]
pub fn step<P>(
    state: &RigidBodyState,
    desired: &DesiredState,
    profile: &P,
    t: f64,
    inertia: &DualInertia,
    wrench: &DualVector3,
    disturbance: &DualVector3,
    dt: f64,
) -> Result<(RigidBodyState, DesiredState)>
where
    P: TwistProfile + ?Sized,
{
    let body = step_body(state, inertia, wrench, disturbance, dt)?;
    let reference = step_desired(desired, profile, t, dt)?;
    Ok((body, reference))
}

/// A time-parameterized reference twist.
pub trait TwistProfile {
    /// Reference twist at time `t` (reference body frame).
    fn twist(&self, t: f64) -> DualVector3;
    /// Time derivative of the reference twist at time `t`.
    fn twist_rate(&self, t: f64) -> DualVector3;
}

/// A fixed twist; handy for closed-form integration checks.
#[derive(Debug, Clone, Copy)]
pub struct ConstantTwist(pub DualVector3);

impl TwistProfile for ConstantTwist {
    fn twist(&self, _t: f64) -> DualVector3 {
        self.0
    }
    fn twist_rate(&self, _t: f64) -> DualVector3 {
        DualVector3::zero()
    }
}

/// Reference motion of the tracking experiment: a sinusoidal roll swing at
/// constant along-track speed, with a small orbit-rate component that keeps
/// the remaining axes slowly counter-rotating as the roll angle
/// u(t) = A·(1 − cos(Ω·t)) builds up.
///
/// ```text
/// ω(t) = [ A·Ω·sin(Ω·t),  −ω₀·cos(u(t)),  ω₀·sin(u(t)) ]
/// v(t) = [ s, 0, 0 ]
/// ```
///
/// with roll amplitude A, roll frequency Ω, orbit rate ω₀, and speed s. The
/// twist rate is the exact analytic derivative (u̇ equals the roll rate, so
/// the chain rule folds back onto ω₁).
#[derive(Debug, Clone, Copy)]
pub struct SwingTwist {
    /// Roll amplitude A in radians.
    pub roll_amplitude: f64,
    /// Roll frequency Ω in rad/s.
    pub roll_frequency: f64,
    /// Orbit rate ω₀ in rad/s.
    pub orbit_rate: f64,
    /// Along-track speed s in m/s.
    pub speed: f64,
}

impl Default for SwingTwist {
    /// Parameters of the simulated proximity experiment: A = π/8,
    /// Ω = π/10 rad/s, ω₀ = 1.1·10⁻³ rad/s, s = 7668.5229 m/s.
    fn default() -> Self {
        Self {
            roll_amplitude: std::f64::consts::PI / 8.0,
            roll_frequency: std::f64::consts::PI / 10.0,
            orbit_rate: 0.0011,
            speed: 7668.5229,
        }
    }
}

impl TwistProfile for SwingTwist {
    fn twist(&self, t: f64) -> DualVector3 {
        let phase = self.roll_frequency * t;
        let u = self.roll_amplitude * (1.0 - phase.cos());
        let roll_rate = self.roll_amplitude * self.roll_frequency * phase.sin();
        DualVector3::new(
            Vector3::new(
                roll_rate,
                -self.orbit_rate * u.cos(),
                self.orbit_rate * u.sin(),
            ),
            Vector3::new(self.speed, 0.0, 0.0),
        )
    }

    fn twist_rate(&self, t: f64) -> DualVector3 {
        let phase = self.roll_frequency * t;
        let u = self.roll_amplitude * (1.0 - phase.cos());
        let roll_rate = self.roll_amplitude * self.roll_frequency * phase.sin();
        let roll_accel = self.roll_amplitude * self.roll_frequency * self.roll_frequency
            * phase.cos();
        // u̇ = roll_rate, so both slow components differentiate onto it.
        DualVector3::new(
            Vector3::new(
                roll_accel,
                self.orbit_rate * u.sin() * roll_rate,
                self.orbit_rate * u.cos() * roll_rate,
            ),
            Vector3::zeros(),
        )
    }
}

/// Disturbance wrench: three-axis torque and force sinusoids plus
/// inverse-square gravity, evaluated in the body frame.
///
/// The force sinusoid phases are drawn per iteration from
/// `[0, phase_range)` by a counter-keyed generator, so campaigns are fully
/// reproducible from `seed` while every iteration still sees a different
/// disturbance realization. Torque phases are fixed configuration values.
#[derive(Debug, Clone)]
pub struct DisturbanceModel {
    /// Torque sinusoid periods in seconds, per body axis.
    pub torque_periods: [f64; 3],
    /// Torque sinusoid magnitudes in N·m, per body axis.
    pub torque_magnitudes: [f64; 3],
    /// Torque sinusoid phases in radians, per body axis.
    pub torque_phases: [f64; 3],
    /// Force sinusoid periods in seconds, per body axis.
    pub force_periods: [f64; 3],
    /// Force sinusoid magnitudes in N, per body axis.
    pub force_magnitudes: [f64; 3],
    /// Upper end of the per-iteration force phase range, in radians.
    pub phase_range: f64,
    /// Gravitational parameter μ in m³/s².
    pub gravity_mu: f64,
    /// Body mass in kg (gravity scales with it).
    pub mass: f64,
    /// Campaign seed for the phase draws.
    pub seed: u64,
}

impl DisturbanceModel {
    /// Force sinusoid phases for one iteration, in `[0, phase_range)`.
    ///
    /// Each (seed, iteration, axis) triple keys its own stream, so draws
    /// never depend on call order.
    pub fn force_phases(&self, iteration: usize) -> [f64; 3] {
        std::array::from_fn(|axis| {
            let mut key = [0u8; 32];
            key[..8].copy_from_slice(&self.seed.to_le_bytes());
            key[8..16].copy_from_slice(&(iteration as u64).to_le_bytes());
            key[16..24].copy_from_slice(&(axis as u64).to_le_bytes());
            let mut rng = ChaCha8Rng::from_seed(key);
            rng.random::<f64>() * self.phase_range
        })
    }

    /// Gravity force on the body, expressed in the body frame.
    ///
    /// The body-frame position is pushed to the inertial frame, the
    /// inverse-square law is evaluated there, and the force is pulled back —
    /// the round trip through the attitude keeps the model honest about
    /// which frame the law lives in. Distances under one meter from the
    /// attracting center are rejected as singular; μ = 0 turns gravity off
    /// entirely.
    pub fn gravity(&self, pose: &UnitDualQuaternion) -> Result<Vector3<f64>> {
        if self.gravity_mu == 0.0 {
            return Ok(Vector3::zeros());
        }
        let Pose { attitude, position } = pose.to_pose();
        let q = attitude.quat();
        let p_inertial = (q * Quaternion::pure(position) * q.conj()).v;
        let r = p_inertial.norm();
        if !(r >= 1.0) {
            return Err(Error::GravitySingularity { r });
        }
        let g_inertial = p_inertial * (-self.gravity_mu * self.mass / (r * r * r));
        Ok((q.conj() * Quaternion::pure(g_inertial) * q).v)
    }

    /// Total disturbance wrench (force + ε·torque) at time `t`.
    ///
    /// `phases` are the per-iteration force phases from
    /// [`Self::force_phases`]; passing them in keeps this evaluation pure.
    pub fn sample(
        &self,
        t: f64,
        phases: &[f64; 3],
        state: &RigidBodyState,
    ) -> Result<DualVector3> {
        let torque = Vector3::from_fn(|i, _| {
            self.torque_magnitudes[i] * (TAU * t / self.torque_periods[i] + self.torque_phases[i]).sin()
        });
        let force_wave = Vector3::from_fn(|i, _| {
            self.force_magnitudes[i] * (TAU * t / self.force_periods[i] + phases[i]).sin()
        });
        Ok(DualVector3::new(
            force_wave + self.gravity(&state.pose)?,
            torque,
        ))
    }
}
