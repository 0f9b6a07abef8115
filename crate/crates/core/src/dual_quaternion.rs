//! Dual quaternions, the unit subset, pose encoding, and frame transforms.
//!
//! A dual quaternion Q̊ = Q_r + ε·Q_d pairs two quaternions through the dual
//! unit (ε² = 0). The unit subset — ‖Q_r‖ = 1 together with Q_rᵀQ_d = 0 —
//! encodes a rigid pose: for an attitude `Q` and a position `P` of frame B
//! relative to frame A, *expressed in B*,
//!
//! ```text
//! Q̊ = Q + ε·½·Q∘pure(P)
//! ```
//!
//! and the position decodes back through `P = vec(2·Q*∘Q_d)`. Relative poses
//! compose by multiplication, the pose error between a desired and an actual
//! pose is `δQ̊ = Q̊_d*∘Q̊`, and the sandwich `Q̊*∘pure(x̊)∘Q̊` re-expresses a
//! dual vector given in the parent frame in the child frame (rotation plus
//! the lever-arm coupling into the dual slot).
//!
//! Tolerances on the unit constraints are scale-aware: the orthogonality
//! residual is measured relative to ‖Q_d‖, which grows with ‖P‖ (half the
//! position magnitude), so poses kilometers from the reference origin are
//! held to the same *relative* precision as poses near it.

use std::ops::{Add, Mul, Neg, Sub};

use crate::dual::DualVector3;
use crate::error::{Error, Result};
use crate::quaternion::{Quaternion, UnitQuaternion, DEGENERATE_NORM};

use nalgebra::Vector3;

/// Admission tolerance for the unit constraints (scale-aware, see module doc).
pub const UNIT_TOL: f64 = 1e-9;

/// Residuals beyond this after renormalization indicate a diverged state.
pub const HARD_UNIT_TOL: f64 = 1e-6;

/// A dual quaternion Q_r + ε·Q_d.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualQuaternion {
    /// Real part.
    pub real: Quaternion,
    /// Dual part.
    pub dual: Quaternion,
}

impl DualQuaternion {
    /// Builds a dual quaternion from its parts.
    pub fn new(real: Quaternion, dual: Quaternion) -> Self {
        Self { real, dual }
    }

    /// The multiplicative identity 1 + ε·0.
    pub fn identity() -> Self {
        Self::new(Quaternion::identity(), Quaternion::zero())
    }

    /// The zero dual quaternion.
    pub fn zero() -> Self {
        Self::new(Quaternion::zero(), Quaternion::zero())
    }

    /// Embeds a dual vector as a pure dual quaternion (zero scalar parts).
    pub fn pure(x: &DualVector3) -> Self {
        Self::new(Quaternion::pure(x.real), Quaternion::pure(x.dual))
    }

    /// Extracts the vector parts of both slots.
    pub fn vector(&self) -> DualVector3 {
        DualVector3::new(self.real.v, self.dual.v)
    }

    /// Conjugates both parts.
    pub fn conj(&self) -> Self {
        Self::new(self.real.conj(), self.dual.conj())
    }

    /// Swaps the real and dual parts.
    pub fn swapped(&self) -> Self {
        Self::new(self.dual, self.real)
    }

    /// Swap product on the four-component parts:
    /// `Q_rᵀ·P_d + Q_dᵀ·P_r`.
    pub fn swap_dot(&self, other: &Self) -> f64 {
        self.real.dot(&other.dual) + self.dual.dot(&other.real)
    }

    /// Deviation of the real part's norm from 1.
    pub fn real_norm_deviation(&self) -> f64 {
        (self.real.norm() - 1.0).abs()
    }

    /// Orthogonality residual |Q_rᵀQ_d|, measured relative to ‖Q_d‖.
    pub fn orthogonality_residual(&self) -> f64 {
        self.real.dot(&self.dual).abs() / (1.0 + self.dual.norm())
    }

    /// True when both unit constraints hold within `tol` (scale-aware).
    pub fn is_unit(&self, tol: f64) -> bool {
        // Phrased so NaN residuals fail the test rather than sneak through.
        self.real_norm_deviation() <= tol && self.orthogonality_residual() <= tol
    }

    /// Renormalizes onto the unit set: rescales the real part and removes
    /// the component of the dual part along it (one Gram–Schmidt sweep).
    ///
    /// Fails when the real part is degenerate or the result still violates
    /// the constraints (both symptoms of a diverged integration).
    pub fn renormalized(&self) -> Result<UnitDualQuaternion> {
        let norm = self.real.norm();
        if !norm.is_finite() || norm <= DEGENERATE_NORM {
            return Err(Error::DegenerateQuaternion { norm });
        }
        let real = self.real * (1.0 / norm);
        let dual = self.dual * (1.0 / norm);
        let dual = dual - real * real.dot(&dual);
        UnitDualQuaternion::with_tolerance(Self::new(real, dual), HARD_UNIT_TOL)
    }

    /// True when all eight components are finite.
    pub fn is_finite(&self) -> bool {
        self.real.is_finite() && self.dual.is_finite()
    }
}

impl Mul for DualQuaternion {
    type Output = Self;
    /// Product through ε² = 0:
    /// real = A_r∘B_r, dual = A_r∘B_d + A_d∘B_r.
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.real * rhs.real,
            self.real * rhs.dual + self.dual * rhs.real,
        )
    }
}

impl Add for DualQuaternion {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.real + rhs.real, self.dual + rhs.dual)
    }
}

impl Sub for DualQuaternion {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.real - rhs.real, self.dual - rhs.dual)
    }
}

impl Neg for DualQuaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.real, -self.dual)
    }
}

impl Mul<f64> for DualQuaternion {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.real * rhs, self.dual * rhs)
    }
}

/// An attitude plus a position expressed in the child frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    /// Attitude of the child frame relative to the parent.
    pub attitude: UnitQuaternion,
    /// Position of the child origin relative to the parent origin,
    /// expressed in the child frame, in meters.
    pub position: Vector3<f64>,
}

impl Pose {
    /// Builds a pose from attitude and child-frame position.
    pub fn new(attitude: UnitQuaternion, position: Vector3<f64>) -> Self {
        Self { attitude, position }
    }

    /// The identity pose.
    pub fn identity() -> Self {
        Self::new(UnitQuaternion::identity(), Vector3::zeros())
    }
}

/// A dual quaternion on the unit set, representing a rigid pose.
///
/// Values are validated at construction (scale-aware tolerance
/// [`UNIT_TOL`]) and the type is immutable, so every held value satisfies
/// the constraints; operations closed on the unit set (products, conjugates)
/// skip re-validation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitDualQuaternion(DualQuaternion);

impl UnitDualQuaternion {
    /// Admits a dual quaternion already on the unit set (within [`UNIT_TOL`]).
    pub fn new(dq: DualQuaternion) -> Result<Self> {
        Self::with_tolerance(dq, UNIT_TOL)
    }

    /// Admits with an explicit tolerance; used by the integrator which
    /// renormalizes every step and only needs a divergence tripwire.
    pub fn with_tolerance(dq: DualQuaternion, tol: f64) -> Result<Self> {
        let norm_dev = dq.real_norm_deviation();
        let ortho = dq.orthogonality_residual();
        if !(norm_dev <= tol) {
            return Err(Error::NotUnit {
                detail: format!("real-part norm deviates from 1 by {norm_dev:.3e}"),
            });
        }
        if !(ortho <= tol) {
            return Err(Error::NotUnit {
                detail: format!("real/dual orthogonality residual is {ortho:.3e}"),
            });
        }
        Ok(Self(dq))
    }

    fn new_unchecked(dq: DualQuaternion) -> Self {
        debug_assert!(dq.is_unit(1e-5), "unit closure violated");
        Self(dq)
    }

    /// The identity pose 1 + ε·0.
    pub fn identity() -> Self {
        Self(DualQuaternion::identity())
    }

    /// Encodes a pose as Q + ε·½·Q∘pure(P).
    ///
    /// The result satisfies both unit constraints by construction: the real
    /// part is the unit attitude, and Q_rᵀQ_d = ½·scalar(Q*∘Q∘pure(P)) =
    /// ½·scalar(pure(P)) = 0.
    pub fn from_pose(pose: &Pose) -> Self {
        let q = pose.attitude.quat();
        let dual = (q * Quaternion::pure(pose.position)) * 0.5;
        Self::new_unchecked(DualQuaternion::new(q, dual))
    }

    /// Decodes the attitude and child-frame position: P = vec(2·Q*∘Q_d).
    ///
    /// The type invariants guarantee the decode is well-posed, so this
    /// cannot fail; the scalar part of 2·Q*∘Q_d is the (near-zero)
    /// orthogonality residual and is discarded.
    pub fn to_pose(&self) -> Pose {
        let attitude = UnitQuaternion::new_unchecked(self.0.real);
        let position = (self.0.real.conj() * self.0.dual * 2.0).v;
        Pose { attitude, position }
    }

    /// Read access to the underlying dual quaternion.
    pub fn as_dq(&self) -> &DualQuaternion {
        &self.0
    }

    /// Real (attitude) part.
    pub fn real(&self) -> Quaternion {
        self.0.real
    }

    /// Dual part.
    pub fn dual(&self) -> Quaternion {
        self.0.dual
    }

    /// Conjugate — the inverse pose; closed on the unit set.
    pub fn conj(&self) -> Self {
        Self::new_unchecked(self.0.conj())
    }

    /// Pose of `self` relative to `reference`: reference*∘self.
    ///
    /// Both operands share a parent frame; the result is the pose of
    /// `self`'s child frame as seen from `reference`'s child frame. Equal
    /// poses give exactly +1 + ε·0, opposite covers give −1 + ε·0 (the same
    /// physical pose).
    pub fn relative_to(&self, reference: &Self) -> Self {
        Self::new_unchecked(reference.0.conj() * self.0)
    }

    /// Re-expresses a parent-frame dual vector in the child frame through
    /// the sandwich `vec(Q̊*∘pure(x̊)∘Q̊)`.
    ///
    /// The real slot is rotated; the dual slot is rotated and picks up the
    /// lever-arm coupling `(R̄·x_r) × P`. The scalar parts of the sandwich
    /// vanish identically for unit poses, and this is asserted at runtime
    /// (scale-aware) to catch algebra bugs early.
    pub fn transform(&self, x: &DualVector3) -> Result<DualVector3> {
        let sandwich = self.0.conj() * DualQuaternion::pure(x) * self.0;
        let scale = (1.0 + x.magnitude()) * (1.0 + self.0.dual.norm());
        let residual = sandwich.real.s.abs().max(sandwich.dual.s.abs());
        if !(residual <= UNIT_TOL * scale) {
            return Err(Error::ScalarResidual {
                residual: residual / scale,
            });
        }
        Ok(sandwich.vector())
    }
}

impl Mul for UnitDualQuaternion {
    type Output = Self;
    /// Pose composition; the unit set is closed under the product.
    fn mul(self, rhs: Self) -> Self {
        Self::new_unchecked(self.0 * rhs.0)
    }
}

/// Twist tracking error: actual twist minus the reference twist re-expressed
/// in the actual body frame through the pose error.
///
/// Both twists must be given in their own body frames; `pose_error` is the
/// actual pose relative to the reference pose (see
/// [`UnitDualQuaternion::relative_to`]).
pub fn twist_error(
    actual: &DualVector3,
    reference: &DualVector3,
    pose_error: &UnitDualQuaternion,
) -> Result<DualVector3> {
    Ok(*actual - pose_error.transform(reference)?)
}
