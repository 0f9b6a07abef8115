//! Scalar-first quaternions and the unit subset used for attitudes.
//!
//! A quaternion is stored as `s + v₁·i + v₂·j + v₃·k` with the scalar part
//! first. The product follows the Hamilton convention,
//!
//! ```text
//! a ∘ b = [ a_s·b_s − a_vᵀ·b_v ;  a_s·b_v + b_s·a_v + a_v × b_v ]
//! ```
//!
//! so composing rotations reads right-to-left: `q₂ ∘ q₁` first applies `q₁`.
//! [`UnitQuaternion`] enforces ‖q‖ = 1 at construction and is the only type
//! that exposes rotation-specific queries such as the principal angle.

use nalgebra::Vector3;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Admission tolerance on |‖q‖ − 1| for unit quaternions.
pub const UNIT_TOL: f64 = 1e-9;

/// Norms at or below this are considered degenerate and refuse to normalize.
pub const DEGENERATE_NORM: f64 = 1e-12;

/// A quaternion with scalar part `s` and vector part `v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    /// Scalar (real) component.
    pub s: f64,
    /// Vector (imaginary) components.
    pub v: Vector3<f64>,
}

impl Quaternion {
    /// Builds a quaternion from its four components, scalar first.
    pub fn new(s: f64, x: f64, y: f64, z: f64) -> Self {
        Self {
            s,
            v: Vector3::new(x, y, z),
        }
    }

    /// Builds a quaternion from scalar and vector parts.
    pub fn from_parts(s: f64, v: Vector3<f64>) -> Self {
        Self { s, v }
    }

    /// The multiplicative identity `1 + 0i + 0j + 0k`.
    pub fn identity() -> Self {
        Self::new(1.0, 0.0, 0.0, 0.0)
    }

    /// The zero quaternion.
    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0)
    }

    /// Embeds a 3-vector as a pure quaternion (zero scalar part).
    pub fn pure(v: Vector3<f64>) -> Self {
        Self { s: 0.0, v }
    }

    /// Conjugate: negates the vector part.
    pub fn conj(self) -> Self {
        Self { s: self.s, v: -self.v }
    }

    /// Four-component dot product.
    pub fn dot(&self, other: &Self) -> f64 {
        self.s * other.s + self.v.dot(&other.v)
    }

    /// Squared Euclidean norm of all four components.
    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    /// Euclidean norm of all four components.
    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Rescales to unit length.
    ///
    /// Fails when the norm is at or below [`DEGENERATE_NORM`] (or not
    /// finite), where the direction is numerically meaningless.
    pub fn normalize(self) -> Result<UnitQuaternion> {
        let norm = self.norm();
        if !norm.is_finite() || norm <= DEGENERATE_NORM {
            return Err(Error::DegenerateQuaternion { norm });
        }
        Ok(UnitQuaternion(Self {
            s: self.s / norm,
            v: self.v / norm,
        }))
    }

    /// True when all four components are finite.
    pub fn is_finite(&self) -> bool {
        self.s.is_finite() && self.v.iter().all(|z| z.is_finite())
    }
}

impl Mul for Quaternion {
    type Output = Self;
    /// Hamilton product.
    fn mul(self, rhs: Self) -> Self {
        Self {
            s: self.s * rhs.s - self.v.dot(&rhs.v),
            v: self.s * rhs.v + rhs.s * self.v + self.v.cross(&rhs.v),
        }
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            s: self.s + rhs.s,
            v: self.v + rhs.v,
        }
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            s: self.s - rhs.s,
            v: self.v - rhs.v,
        }
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self { s: -self.s, v: -self.v }
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self {
            s: self.s * rhs,
            v: self.v * rhs,
        }
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        rhs * self
    }
}

/// A quaternion constrained to unit norm, representing an attitude.
///
/// `q` and `−q` encode the same physical rotation; no canonical sign is
/// imposed, and angle queries are insensitive to the cover through
/// `|s|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitQuaternion(Quaternion);

impl UnitQuaternion {
    /// Admits a quaternion whose norm already sits within [`UNIT_TOL`] of 1.
    ///
    /// The value is stored as-is (no silent rescaling); use
    /// [`Quaternion::normalize`] to rescale explicitly.
    pub fn new(q: Quaternion) -> Result<Self> {
        let deviation = (q.norm() - 1.0).abs();
        if !(deviation <= UNIT_TOL) {
            return Err(Error::NotUnit {
                detail: format!("quaternion norm deviates from 1 by {deviation:.3e}"),
            });
        }
        Ok(Self(q))
    }

    /// Internal constructor for values unit by algebraic closure.
    pub(crate) fn new_unchecked(q: Quaternion) -> Self {
        debug_assert!((q.norm() - 1.0).abs() <= 1e-6, "closure violated");
        Self(q)
    }

    /// The identity rotation.
    pub fn identity() -> Self {
        Self(Quaternion::identity())
    }

    /// Rotation of `angle` radians about a unit `axis`.
    ///
    /// The axis norm must sit within [`UNIT_TOL`] of 1.
    pub fn from_axis_angle(axis: &Vector3<f64>, angle: f64) -> Result<Self> {
        let deviation = (axis.norm() - 1.0).abs();
        if !(deviation <= UNIT_TOL) {
            return Err(Error::NonUnitAxis { deviation });
        }
        let (sin, cos) = (angle / 2.0).sin_cos();
        Ok(Self(Quaternion::from_parts(cos, axis * sin)))
    }

    /// Principal rotation angle φ = 2·acos(min(1, |s|)) ∈ [0, π].
    ///
    /// Insensitive to the double cover: `q` and `−q` report the same angle.
    pub fn angle(&self) -> f64 {
        2.0 * self.0.s.abs().min(1.0).acos()
    }

    /// Conjugate (the inverse rotation); closed on the unit set.
    pub fn conj(&self) -> Self {
        Self(self.0.conj())
    }

    /// Read access to the underlying quaternion.
    pub fn as_quat(&self) -> &Quaternion {
        &self.0
    }

    /// Copy of the underlying quaternion.
    pub fn quat(&self) -> Quaternion {
        self.0
    }
}

impl Mul for UnitQuaternion {
    type Output = Self;
    /// Hamilton product; the unit set is closed under multiplication because
    /// the quaternion norm is multiplicative.
    fn mul(self, rhs: Self) -> Self {
        Self::new_unchecked(self.0 * rhs.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn product_is_noncommutative_in_the_vector_part() {
        let i = Quaternion::new(0.0, 1.0, 0.0, 0.0);
        let j = Quaternion::new(0.0, 0.0, 1.0, 0.0);
        let ij = i * j;
        let ji = j * i;
        assert_eq!(ij, Quaternion::new(0.0, 0.0, 0.0, 1.0));
        assert_eq!(ji, Quaternion::new(0.0, 0.0, 0.0, -1.0));
    }

    #[test]
    fn identity_is_neutral() {
        let q = Quaternion::new(0.3, -0.4, 0.5, 0.6);
        assert_eq!(q * Quaternion::identity(), q);
        assert_eq!(Quaternion::identity() * q, q);
    }

    #[test]
    fn conjugating_a_product_reverses_it() {
        let a = Quaternion::new(1.0, 2.0, -1.0, 0.5);
        let b = Quaternion::new(-0.5, 0.25, 2.0, 1.0);
        let lhs = (a * b).conj();
        let rhs = b.conj() * a.conj();
        assert_relative_eq!(lhs.s, rhs.s, max_relative = 1e-14);
        assert_relative_eq!(lhs.v, rhs.v, max_relative = 1e-14);
    }

    #[test]
    fn axis_angle_quarter_turn_about_z() {
        let q = UnitQuaternion::from_axis_angle(&Vector3::z(), PI / 2.0).unwrap();
        assert_relative_eq!(q.as_quat().s, FRAC_1_SQRT_2, max_relative = 1e-15);
        assert_relative_eq!(q.as_quat().v.z, FRAC_1_SQRT_2, max_relative = 1e-15);
        assert_eq!(q.as_quat().v.x, 0.0);
        assert_eq!(q.as_quat().v.y, 0.0);
        assert_relative_eq!(q.angle(), PI / 2.0, max_relative = 1e-14);
    }

    #[test]
    fn from_axis_angle_rejects_non_unit_axes() {
        let axis = Vector3::new(0.0, 0.0, 2.0);
        assert!(matches!(
            UnitQuaternion::from_axis_angle(&axis, 0.1),
            Err(Error::NonUnitAxis { .. })
        ));
    }

    #[test]
    fn angle_is_cover_insensitive() {
        assert_eq!(UnitQuaternion::identity().angle(), 0.0);
        let minus_one = UnitQuaternion::new(Quaternion::new(-1.0, 0.0, 0.0, 0.0)).unwrap();
        assert_eq!(minus_one.angle(), 0.0);
        let half_turn = UnitQuaternion::new(Quaternion::new(0.0, 0.0, 0.0, 1.0)).unwrap();
        assert_eq!(half_turn.angle(), PI);
    }

    #[test]
    fn normalize_rejects_degenerate_inputs() {
        assert!(matches!(
            Quaternion::zero().normalize(),
            Err(Error::DegenerateQuaternion { .. })
        ));
        let tiny = Quaternion::new(1e-13, 0.0, 0.0, 0.0);
        assert!(tiny.normalize().is_err());
    }

    #[test]
    fn normalize_rescales() {
        let q = Quaternion::new(2.0, 0.0, 0.0, 0.0).normalize().unwrap();
        assert_eq!(q.quat(), Quaternion::identity());
    }

    #[test]
    fn admission_rejects_visibly_non_unit_values() {
        assert!(UnitQuaternion::new(Quaternion::new(1.0, 0.0, 1e-4, 0.0)).is_err());
        assert!(UnitQuaternion::new(Quaternion::identity()).is_ok());
    }

    /// The initial attitude used by the experiment arrives slightly off
    /// unit length (norm ≈ 0.99995) and must be normalized on load.
    #[test]
    fn experiment_initial_attitude_normalizes_cleanly() {
        let raw = Quaternion::new(0.7055, 0.0471, -0.7055, -0.0471);
        assert!((raw.norm() - 1.0).abs() > UNIT_TOL);
        let q = raw.normalize().unwrap();
        assert!((q.quat().norm() - 1.0).abs() <= 1e-15);
        // Direction is preserved by rescaling.
        assert_relative_eq!(q.quat().v.y / q.quat().s, -1.0, max_relative = 1e-12);
    }

    fn arb_quat() -> impl Strategy<Value = Quaternion> {
        proptest::array::uniform4(-5.0..5.0f64).prop_map(|[s, x, y, z]| Quaternion::new(s, x, y, z))
    }

    fn arb_unit() -> impl Strategy<Value = UnitQuaternion> {
        arb_quat().prop_filter_map("norm too small", |q| q.normalize().ok())
    }

    proptest! {
        #[test]
        fn product_is_associative(a in arb_quat(), b in arb_quat(), c in arb_quat()) {
            let lhs = (a * b) * c;
            let rhs = a * (b * c);
            let scale = 1.0 + lhs.norm() + rhs.norm();
            prop_assert!((lhs - rhs).norm() <= 1e-11 * scale);
        }

        #[test]
        fn norm_is_multiplicative(a in arb_quat(), b in arb_quat()) {
            let product = (a * b).norm();
            let split = a.norm() * b.norm();
            prop_assert!((product - split).abs() <= 1e-11 * (1.0 + split));
        }

        #[test]
        fn conjugation_reverses_products(a in arb_quat(), b in arb_quat()) {
            let lhs = (a * b).conj();
            let rhs = b.conj() * a.conj();
            prop_assert!((lhs - rhs).norm() <= 1e-11 * (1.0 + lhs.norm()));
        }

        #[test]
        fn unit_set_is_closed_under_product(a in arb_unit(), b in arb_unit()) {
            let c = a * b;
            prop_assert!((c.quat().norm() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn axis_angle_round_trips_the_angle(angle in 0.0..PI) {
            let axis = Vector3::new(2.0, -1.0, 0.5).normalize();
            let q = UnitQuaternion::from_axis_angle(&axis, angle).unwrap();
            prop_assert!((q.angle() - angle).abs() <= 1e-9);
        }
    }
}
