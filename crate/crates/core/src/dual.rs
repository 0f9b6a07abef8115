//! Dual-number vectors and the operators the dynamics and control laws are
//! built from.
//!
//! A dual vector x̊ = x_r + ε·x_d pairs two 3-vectors through the dual unit
//! ε (ε² = 0). Throughout this crate the real slot carries the angular
//! quantity or force and the dual slot the linear quantity or torque, so a
//! body twist is ω + ε·v and a wrench is f + ε·τ.
//!
//! The two products that make the energy bookkeeping work are
//!
//! * the swap product `swap_dot(x̊, ẙ) = x_rᵀy_d + x_dᵀy_r`, which pairs each
//!   slot with the opposite slot of the other operand, and
//! * the part swap `swapped(x̊) = x_d + ε·x_r`.
//!
//! Together they satisfy `swap_dot(x̊, swapped(x̊)) = ‖x_r‖² + ‖x_d‖²`, which
//! is what turns the swap product into a usable energy density.

use nalgebra::{Matrix3, Vector3};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Maximum permitted asymmetry ‖J − Jᵀ‖_∞ when admitting an inertia matrix.
pub const INERTIA_SYMMETRY_TOL: f64 = 1e-9;

/// Sign function with `sign(0) = 0`.
///
/// `f64::signum` maps `0.0` to `1.0`, which would inject a constant bias into
/// the switching control terms at exact equilibrium; the three-valued sign
/// keeps the equilibrium output exactly zero.
pub fn sign(z: f64) -> f64 {
    if z > 0.0 {
        1.0
    } else if z < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Saturated sign: linear inside a boundary layer of half-width `layer`.
///
/// With `layer = 0` this is the exact [`sign`] function. A positive layer
/// trades equilibrium sharpness for reduced chattering; it is an optional
/// smoothing knob and is off by default.
pub fn sign_within(z: f64, layer: f64) -> f64 {
    if layer > 0.0 {
        (z / layer).clamp(-1.0, 1.0)
    } else {
        sign(z)
    }
}

/// A dual vector x_r + ε·x_d with ε² = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualVector3 {
    /// Real slot (angular rate, force, …).
    pub real: Vector3<f64>,
    /// Dual slot (linear rate, torque, …).
    pub dual: Vector3<f64>,
}

impl DualVector3 {
    /// Builds a dual vector from its two slots.
    pub fn new(real: Vector3<f64>, dual: Vector3<f64>) -> Self {
        Self { real, dual }
    }

    /// The zero dual vector.
    pub fn zero() -> Self {
        Self::new(Vector3::zeros(), Vector3::zeros())
    }

    /// Swaps the real and dual slots: x_r + ε·x_d ↦ x_d + ε·x_r.
    pub fn swapped(self) -> Self {
        Self::new(self.dual, self.real)
    }

    /// Swap product: `x_rᵀ·y_d + x_dᵀ·y_r`.
    ///
    /// Symmetric and bilinear; pairing a vector with its own [`Self::swapped`]
    /// image yields the squared Euclidean norm of all six components.
    pub fn swap_dot(&self, other: &Self) -> f64 {
        self.real.dot(&other.dual) + self.dual.dot(&other.real)
    }

    /// Dual cross product `x̊ × ẙ = x_r×y_r + ε·(x_r×y_d + x_d×y_r)`.
    ///
    /// This is the ordinary cross product lifted through ε² = 0.
    pub fn cross(&self, other: &Self) -> Self {
        Self::new(
            self.real.cross(&other.real),
            self.real.cross(&other.dual) + self.dual.cross(&other.real),
        )
    }

    /// Componentwise three-valued sign (zero maps to zero).
    pub fn sign(&self) -> Self {
        self.sign_within(0.0)
    }

    /// Componentwise saturated sign with boundary-layer half-width `layer`.
    pub fn sign_within(&self, layer: f64) -> Self {
        Self::new(
            self.real.map(|z| sign_within(z, layer)),
            self.dual.map(|z| sign_within(z, layer)),
        )
    }

    /// Sum of the Euclidean norms of both slots; a cheap magnitude gauge used
    /// for scale-aware tolerance checks.
    pub fn magnitude(&self) -> f64 {
        self.real.norm() + self.dual.norm()
    }

    /// True when every component is finite.
    pub fn is_finite(&self) -> bool {
        self.real.iter().chain(self.dual.iter()).all(|z| z.is_finite())
    }
}

impl Add for DualVector3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.real + rhs.real, self.dual + rhs.dual)
    }
}

impl Sub for DualVector3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.real - rhs.real, self.dual - rhs.dual)
    }
}

impl Neg for DualVector3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.real, -self.dual)
    }
}

impl Mul<f64> for DualVector3 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.real * rhs, self.dual * rhs)
    }
}

impl Mul<DualVector3> for f64 {
    type Output = DualVector3;
    fn mul(self, rhs: DualVector3) -> DualVector3 {
        rhs * self
    }
}

/// Combined mass/inertia operator acting on twists.
///
/// For a body of mass `m` and inertia `J` (body frame, about the center of
/// mass), the operator maps a twist ω + ε·v to `m·v + ε·J·ω`: the real slot
/// of the image carries linear momentum, the dual slot angular momentum.
/// The cross-slot wiring is what lets a single dual-vector momentum balance
/// cover both translation and rotation.
#[derive(Debug, Clone)]
pub struct DualInertia {
    mass: f64,
    inertia: Matrix3<f64>,
    inverse: Matrix3<f64>,
}

impl DualInertia {
    /// Admits a mass and inertia matrix, rejecting non-physical inputs.
    ///
    /// The matrix is symmetrized after checking that ‖J − Jᵀ‖_∞ stays within
    /// [`INERTIA_SYMMETRY_TOL`]; positive definiteness is established through
    /// a Cholesky factorization.
    pub fn new(mass: f64, inertia: Matrix3<f64>) -> Result<Self> {
        if !mass.is_finite() || mass <= 0.0 {
            return Err(Error::NonPositiveMass { mass });
        }
        if inertia.iter().any(|z| !z.is_finite()) {
            return Err(Error::NotPositiveDefinite);
        }
        let asymmetry = (inertia - inertia.transpose()).abs().max();
        if asymmetry > INERTIA_SYMMETRY_TOL {
            return Err(Error::AsymmetricInertia { asymmetry });
        }
        let symmetric = (inertia + inertia.transpose()) * 0.5;
        if symmetric.cholesky().is_none() {
            return Err(Error::NotPositiveDefinite);
        }
        // A successful Cholesky guarantees invertibility.
        let inverse = symmetric
            .try_inverse()
            .ok_or(Error::NotPositiveDefinite)?;
        Ok(Self {
            mass,
            inertia: symmetric,
            inverse,
        })
    }

    /// Body mass in kg.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Symmetrized inertia matrix in kg·m².
    pub fn inertia(&self) -> &Matrix3<f64> {
        &self.inertia
    }

    /// Applies the operator: ω + ε·v ↦ m·v + ε·J·ω.
    pub fn apply(&self, x: &DualVector3) -> DualVector3 {
        DualVector3::new(self.mass * x.dual, self.inertia * x.real)
    }

    /// Inverts the operator: r_r + ε·r_d ↦ J⁻¹·r_d + ε·r_r/m.
    ///
    /// Exact inverse of [`Self::apply`]; the admission checks in
    /// [`Self::new`] guarantee `J` is invertible and `m > 0`, so this cannot
    /// fail.
    pub fn solve(&self, r: &DualVector3) -> DualVector3 {
        DualVector3::new(self.inverse * r.dual, r.real / self.mass)
    }
}

/// Switching direction for the robust control term and the learning update.
///
/// Given the twist error `x̊`, the transformed reference twist `ẙ`, and the
/// transformed reference twist rate `z̊`, returns
///
/// ```text
/// (‖y_r × y_d + z_d‖ + 1)·sign(x_d)  +  ε·(‖y_r‖² + ‖z_r‖ + 1)·sign(x_r)
/// ```
///
/// The scale factors bound the reference-dependent terms of the error
/// dynamics, so scaling this direction by the learned uncertainty magnitude
/// dominates disturbance and model-mismatch forces. Note the deliberate
/// cross-wiring: the real (force) slot switches on the *linear*-rate error
/// and is scaled by the linear-channel coupling bound, while the dual
/// (torque) slot switches on the *angular*-rate error.
///
/// `layer` is the boundary-layer half-width forwarded to [`sign_within`];
/// zero selects the exact sign.
pub fn robust_direction(
    x: &DualVector3,
    y: &DualVector3,
    z: &DualVector3,
    layer: f64,
) -> DualVector3 {
    let force_gain = (y.real.cross(&y.dual) + z.dual).norm() + 1.0;
    let torque_gain = y.real.norm_squared() + z.real.norm() + 1.0;
    DualVector3::new(
        force_gain * x.dual.map(|c| sign_within(c, layer)),
        torque_gain * x.real.map(|c| sign_within(c, layer)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn v3(x: f64, y: f64, z: f64) -> Vector3<f64> {
        Vector3::new(x, y, z)
    }

    /// Inertia of the simulated body: used across the test suite.
    fn body_inertia() -> DualInertia {
        let j = Matrix3::new(12.0, 1.0, 1.0, 1.0, 10.0, 2.0, 1.0, 2.0, 10.0);
        DualInertia::new(19.0, j).unwrap()
    }

    #[test]
    fn swap_dot_pairs_opposite_slots() {
        let x = DualVector3::new(v3(1.0, 2.0, 3.0), v3(4.0, 5.0, 6.0));
        let y = DualVector3::new(v3(0.0, 1.0, 0.0), v3(0.0, 0.0, 2.0));
        // (1,2,3)·(0,0,2) + (4,5,6)·(0,1,0) = 6 + 5
        assert_eq!(x.swap_dot(&y), 11.0);
    }

    #[test]
    fn swap_dot_with_swapped_self_is_squared_norm() {
        let x = DualVector3::new(v3(1.0, 2.0, 3.0), v3(4.0, 5.0, 6.0));
        assert_eq!(x.swap_dot(&x.swapped()), 91.0); // 1+4+9+16+25+36
    }

    #[test]
    fn swapped_is_an_involution() {
        let x = DualVector3::new(v3(0.25, -1.5, 7.0), v3(-2.0, 0.0, 3.5));
        assert_eq!(x.swapped().swapped(), x);
    }

    #[test]
    fn sign_maps_zero_to_zero() {
        let x = DualVector3::new(v3(0.5, 0.0, -2.0), v3(0.0, 3.0, -0.1));
        let s = x.sign();
        assert_eq!(s.real, v3(1.0, 0.0, -1.0));
        assert_eq!(s.dual, v3(0.0, 1.0, -1.0));
    }

    #[test]
    fn saturated_sign_is_linear_inside_the_layer() {
        assert_eq!(sign_within(0.05, 0.1), 0.5);
        assert_eq!(sign_within(-0.2, 0.1), -1.0);
        assert_eq!(sign_within(0.0, 0.1), 0.0);
        // Zero layer falls back to the exact sign.
        assert_eq!(sign_within(1e-300, 0.0), 1.0);
    }

    #[test]
    fn dual_cross_matches_hand_expansion() {
        let y = DualVector3::new(v3(1.0, 0.0, 0.0), v3(0.0, 1.0, 0.0));
        let x = DualVector3::new(v3(0.0, 1.0, 0.0), v3(0.0, 0.0, 1.0));
        let c = y.cross(&x);
        assert_eq!(c.real, v3(0.0, 0.0, 1.0));
        assert_eq!(c.dual, v3(0.0, -1.0, 0.0));
    }

    #[test]
    fn inertia_apply_wires_slots_crosswise() {
        let m = body_inertia();
        let x = DualVector3::new(v3(1.0, 0.0, 0.0), v3(0.0, 0.0, 1.0));
        let r = m.apply(&x);
        assert_eq!(r.real, v3(0.0, 0.0, 19.0)); // m·v
        assert_eq!(r.dual, v3(12.0, 1.0, 1.0)); // first column of J
    }

    #[test]
    fn inertia_solve_matches_hand_solved_system() {
        // J·x = (2, -1, 0) solved by elimination: x = (25/142, -135/1136, 7/1136).
        let m = body_inertia();
        let r = DualVector3::new(Vector3::zeros(), v3(2.0, -1.0, 0.0));
        let x = m.solve(&r);
        assert_relative_eq!(x.real.x, 25.0 / 142.0, max_relative = 1e-13);
        assert_relative_eq!(x.real.y, -135.0 / 1136.0, max_relative = 1e-13);
        assert_relative_eq!(x.real.z, 7.0 / 1136.0, max_relative = 1e-13);
        assert_eq!(x.dual, Vector3::zeros());
    }

    #[test]
    fn inertia_rejects_bad_inputs() {
        let j = Matrix3::identity();
        assert!(matches!(
            DualInertia::new(0.0, j),
            Err(Error::NonPositiveMass { .. })
        ));
        assert!(matches!(
            DualInertia::new(-1.0, j),
            Err(Error::NonPositiveMass { .. })
        ));
        let asym = Matrix3::new(1.0, 0.5, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0);
        assert!(matches!(
            DualInertia::new(1.0, asym),
            Err(Error::AsymmetricInertia { .. })
        ));
        let indefinite = Matrix3::new(1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0);
        assert!(matches!(
            DualInertia::new(1.0, indefinite),
            Err(Error::NotPositiveDefinite)
        ));
    }

    #[test]
    fn robust_direction_matches_hand_computation() {
        let x = DualVector3::new(v3(1.0, -1.0, 0.0), v3(0.0, 2.0, -3.0));
        let y = DualVector3::new(v3(1.0, 0.0, 0.0), v3(0.0, 1.0, 0.0));
        let z = DualVector3::new(v3(0.0, 0.0, 1.0), v3(1.0, 0.0, 0.0));
        let d = robust_direction(&x, &y, &z, 0.0);
        // y_r×y_d = (0,0,1); + z_d = (1,0,1) → ‖·‖ = √2; gains √2+1 and 1+1+1.
        let fg = 2.0f64.sqrt() + 1.0;
        assert_relative_eq!(d.real.x, 0.0);
        assert_relative_eq!(d.real.y, fg, max_relative = 1e-15);
        assert_relative_eq!(d.real.z, -fg, max_relative = 1e-15);
        assert_eq!(d.dual, v3(3.0, -3.0, 0.0));
    }

    #[test]
    fn robust_direction_vanishes_at_zero_error() {
        let y = DualVector3::new(v3(0.3, -0.1, 0.9), v3(5.0, 1.0, -2.0));
        let z = DualVector3::new(v3(0.01, 0.0, 0.0), v3(0.0, 0.2, 0.0));
        let d = robust_direction(&DualVector3::zero(), &y, &z, 0.0);
        assert_eq!(d.real, Vector3::zeros());
        assert_eq!(d.dual, Vector3::zeros());
    }

    fn arb_v3() -> impl Strategy<Value = Vector3<f64>> {
        (-10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64).prop_map(|(x, y, z)| v3(x, y, z))
    }

    fn arb_dual() -> impl Strategy<Value = DualVector3> {
        (arb_v3(), arb_v3()).prop_map(|(r, d)| DualVector3::new(r, d))
    }

    fn arb_spd() -> impl Strategy<Value = Matrix3<f64>> {
        proptest::array::uniform9(-3.0..3.0f64).prop_map(|a| {
            let m = Matrix3::from_row_slice(&a);
            m.transpose() * m + Matrix3::identity() * 0.5
        })
    }

    proptest! {
        #[test]
        fn swap_dot_is_symmetric(x in arb_dual(), y in arb_dual()) {
            prop_assert!((x.swap_dot(&y) - y.swap_dot(&x)).abs() < 1e-12);
        }

        #[test]
        fn swap_dot_is_bilinear(x in arb_dual(), y in arb_dual(), z in arb_dual(), a in -5.0..5.0f64) {
            let lhs = (x * a + y).swap_dot(&z);
            let rhs = a * x.swap_dot(&z) + y.swap_dot(&z);
            prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs() + rhs.abs()));
        }

        #[test]
        fn swapped_self_pairing_is_total_norm(x in arb_dual()) {
            let direct = x.real.norm_squared() + x.dual.norm_squared();
            prop_assert!((x.swap_dot(&x.swapped()) - direct).abs() <= 1e-12 * (1.0 + direct));
        }

        #[test]
        fn inertia_round_trips(x in arb_dual(), j in arb_spd(), m in 0.1..50.0f64) {
            let inertia = DualInertia::new(m, j).unwrap();
            let back = inertia.solve(&inertia.apply(&x));
            let forward = inertia.apply(&inertia.solve(&x));
            for (got, want) in [(back, x), (forward, x)] {
                prop_assert!((got.real - want.real).norm() <= 1e-12 * (1.0 + want.real.norm()));
                prop_assert!((got.dual - want.dual).norm() <= 1e-12 * (1.0 + want.dual.norm()));
            }
        }

        /// The gyroscopic term drops out of the swap-product energy rate:
        /// swap_dot(x̊, −M̊(ẙ×x̊)) = swap_dot(x̊, ẙ×(M̊x̊)).
        #[test]
        fn gyroscopic_terms_balance(x in arb_dual(), y in arb_dual(), j in arb_spd(), m in 0.1..50.0f64) {
            let inertia = DualInertia::new(m, j).unwrap();
            let lhs = x.swap_dot(&-(inertia.apply(&y.cross(&x))));
            let rhs = x.swap_dot(&y.cross(&inertia.apply(&x)));
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs() + rhs.abs()));
        }

        /// xᵀ·sign(x) = ‖x‖₁ closes the learning increment in closed form:
        /// swap_dot(x̊, robust_direction(x̊, ẙ, z̊)) is a weighted sum of
        /// 1-norms and therefore never negative.
        #[test]
        fn switching_pairing_is_nonnegative(x in arb_dual(), y in arb_dual(), z in arb_dual()) {
            let d = robust_direction(&x, &y, &z, 0.0);
            let pairing = x.swap_dot(&d);
            let force_gain = (y.real.cross(&y.dual) + z.dual).norm() + 1.0;
            let torque_gain = y.real.norm_squared() + z.real.norm() + 1.0;
            let closed = torque_gain * x.real.abs().sum() + force_gain * x.dual.abs().sum();
            prop_assert!(pairing >= 0.0);
            prop_assert!((pairing - closed).abs() <= 1e-9 * (1.0 + closed));
        }
    }
}
