//! Dual-quaternion rigid-body simulation with segment-based adaptive
//! iterative learning control for 6-DOF pose tracking.
//!
//! A rigid pose is a unit dual quaternion Q̊ = Q + ε·½Q∘pure(P); twists,
//! wrenches, and momenta are dual vectors paired through the swap product,
//! which makes the attitude and translation channels share one set of
//! identities. On top of that algebra ([`quaternion`], [`dual`],
//! [`dual_quaternion`]) sit the body and reference dynamics with an RK4
//! integrator ([`rigid_body`]), the tracking controller with its
//! segment-projected learning laws ([`controller`]), and the repetition
//! harness that runs, monitors, exports, and replays whole campaigns
//! ([`harness`], [`report`], [`config`]).

// Guards are written `!(x <= tol)` on purpose: they fail closed on NaN,
// which a `partial_cmp` spelling would bury.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod controller;
pub mod dual;
pub mod dual_quaternion;
pub mod error;
pub mod harness;
pub mod quaternion;
pub mod report;
pub mod rigid_body;

pub use error::{Error, Result};
