//! Time discretizations of the Euler–Poisson equations for the Euler,
//! Lagrange and Kowalevski tops.
//!
//! - [`hk`]: the bilinear Hirota–Kimura step, time-symmetric, one 6x6 solve.
//! - [`euler_lagrange`]: norm-preserving Euler-top schemes and the explicit
//!   inertial-frame Lagrange solver with four exact discrete integrals.
//! - [`kowalevski`]: schemes keeping `|γ|² = 1` and `k² = |ω² − c₀γ|²` exact,
//!   including the hybrid Hirota–Kimura / Bohlin step.
//! - [`harness`]: runs, CSV output, reversal, drift, period and convergence
//!   diagnostics.

pub mod algebra;
pub mod error;
pub mod euler_lagrange;
pub mod harness;
pub mod hk;
pub mod kowalevski;
pub mod models;

pub use algebra::{Complex, Mat3, Mat6, Vec3};
pub use error::{Error, Result};
pub use models::{BodyState, KowalevskiParams, TopParams};
