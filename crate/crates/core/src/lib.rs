//! Exact-arithmetic computations around type-A flow polytopes and the
//! cohomology of special multiple weight varieties.
//!
//! The crate is organized bottom-up:
//!
//! - [`linalg`]: fraction-free exact linear algebra (kernels, ranks, solving),
//! - [`poly`]: multivariate polynomials over the rationals, constant-coefficient
//!   differential operators, and homogeneous interpolation,
//! - [`rootsys`]: the A_l root system, Weyl group action, and cone/chamber
//!   predicates,
//! - [`flowpoly`]: Kostant partition functions and flow-polytope volumes via
//!   Ehrhart leading coefficients,
//! - [`multiplicity`]: tensor-product weight multiplicities with an independent
//!   convolution oracle,
//! - [`dualalgebra`]: the Poincaré duality algebra D/Ann(v), intersection
//!   pairings, and the differential-system checks,
//! - [`cohomring`]: the explicit presentation ring and its Hilbert function.
//!
//! All arithmetic is exact; no floating point anywhere.

pub mod cohomring;
pub mod dualalgebra;
pub mod flowpoly;
pub mod linalg;
pub mod multiplicity;
pub mod poly;
pub mod rootsys;

pub use num::{BigInt, BigRational};

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;
/// Exact integer scalar used throughout the crate.
pub type Int = BigInt;

/// Shorthand for an integer rational.
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Shorthand for the rational n/d.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}
