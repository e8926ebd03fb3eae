//! Orbit fixed-point laboratory.
//!
//! A small lab for common fixed points of finitely generated semigroup
//! actions on concrete metric spaces. The pieces:
//!
//! * [`metric`] — space-agnostic functionals over finite point sets
//!   (farthest-point distance, diameter, inner radius, admissible cover,
//!   Chebyshev center).
//! * [`spaces`] — concrete bounded metric spaces with samplers, cover and
//!   center oracles, two-ball regularity oracles, and reference constants.
//! * [`actions`] — finitely generated actions: word evaluation, truncated
//!   orbits, the divisibility preorder, and a catalog of builtin maps.
//! * [`analysis`] — sampled estimation of the orbit Lipschitz hierarchy
//!   and the tail-infimum displacement condition used by the solvers.
//! * [`geomconst`] — Monte-Carlo brackets for the ball-regularity
//!   characteristic kappa and the normal-structure coefficient.
//! * [`solvers`] — Picard baseline plus the two constructive iterations
//!   (regularity-lens descent and orbit-center descent) with trace
//!   recording and outcome classification.

pub mod actions;
pub mod analysis;
pub mod error;
pub mod geomconst;
pub mod metric;
pub mod parallel;
pub mod point;
pub mod rng;
pub mod solvers;
pub mod spaces;

pub use error::{CoreError, CoreResult};
pub use point::{Point, PointSet};
pub use spaces::Space;

/// Global comparison tolerance used by inequality checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Denominator floor below which Lipschitz ratios are considered vacuous.
pub const DENOM_FLOOR: f64 = 1e-9;
