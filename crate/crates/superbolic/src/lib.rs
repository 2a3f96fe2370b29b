//! Computational kernel for the super hyperbolic plane.
//!
//! The crate provides, bottom up:
//!
//! - [`grassmann`]: truncated Grassmann algebra (supernumbers) over exact
//!   rational or `f64` coefficients, with analytic-function lifts through
//!   nilpotent Taylor expansion;
//! - [`superlinalg`]: (2|1)x(2|1) supermatrices and the orthosymplectic
//!   group OSp(1|2) with its Berezinian, inverse, and factorization;
//! - [`minkowski`]: super Minkowski space R^{2,1|2}, its conics, the
//!   quadratic-form coordinatization, the isometric OSp(1|2) action, and the
//!   map to the super upper half-plane;
//! - [`geodesic`]: supergeodesics, distances, membership, origin shifts, and
//!   perpendicular feet;
//! - [`trig`]: supertriangles and the hyperbolic Laws of Cosines and Sines;
//! - [`pairs`]: frames for geodesic pairs, intersection conditions, angles,
//!   classification, and the common perpendicular;
//! - [`cli`]: the command-line front end (see the `superbolic` binary);
//! - [`selftest`]: the property suites behind `superbolic selftest`.

pub mod cli;
pub mod error;
pub mod geodesic;
pub mod grassmann;
pub mod minkowski;
pub mod oracle;
pub mod pairs;
pub mod sample;
pub mod scalar;
mod series;
pub mod selftest;
pub mod superlinalg;
pub mod trig;

pub use error::{Error, Result};
pub use grassmann::{default_tol, Parity, Supernumber, DEFAULT_TOL, MAX_GENS};
pub use scalar::{AnalyticTag, Scalar};
