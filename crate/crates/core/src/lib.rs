//! Numerical laboratory for Grünbaum-type inequalities.
//!
//! The crate is organised around four layers:
//!
//! * [`profile`]: one-dimensional nonnegative profiles (piecewise-linear and
//!   closed-form), powered integrals, α-centroids, tail-mass ratios and
//!   concavity certificates.
//! * [`bounds`]: the sharp constants, theorem verdicts on profiles, and the
//!   affine comparison construction with its validation.
//! * [`body`]: convex bodies, their sectional volume profiles (exact or Monte
//!   Carlo), powered centroid points and halfspace mass splits.
//! * [`search`]: seeded random concave profiles, local search minimising the
//!   tail-mass ratio, and parameter sweeps.

pub mod body;
pub mod bounds;
mod error;
pub mod profile;
pub mod quad;
pub mod search;

pub use error::{Error, Result};
