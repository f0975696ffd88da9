use serde::Serialize;

use super::section::halfspace_fraction;
use super::{r_centroid_point, ConvexBody};
use crate::profile::{alpha_centroid, tail_mass_ratio, AnyProfile, Powered};
use crate::quad::QuadratureSpec;
use crate::Result;

/// Largest admissible gap between the functional and geometric sides.
pub const ROUNDTRIP_TOL: f64 = 1e-8;

/// Body of revolution in `R^n` about the first axis whose section volume at
/// `x₁ = t` is `f(t)`. Returns the body and the proportionality constant
/// between its section profile and `f`, which is 1 with this radius choice.
pub fn revolve(f: AnyProfile, n: usize) -> Result<(ConvexBody, f64)> {
    Ok((ConvexBody::revolution(f, n)?, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundTrip {
    pub n: usize,
    pub r: f64,
    /// Upper tail of `h^β` at `g_α(h)` with `h = f^{1/(n-1)}`, `β = n-1`, `α = rβ`.
    pub functional: f64,
    /// Volume fraction of the revolved body above its `r`-powered centroid.
    pub geometric: f64,
    pub functional_cut: f64,
    pub geometric_cut: f64,
    pub discrepancy: f64,
    pub pass: bool,
}

/// Computes the same mass split twice: on the concave function
/// `f^{1/(n-1)}` and on the revolved body.
pub fn revolve_roundtrip(f: &AnyProfile, n: usize, r: f64, spec: &QuadratureSpec) -> Result<RoundTrip> {
    let (body, _) = revolve(f.clone(), n)?;
    let beta = n as f64 - 1.0;
    let h = Powered::new(f, 1.0 / beta)?;
    let functional = tail_mass_ratio(&h, r * beta, beta, spec)?;
    let functional_cut = alpha_centroid(&h, r * beta, spec)?;

    let mut axis = vec![0.0; n];
    axis[0] = 1.0;
    let geometric_cut = r_centroid_point(&body, &axis, r, None, spec)?;
    let geometric = 1.0 - halfspace_fraction(&body, &axis, geometric_cut, None, spec)?.value;
    let discrepancy = (functional - geometric).abs();
    Ok(RoundTrip {
        n,
        r,
        functional,
        geometric,
        functional_cut,
        geometric_cut,
        discrepancy,
        pass: discrepancy < ROUNDTRIP_TOL,
    })
}
