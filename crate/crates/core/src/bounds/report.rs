use serde::{Deserialize, Serialize};

use super::{functional_bound, SharpBound};
use crate::profile::{lower_tail_mass_ratio, p_concavity_check, tail_mass_ratio, Profile, EPS_CONCAVE};
use crate::quad::QuadratureSpec;
use crate::{Error, Result};

/// Slack tolerance when every input is exact or closed-form.
pub const EXACT_TOL: f64 = 1e-9;
/// One-sided 99% normal quantile used for Monte Carlo verdicts.
pub const MC_ONE_SIDED_Z: f64 = 2.326_347_874_040_841;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    Functional,
    GrunbaumR,
    MinkowskiRadon,
    MakaiFradelizi,
}

/// Where the measured ratio came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Exact,
    Quadrature { abs_tol: f64 },
    MonteCarlo { seed: u64, samples: u64, bins: usize, sigma: f64 },
}

impl Provenance {
    /// Allowed negative slack before a report fails.
    pub fn tolerance(&self) -> f64 {
        match *self {
            Provenance::Exact => EXACT_TOL,
            Provenance::Quadrature { abs_tol } => EXACT_TOL.max(3.0 * abs_tol),
            Provenance::MonteCarlo { sigma, .. } => EXACT_TOL + MC_ONE_SIDED_Z * sigma,
        }
    }

    pub(crate) fn for_profile<P: Profile + ?Sized>(h: &P, spec: &QuadratureSpec) -> Self {
        if h.exact_integrals() {
            Provenance::Exact
        } else {
            Provenance::Quadrature { abs_tol: spec.abs_tol }
        }
    }
}

/// Mass fractions on both sides of a cut.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sides {
    pub lower: f64,
    pub upper: f64,
}

/// One verification record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem: Theorem,
    pub ratio: f64,
    pub bound: SharpBound,
    pub slack: f64,
    pub pass: bool,
    pub tolerance: f64,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sides: Option<Sides>,
    /// Cut position along the direction, when the theorem uses one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cut: Option<f64>,
}

impl TheoremReport {
    pub fn new(theorem: Theorem, ratio: f64, bound: SharpBound, provenance: Provenance) -> Self {
        let tolerance = provenance.tolerance();
        let slack = ratio - bound.value;
        Self {
            theorem,
            ratio,
            bound,
            slack,
            pass: slack >= -tolerance,
            tolerance,
            provenance,
            sides: None,
            cut: None,
        }
    }

    pub fn with_sides(mut self, lower: f64, upper: f64) -> Self {
        self.sides = Some(Sides { lower, upper });
        self
    }

    pub fn with_cut(mut self, cut: f64) -> Self {
        self.cut = Some(cut);
        self
    }
}

/// Upper tail mass of `h^β` at the α-centroid against its sharp bound.
///
/// `h` must be concave; this is checked on a grid first.
pub fn verify_functional<P: Profile + ?Sized>(
    h: &P,
    alpha: f64,
    beta: f64,
    spec: &QuadratureSpec,
) -> Result<TheoremReport> {
    let bound = functional_bound(alpha, beta)?;
    let verdict = p_concavity_check(h, 1.0, EPS_CONCAVE)?;
    if !verdict.concave {
        let (_, t, _) = verdict.witness.unwrap_or_default();
        return Err(Error::Validation(format!("profile is not concave near t = {t}")));
    }
    let upper = tail_mass_ratio(h, alpha, beta, spec)?;
    let lower = lower_tail_mass_ratio(h, alpha, beta, spec)?;
    let cut = crate::profile::alpha_centroid(h, alpha, spec)?;
    Ok(TheoremReport::new(Theorem::Functional, upper, bound, Provenance::for_profile(h, spec))
        .with_sides(lower, upper)
        .with_cut(cut))
}
