//! Sharp constants of the Grünbaum-type inequalities, verdicts on profiles,
//! and the extremal affine comparison.

mod comparison;
mod report;

use serde::{Deserialize, Serialize};

pub use comparison::{
    build_comparison_affine, centroid_domination_check, reference_point_via_beta, validate_comparison,
    CentroidDomination, ComparisonAffine, ComparisonReport, CONSTRUCTION_TOL,
};
pub use report::{verify_functional, Provenance, Sides, Theorem, TheoremReport, EXACT_TOL, MC_ONE_SIDED_Z};

use crate::{Error, Result};

/// Which closed form produced a [`SharpBound`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    #[serde(rename = "beta_le_alpha")]
    BetaLeAlpha,
    #[serde(rename = "alpha_le_beta")]
    AlphaLeBeta,
    #[serde(rename = "r_ge_1")]
    RAtLeastOne,
    #[serde(rename = "r_le_1")]
    RAtMostOne,
    #[serde(rename = "midpoint")]
    Midpoint,
    #[serde(rename = "jensen_bbl")]
    JensenBbl,
    #[serde(rename = "minkowski_radon")]
    MinkowskiRadon,
    #[serde(rename = "makai_fradelizi")]
    MakaiFradelizi,
    #[serde(rename = "grunbaum_classic")]
    GrunbaumClassic,
}

/// Parameters a bound was evaluated at; unused ones are omitted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SharpBound {
    pub value: f64,
    pub regime: Regime,
    pub params: BoundParams,
}

fn positive(x: f64, name: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must be positive and finite, got {x}")))
    }
}

fn nonnegative(x: f64, name: &str) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must be nonnegative and finite, got {x}")))
    }
}

/// `base^exponent` through logarithms, stable for large exponents.
fn pow_log(base: f64, exponent: f64) -> f64 {
    (exponent * base.ln()).exp()
}

/// Lower bound on the upper tail mass ratio of `h^β` at the α-centroid.
///
/// `((β+1)/(α+2))^{β+1}` when `β ≤ α`, `((α+1)/(α+2))^{β+1}` when `α ≤ β`.
pub fn functional_bound(alpha: f64, beta: f64) -> Result<SharpBound> {
    nonnegative(alpha, "alpha")?;
    positive(beta, "beta")?;
    let (base, regime) = if beta <= alpha {
        ((beta + 1.0) / (alpha + 2.0), Regime::BetaLeAlpha)
    } else {
        ((alpha + 1.0) / (alpha + 2.0), Regime::AlphaLeBeta)
    };
    Ok(SharpBound {
        value: pow_log(base, beta + 1.0),
        regime,
        params: BoundParams {
            alpha: Some(alpha),
            beta: Some(beta),
            ..Default::default()
        },
    })
}

/// `functional_bound(α, β)^{1/β}`, evaluated without forming the power.
/// Tends to `(α+1)/(α+2)` as `β → ∞`.
pub fn functional_bound_root(alpha: f64, beta: f64) -> Result<f64> {
    nonnegative(alpha, "alpha")?;
    positive(beta, "beta")?;
    let base = if beta <= alpha {
        (beta + 1.0) / (alpha + 2.0)
    } else {
        (alpha + 1.0) / (alpha + 2.0)
    };
    Ok(pow_log(base, 1.0 + 1.0 / beta))
}

/// Bound for sets with `p`-concave section profile, cut at the `r`-powered
/// centroid.
pub fn grunbaum_r_bound(p: f64, r: f64) -> Result<SharpBound> {
    positive(p, "p")?;
    nonnegative(r, "r")?;
    let (num, regime) = if r >= 1.0 {
        (p + 1.0, Regime::RAtLeastOne)
    } else if r == 0.0 {
        (p, Regime::Midpoint)
    } else {
        (p + r, Regime::RAtMostOne)
    };
    Ok(SharpBound {
        value: pow_log(num / (2.0 * p + r), (p + 1.0) / p),
        regime,
        params: BoundParams {
            p: Some(p),
            r: Some(r),
            ..Default::default()
        },
    })
}

/// The weaker constant `(p/(2p+r))^{(p+1)/p}` obtained by Jensen plus BBL.
pub fn jensen_bbl_bound(p: f64, r: f64) -> Result<SharpBound> {
    positive(p, "p")?;
    positive(r, "r")?;
    Ok(SharpBound {
        value: pow_log(p / (2.0 * p + r), (p + 1.0) / p),
        regime: Regime::JensenBbl,
        params: BoundParams {
            p: Some(p),
            r: Some(r),
            ..Default::default()
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicBounds {
    pub grunbaum: SharpBound,
    pub minkowski_radon: SharpBound,
    pub makai_fradelizi: SharpBound,
}

/// Centroid halfspace, projection and section constants in dimension `n`.
pub fn classic_bounds(n: usize) -> Result<ClassicBounds> {
    if n < 2 {
        return Err(Error::param(format!("dimension must be at least 2, got {n}")));
    }
    let nf = n as f64;
    let ratio = nf / (nf + 1.0);
    let params = BoundParams {
        n: Some(n),
        ..Default::default()
    };
    let bound = |value, regime| SharpBound { value, regime, params };
    Ok(ClassicBounds {
        grunbaum: bound(ratio.powi(n as i32), Regime::GrunbaumClassic),
        minkowski_radon: bound(1.0 / (nf + 1.0), Regime::MinkowskiRadon),
        makai_fradelizi: bound(ratio.powi(n as i32 - 1), Regime::MakaiFradelizi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn functional_examples() {
        let b = functional_bound(1.0, 1.0).unwrap();
        assert!(rel(b.value, 4.0 / 9.0) < 1e-15);
        let b = functional_bound(2.0, 1.0).unwrap();
        assert!(rel(b.value, 0.25) < 1e-15);
        assert_eq!(b.regime, Regime::BetaLeAlpha);
        let b = functional_bound(1.0, 2.0).unwrap();
        assert!(rel(b.value, 8.0 / 27.0) < 1e-15);
        assert_eq!(b.regime, Regime::AlphaLeBeta);
        // β → 0⁺ at α = 2 gives 1/(α+2)
        let b = functional_bound(2.0, 1e-14).unwrap();
        assert!(rel(b.value, 0.25) < 1e-12);
        assert!(functional_bound(1.0, 0.0).is_err());
        assert!(functional_bound(-1.0, 1.0).is_err());
    }

    #[test]
    fn root_limit() {
        for n in 2..=6 {
            let alpha = n as f64 - 1.0;
            let root = functional_bound_root(alpha, 1e14).unwrap();
            assert!(rel(root, n as f64 / (n as f64 + 1.0)) < 1e-12);
        }
    }

    #[test]
    fn r_bound_examples() {
        assert!(rel(grunbaum_r_bound(0.5, 1.0).unwrap().value, 27.0 / 64.0) < 1e-15);
        let mid = grunbaum_r_bound(1.0, 0.0).unwrap();
        assert!(rel(mid.value, 0.25) < 1e-15);
        assert_eq!(mid.regime, Regime::Midpoint);
        assert!(rel(grunbaum_r_bound(1.0, 2.0).unwrap().value, 0.25) < 1e-15);
        assert_eq!(grunbaum_r_bound(1.0, 0.5).unwrap().regime, Regime::RAtMostOne);
    }

    #[test]
    fn jensen_examples() {
        assert!(rel(jensen_bbl_bound(1.0, 1.0).unwrap().value, 1.0 / 9.0) < 1e-15);
        assert!(rel(jensen_bbl_bound(0.5, 1.0).unwrap().value, 1.0 / 64.0) < 1e-14);
        let j = jensen_bbl_bound(1.0, 2.0).unwrap().value;
        assert!(rel(j, 1.0 / 16.0) < 1e-15);
        assert!(j < grunbaum_r_bound(1.0, 2.0).unwrap().value);
        assert!(jensen_bbl_bound(1.0, 0.0).is_err());
    }

    #[test]
    fn classic_examples() {
        let c = classic_bounds(2).unwrap();
        assert!(rel(c.grunbaum.value, 4.0 / 9.0) < 1e-15);
        assert!(rel(c.minkowski_radon.value, 1.0 / 3.0) < 1e-15);
        assert!(rel(c.makai_fradelizi.value, 2.0 / 3.0) < 1e-15);
        assert!(rel(c.grunbaum.value, c.makai_fradelizi.value * 2.0 / 3.0) < 1e-15);
        let c = classic_bounds(3).unwrap();
        assert!(rel(c.grunbaum.value, 27.0 / 64.0) < 1e-15);
        assert!(rel(c.minkowski_radon.value, 0.25) < 1e-15);
        assert!(rel(c.makai_fradelizi.value, 9.0 / 16.0) < 1e-15);
        assert!(classic_bounds(1).is_err());
    }

    #[test]
    fn regime_names() {
        let json = serde_json::to_string(&Regime::RAtLeastOne).unwrap();
        assert_eq!(json, "\"r_ge_1\"");
        let json = serde_json::to_string(&functional_bound(1.0, 2.0).unwrap()).unwrap();
        assert!(json.contains("\"alpha_le_beta\"") && !json.contains("\"p\""), "{json}");
    }
}
