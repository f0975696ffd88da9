use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use super::Regime;
use crate::profile::{alpha_centroid, AnalyticProfile, Profile};
use crate::quad::QuadratureSpec;
use crate::{Error, Result};

/// Tolerance on the matching conditions and on tail domination.
pub const CONSTRUCTION_TOL: f64 = 1e-8;

/// Decreasing affine function `t ↦ c (δ - t)` on `[γ, δ]` matched to a
/// profile `h` at its α-centroid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonAffine {
    pub gamma: f64,
    pub delta: f64,
    pub c: f64,
    /// α-centroid of the profile it was built from.
    pub g_alpha: f64,
}

impl ComparisonAffine {
    pub fn value_at(&self, t: f64) -> f64 {
        if t < self.gamma || t > self.delta {
            0.0
        } else {
            self.c * (self.delta - t)
        }
    }

    /// `∫_s^δ g^β`, with `g` extended by zero below `γ`.
    pub fn tail_mass(&self, beta: f64, s: f64) -> f64 {
        let s = s.clamp(self.gamma, self.delta);
        self.c.powf(beta) * (self.delta - s).powf(beta + 1.0) / (beta + 1.0)
    }

    pub fn total_mass(&self, beta: f64) -> f64 {
        self.tail_mass(beta, self.gamma)
    }

    /// Reference point used when `β ≤ α`: `γ + (δ - γ)(α - β + 1)/(α + 2)`.
    pub fn reference_point(&self, alpha: f64, beta: f64) -> f64 {
        self.gamma + (self.delta - self.gamma) * (alpha - beta + 1.0) / (alpha + 2.0)
    }

    /// α-centroid of the affine function itself: `δ - (α + 1)(δ - γ)/(α + 2)`.
    pub fn own_centroid(&self, alpha: f64) -> f64 {
        self.delta - (alpha + 1.0) * (self.delta - self.gamma) / (alpha + 2.0)
    }

    pub fn as_profile(&self) -> Result<AnalyticProfile> {
        AnalyticProfile::decreasing_power(self.c, self.gamma, self.delta, 1.0)
    }
}

/// Builds the affine comparison function for `h`: same value at the
/// α-centroid, same total `β`-mass and same `β`-mass to the right of it.
pub fn build_comparison_affine<P: Profile + ?Sized>(
    h: &P,
    alpha: f64,
    beta: f64,
    spec: &QuadratureSpec,
) -> Result<ComparisonAffine> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::param(format!("beta must be positive, got {beta}")));
    }
    let (a, b) = h.domain();
    let g = alpha_centroid(h, alpha, spec)?;
    let hg = h.value_at(g);
    if !(hg > 0.0) {
        return Err(Error::Degenerate(format!("profile vanishes at its centroid {g}")));
    }
    let tail = h.powered_integral_within(beta, g, b, spec)?;
    let total = h.powered_integral_within(beta, a, b, spec)?;
    let delta = (beta + 1.0) / hg.powf(beta) * tail + g;
    let c = hg / (delta - g);
    let gamma = delta - ((beta + 1.0) / c.powf(beta) * total).powf(1.0 / (beta + 1.0));
    Ok(ComparisonAffine {
        gamma,
        delta,
        c,
        g_alpha: g,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    /// `|h(g_α) - g(g_α)|`.
    pub value_error: f64,
    /// Relative mismatch of the total masses.
    pub total_mass_error: f64,
    /// Relative mismatch of the right-tail masses.
    pub tail_mass_error: f64,
    /// `a ≤ γ ≤ g_α ≤ b ≤ δ`.
    pub ordering: bool,
    /// Largest `∫_s h^β - ∫_s g^β` over the level grid, relative to the total.
    pub max_tail_excess: f64,
    /// Worst grid point for `max_tail_excess`.
    pub worst_s: f64,
    pub sign_changes_left: usize,
    pub sign_changes_right: usize,
    pub pass: bool,
}

fn sign_changes(values: impl Iterator<Item = f64>, tol: f64) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for v in values {
        let sign = if v > tol {
            1
        } else if v < -tol {
            -1
        } else {
            0
        };
        if sign != 0 {
            if last != 0 && sign != last {
                changes += 1;
            }
            last = sign;
        }
    }
    changes
}

/// Checks the matching conditions, endpoint ordering, tail domination on an
/// `s_grid_size`-point grid over `[a, δ]`, and the single-crossing structure
/// of `h - g` on each side of the α-centroid.
pub fn validate_comparison<P: Profile + ?Sized>(
    h: &P,
    g: &ComparisonAffine,
    beta: f64,
    s_grid_size: usize,
    spec: &QuadratureSpec,
) -> Result<ComparisonReport> {
    if s_grid_size < 2 {
        return Err(Error::param(format!("s grid needs at least 2 points, got {s_grid_size}")));
    }
    let (a, b) = h.domain();
    let ga = g.g_alpha;
    let total_h = h.powered_integral_within(beta, a, b, spec)?;
    let tail_h = h.powered_integral_within(beta, ga, b, spec)?;
    let hg = h.value_at(ga);
    let value_error = (hg - g.value_at(ga)).abs();
    let total_mass_error = (total_h - g.total_mass(beta)).abs() / total_h;
    let tail_mass_error = (tail_h - g.tail_mass(beta, ga)).abs() / total_h;

    let slack = CONSTRUCTION_TOL * (b - a).max(g.delta - g.gamma);
    let ordering = a <= g.gamma + slack && g.gamma <= ga + slack && ga <= b + slack && b <= g.delta + slack;

    let hi = g.delta.max(b);
    let mut max_tail_excess = f64::NEG_INFINITY;
    let mut worst_s = a;
    for i in 0..s_grid_size {
        let s = a + (hi - a) * i as f64 / (s_grid_size - 1) as f64;
        let h_tail = if s >= b {
            0.0
        } else {
            h.powered_integral_within(beta, s.max(a), b, spec)?
        };
        let excess = (h_tail - g.tail_mass(beta, s)) / total_h;
        if excess > max_tail_excess {
            max_tail_excess = excess;
            worst_s = s;
        }
    }

    // h is extended by zero beyond b, g by zero below γ
    const CROSSING_GRID: usize = 512;
    let scale = hg.max(g.value_at(g.gamma));
    let diff = |t: f64| {
        let ht = if t >= a && t <= b { h.value_at(t) } else { 0.0 };
        ht - g.value_at(t)
    };
    let lo = a.min(g.gamma);
    let left = (0..=CROSSING_GRID).map(|i| lo + (ga - lo) * i as f64 / CROSSING_GRID as f64);
    let sign_changes_left = sign_changes(left.map(diff), CONSTRUCTION_TOL * scale);
    let right = (0..=CROSSING_GRID).map(|i| ga + (hi - ga) * i as f64 / CROSSING_GRID as f64);
    let sign_changes_right = sign_changes(right.map(diff), CONSTRUCTION_TOL * scale);

    let pass = value_error <= CONSTRUCTION_TOL * hg.max(1.0)
        && total_mass_error <= CONSTRUCTION_TOL
        && tail_mass_error <= CONSTRUCTION_TOL
        && ordering
        && max_tail_excess <= CONSTRUCTION_TOL
        && sign_changes_left <= 1
        && sign_changes_right <= 1;
    Ok(ComparisonReport {
        value_error,
        total_mass_error,
        tail_mass_error,
        ordering,
        max_tail_excess,
        worst_s,
        sign_changes_left,
        sign_changes_right,
        pass,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CentroidDomination {
    pub regime: Regime,
    pub g_alpha: f64,
    /// `g₀` when `β ≤ α`, the affine function's own α-centroid when `α ≤ β`.
    pub reference: f64,
    pub slack: f64,
    pub pass: bool,
}

/// Checks that the α-centroid of `h` lies left of the reference point of its
/// comparison function.
pub fn centroid_domination_check<P: Profile + ?Sized>(
    h: &P,
    alpha: f64,
    beta: f64,
    spec: &QuadratureSpec,
) -> Result<CentroidDomination> {
    let g = build_comparison_affine(h, alpha, beta, spec)?;
    let (regime, reference) = if beta <= alpha {
        (Regime::BetaLeAlpha, g.reference_point(alpha, beta))
    } else {
        (Regime::AlphaLeBeta, g.own_centroid(alpha))
    };
    let slack = reference - g.g_alpha;
    let (a, b) = h.domain();
    Ok(CentroidDomination {
        regime,
        g_alpha: g.g_alpha,
        reference,
        slack,
        pass: slack >= -1e-9 * (b - a).max(1.0),
    })
}

fn ln_beta(x: f64, y: f64) -> f64 {
    ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y)
}

/// The `β ≤ α` reference point assembled from Beta integrals,
/// `[γ B₁ L^{α+1} + L^{α+2} B₂] / [L^{α+1} B₁]` with `L = δ - γ`,
/// `B₁ = B(α-β+1, β+1)`, `B₂ = B(α-β+2, β+1)`. An independent route to
/// [`ComparisonAffine::reference_point`]. Needs `β < α + 1`.
pub fn reference_point_via_beta(g: &ComparisonAffine, alpha: f64, beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < alpha + 1.0) {
        return Err(Error::param(format!("need 0 < beta < alpha + 1, got alpha = {alpha}, beta = {beta}")));
    }
    let len = g.delta - g.gamma;
    let b1 = ln_beta(alpha - beta + 1.0, beta + 1.0);
    let b2 = ln_beta(alpha - beta + 2.0, beta + 1.0);
    let ln_l = len.ln();
    let num = g.gamma * (b1 + (alpha + 1.0) * ln_l).exp() + (b2 + (alpha + 2.0) * ln_l).exp();
    let den = (b1 + (alpha + 1.0) * ln_l).exp();
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::ConcaveProfile;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn affine_is_its_own_comparison() {
        let h = ConcaveProfile::new([(0.0, 1.0), (1.0, 0.0)]).unwrap();
        let g = build_comparison_affine(&h, 1.0, 1.0, &spec()).unwrap();
        assert!(g.gamma.abs() < 1e-14 && (g.delta - 1.0).abs() < 1e-14 && (g.c - 1.0).abs() < 1e-14);
        let r = validate_comparison(&h, &g, 1.0, 128, &spec()).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.max_tail_excess.abs() < 1e-14);
    }

    #[test]
    fn constant_profile_comparison() {
        let h = ConcaveProfile::new([(0.0, 1.0), (1.0, 1.0)]).unwrap();
        let g = build_comparison_affine(&h, 1.0, 1.0, &spec()).unwrap();
        assert!((g.delta - 1.5).abs() < 1e-14);
        assert!((g.c - 1.0).abs() < 1e-14);
        assert!((g.gamma - (1.5 - 2f64.sqrt())).abs() < 1e-14);
        let r = validate_comparison(&h, &g, 1.0, 128, &spec()).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn tent_profile_comparison() {
        let h = ConcaveProfile::new([(0.0, 0.5), (0.5, 1.0), (1.0, 0.0)]).unwrap();
        let g = build_comparison_affine(&h, 2.0, 1.0, &spec()).unwrap();
        let r = validate_comparison(&h, &g, 1.0, 128, &spec()).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn centroid_domination_examples() {
        let affine = ConcaveProfile::new([(0.0, 1.0), (1.0, 0.0)]).unwrap();
        let d = centroid_domination_check(&affine, 1.0, 1.0, &spec()).unwrap();
        assert!(d.pass && d.slack.abs() < 1e-14);
        assert!((d.reference - 1.0 / 3.0).abs() < 1e-14);

        let one = ConcaveProfile::new([(0.0, 1.0), (1.0, 1.0)]).unwrap();
        let d = centroid_domination_check(&one, 1.0, 1.0, &spec()).unwrap();
        let expected = (1.5 - 2f64.sqrt()) + 2f64.sqrt() / 3.0;
        assert!(d.pass && (d.reference - expected).abs() < 1e-14);

        let d = centroid_domination_check(&one, 1.0, 2.0, &spec()).unwrap();
        assert_eq!(d.regime, Regime::AlphaLeBeta);
        assert!(d.pass && (d.g_alpha - 0.5).abs() < 1e-14);
    }

    #[test]
    fn beta_route_matches_closed_form() {
        let h = ConcaveProfile::new([(0.0, 0.3), (0.4, 1.0), (1.0, 0.2)]).unwrap();
        for (alpha, beta) in [(1.0, 1.0), (2.0, 1.0), (3.0, 0.5), (2.5, 2.5)] {
            let g = build_comparison_affine(&h, alpha, beta, &spec()).unwrap();
            let closed = g.reference_point(alpha, beta);
            let via = reference_point_via_beta(&g, alpha, beta).unwrap();
            assert!((closed - via).abs() < 1e-12, "{alpha} {beta}: {closed} vs {via}");
        }
        let g = build_comparison_affine(&h, 1.0, 1.0, &spec()).unwrap();
        assert!(reference_point_via_beta(&g, 1.0, 2.5).is_err());
    }

    #[test]
    fn affine_profile_matches_closed_masses() {
        let h = ConcaveProfile::new([(0.0, 0.3), (0.4, 1.0), (1.0, 0.2)]).unwrap();
        let g = build_comparison_affine(&h, 1.0, 2.0, &spec()).unwrap();
        let p = g.as_profile().unwrap();
        let m = p.powered_integral_within(2.0, g.gamma, g.delta, &spec()).unwrap();
        assert!((m - g.total_mass(2.0)).abs() < 1e-13);
    }
}
