use statrs::distribution::{ContinuousCDF, Normal};

use super::section::{section_profile, SectionProfile};
use super::{dot, ConvexBody, McSpec};
use crate::bounds::{classic_bounds, grunbaum_r_bound, Provenance, Theorem, TheoremReport};
use crate::profile::{alpha_centroid, p_concavity_check, p_concavity_check_noisy, ConcavityVerdict, Profile, EPS_CONCAVE};
use crate::quad::QuadratureSpec;
use crate::{Error, Result};

/// Chance that a noisy concavity check flags a truly concave profile,
/// shared over all triples it scans.
const NOISY_FALSE_ALARM: f64 = 1e-3;

/// Per-triple threshold in standard errors for `n` samples, never below 3.
fn noisy_k_sigma(n: usize) -> f64 {
    let mut triples = 0usize;
    let mut k = 1;
    while 2 * k < n {
        triples += n - 2 * k;
        k *= 2;
    }
    let z = Normal::standard().inverse_cdf(1.0 - NOISY_FALSE_ALARM / triples.max(1) as f64);
    z.max(3.0)
}

fn concavity(prof: &SectionProfile, p: f64) -> Result<ConcavityVerdict> {
    match prof.samples() {
        Some(s) => p_concavity_check_noisy(s, p, noisy_k_sigma(s.sigma().len()), EPS_CONCAVE),
        None => p_concavity_check(prof, p, EPS_CONCAVE),
    }
}

/// Mass on both sides of the `r`-powered centroid against the bound for
/// `p`-concave profiles. The ratio is the smaller side.
pub fn verify_grunbaum_r(
    body: &ConvexBody,
    u: &[f64],
    p: f64,
    r: f64,
    mc: Option<&McSpec>,
    spec: &QuadratureSpec,
) -> Result<TheoremReport> {
    let bound = grunbaum_r_bound(p, r)?;
    let prof = section_profile(body, u, mc)?;
    let verdict = concavity(&prof, p)?;
    if !verdict.concave {
        let (_, t, _) = verdict.witness.unwrap_or_default();
        return Err(Error::Precondition(format!(
            "section profile is not {p}-concave: violation {:.3e} near t = {t}",
            verdict.max_violation
        )));
    }
    let cut = alpha_centroid(&prof, r, spec)?;
    let (a, b) = prof.domain();
    let lower = prof.powered_integral_within(1.0, a, cut, spec)?;
    let upper = prof.powered_integral_within(1.0, cut, b, spec)?;
    let (lower, upper) = (lower / (lower + upper), upper / (lower + upper));
    let ratio = lower.min(upper);
    let provenance = prof.provenance(spec, prof.fraction_sigma(ratio));
    Ok(TheoremReport::new(Theorem::GrunbaumR, ratio, bound, provenance)
        .with_sides(lower, upper)
        .with_cut(cut))
}

/// Relative position of the centroid inside the support interval, the
/// smaller of `(g - a)` and `(b - g)` over `b - a`.
pub fn verify_minkowski_radon(body: &ConvexBody, u: &[f64], spec: &QuadratureSpec) -> Result<TheoremReport> {
    let bound = classic_bounds(body.dim())?.minkowski_radon;
    let (a, b) = body.support_interval(u)?;
    let g = dot(&body.centroid(spec)?, u);
    let (lower, upper) = ((g - a) / (b - a), (b - g) / (b - a));
    let provenance = match body {
        ConvexBody::Revolution(r) => Provenance::for_profile(r.profile(), spec),
        _ => Provenance::Exact,
    };
    Ok(TheoremReport::new(Theorem::MinkowskiRadon, lower.min(upper), bound, provenance)
        .with_sides(lower, upper)
        .with_cut(g))
}

/// Section through the centroid relative to the largest parallel section.
pub fn verify_makai_fradelizi(
    body: &ConvexBody,
    u: &[f64],
    mc: Option<&McSpec>,
    spec: &QuadratureSpec,
) -> Result<TheoremReport> {
    let bound = classic_bounds(body.dim())?.makai_fradelizi;
    let prof = section_profile(body, u, mc)?;
    let g = dot(&body.centroid(spec)?, u);
    let (_, top) = prof.peak();
    let ratio = prof.value_at(g) / top;
    let sigma = match prof.samples() {
        Some(s) => {
            let (t, _) = prof.peak();
            let near = |x: f64| {
                s.samples()
                    .min_by(|p, q| (p.0 - x).abs().total_cmp(&(q.0 - x).abs()))
                    .map_or(0.0, |p| p.2)
            };
            let (sg, st) = (near(g), near(t));
            ratio * ((sg / prof.value_at(g)).powi(2) + (st / top).powi(2)).sqrt()
        }
        None => 0.0,
    };
    Ok(TheoremReport::new(Theorem::MakaiFradelizi, ratio, bound, prof.provenance(spec, sigma)).with_cut(g))
}
