use serde::Serialize;

use super::geometry::{to3, Polygon, Polytope3, V3};
use super::mc::{mc_halfspace_fraction, mc_section_profile, McSpec};
use super::{check_direction, dot, unit_ball_volume, ConvexBody, Revolution};
use crate::bounds::Provenance;
use crate::profile::{alpha_centroid, AnalyticProfile, PiecewiseLinear, Profile, SampledProfile};
use crate::quad::QuadratureSpec;
use crate::{Error, Result};

/// Axis alignment threshold for closed-form box and revolution sections.
const AXIS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SectionKind {
    Exact,
    MonteCarlo { seed: u64, samples: u64, bins: usize, inside: u64 },
}

#[derive(Debug, Clone)]
pub(crate) enum Slices {
    Analytic(AnalyticProfile),
    Piecewise(PiecewiseLinear),
    Polytope(SlabQuadratics),
    Revolution { body: Revolution, flip: bool },
    Sampled(SampledProfile),
}

/// Section area of a 3-polytope. Between consecutive vertex levels the
/// section is a polygon whose vertices move linearly, so its area is a
/// quadratic in `t`; each slab keeps the area at its ends and midpoint.
#[derive(Debug, Clone)]
pub(crate) struct SlabQuadratics {
    levels: Vec<f64>,
    nodes: Vec<[f64; 3]>,
}

impl SlabQuadratics {
    fn new(body: &Polytope3, u: V3) -> Self {
        let levels = body.vertex_levels(u);
        let nodes = levels
            .windows(2)
            .map(|w| [w[0], 0.5 * (w[0] + w[1]), w[1]].map(|t| body.section_area(u, t)))
            .collect();
        Self { levels, nodes }
    }

    fn value_at(&self, t: f64) -> f64 {
        let n = self.levels.len();
        if n < 2 || t < self.levels[0] || t > self.levels[n - 1] {
            return 0.0;
        }
        let k = self.levels.partition_point(|&l| l <= t).clamp(1, n - 1) - 1;
        let (l0, l1) = (self.levels[k], self.levels[k + 1]);
        let s = (t - l0) / (l1 - l0);
        let [a, m, b] = self.nodes[k];
        let v = a * 2.0 * (s - 0.5) * (s - 1.0) - m * 4.0 * s * (s - 1.0) + b * 2.0 * s * (s - 0.5);
        v.max(0.0)
    }
}

/// `t ↦ vol_{n-1}(K ∩ {⟨x, u⟩ = t})` on the support interval of `K` along `u`.
#[derive(Debug, Clone)]
pub struct SectionProfile {
    direction: Vec<f64>,
    support: (f64, f64),
    kind: SectionKind,
    slices: Slices,
}

impl SectionProfile {
    pub(crate) fn new(direction: Vec<f64>, support: (f64, f64), kind: SectionKind, slices: Slices) -> Self {
        Self {
            direction,
            support,
            kind,
            slices,
        }
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn kind(&self) -> SectionKind {
        self.kind
    }

    /// Binned samples `(t, f, σ)` for Monte Carlo profiles.
    pub fn samples(&self) -> Option<&SampledProfile> {
        match &self.slices {
            Slices::Sampled(s) => Some(s),
            _ => None,
        }
    }

    /// Provenance of a ratio derived from this profile; `sigma` is only used
    /// for Monte Carlo profiles.
    pub fn provenance(&self, spec: &QuadratureSpec, sigma: f64) -> Provenance {
        match self.kind {
            SectionKind::MonteCarlo {
                seed, samples, bins, ..
            } => Provenance::MonteCarlo {
                seed,
                samples,
                bins,
                sigma,
            },
            SectionKind::Exact => Provenance::for_profile(self, spec),
        }
    }

    /// Binomial standard error of a mass fraction `p` measured on this profile.
    pub fn fraction_sigma(&self, p: f64) -> f64 {
        match self.kind {
            SectionKind::MonteCarlo { inside, .. } => (p * (1.0 - p) / inside.max(1) as f64).sqrt(),
            SectionKind::Exact => 0.0,
        }
    }
}

impl Profile for SectionProfile {
    fn domain(&self) -> (f64, f64) {
        self.support
    }

    fn value_at(&self, t: f64) -> f64 {
        match &self.slices {
            Slices::Analytic(p) => p.value_at(t),
            Slices::Piecewise(p) => p.value_at(t),
            Slices::Polytope(q) => q.value_at(t),
            Slices::Revolution { body, flip } => {
                let rho = body.radius(if *flip { -t } else { t });
                unit_ball_volume(body.dim() - 1) * rho.powi(body.dim() as i32 - 1)
            }
            Slices::Sampled(p) => p.value_at(t),
        }
    }

    fn knots(&self) -> Vec<f64> {
        match &self.slices {
            Slices::Analytic(p) => p.knots(),
            Slices::Piecewise(p) => p.knots(),
            Slices::Polytope(q) => q.levels.clone(),
            Slices::Revolution { body, flip } => {
                let mut k = body.profile().knots();
                if *flip {
                    k = k.into_iter().rev().map(|x| -x).collect();
                }
                k
            }
            Slices::Sampled(p) => p.knots(),
        }
    }

    fn powered_integral_within(&self, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
        match &self.slices {
            Slices::Analytic(p) => p.powered_integral_within(beta, s, e, spec),
            Slices::Piecewise(p) => p.powered_integral_within(beta, s, e, spec),
            Slices::Sampled(p) => p.powered_integral_within(beta, s, e, spec),
            _ => crate::profile::segmented_powered(self, beta, s, e, spec),
        }
    }

    fn moment_integral_within(&self, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
        match &self.slices {
            Slices::Analytic(p) => p.moment_integral_within(beta, s, e, spec),
            Slices::Piecewise(p) => p.moment_integral_within(beta, s, e, spec),
            Slices::Sampled(p) => p.moment_integral_within(beta, s, e, spec),
            _ => crate::profile::segmented_moment(self, beta, s, e, spec),
        }
    }

    fn peak(&self) -> (f64, f64) {
        match &self.slices {
            Slices::Analytic(p) => p.peak(),
            Slices::Piecewise(p) => p.peak(),
            Slices::Sampled(p) => p.peak(),
            _ => crate::profile::grid_peak(self),
        }
    }

    fn exact_integrals(&self) -> bool {
        match &self.slices {
            Slices::Analytic(p) => p.exact_integrals(),
            Slices::Piecewise(_) | Slices::Sampled(_) => true,
            _ => false,
        }
    }
}

/// Index of the coordinate axis `u` points along, if any.
fn axis_of(u: &[f64]) -> Option<usize> {
    u.iter().position(|x| (x.abs() - 1.0).abs() <= AXIS_TOL)
}

fn polygon_slices(poly: &Polygon, u: &[f64]) -> Result<Slices> {
    let u2 = [u[0], u[1]];
    let mut levels: Vec<f64> = poly.vertices().iter().map(|v| dot(v, &u2)).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let pl = PiecewiseLinear::new(levels.iter().map(|&t| (t, poly.chord(u2, t))))?;
    Ok(Slices::Piecewise(pl))
}

/// Closed-form profile of a simplex in `R^n` along a facet normal: a power
/// `(distance to the apex)^{n-1}`.
fn simplex_facet_slices(body: &ConvexBody, u: &[f64], spec: &QuadratureSpec) -> Result<Option<Slices>> {
    let verts = body.vertex_list();
    let n = body.dim();
    let levels: Vec<f64> = verts.iter().map(|v| dot(v, u)).collect();
    let (lo, hi) = (
        levels.iter().copied().fold(f64::INFINITY, f64::min),
        levels.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    );
    let tol = 1e-12 * (hi - lo);
    let at_lo = levels.iter().filter(|&&l| l - lo <= tol).count();
    let at_hi = levels.iter().filter(|&&l| hi - l <= tol).count();
    let height = hi - lo;
    let facet = n as f64 * body.volume(spec)? / height;
    let q = n as f64 - 1.0;
    let c = facet / height.powf(q);
    Ok(if at_lo == n && at_hi == 1 {
        Some(Slices::Analytic(AnalyticProfile::decreasing_power(c, lo, hi, q)?))
    } else if at_hi == n && at_lo == 1 {
        Some(Slices::Analytic(AnalyticProfile::increasing_power(c, -lo, hi, q)?))
    } else {
        None
    })
}

fn exact_slices(body: &ConvexBody, u: &[f64], spec: &QuadratureSpec) -> Result<Option<Slices>> {
    Ok(match body {
        ConvexBody::Ball(b) => Some(Slices::Analytic(AnalyticProfile::BallSection {
            c: unit_ball_volume(b.center().len() - 1),
            radius: b.radius(),
            n: b.center().len(),
            center: dot(b.center(), u),
        })),
        ConvexBody::Box(b) => match axis_of(u) {
            Some(i) => {
                let (lo, hi) = (b.min_corner(), b.max_corner());
                let area: f64 = (0..lo.len()).filter(|&d| d != i).map(|d| hi[d] - lo[d]).product();
                let (s, e) = if u[i] > 0.0 { (lo[i], hi[i]) } else { (-hi[i], -lo[i]) };
                Some(Slices::Analytic(AnalyticProfile::constant(area, s, e)?))
            }
            None => match body.as_polytope() {
                Some(poly) => exact_slices(&poly?, u, spec)?,
                None => None,
            },
        },
        ConvexBody::Simplex(_) => match body.as_polytope() {
            Some(poly) => exact_slices(&poly?, u, spec)?,
            None => simplex_facet_slices(body, u, spec)?,
        },
        ConvexBody::Polygon(p) => Some(polygon_slices(p, u)?),
        ConvexBody::Polytope(p) => {
            let u3 = to3(u);
            Some(Slices::Polytope(SlabQuadratics::new(p, u3)))
        }
        ConvexBody::Revolution(r) => {
            if (u[0].abs() - 1.0).abs() <= AXIS_TOL {
                Some(Slices::Revolution {
                    body: r.clone(),
                    flip: u[0] < 0.0,
                })
            } else {
                None
            }
        }
    })
}

/// Section profile of `body` along the unit vector `u`: closed form where
/// available, otherwise Monte Carlo slabs if `mc` is given.
pub fn section_profile(body: &ConvexBody, u: &[f64], mc: Option<&McSpec>) -> Result<SectionProfile> {
    check_direction(u, body.dim())?;
    let spec = QuadratureSpec::default();
    match exact_slices(body, u, &spec)? {
        Some(slices) => {
            let support = body.support_interval(u)?;
            Ok(SectionProfile::new(u.to_vec(), support, SectionKind::Exact, slices))
        }
        None => match mc {
            Some(mc) => mc_section_profile(body, u, mc),
            None => Err(Error::NoExactSection),
        },
    }
}

/// Exact `(n-1)`-volume of the section at level `t`.
pub fn section_volume(body: &ConvexBody, u: &[f64], t: f64) -> Result<f64> {
    let prof = section_profile(body, u, None)?;
    crate::profile::evaluate(&prof, t)
}

/// `∫ t f^r / ∫ f^r` over the section profile; the support midpoint for `r = 0`.
pub fn r_centroid_point(
    body: &ConvexBody,
    u: &[f64],
    r: f64,
    mc: Option<&McSpec>,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let prof = section_profile(body, u, mc)?;
    alpha_centroid(&prof, r, spec)
}

/// A volume fraction with its uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fraction {
    pub value: f64,
    pub sigma: f64,
    pub provenance: Provenance,
}

/// `vol(K ∩ {⟨x, u⟩ ≤ cut}) / vol(K)`: integrates the exact section profile,
/// or counts Monte Carlo points when no closed form exists and `mc` is given.
pub fn halfspace_fraction(
    body: &ConvexBody,
    u: &[f64],
    cut: f64,
    mc: Option<&McSpec>,
    spec: &QuadratureSpec,
) -> Result<Fraction> {
    let (a, b) = body.support_interval(u)?;
    if !(cut >= a && cut <= b) {
        return Err(Error::Domain { t: cut, a, b });
    }
    match section_profile(body, u, None) {
        Ok(prof) => {
            let lower = prof.powered_integral_within(1.0, a, cut, spec)?;
            let upper = prof.powered_integral_within(1.0, cut, b, spec)?;
            Ok(Fraction {
                value: lower / (lower + upper),
                sigma: 0.0,
                provenance: prof.provenance(spec, 0.0),
            })
        }
        Err(Error::NoExactSection) => {
            let mc = mc.ok_or(Error::NoExactSection)?;
            let est = mc_halfspace_fraction(body, u, cut, mc)?;
            Ok(Fraction {
                value: est.value,
                sigma: est.sigma,
                provenance: Provenance::MonteCarlo {
                    seed: mc.seed,
                    samples: mc.samples,
                    bins: mc.bins,
                    sigma: est.sigma,
                },
            })
        }
        Err(e) => Err(e),
    }
}
