//! Convex bodies, their section profiles along a direction, and the
//! geometric inequalities checked on them.

mod geometry;
mod mc;
mod revolve;
mod section;
mod theorems;

use serde::{Deserialize, Serialize};

pub use geometry::{Polygon, Polytope3};
pub use mc::{mc_halfspace_fraction, mc_section_profile, McEstimate, McSpec};
pub use revolve::{revolve, revolve_roundtrip, RoundTrip};
pub use section::{
    halfspace_fraction, r_centroid_point, section_profile, section_volume, Fraction, SectionKind, SectionProfile,
};
pub use theorems::{verify_grunbaum_r, verify_makai_fradelizi, verify_minkowski_radon};

use geometry::{determinant, dot, norm, solve, to3};
use crate::profile::{alpha_centroid, p_concavity_check, AnyProfile, Profile};
use crate::quad::QuadratureSpec;
use crate::{Error, Result};

/// Volume `κ_k` of the unit ball in `R^k`.
pub fn unit_ball_volume(k: usize) -> f64 {
    match k {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(k - 2) * 2.0 * std::f64::consts::PI / k as f64,
    }
}

/// Nondegenerate simplex in `R^n` (`n + 1` vertices).
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    vertices: Vec<Vec<f64>>,
    /// Inverse of the edge matrix `[v₁ - v₀, ..., v_n - v₀]`, row-major.
    inverse: Vec<Vec<f64>>,
    volume: f64,
}

impl Simplex {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let n = vertices.len().saturating_sub(1);
        if n < 2 || vertices.iter().any(|v| v.len() != n) {
            return Err(Error::Body(format!(
                "a simplex in R^n needs n + 1 vertices of length n (n >= 2), got {} vertices",
                vertices.len()
            )));
        }
        if vertices.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Body("simplex vertices must be finite".into()));
        }
        // columns are edge vectors
        let edges: Vec<Vec<f64>> = (0..n)
            .map(|row| (1..=n).map(|k| vertices[k][row] - vertices[0][row]).collect())
            .collect();
        let det = determinant(edges.clone());
        let volume = det.abs() / (1..=n).map(|k| k as f64).product::<f64>();
        let scale = vertices.iter().flatten().fold(1.0f64, |m, x| m.max(x.abs()));
        if !(volume > 1e-12 * scale.powi(n as i32)) {
            return Err(Error::Body("simplex vertices are affinely dependent".into()));
        }
        let mut inverse = vec![vec![0.0; n]; n];
        for col in 0..n {
            let mut e = vec![0.0; n];
            e[col] = 1.0;
            let x = solve(edges.clone(), e).ok_or_else(|| Error::Body("singular simplex".into()))?;
            for row in 0..n {
                inverse[row][col] = x[row];
            }
        }
        Ok(Self {
            vertices,
            inverse,
            volume,
        })
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    fn contains(&self, x: &[f64]) -> bool {
        let d: Vec<f64> = x.iter().zip(&self.vertices[0]).map(|(a, b)| a - b).collect();
        let mut sum = 0.0;
        for row in &self.inverse {
            let lambda = dot(row, &d);
            if lambda < 0.0 {
                return false;
            }
            sum += lambda;
        }
        sum <= 1.0
    }
}

/// Body of revolution about the first coordinate axis. `profile` is the
/// section volume `f(t)` at `x₁ = t`; the radius is `(f/κ_{n-1})^{1/(n-1)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Revolution {
    profile: AnyProfile,
    n: usize,
    max_radius: f64,
}

impl Revolution {
    pub fn new(profile: AnyProfile, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Body(format!("revolution needs n >= 2, got {n}")));
        }
        let p = 1.0 / (n as f64 - 1.0);
        let verdict = p_concavity_check(&profile, p, 1e-9)?;
        if !verdict.concave {
            let (_, t, _) = verdict.witness.unwrap_or_default();
            return Err(Error::Precondition(format!(
                "section profile is not {p}-concave (violation near t = {t}); the body would not be convex"
            )));
        }
        let (_, top) = profile.peak();
        if !(top > 0.0) {
            return Err(Error::Body("revolution profile vanishes".into()));
        }
        let mut rev = Self {
            profile,
            n,
            max_radius: 0.0,
        };
        rev.max_radius = rev.radius(rev.profile.peak().0);
        Ok(rev)
    }

    pub fn profile(&self) -> &AnyProfile {
        &self.profile
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Radius of the `(n-1)`-ball at axial position `t`.
    pub fn radius(&self, t: f64) -> f64 {
        let (a, b) = self.profile.domain();
        if t < a || t > b {
            return 0.0;
        }
        let k = unit_ball_volume(self.n - 1);
        (self.profile.value_at(t).max(0.0) / k).powf(1.0 / (self.n as f64 - 1.0))
    }

    /// `max_t (t·along + ρ(t)·across)`; concave in `t`, so golden section.
    fn extreme(&self, along: f64, across: f64) -> f64 {
        let (a, b) = self.profile.domain();
        let objective = |t: f64| t * along + self.radius(t) * across;
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        let (mut lo, mut hi) = (a, b);
        for _ in 0..200 {
            let x1 = hi - phi * (hi - lo);
            let x2 = lo + phi * (hi - lo);
            if objective(x1) < objective(x2) {
                lo = x1;
            } else {
                hi = x2;
            }
        }
        objective(0.5 * (lo + hi)).max(objective(a)).max(objective(b))
    }
}

/// Axis-aligned box.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisBox {
    min: Vec<f64>,
    max: Vec<f64>,
}

impl AxisBox {
    pub fn new(min: Vec<f64>, max: Vec<f64>) -> Result<Self> {
        if min.len() != max.len() || min.len() < 2 {
            return Err(Error::Body("box corners must have equal length >= 2".into()));
        }
        if min.iter().zip(&max).any(|(lo, hi)| !(lo < hi) || !lo.is_finite() || !hi.is_finite()) {
            return Err(Error::Body("box needs min < max in every coordinate".into()));
        }
        Ok(Self { min, max })
    }

    pub fn min_corner(&self) -> &[f64] {
        &self.min
    }

    pub fn max_corner(&self) -> &[f64] {
        &self.max
    }

    fn corners(&self) -> Vec<Vec<f64>> {
        let n = self.min.len();
        (0..1usize << n)
            .map(|mask| (0..n).map(|d| if mask >> d & 1 == 1 { self.max[d] } else { self.min[d] }).collect())
            .collect()
    }
}

/// Euclidean ball.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    center: Vec<f64>,
    radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.len() < 2 || center.iter().any(|x| !x.is_finite()) {
            return Err(Error::Body("ball center must be a finite vector of length >= 2".into()));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Body(format!("ball radius must be positive, got {radius}")));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// A validated convex body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BodyJson", into = "BodyJson")]
pub enum ConvexBody {
    Simplex(Simplex),
    Ball(Ball),
    Box(AxisBox),
    Polygon(Polygon),
    Polytope(Polytope3),
    Revolution(Revolution),
}

/// Wire form of [`ConvexBody`], tagged by `variant`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodyJson {
    Simplex { vertices: Vec<Vec<f64>> },
    Ball { center: Vec<f64>, radius: f64 },
    Box { min_corner: Vec<f64>, max_corner: Vec<f64> },
    Polytope2d { vertices: Vec<[f64; 2]> },
    Polytope3d { vertices: Vec<[f64; 3]>, faces: Vec<Vec<usize>> },
    Revolution { profile: AnyProfile, n: usize },
}

impl TryFrom<BodyJson> for ConvexBody {
    type Error = Error;

    fn try_from(raw: BodyJson) -> Result<Self> {
        Ok(match raw {
            BodyJson::Simplex { vertices } => ConvexBody::Simplex(Simplex::new(vertices)?),
            BodyJson::Ball { center, radius } => ConvexBody::Ball(Ball::new(center, radius)?),
            BodyJson::Box { min_corner, max_corner } => ConvexBody::Box(AxisBox::new(min_corner, max_corner)?),
            BodyJson::Polytope2d { vertices } => ConvexBody::Polygon(Polygon::new(vertices)?),
            BodyJson::Polytope3d { vertices, faces } => ConvexBody::Polytope(Polytope3::new(vertices, faces)?),
            BodyJson::Revolution { profile, n } => ConvexBody::Revolution(Revolution::new(profile, n)?),
        })
    }
}

impl From<ConvexBody> for BodyJson {
    fn from(body: ConvexBody) -> Self {
        match body {
            ConvexBody::Simplex(s) => BodyJson::Simplex { vertices: s.vertices },
            ConvexBody::Ball(b) => BodyJson::Ball {
                center: b.center,
                radius: b.radius,
            },
            ConvexBody::Box(b) => BodyJson::Box {
                min_corner: b.min,
                max_corner: b.max,
            },
            ConvexBody::Polygon(p) => BodyJson::Polytope2d {
                vertices: p.vertices().to_vec(),
            },
            ConvexBody::Polytope(p) => BodyJson::Polytope3d {
                vertices: p.vertices().to_vec(),
                faces: p.faces().to_vec(),
            },
            ConvexBody::Revolution(r) => BodyJson::Revolution {
                profile: r.profile,
                n: r.n,
            },
        }
    }
}

impl ConvexBody {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Body(e.to_string()))
    }

    pub fn simplex(vertices: Vec<Vec<f64>>) -> Result<Self> {
        Simplex::new(vertices).map(ConvexBody::Simplex)
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        Ball::new(center, radius).map(ConvexBody::Ball)
    }

    pub fn axis_box(min: Vec<f64>, max: Vec<f64>) -> Result<Self> {
        AxisBox::new(min, max).map(ConvexBody::Box)
    }

    pub fn polygon(vertices: Vec<[f64; 2]>) -> Result<Self> {
        Polygon::new(vertices).map(ConvexBody::Polygon)
    }

    pub fn polytope(vertices: Vec<[f64; 3]>, faces: Vec<Vec<usize>>) -> Result<Self> {
        Polytope3::new(vertices, faces).map(ConvexBody::Polytope)
    }

    /// Convex hull of a 3-D point cloud.
    pub fn polytope_hull(points: &[[f64; 3]]) -> Result<Self> {
        Polytope3::hull_of(points).map(ConvexBody::Polytope)
    }

    pub fn revolution(profile: AnyProfile, n: usize) -> Result<Self> {
        Revolution::new(profile, n).map(ConvexBody::Revolution)
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Simplex(s) => s.vertices.len() - 1,
            ConvexBody::Ball(b) => b.center.len(),
            ConvexBody::Box(b) => b.min.len(),
            ConvexBody::Polygon(_) => 2,
            ConvexBody::Polytope(_) => 3,
            ConvexBody::Revolution(r) => r.n,
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            ConvexBody::Simplex(s) => s.contains(x),
            ConvexBody::Ball(b) => {
                x.iter().zip(&b.center).map(|(p, c)| (p - c) * (p - c)).sum::<f64>() <= b.radius * b.radius
            }
            ConvexBody::Box(b) => x.iter().zip(b.min.iter().zip(&b.max)).all(|(p, (lo, hi))| p >= lo && p <= hi),
            ConvexBody::Polygon(p) => p.contains(x),
            ConvexBody::Polytope(p) => p.contains(x),
            ConvexBody::Revolution(r) => {
                let rho = r.radius(x[0]);
                x[1..].iter().map(|y| y * y).sum::<f64>() <= rho * rho
                    && x[0] >= r.profile.domain().0
                    && x[0] <= r.profile.domain().1
            }
        }
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.dim();
        match self {
            ConvexBody::Ball(b) => (
                b.center.iter().map(|c| c - b.radius).collect(),
                b.center.iter().map(|c| c + b.radius).collect(),
            ),
            ConvexBody::Box(b) => (b.min.clone(), b.max.clone()),
            ConvexBody::Revolution(r) => {
                let (a, b) = r.profile.domain();
                let mut lo = vec![-r.max_radius; n];
                let mut hi = vec![r.max_radius; n];
                lo[0] = a;
                hi[0] = b;
                (lo, hi)
            }
            _ => {
                let pts = self.vertex_list();
                let lo = (0..n).map(|d| pts.iter().map(|p| p[d]).fold(f64::INFINITY, f64::min)).collect();
                let hi = (0..n)
                    .map(|d| pts.iter().map(|p| p[d]).fold(f64::NEG_INFINITY, f64::max))
                    .collect();
                (lo, hi)
            }
        }
    }

    /// Vertices of polytopal bodies (empty for balls and revolution bodies).
    pub fn vertex_list(&self) -> Vec<Vec<f64>> {
        match self {
            ConvexBody::Simplex(s) => s.vertices.clone(),
            ConvexBody::Box(b) => b.corners(),
            ConvexBody::Polygon(p) => p.vertices().iter().map(|v| v.to_vec()).collect(),
            ConvexBody::Polytope(p) => p.vertices().iter().map(|v| v.to_vec()).collect(),
            ConvexBody::Ball(_) | ConvexBody::Revolution(_) => Vec::new(),
        }
    }

    pub fn volume(&self, spec: &QuadratureSpec) -> Result<f64> {
        Ok(match self {
            ConvexBody::Simplex(s) => s.volume,
            ConvexBody::Ball(b) => unit_ball_volume(b.center.len()) * b.radius.powi(b.center.len() as i32),
            ConvexBody::Box(b) => b.min.iter().zip(&b.max).map(|(lo, hi)| hi - lo).product(),
            ConvexBody::Polygon(p) => p.area(),
            ConvexBody::Polytope(p) => p.volume(),
            ConvexBody::Revolution(r) => {
                let (a, b) = r.profile.domain();
                r.profile.powered_integral_within(1.0, a, b, spec)?
            }
        })
    }

    /// Centroid, computed without section profiles.
    pub fn centroid(&self, spec: &QuadratureSpec) -> Result<Vec<f64>> {
        Ok(match self {
            ConvexBody::Simplex(s) => {
                let n = s.vertices.len() as f64;
                (0..s.vertices.len() - 1)
                    .map(|d| s.vertices.iter().map(|v| v[d]).sum::<f64>() / n)
                    .collect()
            }
            ConvexBody::Ball(b) => b.center.clone(),
            ConvexBody::Box(b) => b.min.iter().zip(&b.max).map(|(lo, hi)| 0.5 * (lo + hi)).collect(),
            ConvexBody::Polygon(p) => p.centroid().to_vec(),
            ConvexBody::Polytope(p) => p.volume_centroid().1.to_vec(),
            ConvexBody::Revolution(r) => {
                let mut g = vec![0.0; r.n];
                g[0] = alpha_centroid(&r.profile, 1.0, spec)?;
                g
            }
        })
    }

    /// `[min ⟨x, u⟩, max ⟨x, u⟩]` over the body.
    pub fn support_interval(&self, u: &[f64]) -> Result<(f64, f64)> {
        check_direction(u, self.dim())?;
        Ok(match self {
            ConvexBody::Ball(b) => {
                let c = dot(&b.center, u);
                (c - b.radius, c + b.radius)
            }
            ConvexBody::Revolution(r) => {
                let across = norm(&u[1..]);
                (-r.extreme(-u[0], across), r.extreme(u[0], across))
            }
            _ => {
                let levels: Vec<f64> = self.vertex_list().iter().map(|v| dot(v, u)).collect();
                (
                    levels.iter().copied().fold(f64::INFINITY, f64::min),
                    levels.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                )
            }
        })
    }

    /// The same body as an explicit polygon or 3-D polytope, when it is one.
    fn as_polytope(&self) -> Option<Result<ConvexBody>> {
        let pts = match self {
            ConvexBody::Simplex(_) | ConvexBody::Box(_) => self.vertex_list(),
            _ => return None,
        };
        match self.dim() {
            2 => {
                let flat: Vec<[f64; 2]> = pts.iter().map(|p| [p[0], p[1]]).collect();
                Some(Polygon::hull_of(&flat).map(ConvexBody::Polygon))
            }
            3 => {
                let flat: Vec<[f64; 3]> = pts.iter().map(|p| to3(p)).collect();
                Some(Polytope3::hull_of(&flat).map(ConvexBody::Polytope))
            }
            _ => None,
        }
    }
}

/// Rejects directions of the wrong length or not of unit norm.
pub(crate) fn check_direction(u: &[f64], n: usize) -> Result<()> {
    if u.len() != n {
        return Err(Error::param(format!("direction has {} components, body lives in R^{n}", u.len())));
    }
    let len = norm(u);
    if !((len - 1.0).abs() <= 1e-9) {
        return Err(Error::param(format!("direction must be a unit vector, has norm {len}")));
    }
    Ok(())
}

/// `u / |u|`.
pub fn normalized(u: &[f64]) -> Result<Vec<f64>> {
    let len = norm(u);
    if !(len > 0.0 && len.is_finite()) {
        return Err(Error::param("direction must be a nonzero finite vector"));
    }
    Ok(u.iter().map(|x| x / len).collect())
}
