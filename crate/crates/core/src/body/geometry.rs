//! Small dense-vector helpers, convex polygons and convex 3-D polytopes.

use crate::{Error, Result};

pub(crate) type V3 = [f64; 3];

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn sub3(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn cross(a: V3, b: V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn to3(v: &[f64]) -> V3 {
    [v[0], v[1], v[2]]
}

/// Determinant by Gaussian elimination with partial pivoting.
pub(crate) fn determinant(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap_or(col);
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for k in col..n {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    det
}

/// Solves `m x = rhs`; `None` when `m` is singular.
pub(crate) fn solve(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = m.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(pivot, col);
        rhs.swap(pivot, col);
        for row in 0..n {
            if row != col {
                let f = m[row][col] / m[col][col];
                for k in col..n {
                    m[row][k] -= f * m[col][k];
                }
                rhs[row] -= f * rhs[col];
            }
        }
    }
    Some((0..n).map(|i| rhs[i] / m[i][i]).collect())
}

/// Monotone-chain convex hull, counter-clockwise, collinear points dropped.
pub(crate) fn hull_2d(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Signed area (positive when counter-clockwise) and centroid.
pub(crate) fn polygon_area_centroid(v: &[[f64; 2]]) -> (f64, [f64; 2]) {
    let mut area2 = 0.0;
    let (mut cx, mut cy) = (0.0, 0.0);
    for i in 0..v.len() {
        let (p, q) = (v[i], v[(i + 1) % v.len()]);
        let w = p[0] * q[1] - q[0] * p[1];
        area2 += w;
        cx += (p[0] + q[0]) * w;
        cy += (p[1] + q[1]) * w;
    }
    if area2 == 0.0 {
        return (0.0, [0.0, 0.0]);
    }
    (0.5 * area2, [cx / (3.0 * area2), cy / (3.0 * area2)])
}

/// Convex polygon with counter-clockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<[f64; 2]>,
}

impl Polygon {
    /// Validates counter-clockwise strict convexity.
    pub fn new(vertices: Vec<[f64; 2]>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::Body(format!("polygon needs at least 3 vertices, got {n}")));
        }
        if vertices.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Body("polygon vertices must be finite".into()));
        }
        let (area, _) = polygon_area_centroid(&vertices);
        let scale = vertices
            .iter()
            .flat_map(|p| p.iter().map(|x| x.abs()))
            .fold(1.0, f64::max);
        for i in 0..n {
            let (o, a, b) = (vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
            let turn = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
            if turn <= 1e-12 * scale * scale {
                return Err(Error::Body(format!(
                    "polygon is not strictly convex and counter-clockwise at vertex {}",
                    (i + 1) % n
                )));
            }
        }
        if !(area > 0.0) {
            return Err(Error::Body("polygon has no interior".into()));
        }
        Ok(Self { vertices })
    }

    /// Convex hull of arbitrary points.
    pub fn hull_of(points: &[[f64; 2]]) -> Result<Self> {
        Self::new(hull_2d(points))
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        polygon_area_centroid(&self.vertices).0
    }

    pub fn centroid(&self) -> [f64; 2] {
        polygon_area_centroid(&self.vertices).1
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            let (p, q) = (self.vertices[i], self.vertices[(i + 1) % n]);
            (q[0] - p[0]) * (x[1] - p[1]) - (q[1] - p[1]) * (x[0] - p[0]) >= 0.0
        })
    }

    /// Length of the chord `{x : ⟨x, u⟩ = t}`.
    pub fn chord(&self, u: [f64; 2], t: f64) -> f64 {
        let perp = [-u[1], u[0]];
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let n = self.vertices.len();
        for i in 0..n {
            let (p, q) = (self.vertices[i], self.vertices[(i + 1) % n]);
            let (lp, lq) = (dot(&p, &u), dot(&q, &u));
            let mut hit = |x: [f64; 2]| {
                let w = dot(&x, &perp);
                lo = lo.min(w);
                hi = hi.max(w);
            };
            if lp == t {
                hit(p);
            }
            if (lp - t) * (lq - t) < 0.0 {
                let s = (t - lp) / (lq - lp);
                hit([p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])]);
            }
        }
        if hi > lo {
            hi - lo
        } else {
            0.0
        }
    }
}

/// Convex polytope in `R³` given by vertices and faces (vertex index cycles).
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope3 {
    vertices: Vec<V3>,
    faces: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    planes: Vec<(V3, f64)>,
}

impl Polytope3 {
    /// Validates face planarity, convexity and a nonempty interior. Face
    /// orientation is not required.
    pub fn new(vertices: Vec<V3>, faces: Vec<Vec<usize>>) -> Result<Self> {
        if vertices.len() < 4 {
            return Err(Error::Body(format!("polytope needs at least 4 vertices, got {}", vertices.len())));
        }
        if faces.len() < 4 {
            return Err(Error::Body(format!("polytope needs at least 4 faces, got {}", faces.len())));
        }
        if vertices.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Body("polytope vertices must be finite".into()));
        }
        let scale = vertices
            .iter()
            .flat_map(|p| p.iter().map(|x| x.abs()))
            .fold(1.0, f64::max);
        let tol = 1e-9 * scale;
        let centre = mean3(&vertices);
        for (k, f) in faces.iter().enumerate() {
            if f.len() < 3 || f.iter().any(|&i| i >= vertices.len()) {
                return Err(Error::Body(format!("face {k} is malformed")));
            }
            let normal = face_normal(&vertices, f);
            let len = norm(&normal);
            if len <= tol * scale {
                return Err(Error::Body(format!("face {k} is degenerate")));
            }
            let n = normal.map(|x| x / len);
            let level = dot(&n, &vertices[f[0]]);
            if f.iter().any(|&i| (dot(&n, &vertices[i]) - level).abs() > tol) {
                return Err(Error::Body(format!("face {k} is not planar")));
            }
            let side = (dot(&n, &centre) - level).signum();
            if vertices.iter().any(|v| (dot(&n, v) - level) * side < -tol) {
                return Err(Error::Body(format!("polytope is not convex across face {k}")));
            }
        }
        let mut edges: Vec<(usize, usize)> = faces
            .iter()
            .flat_map(|f| (0..f.len()).map(move |i| (f[i], f[(i + 1) % f.len()])))
            .map(|(i, j)| (i.min(j), i.max(j)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let mut poly = Self {
            vertices,
            faces,
            edges,
            planes: Vec::new(),
        };
        poly.planes = poly.compute_halfspaces();
        if !(poly.volume() > tol * scale * scale) {
            return Err(Error::Body("polytope has no interior".into()));
        }
        Ok(poly)
    }

    /// Convex hull of a point cloud. Brute force over point triples, meant for
    /// the few dozen points of fixtures and random tests.
    pub fn hull_of(points: &[V3]) -> Result<Self> {
        let n = points.len();
        let scale = points.iter().flat_map(|p| p.iter().map(|x| x.abs())).fold(1.0, f64::max);
        let tol = 1e-10 * scale;
        let mut faces: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let normal = cross(sub3(points[j], points[i]), sub3(points[k], points[i]));
                    let len = norm(&normal);
                    if len <= tol * scale {
                        continue;
                    }
                    let nrm = normal.map(|x| x / len);
                    let level = dot(&nrm, &points[i]);
                    let (mut above, mut below) = (false, false);
                    let mut on = Vec::new();
                    for (m, p) in points.iter().enumerate() {
                        let d = dot(&nrm, p) - level;
                        if d > tol {
                            above = true;
                        } else if d < -tol {
                            below = true;
                        } else {
                            on.push(m);
                        }
                    }
                    if above && below {
                        continue;
                    }
                    if !faces.contains(&on) {
                        faces.push(on);
                    }
                }
            }
        }
        // keep only face vertices that are extreme within their plane, ordered
        let faces = faces
            .into_iter()
            .map(|f| order_face(points, &f))
            .filter(|f| f.len() >= 3)
            .collect::<Vec<_>>();
        let mut used: Vec<usize> = faces.iter().flatten().copied().collect();
        used.sort_unstable();
        used.dedup();
        let remap = |i: usize| used.binary_search(&i).expect("face vertex is used");
        let vertices = used.iter().map(|&i| points[i]).collect();
        let faces = faces.into_iter().map(|f| f.into_iter().map(remap).collect()).collect();
        Self::new(vertices, faces)
    }

    pub fn vertices(&self) -> &[V3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    /// Volume and centroid by cones from an interior point over fan-triangulated faces.
    pub fn volume_centroid(&self) -> (f64, V3) {
        let o = mean3(&self.vertices);
        let mut vol = 0.0;
        let mut acc = [0.0; 3];
        for f in &self.faces {
            let p0 = self.vertices[f[0]];
            for w in f[1..].windows(2) {
                let (p1, p2) = (self.vertices[w[0]], self.vertices[w[1]]);
                let v = dot(&sub3(p0, o), &cross(sub3(p1, o), sub3(p2, o))).abs() / 6.0;
                vol += v;
                for d in 0..3 {
                    acc[d] += v * (o[d] + p0[d] + p1[d] + p2[d]) / 4.0;
                }
            }
        }
        (vol, acc.map(|x| x / vol))
    }

    pub fn volume(&self) -> f64 {
        self.volume_centroid().0
    }

    /// Outward unit normals and offsets `(n, h)` with the body `⟨n, x⟩ ≤ h`.
    pub fn halfspaces(&self) -> &[(V3, f64)] {
        &self.planes
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.planes.iter().all(|(n, h)| dot(n, x) <= *h)
    }

    /// Levels `⟨v, u⟩` of the vertices, sorted and deduplicated.
    pub fn vertex_levels(&self, u: V3) -> Vec<f64> {
        let mut levels: Vec<f64> = self.vertices.iter().map(|v| dot(v, &u)).collect();
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        levels
    }

    fn compute_halfspaces(&self) -> Vec<(V3, f64)> {
        let o = mean3(&self.vertices);
        self.faces
            .iter()
            .map(|f| {
                let normal = face_normal(&self.vertices, f);
                let len = norm(&normal);
                let mut n = normal.map(|x| x / len);
                let mut h = dot(&n, &self.vertices[f[0]]);
                if dot(&n, &o) > h {
                    n = n.map(|x| -x);
                    h = -h;
                }
                (n, h)
            })
            .collect()
    }

    /// Area of the section `{x : ⟨x, u⟩ = t}`.
    ///
    /// Vertex levels within `1e-12` of the level range from `t` count as on
    /// the plane; otherwise a rounding-level sliver survives at the extreme
    /// levels.
    pub fn section_area(&self, u: V3, t: f64) -> f64 {
        let levels: Vec<f64> = self.vertices.iter().map(|v| dot(v, &u)).collect();
        let (lo, hi) = levels
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
        let snap = 1e-12 * (hi - lo);
        let side = |k: usize| {
            let d = levels[k] - t;
            if d.abs() <= snap {
                0.0
            } else {
                d
            }
        };
        let (w1, w2) = plane_basis(u);
        let mut pts = Vec::new();
        for &(i, j) in &self.edges {
            let (p, q) = (self.vertices[i], self.vertices[j]);
            let (dp, dq) = (side(i), side(j));
            if dp == 0.0 {
                pts.push([dot(&p, &w1), dot(&p, &w2)]);
            }
            if dq == 0.0 {
                pts.push([dot(&q, &w1), dot(&q, &w2)]);
            }
            if dp * dq < 0.0 {
                let s = dp / (dp - dq);
                let x = [p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1]), p[2] + s * (q[2] - p[2])];
                pts.push([dot(&x, &w1), dot(&x, &w2)]);
            }
        }
        let hull = hull_2d(&pts);
        if hull.len() < 3 {
            return 0.0;
        }
        polygon_area_centroid(&hull).0.abs()
    }
}

fn mean3(v: &[V3]) -> V3 {
    let mut m = [0.0; 3];
    for p in v {
        for d in 0..3 {
            m[d] += p[d];
        }
    }
    m.map(|x| x / v.len() as f64)
}

/// Newell normal of a face cycle (length is twice the face area).
fn face_normal(v: &[V3], f: &[usize]) -> V3 {
    let mut n = [0.0; 3];
    for k in 0..f.len() {
        let (p, q) = (v[f[k]], v[f[(k + 1) % f.len()]]);
        n[0] += (p[1] - q[1]) * (p[2] + q[2]);
        n[1] += (p[2] - q[2]) * (p[0] + q[0]);
        n[2] += (p[0] - q[0]) * (p[1] + q[1]);
    }
    n
}

/// Orthonormal basis of the plane orthogonal to the unit vector `u`.
pub(crate) fn plane_basis(u: V3) -> (V3, V3) {
    let axis = (0..3).min_by(|&i, &j| u[i].abs().total_cmp(&u[j].abs())).unwrap_or(0);
    let mut e = [0.0; 3];
    e[axis] = 1.0;
    let d = dot(&e, &u);
    let w = [e[0] - d * u[0], e[1] - d * u[1], e[2] - d * u[2]];
    let len = norm(&w);
    let w1 = w.map(|x| x / len);
    (w1, cross(u, w1))
}

/// Orders coplanar points as a convex cycle, dropping non-extreme ones.
fn order_face(points: &[V3], idx: &[usize]) -> Vec<usize> {
    let p0 = points[idx[0]];
    let mut normal = [0.0; 3];
    'outer: for a in 1..idx.len() {
        for b in a + 1..idx.len() {
            let c = cross(sub3(points[idx[a]], p0), sub3(points[idx[b]], p0));
            if norm(&c) > 0.0 {
                normal = c;
                break 'outer;
            }
        }
    }
    let len = norm(&normal);
    if len == 0.0 {
        return Vec::new();
    }
    let (w1, w2) = plane_basis(normal.map(|x| x / len));
    let flat: Vec<[f64; 2]> = idx.iter().map(|&i| [dot(&points[i], &w1), dot(&points[i], &w2)]).collect();
    let hull = hull_2d(&flat);
    hull.iter()
        .filter_map(|h| flat.iter().position(|p| p == h).map(|k| idx[k]))
        .collect()
}
