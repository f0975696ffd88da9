use serde::{Deserialize, Serialize};

use super::Profile;
use crate::quad::{gauss_legendre, QuadratureSpec};
use crate::{Error, Result};

/// Slope tolerance used when certifying concavity of breakpoint data.
pub const EPS_CONCAVE: f64 = 1e-9;

/// Relative variation below which a segment is integrated by Gauss–Legendre
/// instead of the closed-form antiderivative (which cancels badly there).
const FLAT_SEGMENT: f64 = 0.05;

/// ∫ over a segment of length `len` of `h^β`, `h` affine from `y0` to `y1`.
fn segment_powered(len: f64, y0: f64, y1: f64, beta: f64) -> f64 {
    let top = y0.max(y1);
    if top <= 0.0 || len <= 0.0 {
        return 0.0;
    }
    let d = y1 - y0;
    if d.abs() <= FLAT_SEGMENT * top {
        len * gauss_legendre(|s| (y0 + d * s).powf(beta), 0.0, 1.0)
    } else {
        len * (y1.powf(beta + 1.0) - y0.powf(beta + 1.0)) / ((beta + 1.0) * d)
    }
}

/// ∫_0^len τ h(τ)^β dτ for `h` affine from `y0` to `y1`.
fn segment_offset_moment(len: f64, y0: f64, y1: f64, beta: f64) -> f64 {
    let top = y0.max(y1);
    if top <= 0.0 || len <= 0.0 {
        return 0.0;
    }
    let d = y1 - y0;
    if d.abs() <= FLAT_SEGMENT * top {
        len * len * gauss_legendre(|s| s * (y0 + d * s).powf(beta), 0.0, 1.0)
    } else {
        let k = len / d;
        let p1 = (y1.powf(beta + 1.0) - y0.powf(beta + 1.0)) / (beta + 1.0);
        let p2 = (y1.powf(beta + 2.0) - y0.powf(beta + 2.0)) / (beta + 2.0);
        k * k * (p2 - y0 * p1)
    }
}

/// Nonnegative piecewise-linear function given by its breakpoints.
///
/// This is the raw representation: no concavity is implied. Use
/// [`ConcaveProfile`] for validated concave data.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    t: Vec<f64>,
    y: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn new(points: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let (t, y): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
        if t.len() < 2 {
            return Err(Error::Validation(format!(
                "need at least 2 breakpoints, got {}",
                t.len()
            )));
        }
        for (i, (&ti, &yi)) in t.iter().zip(&y).enumerate() {
            if !ti.is_finite() || !yi.is_finite() {
                return Err(Error::Validation(format!("breakpoint {i} is not finite")));
            }
            if yi < 0.0 {
                return Err(Error::Validation(format!(
                    "ordinate {yi} at t = {ti} is negative"
                )));
            }
        }
        if let Some(i) = t.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::Validation(format!(
                "abscissas must be strictly increasing (t[{}] = {}, t[{}] = {})",
                i,
                t[i],
                i + 1,
                t[i + 1]
            )));
        }
        Ok(Self { t, y })
    }

    /// Samples `f` at `count` equally spaced abscissas on `[a, b]`.
    pub fn from_fn(f: impl Fn(f64) -> f64, a: f64, b: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::param("need at least 2 samples"));
        }
        let step = (b - a) / (count - 1) as f64;
        Self::new((0..count).map(|i| {
            let t = if i + 1 == count { b } else { a + step * i as f64 };
            (t, f(t))
        }))
    }

    pub fn abscissas(&self) -> &[f64] {
        &self.t
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.y
    }

    pub fn breakpoints(&self) -> impl DoubleEndedIterator<Item = (f64, f64)> + '_ {
        self.t.iter().copied().zip(self.y.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn slopes(&self) -> Vec<f64> {
        self.t
            .windows(2)
            .zip(self.y.windows(2))
            .map(|(t, y)| (y[1] - y[0]) / (t[1] - t[0]))
            .collect()
    }

    /// Index `i` of the segment `[t_i, t_{i+1}]` containing `x`.
    fn segment_of(&self, x: f64) -> usize {
        let idx = self.t.partition_point(|&ti| ti <= x);
        idx.clamp(1, self.t.len() - 1) - 1
    }

    fn interp(&self, x: f64) -> f64 {
        let i = self.segment_of(x);
        let (t0, t1, y0, y1) = (self.t[i], self.t[i + 1], self.y[i], self.y[i + 1]);
        let w = (x - t0) / (t1 - t0);
        (y0 + w * (y1 - y0)).max(0.0)
    }

    /// Visits each segment clipped to `[s, e]` as `(t0, t1, y0, y1)`.
    fn clipped_segments(&self, s: f64, e: f64, mut visit: impl FnMut(f64, f64, f64, f64)) {
        if e <= s {
            return;
        }
        let first = self.segment_of(s);
        let last = self.segment_of(e);
        for i in first..=last {
            let lo = self.t[i].max(s);
            let hi = self.t[i + 1].min(e);
            if hi <= lo {
                continue;
            }
            let y_lo = if lo == self.t[i] { self.y[i] } else { self.interp(lo) };
            let y_hi = if hi == self.t[i + 1] { self.y[i + 1] } else { self.interp(hi) };
            visit(lo, hi, y_lo, y_hi);
        }
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.breakpoints().map(|(t, y)| (t, y * factor)))
    }

    pub fn translated(&self, shift: f64) -> Result<Self> {
        Self::new(self.breakpoints().map(|(t, y)| (t + shift, y)))
    }

    /// `t ↦ h(-t)` on `[-b, -a]`.
    pub fn reflected(&self) -> Result<Self> {
        Self::new(self.breakpoints().rev().map(|(t, y)| (-t, y)))
    }
}

impl Profile for PiecewiseLinear {
    fn domain(&self) -> (f64, f64) {
        (self.t[0], self.t[self.t.len() - 1])
    }

    fn value_at(&self, t: f64) -> f64 {
        self.interp(t)
    }

    fn knots(&self) -> Vec<f64> {
        self.t.clone()
    }

    fn powered_integral_within(&self, beta: f64, s: f64, e: f64, _: &QuadratureSpec) -> Result<f64> {
        let mut acc = 0.0;
        self.clipped_segments(s, e, |t0, t1, y0, y1| {
            acc += segment_powered(t1 - t0, y0, y1, beta);
        });
        Ok(acc)
    }

    fn moment_integral_within(&self, beta: f64, s: f64, e: f64, _: &QuadratureSpec) -> Result<f64> {
        let mut acc = 0.0;
        self.clipped_segments(s, e, |t0, t1, y0, y1| {
            let len = t1 - t0;
            acc += t0 * segment_powered(len, y0, y1, beta) + segment_offset_moment(len, y0, y1, beta);
        });
        Ok(acc)
    }

    fn peak(&self) -> (f64, f64) {
        self.breakpoints()
            .fold((self.t[0], f64::NEG_INFINITY), |best, (t, y)| if y > best.1 { (t, y) } else { best })
    }

    fn exact_integrals(&self) -> bool {
        true
    }
}

/// Piecewise-linear nonnegative concave function with positive interior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BreakpointsJson", into = "BreakpointsJson")]
pub struct ConcaveProfile(PiecewiseLinear);

#[derive(Serialize, Deserialize)]
struct BreakpointsJson {
    breakpoints: Vec<[f64; 2]>,
}

impl TryFrom<BreakpointsJson> for ConcaveProfile {
    type Error = Error;

    fn try_from(raw: BreakpointsJson) -> Result<Self> {
        ConcaveProfile::new(raw.breakpoints.into_iter().map(|[t, y]| (t, y)))
    }
}

impl From<ConcaveProfile> for BreakpointsJson {
    fn from(h: ConcaveProfile) -> Self {
        BreakpointsJson {
            breakpoints: h.0.breakpoints().map(|(t, y)| [t, y]).collect(),
        }
    }
}

impl TryFrom<PiecewiseLinear> for ConcaveProfile {
    type Error = Error;

    fn try_from(pl: PiecewiseLinear) -> Result<Self> {
        let n = pl.len();
        for i in 1..n - 1 {
            if pl.y[i] <= 0.0 {
                return Err(Error::Validation(format!(
                    "interior ordinate at t = {} must be positive",
                    pl.t[i]
                )));
            }
        }
        let slopes = pl.slopes();
        for (i, w) in slopes.windows(2).enumerate() {
            if w[1] > w[0] + EPS_CONCAVE {
                return Err(Error::Validation(format!(
                    "not concave at t = {}: slope increases from {} to {}",
                    pl.t[i + 1],
                    w[0],
                    w[1]
                )));
            }
        }
        let total = pl.powered_integral_within(1.0, pl.t[0], pl.t[n - 1], &QuadratureSpec::default())?;
        if !(total > 0.0) {
            return Err(Error::Validation("profile has zero integral".into()));
        }
        Ok(ConcaveProfile(pl))
    }
}

impl ConcaveProfile {
    pub fn new(points: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        PiecewiseLinear::new(points)?.try_into()
    }

    pub fn as_piecewise(&self) -> &PiecewiseLinear {
        &self.0
    }

    pub fn into_piecewise(self) -> PiecewiseLinear {
        self.0
    }

    pub fn breakpoints(&self) -> impl DoubleEndedIterator<Item = (f64, f64)> + '_ {
        self.0.breakpoints()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        self.0.scaled(factor)?.try_into()
    }

    pub fn translated(&self, shift: f64) -> Result<Self> {
        self.0.translated(shift)?.try_into()
    }

    pub fn reflected(&self) -> Result<Self> {
        self.0.reflected()?.try_into()
    }
}

impl Profile for ConcaveProfile {
    fn domain(&self) -> (f64, f64) {
        self.0.domain()
    }
    fn value_at(&self, t: f64) -> f64 {
        self.0.value_at(t)
    }
    fn knots(&self) -> Vec<f64> {
        self.0.knots()
    }
    fn powered_integral_within(&self, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
        self.0.powered_integral_within(beta, s, e, spec)
    }
    fn moment_integral_within(&self, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
        self.0.moment_integral_within(beta, s, e, spec)
    }
    fn peak(&self) -> (f64, f64) {
        self.0.peak()
    }
    fn exact_integrals(&self) -> bool {
        true
    }
}

/// Noisy samples of a profile (Monte Carlo slab estimates) with their standard
/// errors; interpolated linearly between sample abscissas.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledProfile {
    curve: PiecewiseLinear,
    sigma: Vec<f64>,
}

impl SampledProfile {
    pub fn new(samples: impl IntoIterator<Item = (f64, f64, f64)>) -> Result<Self> {
        let mut pts = Vec::new();
        let mut sigma = Vec::new();
        for (t, f, s) in samples {
            if !(s >= 0.0) {
                return Err(Error::Validation(format!("sigma {s} at t = {t} must be >= 0")));
            }
            pts.push((t, f));
            sigma.push(s);
        }
        Ok(Self {
            curve: PiecewiseLinear::new(pts)?,
            sigma,
        })
    }

    pub fn curve(&self) -> &PiecewiseLinear {
        &self.curve
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.curve
            .breakpoints()
            .zip(self.sigma.iter())
            .map(|((t, f), &s)| (t, f, s))
    }
}

impl Profile for SampledProfile {
    fn domain(&self) -> (f64, f64) {
        self.curve.domain()
    }
    fn value_at(&self, t: f64) -> f64 {
        self.curve.value_at(t)
    }
    fn knots(&self) -> Vec<f64> {
        self.curve.knots()
    }
    fn powered_integral_within(&self, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
        self.curve.powered_integral_within(beta, s, e, spec)
    }
    fn moment_integral_within(&self, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
        self.curve.moment_integral_within(beta, s, e, spec)
    }
    fn peak(&self) -> (f64, f64) {
        self.curve.peak()
    }
    fn exact_integrals(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_breakpoints() {
        assert!(PiecewiseLinear::new([(0.0, 1.0)]).is_err());
        assert!(PiecewiseLinear::new([(0.0, 1.0), (0.0, 2.0)]).is_err());
        assert!(PiecewiseLinear::new([(1.0, 1.0), (0.0, 2.0)]).is_err());
        assert!(PiecewiseLinear::new([(0.0, -1.0), (1.0, 2.0)]).is_err());
        assert!(PiecewiseLinear::new([(0.0, f64::NAN), (1.0, 2.0)]).is_err());
    }

    #[test]
    fn concave_validation() {
        // convex kink
        assert!(ConcaveProfile::new([(0.0, 1.0), (0.5, 0.2), (1.0, 1.0)]).is_err());
        // interior zero
        assert!(ConcaveProfile::new([(0.0, 0.0), (0.5, 0.0), (1.0, 0.0)]).is_err());
        // zero integral with two points
        assert!(ConcaveProfile::new([(0.0, 0.0), (1.0, 0.0)]).is_err());
        // endpoint zeros are fine
        assert!(ConcaveProfile::new([(0.0, 0.0), (0.5, 1.0), (1.0, 0.0)]).is_ok());
        // slope increase within EPS_CONCAVE is tolerated
        assert!(ConcaveProfile::new([(0.0, 0.0), (1.0, 1.0), (2.0, 2.0 + 1e-10)]).is_ok());
    }

    #[test]
    fn segment_formulas_match_quadrature() {
        let spec = QuadratureSpec::default();
        for &(y0, y1, beta) in &[(0.0, 1.0, 2.5), (1.0, 1.01, 3.0), (2.0, 0.3, 0.4), (1.0, 1.0, 7.0)] {
            let exact = segment_powered(2.0, y0, y1, beta);
            let num = crate::quad::integrate(|t| (y0 + (y1 - y0) * t / 2.0).powf(beta), 0.0, 2.0, &spec).unwrap();
            assert!((exact - num).abs() < 1e-10 * num.max(1.0), "{y0} {y1} {beta}");
            let exact = segment_offset_moment(2.0, y0, y1, beta);
            let num = crate::quad::integrate(|t| t * (y0 + (y1 - y0) * t / 2.0).powf(beta), 0.0, 2.0, &spec).unwrap();
            assert!((exact - num).abs() < 1e-10 * num.max(1.0), "{y0} {y1} {beta}");
        }
    }

    #[test]
    fn json_shape_is_breakpoints() {
        let h = ConcaveProfile::new([(0.0, 1.0), (1.0, 0.0)]).unwrap();
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"{"breakpoints":[[0.0,1.0],[1.0,0.0]]}"#);
        let back: ConcaveProfile = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
        assert!(serde_json::from_str::<ConcaveProfile>(r#"{"breakpoints":[[0,1],[1,0.2],[2,1]]}"#).is_err());
    }
}
