//! One-dimensional nonnegative profiles on a compact interval.
//!
//! Every profile implements [`Profile`]. The free functions in this module
//! (`evaluate`, `powered_integral`, `alpha_centroid`, ...) are the checked
//! entry points: they validate parameters and domains, then dispatch to the
//! trait methods, which are free to assume valid input.

mod analytic;
mod concavity;
mod piecewise;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use analytic::{AnalyticJson, AnalyticKind, AnalyticParams, AnalyticProfile};
pub use concavity::{
    p_concavity_check, p_concavity_check_noisy, superlevel_mass, superlevel_measure_concavity_check,
    ConcavityVerdict, SuperlevelVerdict, DEFAULT_CONCAVITY_GRID, DEFAULT_SUPERLEVEL_GRID, SUPERLEVEL_TOL,
};
pub use piecewise::{ConcaveProfile, PiecewiseLinear, SampledProfile, EPS_CONCAVE};

use crate::quad::{integrate, QuadratureSpec};
use crate::{Error, Result};

/// A nonnegative function on a compact interval `[a, b]`.
///
/// `value_at` is only called inside the domain. The `*_within` integrals are
/// called with `a <= s <= e <= b` and `beta > 0`.
pub trait Profile: Send + Sync {
    fn domain(&self) -> (f64, f64);

    fn value_at(&self, t: f64) -> f64;

    /// Points where the profile may fail to be smooth. Always contains the
    /// domain endpoints.
    fn knots(&self) -> Vec<f64> {
        let (a, b) = self.domain();
        vec![a, b]
    }

    /// `∫_s^e h(t)^β dt`.
    fn powered_integral_within(&self, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
        segmented_powered(self, beta, s, e, spec)
    }

    /// `∫_s^e t h(t)^β dt`.
    fn moment_integral_within(&self, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
        segmented_moment(self, beta, s, e, spec)
    }

    /// Location and value of the maximum.
    fn peak(&self) -> (f64, f64) {
        grid_peak(self)
    }

    /// Whether the `*_within` integrals are closed forms rather than
    /// quadrature.
    fn exact_integrals(&self) -> bool {
        false
    }
}

impl<P: Profile + ?Sized> Profile for &P {
    fn domain(&self) -> (f64, f64) {
        (**self).domain()
    }
    fn value_at(&self, t: f64) -> f64 {
        (**self).value_at(t)
    }
    fn knots(&self) -> Vec<f64> {
        (**self).knots()
    }
    fn powered_integral_within(&self, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
        (**self).powered_integral_within(beta, s, e, spec)
    }
    fn moment_integral_within(&self, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
        (**self).moment_integral_within(beta, s, e, spec)
    }
    fn peak(&self) -> (f64, f64) {
        (**self).peak()
    }
    fn exact_integrals(&self) -> bool {
        (**self).exact_integrals()
    }
}

impl<P: Profile + ?Sized> Profile for Box<P> {
    fn domain(&self) -> (f64, f64) {
        (**self).domain()
    }
    fn value_at(&self, t: f64) -> f64 {
        (**self).value_at(t)
    }
    fn knots(&self) -> Vec<f64> {
        (**self).knots()
    }
    fn powered_integral_within(&self, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
        (**self).powered_integral_within(beta, s, e, spec)
    }
    fn moment_integral_within(&self, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
        (**self).moment_integral_within(beta, s, e, spec)
    }
    fn peak(&self) -> (f64, f64) {
        (**self).peak()
    }
    fn exact_integrals(&self) -> bool {
        (**self).exact_integrals()
    }
}

/// Knots of `p` strictly inside `(s, e)`, bracketed by `s` and `e`.
fn pieces<P: Profile + ?Sized>(p: &P, s: f64, e: f64) -> Vec<f64> {
    let mut cuts = vec![s];
    cuts.extend(p.knots().into_iter().filter(|&k| k > s && k < e));
    cuts.push(e);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts
}

/// Quadrature of `h^β` split at the knots.
pub(crate) fn segmented_powered<P: Profile + ?Sized>(
    p: &P,
    beta: f64,
    s: f64,
    e: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let cuts = pieces(p, s, e);
    let mut acc = 0.0;
    for w in cuts.windows(2) {
        acc += integrate(|t| p.value_at(t).max(0.0).powf(beta), w[0], w[1], spec)?;
    }
    Ok(acc)
}

/// Quadrature of `t h^β` split at the knots.
pub(crate) fn segmented_moment<P: Profile + ?Sized>(
    p: &P,
    beta: f64,
    s: f64,
    e: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let cuts = pieces(p, s, e);
    let mut acc = 0.0;
    for w in cuts.windows(2) {
        acc += integrate(|t| t * p.value_at(t).max(0.0).powf(beta), w[0], w[1], spec)?;
    }
    Ok(acc)
}

pub(crate) fn grid_peak<P: Profile + ?Sized>(p: &P) -> (f64, f64) {
    const GRID: usize = 256;
    let (a, b) = p.domain();
    let mut xs: Vec<f64> = (0..=GRID).map(|i| a + (b - a) * i as f64 / GRID as f64).collect();
    xs.extend(p.knots());
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let (i, _) = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| (i, p.value_at(x)))
        .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
    // golden-section refinement on the bracketing cells
    let (mut lo, mut hi) = (xs[i.saturating_sub(1)], xs[(i + 1).min(xs.len() - 1)]);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        if hi - lo <= 1e-14 * (1.0 + hi.abs()) {
            break;
        }
        let x1 = hi - phi * (hi - lo);
        let x2 = lo + phi * (hi - lo);
        if p.value_at(x1) < p.value_at(x2) {
            lo = x1;
        } else {
            hi = x2;
        }
    }
    let refined = 0.5 * (lo + hi);
    let (x0, y0) = (xs[i], p.value_at(xs[i]));
    let yr = p.value_at(refined);
    if yr > y0 {
        (refined, yr)
    } else {
        (x0, y0)
    }
}

fn check_point<P: Profile + ?Sized>(p: &P, t: f64) -> Result<()> {
    let (a, b) = p.domain();
    if t >= a && t <= b {
        Ok(())
    } else {
        Err(Error::Domain { t, a, b })
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!("beta must be positive and finite, got {beta}")))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha >= 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!("alpha must be nonnegative and finite, got {alpha}")))
    }
}

fn check_interval<P: Profile + ?Sized>(p: &P, s: f64, e: f64) -> Result<()> {
    check_point(p, s)?;
    check_point(p, e)?;
    if s > e {
        return Err(Error::param(format!("interval [{s}, {e}] is reversed")));
    }
    Ok(())
}

/// `h(t)`, rejecting `t` outside the domain.
pub fn evaluate<P: Profile + ?Sized>(h: &P, t: f64) -> Result<f64> {
    check_point(h, t)?;
    Ok(h.value_at(t))
}

/// `∫_s^e h^β`.
pub fn powered_integral<P: Profile + ?Sized>(h: &P, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_beta(beta)?;
    spec.validate()?;
    check_interval(h, s, e)?;
    Ok(h.powered_integral_within(beta, s, e, spec)?.max(0.0))
}

/// `∫_s^e t h^β`.
pub fn moment_integral<P: Profile + ?Sized>(h: &P, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_beta(beta)?;
    spec.validate()?;
    check_interval(h, s, e)?;
    h.moment_integral_within(beta, s, e, spec)
}

/// Weighted mean `∫ t h^α / ∫ h^α`; the domain midpoint when `α = 0`.
pub fn alpha_centroid<P: Profile + ?Sized>(h: &P, alpha: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_alpha(alpha)?;
    spec.validate()?;
    let (a, b) = h.domain();
    if alpha == 0.0 {
        return Ok(0.5 * (a + b));
    }
    let mass = h.powered_integral_within(alpha, a, b, spec)?;
    if !(mass > 0.0) {
        return Err(Error::Degenerate(format!("∫h^{alpha} vanishes")));
    }
    let moment = h.moment_integral_within(alpha, a, b, spec)?;
    Ok((moment / mass).clamp(a, b))
}

/// `∫_{g_α}^b h^β / ∫_a^b h^β` with `g_α` the α-centroid.
pub fn tail_mass_ratio<P: Profile + ?Sized>(h: &P, alpha: f64, beta: f64, spec: &QuadratureSpec) -> Result<f64> {
    let (upper, _) = split_masses(h, alpha, beta, spec)?;
    Ok(upper)
}

/// `∫_a^{g_α} h^β / ∫_a^b h^β`, the complementary side.
pub fn lower_tail_mass_ratio<P: Profile + ?Sized>(
    h: &P,
    alpha: f64,
    beta: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let (_, lower) = split_masses(h, alpha, beta, spec)?;
    Ok(lower)
}

/// `(upper, lower)` mass fractions on either side of the α-centroid.
fn split_masses<P: Profile + ?Sized>(h: &P, alpha: f64, beta: f64, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    check_beta(beta)?;
    let g = alpha_centroid(h, alpha, spec)?;
    let (a, b) = h.domain();
    let upper = h.powered_integral_within(beta, g, b, spec)?.max(0.0);
    let lower = h.powered_integral_within(beta, a, g, spec)?.max(0.0);
    let total = upper + lower;
    if !(total > 0.0) {
        return Err(Error::Degenerate(format!("∫h^{beta} vanishes")));
    }
    Ok((upper / total, lower / total))
}

/// `t ↦ h(-t)`.
#[derive(Debug, Clone)]
pub struct Reflected<P>(pub P);

impl<P: Profile> Profile for Reflected<P> {
    fn domain(&self) -> (f64, f64) {
        let (a, b) = self.0.domain();
        (-b, -a)
    }
    fn value_at(&self, t: f64) -> f64 {
        self.0.value_at(-t)
    }
    fn knots(&self) -> Vec<f64> {
        self.0.knots().into_iter().rev().map(|k| -k).collect()
    }
    fn powered_integral_within(&self, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
        self.0.powered_integral_within(beta, -e, -s, spec)
    }
    fn moment_integral_within(&self, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
        Ok(-self.0.moment_integral_within(beta, -e, -s, spec)?)
    }
    fn peak(&self) -> (f64, f64) {
        let (t, y) = self.0.peak();
        (-t, y)
    }
    fn exact_integrals(&self) -> bool {
        self.0.exact_integrals()
    }
}

/// `t ↦ h(t - shift)`.
#[derive(Debug, Clone)]
pub struct Translated<P> {
    pub inner: P,
    pub shift: f64,
}

impl<P: Profile> Profile for Translated<P> {
    fn domain(&self) -> (f64, f64) {
        let (a, b) = self.inner.domain();
        (a + self.shift, b + self.shift)
    }
    fn value_at(&self, t: f64) -> f64 {
        self.inner.value_at(t - self.shift)
    }
    fn knots(&self) -> Vec<f64> {
        self.inner.knots().into_iter().map(|k| k + self.shift).collect()
    }
    fn powered_integral_within(&self, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
        self.inner.powered_integral_within(beta, s - self.shift, e - self.shift, spec)
    }
    fn moment_integral_within(&self, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
        let (s0, e0) = (s - self.shift, e - self.shift);
        Ok(self.inner.moment_integral_within(beta, s0, e0, spec)?
            + self.shift * self.inner.powered_integral_within(beta, s0, e0, spec)?)
    }
    fn peak(&self) -> (f64, f64) {
        let (t, y) = self.inner.peak();
        (t + self.shift, y)
    }
    fn exact_integrals(&self) -> bool {
        self.inner.exact_integrals()
    }
}

/// `t ↦ factor · h(t)`.
#[derive(Debug, Clone)]
pub struct Scaled<P> {
    pub inner: P,
    pub factor: f64,
}

impl<P: Profile> Profile for Scaled<P> {
    fn domain(&self) -> (f64, f64) {
        self.inner.domain()
    }
    fn value_at(&self, t: f64) -> f64 {
        self.factor * self.inner.value_at(t)
    }
    fn knots(&self) -> Vec<f64> {
        self.inner.knots()
    }
    fn powered_integral_within(&self, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
        Ok(self.factor.powf(beta) * self.inner.powered_integral_within(beta, s, e, spec)?)
    }
    fn moment_integral_within(&self, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
        Ok(self.factor.powf(beta) * self.inner.moment_integral_within(beta, s, e, spec)?)
    }
    fn peak(&self) -> (f64, f64) {
        let (t, y) = self.inner.peak();
        (t, self.factor * y)
    }
    fn exact_integrals(&self) -> bool {
        self.inner.exact_integrals()
    }
}

/// `t ↦ h(t)^exponent`. Integrals of powers delegate to the inner profile, so
/// closed forms are kept.
#[derive(Debug, Clone)]
pub struct Powered<P> {
    pub inner: P,
    pub exponent: f64,
}

impl<P: Profile> Powered<P> {
    pub fn new(inner: P, exponent: f64) -> Result<Self> {
        if !(exponent > 0.0 && exponent.is_finite()) {
            return Err(Error::param(format!("exponent must be positive, got {exponent}")));
        }
        Ok(Self { inner, exponent })
    }
}

impl<P: Profile> Profile for Powered<P> {
    fn domain(&self) -> (f64, f64) {
        self.inner.domain()
    }
    fn value_at(&self, t: f64) -> f64 {
        self.inner.value_at(t).max(0.0).powf(self.exponent)
    }
    fn knots(&self) -> Vec<f64> {
        self.inner.knots()
    }
    fn powered_integral_within(&self, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
        self.inner.powered_integral_within(beta * self.exponent, s, e, spec)
    }
    fn moment_integral_within(&self, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
        self.inner.moment_integral_within(beta * self.exponent, s, e, spec)
    }
    fn peak(&self) -> (f64, f64) {
        let (t, y) = self.inner.peak();
        (t, y.max(0.0).powf(self.exponent))
    }
    fn exact_integrals(&self) -> bool {
        self.inner.exact_integrals()
    }
}

/// A profile read from JSON: raw breakpoints or a closed-form family.
///
/// Breakpoint data is not required to be concave here; operations that need
/// concavity check it themselves.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyProfile {
    Breakpoints(PiecewiseLinear),
    Analytic(AnalyticProfile),
}

impl AnyProfile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Validation(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("profile serialization is infallible")
    }
}

impl From<ConcaveProfile> for AnyProfile {
    fn from(h: ConcaveProfile) -> Self {
        AnyProfile::Breakpoints(h.into_piecewise())
    }
}

impl From<PiecewiseLinear> for AnyProfile {
    fn from(h: PiecewiseLinear) -> Self {
        AnyProfile::Breakpoints(h)
    }
}

impl From<AnalyticProfile> for AnyProfile {
    fn from(h: AnalyticProfile) -> Self {
        AnyProfile::Analytic(h)
    }
}

macro_rules! dispatch {
    ($self:expr, $p:ident => $body:expr) => {
        match $self {
            AnyProfile::Breakpoints($p) => $body,
            AnyProfile::Analytic($p) => $body,
        }
    };
}

impl Profile for AnyProfile {
    fn domain(&self) -> (f64, f64) {
        dispatch!(self, p => p.domain())
    }
    fn value_at(&self, t: f64) -> f64 {
        dispatch!(self, p => p.value_at(t))
    }
    fn knots(&self) -> Vec<f64> {
        dispatch!(self, p => p.knots())
    }
    fn powered_integral_within(&self, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
        dispatch!(self, p => p.powered_integral_within(beta, s, e, spec))
    }
    fn moment_integral_within(&self, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
        dispatch!(self, p => p.moment_integral_within(beta, s, e, spec))
    }
    fn peak(&self) -> (f64, f64) {
        dispatch!(self, p => p.peak())
    }
    fn exact_integrals(&self) -> bool {
        dispatch!(self, p => p.exact_integrals())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBreakpoints {
    breakpoints: Vec<[f64; 2]>,
}

impl Serialize for AnyProfile {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AnyProfile::Breakpoints(p) => RawBreakpoints {
                breakpoints: p.breakpoints().map(|(t, y)| [t, y]).collect(),
            }
            .serialize(ser),
            AnyProfile::Analytic(p) => AnalyticJson::from(p).serialize(ser),
        }
    }
}

impl<'de> Deserialize<'de> for AnyProfile {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(de)?;
        let obj = value
            .as_object()
            .ok_or_else(|| D::Error::custom("profile must be a JSON object"))?;
        if obj.contains_key("breakpoints") {
            let raw: RawBreakpoints = serde_json::from_value(value).map_err(D::Error::custom)?;
            PiecewiseLinear::new(raw.breakpoints.into_iter().map(|[t, y]| (t, y)))
                .map(AnyProfile::Breakpoints)
                .map_err(D::Error::custom)
        } else if obj.contains_key("kind") {
            let raw: AnalyticJson = serde_json::from_value(value).map_err(D::Error::custom)?;
            AnalyticProfile::try_from(raw)
                .map(AnyProfile::Analytic)
                .map_err(D::Error::custom)
        } else {
            Err(D::Error::custom("profile needs either `breakpoints` or `kind`"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn affine() -> ConcaveProfile {
        ConcaveProfile::new([(0.0, 1.0), (1.0, 0.0)]).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn evaluate_examples() {
        assert!(close(evaluate(&affine(), 0.5).unwrap(), 0.5, 1e-15));
        let c = AnalyticProfile::constant(2.0, 0.0, 3.0).unwrap();
        assert_eq!(evaluate(&c, 1.7).unwrap(), 2.0);
        let d = AnalyticProfile::decreasing_power(1.0, 0.0, 1.0, 2.0).unwrap();
        assert!(close(evaluate(&d, 0.5).unwrap(), 0.25, 1e-15));
        assert!(matches!(evaluate(&affine(), 1.5), Err(Error::Domain { .. })));
    }

    #[test]
    fn integral_examples() {
        let one = ConcaveProfile::new([(0.0, 1.0), (3.0, 1.0)]).unwrap();
        assert!(close(powered_integral(&one, 5.0, 0.0, 3.0, &spec()).unwrap(), 3.0, 1e-14));
        assert!(close(powered_integral(&affine(), 2.0, 0.0, 1.0, &spec()).unwrap(), 1.0 / 3.0, 1e-14));
        assert!(close(powered_integral(&affine(), 1.0, 1.0 / 3.0, 1.0, &spec()).unwrap(), 2.0 / 9.0, 1e-14));
        let two = ConcaveProfile::new([(0.0, 1.0), (2.0, 1.0)]).unwrap();
        assert!(close(moment_integral(&two, 1.0, 0.0, 2.0, &spec()).unwrap(), 2.0, 1e-14));
        assert!(close(moment_integral(&affine(), 1.0, 0.0, 1.0, &spec()).unwrap(), 1.0 / 6.0, 1e-14));
        let up = ConcaveProfile::new([(0.0, 0.0), (1.0, 1.0)]).unwrap();
        assert!(close(moment_integral(&up, 1.0, 0.0, 1.0, &spec()).unwrap(), 1.0 / 3.0, 1e-14));
        assert!(matches!(powered_integral(&affine(), 0.0, 0.0, 1.0, &spec()), Err(Error::Parameter(_))));
        assert!(matches!(powered_integral(&affine(), 1.0, -0.1, 1.0, &spec()), Err(Error::Domain { .. })));
    }

    #[test]
    fn centroid_examples() {
        let two = ConcaveProfile::new([(0.0, 1.0), (2.0, 1.0)]).unwrap();
        assert!(close(alpha_centroid(&two, 7.0, &spec()).unwrap(), 1.0, 1e-14));
        assert!(close(alpha_centroid(&affine(), 1.0, &spec()).unwrap(), 1.0 / 3.0, 1e-14));
        assert!(close(alpha_centroid(&affine(), 2.0, &spec()).unwrap(), 0.25, 1e-14));
        let up = ConcaveProfile::new([(0.0, 0.0), (1.0, 1.0)]).unwrap();
        assert!(close(alpha_centroid(&up, 1.0, &spec()).unwrap(), 2.0 / 3.0, 1e-14));
        assert_eq!(alpha_centroid(&affine(), 0.0, &spec()).unwrap(), 0.5);
        assert!(alpha_centroid(&affine(), -1.0, &spec()).is_err());
    }

    #[test]
    fn tail_ratio_examples() {
        let one = ConcaveProfile::new([(0.0, 1.0), (1.0, 1.0)]).unwrap();
        assert!(close(tail_mass_ratio(&one, 3.0, 0.7, &spec()).unwrap(), 0.5, 1e-14));
        assert!(close(tail_mass_ratio(&affine(), 1.0, 1.0, &spec()).unwrap(), 4.0 / 9.0, 1e-14));
        assert!(close(tail_mass_ratio(&affine(), 1.0, 2.0, &spec()).unwrap(), 8.0 / 27.0, 1e-14));
    }

    #[test]
    fn wrappers_preserve_ratios() {
        let h = ConcaveProfile::new([(0.0, 0.2), (0.3, 1.0), (1.0, 0.5), (1.5, 0.0)]).unwrap();
        let g = alpha_centroid(&h, 1.5, &spec()).unwrap();
        let shifted = Translated { inner: &h, shift: 2.5 };
        assert!(close(alpha_centroid(&shifted, 1.5, &spec()).unwrap(), g + 2.5, 1e-12));
        let scaled = Scaled { inner: &h, factor: 7.0 };
        assert!(close(alpha_centroid(&scaled, 1.5, &spec()).unwrap(), g, 1e-13));
        let r = tail_mass_ratio(&h, 1.5, 2.0, &spec()).unwrap();
        let rr = tail_mass_ratio(&Reflected(&h), 1.5, 2.0, &spec()).unwrap();
        assert!(close(r + rr, 1.0, 1e-12));
        let lower = lower_tail_mass_ratio(&h, 1.5, 2.0, &spec()).unwrap();
        assert!(close(rr, lower, 1e-12));
    }

    #[test]
    fn powered_wrapper_delegates() {
        let f = AnalyticProfile::decreasing_power(1.0, 0.0, 1.0, 2.0).unwrap();
        let h = Powered::new(&f, 0.5).unwrap();
        assert!(close(h.value_at(0.25), 0.75, 1e-15));
        assert!(close(powered_integral(&h, 2.0, 0.0, 1.0, &spec()).unwrap(), 1.0 / 3.0, 1e-14));
        assert!(Powered::new(&f, 0.0).is_err());
    }

    #[test]
    fn default_integrals_use_quadrature() {
        struct Sine;
        impl Profile for Sine {
            fn domain(&self) -> (f64, f64) {
                (0.0, std::f64::consts::PI)
            }
            fn value_at(&self, t: f64) -> f64 {
                t.sin()
            }
        }
        assert!(close(powered_integral(&Sine, 1.0, 0.0, std::f64::consts::PI, &spec()).unwrap(), 2.0, 1e-10));
        let (t, y) = Sine.peak();
        assert!(close(t, std::f64::consts::FRAC_PI_2, 1e-7) && close(y, 1.0, 1e-12));
    }

    #[test]
    fn any_profile_json() {
        let p = AnyProfile::from_json(r#"{"breakpoints": [[0, 1], [1, 0]]}"#).unwrap();
        assert!(close(p.value_at(0.25), 0.75, 1e-15));
        let q = AnyProfile::from_json(r#"{"kind": "constant", "params": {"c": 2, "gamma": 0, "delta": 3}}"#).unwrap();
        assert_eq!(q.domain(), (0.0, 3.0));
        let back = AnyProfile::from_json(&q.to_json()).unwrap();
        assert_eq!(back, q);
        assert!(AnyProfile::from_json(r#"{"breakpoints": [[0, 1]]}"#).is_err());
        assert!(AnyProfile::from_json(r#"{"shape": []}"#).is_err());
        assert!(AnyProfile::from_json("[1, 2]").is_err());
    }
}
