use serde::{Deserialize, Serialize};

use super::Profile;
use crate::body::unit_ball_volume;
use crate::quad::QuadratureSpec;
use crate::{Error, Result};

/// Closed-form profile families.
///
/// * `Constant`: `c` on `[γ, δ]`.
/// * `IncreasingPower`: `c (t + γ)^q` on `[-γ, δ]`.
/// * `DecreasingPower`: `c (δ - t)^q` on `[γ, δ]`.
/// * `BallSection`: `c (R² - (t - t₀)²)^{(n-1)/2}` on `[t₀ - R, t₀ + R]`, the
///   section profile of an `n`-ball when `c = κ_{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticProfile {
    Constant { c: f64, gamma: f64, delta: f64 },
    IncreasingPower { c: f64, gamma: f64, delta: f64, q: f64 },
    DecreasingPower { c: f64, gamma: f64, delta: f64, q: f64 },
    BallSection { c: f64, radius: f64, n: usize, center: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnalyticKind {
    Constant,
    IncreasingPower,
    DecreasingPower,
    BallSection,
}

/// Wire form: `{"kind": "...", "params": {...}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalyticJson {
    pub kind: AnalyticKind,
    pub params: AnalyticParams,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<f64>,
}

fn require(v: Option<f64>, name: &str) -> Result<f64> {
    v.ok_or_else(|| Error::Validation(format!("missing parameter `{name}`")))
}

impl TryFrom<AnalyticJson> for AnalyticProfile {
    type Error = Error;

    fn try_from(j: AnalyticJson) -> Result<Self> {
        let p = j.params;
        let profile = match j.kind {
            AnalyticKind::Constant => AnalyticProfile::Constant {
                c: require(p.c, "c")?,
                gamma: require(p.gamma, "gamma")?,
                delta: require(p.delta, "delta")?,
            },
            AnalyticKind::IncreasingPower => AnalyticProfile::IncreasingPower {
                c: require(p.c, "c")?,
                gamma: require(p.gamma, "gamma")?,
                delta: require(p.delta, "delta")?,
                q: require(p.q, "q")?,
            },
            AnalyticKind::DecreasingPower => AnalyticProfile::DecreasingPower {
                c: require(p.c, "c")?,
                gamma: require(p.gamma, "gamma")?,
                delta: require(p.delta, "delta")?,
                q: require(p.q, "q")?,
            },
            AnalyticKind::BallSection => {
                let n = p
                    .n
                    .ok_or_else(|| Error::Validation("missing parameter `n`".into()))?;
                if n < 2 {
                    return Err(Error::Validation(format!("ball-section needs n >= 2, got {n}")));
                }
                AnalyticProfile::BallSection {
                    c: p.c.unwrap_or_else(|| unit_ball_volume(n - 1)),
                    radius: require(p.radius, "radius")?,
                    n,
                    center: p.center.unwrap_or(0.0),
                }
            }
        };
        profile.validate()?;
        Ok(profile)
    }
}

impl From<&AnalyticProfile> for AnalyticJson {
    fn from(p: &AnalyticProfile) -> Self {
        use AnalyticProfile::*;
        let (kind, params) = match *p {
            Constant { c, gamma, delta } => (
                AnalyticKind::Constant,
                AnalyticParams {
                    c: Some(c),
                    gamma: Some(gamma),
                    delta: Some(delta),
                    ..Default::default()
                },
            ),
            IncreasingPower { c, gamma, delta, q } => (
                AnalyticKind::IncreasingPower,
                AnalyticParams {
                    c: Some(c),
                    gamma: Some(gamma),
                    delta: Some(delta),
                    q: Some(q),
                    ..Default::default()
                },
            ),
            DecreasingPower { c, gamma, delta, q } => (
                AnalyticKind::DecreasingPower,
                AnalyticParams {
                    c: Some(c),
                    gamma: Some(gamma),
                    delta: Some(delta),
                    q: Some(q),
                    ..Default::default()
                },
            ),
            BallSection { c, radius, n, center } => (
                AnalyticKind::BallSection,
                AnalyticParams {
                    c: Some(c),
                    radius: Some(radius),
                    n: Some(n),
                    center: Some(center),
                    ..Default::default()
                },
            ),
        };
        AnalyticJson { kind, params }
    }
}

impl AnalyticProfile {
    pub fn constant(c: f64, gamma: f64, delta: f64) -> Result<Self> {
        let p = AnalyticProfile::Constant { c, gamma, delta };
        p.validate()?;
        Ok(p)
    }

    pub fn increasing_power(c: f64, gamma: f64, delta: f64, q: f64) -> Result<Self> {
        let p = AnalyticProfile::IncreasingPower { c, gamma, delta, q };
        p.validate()?;
        Ok(p)
    }

    pub fn decreasing_power(c: f64, gamma: f64, delta: f64, q: f64) -> Result<Self> {
        let p = AnalyticProfile::DecreasingPower { c, gamma, delta, q };
        p.validate()?;
        Ok(p)
    }

    /// Section profile of the `n`-ball of radius `radius` centred at `center`
    /// along the axis; `c = κ_{n-1}`.
    pub fn ball_section(radius: f64, n: usize, center: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Validation(format!("ball-section needs n >= 2, got {n}")));
        }
        let p = AnalyticProfile::BallSection {
            c: unit_ball_volume(n - 1),
            radius,
            n,
            center,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn kind(&self) -> AnalyticKind {
        match self {
            AnalyticProfile::Constant { .. } => AnalyticKind::Constant,
            AnalyticProfile::IncreasingPower { .. } => AnalyticKind::IncreasingPower,
            AnalyticProfile::DecreasingPower { .. } => AnalyticKind::DecreasingPower,
            AnalyticProfile::BallSection { .. } => AnalyticKind::BallSection,
        }
    }

    fn validate(&self) -> Result<()> {
        let finite = |x: f64, name: &str| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::Validation(format!("`{name}` must be finite")))
            }
        };
        let positive = |x: f64, name: &str| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::Validation(format!("`{name}` must be positive, got {x}")))
            }
        };
        match *self {
            AnalyticProfile::Constant { c, gamma, delta } => {
                positive(c, "c")?;
                finite(gamma, "gamma")?;
                finite(delta, "delta")?;
            }
            AnalyticProfile::IncreasingPower { c, gamma, delta, q }
            | AnalyticProfile::DecreasingPower { c, gamma, delta, q } => {
                positive(c, "c")?;
                positive(q, "q")?;
                finite(gamma, "gamma")?;
                finite(delta, "delta")?;
            }
            AnalyticProfile::BallSection { c, radius, n, center } => {
                positive(c, "c")?;
                positive(radius, "radius")?;
                finite(center, "center")?;
                if n < 2 {
                    return Err(Error::Validation(format!("ball-section needs n >= 2, got {n}")));
                }
            }
        }
        let (a, b) = self.domain();
        if !(a < b) {
            return Err(Error::Validation(format!("empty domain [{a}, {b}]")));
        }
        Ok(())
    }

    /// Whether the profile is concave on its domain (closed-form criterion).
    pub fn is_concave(&self) -> bool {
        match *self {
            AnalyticProfile::Constant { .. } => true,
            AnalyticProfile::IncreasingPower { q, .. } | AnalyticProfile::DecreasingPower { q, .. } => q <= 1.0,
            AnalyticProfile::BallSection { n, .. } => n <= 3,
        }
    }

    /// `t ↦ h(t)^e`, kept in closed form where the family allows it.
    pub fn powf(&self, e: f64) -> Result<Self> {
        if !(e > 0.0) {
            return Err(Error::param(format!("exponent must be positive, got {e}")));
        }
        let p = match *self {
            AnalyticProfile::Constant { c, gamma, delta } => AnalyticProfile::Constant {
                c: c.powf(e),
                gamma,
                delta,
            },
            AnalyticProfile::IncreasingPower { c, gamma, delta, q } => AnalyticProfile::IncreasingPower {
                c: c.powf(e),
                gamma,
                delta,
                q: q * e,
            },
            AnalyticProfile::DecreasingPower { c, gamma, delta, q } => AnalyticProfile::DecreasingPower {
                c: c.powf(e),
                gamma,
                delta,
                q: q * e,
            },
            AnalyticProfile::BallSection { .. } => {
                return Err(Error::param("ball-section profiles have no closed-form power"))
            }
        };
        p.validate()?;
        Ok(p)
    }
}

impl Profile for AnalyticProfile {
    fn domain(&self) -> (f64, f64) {
        match *self {
            AnalyticProfile::Constant { gamma, delta, .. } => (gamma, delta),
            AnalyticProfile::IncreasingPower { gamma, delta, .. } => (-gamma, delta),
            AnalyticProfile::DecreasingPower { gamma, delta, .. } => (gamma, delta),
            AnalyticProfile::BallSection { radius, center, .. } => (center - radius, center + radius),
        }
    }

    fn value_at(&self, t: f64) -> f64 {
        match *self {
            AnalyticProfile::Constant { c, .. } => c,
            AnalyticProfile::IncreasingPower { c, gamma, q, .. } => c * (t + gamma).max(0.0).powf(q),
            AnalyticProfile::DecreasingPower { c, delta, q, .. } => c * (delta - t).max(0.0).powf(q),
            AnalyticProfile::BallSection { c, radius, n, center } => {
                let x = t - center;
                let r2 = ((radius - x) * (radius + x)).max(0.0);
                c * r2.powf(0.5 * (n as f64 - 1.0))
            }
        }
    }

    fn knots(&self) -> Vec<f64> {
        let (a, b) = self.domain();
        vec![a, b]
    }

    fn powered_integral_within(&self, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
        match *self {
            AnalyticProfile::Constant { c, .. } => Ok(c.powf(beta) * (e - s)),
            AnalyticProfile::IncreasingPower { c, gamma, q, .. } => {
                let k = q * beta + 1.0;
                let (us, ue) = ((s + gamma).max(0.0), (e + gamma).max(0.0));
                Ok(c.powf(beta) * (ue.powf(k) - us.powf(k)) / k)
            }
            AnalyticProfile::DecreasingPower { c, delta, q, .. } => {
                let k = q * beta + 1.0;
                let (us, ue) = ((delta - s).max(0.0), (delta - e).max(0.0));
                Ok(c.powf(beta) * (us.powf(k) - ue.powf(k)) / k)
            }
            AnalyticProfile::BallSection { .. } => super::segmented_powered(self, beta, s, e, spec),
        }
    }

    fn moment_integral_within(&self, beta: f64, s: f64, e: f64, spec: &QuadratureSpec) -> Result<f64> {
        match *self {
            AnalyticProfile::Constant { c, .. } => Ok(c.powf(beta) * 0.5 * (e - s) * (e + s)),
            AnalyticProfile::IncreasingPower { c, gamma, q, .. } => {
                // t = u - γ with u = t + γ
                let k = q * beta;
                let (us, ue) = ((s + gamma).max(0.0), (e + gamma).max(0.0));
                let m2 = (ue.powf(k + 2.0) - us.powf(k + 2.0)) / (k + 2.0);
                let m1 = (ue.powf(k + 1.0) - us.powf(k + 1.0)) / (k + 1.0);
                Ok(c.powf(beta) * (m2 - gamma * m1))
            }
            AnalyticProfile::DecreasingPower { c, delta, q, .. } => {
                // t = δ - u with u = δ - t
                let k = q * beta;
                let (us, ue) = ((delta - s).max(0.0), (delta - e).max(0.0));
                let m1 = (us.powf(k + 1.0) - ue.powf(k + 1.0)) / (k + 1.0);
                let m2 = (us.powf(k + 2.0) - ue.powf(k + 2.0)) / (k + 2.0);
                Ok(c.powf(beta) * (delta * m1 - m2))
            }
            AnalyticProfile::BallSection { .. } => super::segmented_moment(self, beta, s, e, spec),
        }
    }

    fn peak(&self) -> (f64, f64) {
        let (a, b) = self.domain();
        match *self {
            AnalyticProfile::Constant { c, .. } => (a, c),
            AnalyticProfile::IncreasingPower { .. } => (b, self.value_at(b)),
            AnalyticProfile::DecreasingPower { .. } => (a, self.value_at(a)),
            AnalyticProfile::BallSection { center, .. } => (center, self.value_at(center)),
        }
    }

    fn exact_integrals(&self) -> bool {
        !matches!(self, AnalyticProfile::BallSection { .. })
    }
}
