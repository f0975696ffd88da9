use serde::Serialize;

use super::{Profile, SampledProfile};
use crate::quad::QuadratureSpec;
use crate::{Error, Result};

/// Uniform cells used by [`p_concavity_check`] in addition to the knots.
pub const DEFAULT_CONCAVITY_GRID: usize = 256;
/// Levels used by [`superlevel_measure_concavity_check`].
pub const DEFAULT_SUPERLEVEL_GRID: usize = 512;
/// Second-difference tolerance for the superlevel check.
pub const SUPERLEVEL_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcavityVerdict {
    pub concave: bool,
    /// Largest amount by which a middle sample falls below its chord.
    pub max_violation: f64,
    /// Abscissas `(left, middle, right)` of the worst triple, on failure.
    pub witness: Option<(f64, f64, f64)>,
}

/// Deficit of the middle point below the chord through the outer two.
fn chord_deficit(x: [f64; 3], v: [f64; 3]) -> f64 {
    let w = (x[1] - x[0]) / (x[2] - x[0]);
    (1.0 - w) * v[0] + w * v[2] - v[1]
}

/// Scans triples `(i, i + k, i + 2k)` for `k = 1, 2, 4, ...` and returns the
/// worst deficit after subtracting `allowance(i, j, l)`.
fn worst_triple(xs: &[f64], vs: &[f64], allowance: impl Fn(usize, usize, usize) -> f64) -> (f64, (f64, f64, f64)) {
    let n = xs.len();
    let mut worst = (f64::NEG_INFINITY, (xs[0], xs[0], xs[0]));
    let mut k = 1;
    while 2 * k < n {
        for i in 0..n - 2 * k {
            let (j, l) = (i + k, i + 2 * k);
            let d = chord_deficit([xs[i], xs[j], xs[l]], [vs[i], vs[j], vs[l]]) - allowance(i, j, l);
            if d > worst.0 {
                worst = (d, (xs[i], xs[j], xs[l]));
            }
        }
        k *= 2;
    }
    if n < 3 {
        worst.0 = 0.0;
    }
    worst
}

/// Checks that `t ↦ f(t)^p` is concave.
///
/// `f` is sampled at its knots, at a uniform grid and at the grid midpoints;
/// chords over several spacings are compared with the middle value. The
/// tolerance is relative to `max(1, max f^p)`.
pub fn p_concavity_check<P: Profile + ?Sized>(f: &P, p: f64, tol: f64) -> Result<ConcavityVerdict> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::param(format!("p must be positive, got {p}")));
    }
    let (a, b) = f.domain();
    let cells = 2 * DEFAULT_CONCAVITY_GRID;
    let mut xs: Vec<f64> = (0..=cells).map(|i| a + (b - a) * i as f64 / cells as f64).collect();
    xs.extend(f.knots().into_iter().filter(|&k| k >= a && k <= b));
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * (b - a));
    let vs: Vec<f64> = xs.iter().map(|&x| f.value_at(x).max(0.0).powf(p)).collect();
    let scale = vs.iter().copied().fold(1.0, f64::max);
    let (worst, triple) = worst_triple(&xs, &vs, |_, _, _| 0.0);
    let concave = worst <= tol * scale;
    Ok(ConcavityVerdict {
        concave,
        max_violation: worst.max(0.0),
        witness: (!concave).then_some(triple),
    })
}

/// Concavity of `f^p` for noisy samples: a triple only counts as a violation
/// when its deficit exceeds `k_sigma` standard errors (plus `tol`).
pub fn p_concavity_check_noisy(f: &SampledProfile, p: f64, k_sigma: f64, tol: f64) -> Result<ConcavityVerdict> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::param(format!("p must be positive, got {p}")));
    }
    let samples: Vec<(f64, f64, f64)> = f.samples().collect();
    let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let vs: Vec<f64> = samples.iter().map(|s| s.1.max(0.0).powf(p)).collect();
    // spread of f^p over f ± σ
    let sd: Vec<f64> = samples
        .iter()
        .map(|&(_, y, s)| {
            let y = y.max(0.0);
            let up = (y + s).powf(p) - y.powf(p);
            let down = y.powf(p) - (y - s).max(0.0).powf(p);
            up.max(down)
        })
        .collect();
    let scale = vs.iter().copied().fold(1.0, f64::max);
    let (worst, triple) = worst_triple(&xs, &vs, |i, j, l| {
        let w = (xs[j] - xs[i]) / (xs[l] - xs[i]);
        let var = ((1.0 - w) * sd[i]).powi(2) + sd[j].powi(2) + (w * sd[l]).powi(2);
        k_sigma * var.sqrt()
    });
    let concave = worst <= tol * scale;
    Ok(ConcavityVerdict {
        concave,
        max_violation: worst.max(0.0),
        witness: (!concave).then_some(triple),
    })
}

/// Weighted mass of the part of the hypograph of `h` above height `s`:
/// `(1/β) ∫ max(h^β - s^β, 0)`.
///
/// `h` must be concave, so `{h ≥ s}` is an interval around the peak.
pub fn superlevel_mass<P: Profile + ?Sized>(h: &P, beta: f64, s: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::param(format!("beta must be positive, got {beta}")));
    }
    let (a, b) = h.domain();
    let (tp, top) = h.peak();
    if s >= top {
        return Ok(0.0);
    }
    let s = s.max(0.0);
    // first point from `from` towards `to` where h reaches s
    let crossing = |from: f64, to: f64| {
        if h.value_at(from) >= s {
            return from;
        }
        let (mut out, mut inside) = (from, to);
        for _ in 0..200 {
            let m = 0.5 * (out + inside);
            if m == out || m == inside {
                break;
            }
            if h.value_at(m) >= s {
                inside = m;
            } else {
                out = m;
            }
        }
        inside
    };
    let l = crossing(a, tp);
    let r = crossing(b, tp);
    let mass = h.powered_integral_within(beta, l, r, spec)?;
    Ok(((mass - (r - l) * s.powf(beta)) / beta).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuperlevelVerdict {
    pub concave: bool,
    pub max_violation: f64,
    /// Level `s` at the worst second difference.
    pub at_level: f64,
}

/// Checks concavity of `s ↦ W(s)^{1/(β+1)}` on `grid_size` uniform levels in
/// `[0, max h]`, `W` being [`superlevel_mass`]. Second differences above
/// `tol · max(1, max W^{1/(β+1)})` count as violations.
pub fn superlevel_measure_concavity_check<P: Profile + ?Sized>(
    h: &P,
    beta: f64,
    grid_size: usize,
    tol: f64,
) -> Result<SuperlevelVerdict> {
    if grid_size < 3 {
        return Err(Error::param(format!("grid_size must be at least 3, got {grid_size}")));
    }
    let spec = QuadratureSpec::default();
    let (_, top) = h.peak();
    let q = 1.0 / (beta + 1.0);
    let levels: Vec<f64> = (0..grid_size)
        .map(|i| top * i as f64 / (grid_size - 1) as f64)
        .collect();
    let values = levels
        .iter()
        .map(|&s| superlevel_mass(h, beta, s, &spec).map(|w| w.powf(q)))
        .collect::<Result<Vec<_>>>()?;
    let scale = values.iter().copied().fold(1.0, f64::max);
    let mut worst = (f64::NEG_INFINITY, 0.0);
    for i in 1..grid_size - 1 {
        let d = values[i - 1] + values[i + 1] - 2.0 * values[i];
        if d > worst.0 {
            worst = (d, levels[i]);
        }
    }
    Ok(SuperlevelVerdict {
        concave: worst.0 <= tol * scale,
        max_violation: worst.0.max(0.0),
        at_level: worst.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{AnalyticProfile, ConcaveProfile, PiecewiseLinear};

    #[test]
    fn p_concavity_examples() {
        let sq = AnalyticProfile::decreasing_power(1.0, 0.0, 1.0, 2.0).unwrap();
        assert!(p_concavity_check(&sq, 0.5, 1e-9).unwrap().concave);
        let sampled = PiecewiseLinear::from_fn(|t| (1.0 - t).powi(2), 0.0, 1.0, 64).unwrap();
        assert!(!p_concavity_check(&sampled, 1.0, 1e-9).unwrap().concave);

        let affine = ConcaveProfile::new([(0.0, 1.0), (1.0, 0.0)]).unwrap();
        let v = p_concavity_check(&affine, 2.0, 1e-9).unwrap();
        assert!(!v.concave);
        let (_, mid, _) = v.witness.unwrap();
        assert!((mid - 0.5).abs() < 1e-12, "{mid}");

        let one = ConcaveProfile::new([(0.0, 1.0), (1.0, 1.0)]).unwrap();
        for p in [0.1, 1.0, 7.0] {
            assert!(p_concavity_check(&one, p, 1e-9).unwrap().concave);
        }
        assert!(p_concavity_check(&one, 0.0, 1e-9).is_err());
    }

    #[test]
    fn noisy_check_tolerates_noise_but_not_convexity() {
        let clean: Vec<_> = (0..=32).map(|i| i as f64 / 32.0).map(|t| (t, 1.0 - t, 0.0)).collect();
        let exact = SampledProfile::new(clean.clone()).unwrap();
        assert!(p_concavity_check_noisy(&exact, 1.0, 3.0, 1e-9).unwrap().concave);
        let jitter: Vec<_> = clean
            .iter()
            .enumerate()
            .map(|(i, &(t, y, _))| (t, y + if i % 2 == 0 { 1e-3 } else { -1e-3 }, 1e-3))
            .collect();
        let noisy = SampledProfile::new(jitter.clone()).unwrap();
        assert!(p_concavity_check_noisy(&noisy, 1.0, 3.0, 1e-9).unwrap().concave);
        let tight: Vec<_> = jitter.iter().map(|&(t, y, _)| (t, y, 1e-6)).collect();
        assert!(!p_concavity_check_noisy(&SampledProfile::new(tight).unwrap(), 1.0, 3.0, 1e-9).unwrap().concave);
    }

    #[test]
    fn superlevel_mass_closed_forms() {
        let spec = QuadratureSpec::default();
        let one = ConcaveProfile::new([(0.0, 1.0), (1.0, 1.0)]).unwrap();
        for s in [0.0, 0.3, 0.9] {
            assert!((superlevel_mass(&one, 1.0, s, &spec).unwrap() - (1.0 - s)).abs() < 1e-14);
        }
        // h = 1 - t, β = 1: (1 - s)² / 2
        let affine = ConcaveProfile::new([(0.0, 1.0), (1.0, 0.0)]).unwrap();
        for s in [0.0, 0.25, 0.8] {
            let w = superlevel_mass(&affine, 1.0, s, &spec).unwrap();
            assert!((w - 0.5 * (1.0 - s).powi(2)).abs() < 1e-13, "{s}: {w}");
        }
        assert_eq!(superlevel_mass(&affine, 1.0, 2.0, &spec).unwrap(), 0.0);
    }

    #[test]
    fn superlevel_examples() {
        let one = ConcaveProfile::new([(0.0, 1.0), (1.0, 1.0)]).unwrap();
        let affine = ConcaveProfile::new([(0.0, 1.0), (1.0, 0.0)]).unwrap();
        for beta in [1.0, 2.0, 3.0] {
            assert!(superlevel_measure_concavity_check(&one, beta, 512, SUPERLEVEL_TOL).unwrap().concave);
            assert!(superlevel_measure_concavity_check(&affine, beta, 512, SUPERLEVEL_TOL).unwrap().concave);
        }
        assert!(superlevel_measure_concavity_check(&one, 1.0, 2, SUPERLEVEL_TOL).is_err());
    }

    #[test]
    fn superlevel_fails_below_beta_one() {
        let one = ConcaveProfile::new([(0.0, 1.0), (1.0, 1.0)]).unwrap();
        let v = superlevel_measure_concavity_check(&one, 0.5, 512, SUPERLEVEL_TOL).unwrap();
        assert!(!v.concave);
        assert!(v.at_level < 0.1);
    }
}
