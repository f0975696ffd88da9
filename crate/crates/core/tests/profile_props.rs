use grunlab_core::profile::{
    alpha_centroid, lower_tail_mass_ratio, powered_integral, tail_mass_ratio, AnalyticProfile, ConcaveProfile, Profile,
    Reflected, Scaled, Translated,
};
use grunlab_core::quad::{integrate, QuadratureSpec};
use grunlab_core::search::random_concave;
use proptest::prelude::*;

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn profile() -> impl Strategy<Value = ConcaveProfile> {
    (any::<u64>(), 3usize..12, -5.0f64..5.0, 0.1f64..10.0)
        .prop_map(|(seed, m, a, len)| random_concave(seed, m, (a, a + len)).unwrap())
}

fn exponent() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), 0.05f64..6.0]
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn scale_invariance(h in profile(), alpha in exponent(), beta in 0.05f64..6.0, lambda in 1e-3f64..1e3) {
        let scaled = h.scaled(lambda).unwrap();
        let g = alpha_centroid(&h, alpha, &spec()).unwrap();
        let gs = alpha_centroid(&scaled, alpha, &spec()).unwrap();
        let (a, b) = h.domain();
        prop_assert!((g - gs).abs() <= 1e-12 * (b - a).max(g.abs()));
        let t = tail_mass_ratio(&h, alpha, beta, &spec()).unwrap();
        let ts = tail_mass_ratio(&scaled, alpha, beta, &spec()).unwrap();
        prop_assert!((t - ts).abs() <= 1e-12, "{} vs {}", t, ts);
        let wrapped = Scaled { inner: &h, factor: lambda };
        prop_assert!((tail_mass_ratio(&wrapped, alpha, beta, &spec()).unwrap() - t).abs() <= 1e-12);
    }

    #[test]
    fn translation_covariance(h in profile(), alpha in exponent(), tau in -50.0f64..50.0) {
        let g = alpha_centroid(&h, alpha, &spec()).unwrap();
        let moved = h.translated(tau).unwrap();
        let gm = alpha_centroid(&moved, alpha, &spec()).unwrap();
        prop_assert!((gm - (g + tau)).abs() <= 1e-10, "{} vs {}", gm, g + tau);
        let wrapped = Translated { inner: &h, shift: tau };
        prop_assert!((alpha_centroid(&wrapped, alpha, &spec()).unwrap() - (g + tau)).abs() <= 1e-10);
    }

    #[test]
    fn reflection(h in profile(), alpha in exponent(), beta in 0.05f64..6.0) {
        let lower = lower_tail_mass_ratio(&h, alpha, beta, &spec()).unwrap();
        let upper = tail_mass_ratio(&h, alpha, beta, &spec()).unwrap();
        let mirrored = tail_mass_ratio(&h.reflected().unwrap(), alpha, beta, &spec()).unwrap();
        prop_assert!((mirrored - lower).abs() <= 1e-10);
        prop_assert!((mirrored + upper - 1.0).abs() <= 1e-10);
        let wrapped = tail_mass_ratio(&Reflected(&h), alpha, beta, &spec()).unwrap();
        prop_assert!((wrapped - mirrored).abs() <= 1e-10);
    }

    #[test]
    fn centroid_is_interior(h in profile(), alpha in exponent()) {
        let (a, b) = h.domain();
        let g = alpha_centroid(&h, alpha, &spec()).unwrap();
        prop_assert!(a < g && g < b, "{} not in ({}, {})", g, a, b);
    }

    #[test]
    fn additivity(h in profile(), beta in 0.05f64..6.0, w1 in 0.0f64..1.0, w2 in 0.0f64..1.0) {
        let (a, b) = h.domain();
        let (lo, hi) = if w1 < w2 { (w1, w2) } else { (w2, w1) };
        let (s, m, e) = (a + lo * (b - a), a + (lo + hi) / 2.0 * (b - a), a + hi * (b - a));
        let whole = powered_integral(&h, beta, s, e, &spec()).unwrap();
        let parts = powered_integral(&h, beta, s, m, &spec()).unwrap() + powered_integral(&h, beta, m, e, &spec()).unwrap();
        prop_assert!((whole - parts).abs() <= 2.0 * spec().abs_tol);
    }

    #[test]
    fn closed_form_matches_quadrature(
        c in 0.1f64..5.0,
        gamma in 0.0f64..3.0,
        delta in 0.1f64..3.0,
        q in 0.01f64..4.0,
        beta in 0.1f64..4.0,
        increasing in any::<bool>(),
    ) {
        let h = if increasing {
            AnalyticProfile::increasing_power(c, gamma, delta, q).unwrap()
        } else {
            AnalyticProfile::decreasing_power(c, -gamma, delta, q).unwrap()
        };
        let (a, b) = h.domain();
        let closed = h.powered_integral_within(beta, a, b, &spec()).unwrap();
        let tight = QuadratureSpec::new(1e-13, 60).unwrap();
        let quad = integrate(|t| h.value_at(t).powf(beta), a, b, &tight).unwrap();
        prop_assert!(rel(closed, quad) <= 1e-9, "{} vs {}", closed, quad);
        let closed_m = h.moment_integral_within(beta, a, b, &spec()).unwrap();
        let quad_m = integrate(|t| t * h.value_at(t).powf(beta), a, b, &tight).unwrap();
        prop_assert!((closed_m - quad_m).abs() <= 1e-9 * closed.max(closed_m.abs()), "{} vs {}", closed_m, quad_m);
    }
}

#[test]
fn alpha_zero_is_midpoint() {
    let h = ConcaveProfile::new([(1.0, 0.0), (1.5, 3.0), (4.0, 0.5)]).unwrap();
    assert_eq!(alpha_centroid(&h, 0.0, &spec()).unwrap(), 2.5);
}
