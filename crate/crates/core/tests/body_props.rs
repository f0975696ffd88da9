use grunlab_core::body::{
    halfspace_fraction, normalized, r_centroid_point, section_profile, verify_grunbaum_r, verify_minkowski_radon,
    ConvexBody, Polygon,
};
use grunlab_core::profile::{p_concavity_check, powered_integral, AnalyticProfile, Profile};
use grunlab_core::quad::QuadratureSpec;
use proptest::prelude::*;

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn point3() -> impl Strategy<Value = [f64; 3]> {
    [-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0]
}

fn direction3() -> impl Strategy<Value = Vec<f64>> {
    point3()
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-2)
        .prop_map(|v| normalized(&v).unwrap())
}

fn polytope() -> impl Strategy<Value = Vec<[f64; 3]>> {
    prop::collection::vec(point3(), 6..14).prop_filter("full-dimensional hull", |pts| {
        ConvexBody::polytope_hull(pts).is_ok_and(|b| b.volume(&spec()).unwrap() > 1e-2)
    })
}

fn polygon() -> impl Strategy<Value = Vec<[f64; 2]>> {
    prop::collection::vec([-1.0f64..1.0, -1.0f64..1.0], 4..12)
        .prop_filter("full-dimensional hull", |pts| Polygon::hull_of(pts).is_ok_and(|p| p.area() > 1e-2))
}

/// Rotation from a (not necessarily unit) quaternion.
fn rotation(q: [f64; 4]) -> [[f64; 3]; 3] {
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [w, x, y, z] = q.map(|c| c / n);
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

fn apply(m: &[[f64; 3]; 3], v: &[f64]) -> [f64; 3] {
    [0, 1, 2].map(|i| (0..3).map(|j| m[i][j] * v[j]).sum())
}

fn quaternion() -> impl Strategy<Value = [f64; 4]> {
    [-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0]
        .prop_filter("nonzero", |q| q.iter().map(|x| x * x).sum::<f64>() > 1e-2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn brunn_on_random_polytopes(pts in polytope(), u in direction3()) {
        let body = ConvexBody::polytope_hull(&pts).unwrap();
        let prof = section_profile(&body, &u, None).unwrap();
        let verdict = p_concavity_check(&prof, 0.5, 1e-9).unwrap();
        prop_assert!(verdict.concave, "{:?}", verdict);
    }

    #[test]
    fn brunn_on_random_polygons(pts in polygon(), angle in 0.0f64..std::f64::consts::TAU) {
        let body = ConvexBody::Polygon(Polygon::hull_of(&pts).unwrap());
        let prof = section_profile(&body, &[angle.cos(), angle.sin()], None).unwrap();
        prop_assert!(p_concavity_check(&prof, 1.0, 1e-9).unwrap().concave);
    }

    #[test]
    fn fubini_on_random_polytopes(pts in polytope(), u in direction3()) {
        let body = ConvexBody::polytope_hull(&pts).unwrap();
        let prof = section_profile(&body, &u, None).unwrap();
        let (a, b) = prof.domain();
        let vol = powered_integral(&prof, 1.0, a, b, &spec()).unwrap();
        let exact = body.volume(&spec()).unwrap();
        prop_assert!((vol - exact).abs() <= 1e-9 * exact.max(1.0), "{} vs {}", vol, exact);
    }

    #[test]
    fn rigid_motion_invariance(
        pts in polytope(),
        u in direction3(),
        q in quaternion(),
        shift in point3(),
        r in prop_oneof![Just(0.0), 0.2f64..4.0],
    ) {
        let body = ConvexBody::polytope_hull(&pts).unwrap();
        let rot = rotation(q);
        let moved: Vec<[f64; 3]> = pts
            .iter()
            .map(|p| {
                let x = apply(&rot, p);
                [x[0] + 3.0 * shift[0], x[1] + 3.0 * shift[1], x[2] + 3.0 * shift[2]]
            })
            .collect();
        let moved_body = ConvexBody::polytope_hull(&moved).unwrap();
        let moved_u = normalized(&apply(&rot, &u)).unwrap();

        let before = verify_grunbaum_r(&body, &u, 0.5, r, None, &spec()).unwrap();
        let after = verify_grunbaum_r(&moved_body, &moved_u, 0.5, r, None, &spec()).unwrap();
        prop_assert!((before.ratio - after.ratio).abs() <= 1e-9, "{} vs {}", before.ratio, after.ratio);
        prop_assert!(before.pass && after.pass);

        let before = verify_minkowski_radon(&body, &u, &spec()).unwrap();
        let after = verify_minkowski_radon(&moved_body, &moved_u, &spec()).unwrap();
        prop_assert!((before.ratio - after.ratio).abs() <= 1e-9);
    }

    #[test]
    fn scaling_invariance(pts in polytope(), u in direction3(), lambda in 0.1f64..10.0, w in 0.05f64..0.95, r in 0.0f64..3.0) {
        let body = ConvexBody::polytope_hull(&pts).unwrap();
        let scaled_pts: Vec<[f64; 3]> = pts.iter().map(|p| p.map(|c| lambda * c)).collect();
        let scaled = ConvexBody::polytope_hull(&scaled_pts).unwrap();
        let (a, b) = body.support_interval(&u).unwrap();
        let cut = a + w * (b - a);
        let f = halfspace_fraction(&body, &u, cut, None, &spec()).unwrap().value;
        let fs = halfspace_fraction(&scaled, &u, lambda * cut, None, &spec()).unwrap().value;
        prop_assert!((f - fs).abs() <= 1e-9, "{} vs {}", f, fs);

        let rel = (r_centroid_point(&body, &u, r, None, &spec()).unwrap() - a) / (b - a);
        let (sa, sb) = scaled.support_interval(&u).unwrap();
        let rel_s = (r_centroid_point(&scaled, &u, r, None, &spec()).unwrap() - sa) / (sb - sa);
        prop_assert!((rel - rel_s).abs() <= 1e-9);
    }

    #[test]
    fn minkowski_radon_on_simplices(pts in [point3(), point3(), point3(), point3()], u in direction3()) {
        let verts: Vec<Vec<f64>> = pts.iter().map(|p| p.to_vec()).collect();
        prop_assume!(ConvexBody::simplex(verts.clone()).is_ok_and(|s| s.volume(&spec()).unwrap() > 1e-3));
        let s = ConvexBody::simplex(verts).unwrap();
        let report = verify_minkowski_radon(&s, &u, &spec()).unwrap();
        prop_assert!(report.pass && report.ratio >= 0.25 - 1e-12, "{:?}", report);
    }
}

#[test]
fn brunn_on_fixture_bodies() {
    let cone = ConvexBody::revolution(AnalyticProfile::decreasing_power(1.0, 0.0, 1.0, 2.0).unwrap().into(), 3).unwrap();
    let ball4 = ConvexBody::ball(vec![0.5; 4], 2.0).unwrap();
    let cube = ConvexBody::axis_box(vec![0.0; 3], vec![1.0, 2.0, 3.0]).unwrap();
    let simplex = ConvexBody::simplex(vec![vec![0.0; 3], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]])
        .unwrap();
    let diag = normalized(&[1.0, 1.0, 1.0]).unwrap();
    let cases: [(&ConvexBody, Vec<f64>); 5] = [
        (&cone, vec![1.0, 0.0, 0.0]),
        (&ball4, vec![0.0, 1.0, 0.0, 0.0]),
        (&cube, diag.clone()),
        (&simplex, diag),
        (&simplex, normalized(&[1.0, -2.0, 0.5]).unwrap()),
    ];
    for (body, u) in cases {
        let p = 1.0 / (body.dim() as f64 - 1.0);
        let prof = section_profile(body, &u, None).unwrap();
        let verdict = p_concavity_check(&prof, p, 1e-9).unwrap();
        assert!(verdict.concave, "{body:?} {u:?}: {verdict:?}");
    }
}
