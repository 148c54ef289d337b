use geotri_core::format::RunConfig;
use geotri_core::mesh::golden;
use geotri_core::Tolerances;
use geotri_pipeline::decompose::overlapping_pairs;
use geotri_pipeline::{triangle_slack, triangulate_surface};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn square_conclusions_hold_for_any_epsilon(eps in 0.05f64..2.0) {
        let m = golden::flat_square();
        let tol = Tolerances::for_mesh(&m);
        let r = triangulate_surface(&m, &RunConfig::new(eps)).unwrap();
        prop_assert!((r.total_area() - 1.0).abs() <= tol.area);
        for t in &r.triangles {
            prop_assert!(t.diameter <= eps);
            prop_assert!(t.slack > tol.len);
            prop_assert!(t.cert.is_some());
        }
        let regions: Vec<_> = r.triangles.iter().map(|t| &t.region).collect();
        prop_assert!(overlapping_pairs(&regions, tol.area).is_empty());
    }

    #[test]
    fn smaller_epsilon_never_gives_fewer_triangles(a in 0.05f64..1.0, b in 0.05f64..1.0) {
        let m = golden::flat_torus();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let n = |e: f64| triangulate_surface(&m, &RunConfig::new(e)).unwrap().triangles.len();
        prop_assert!(n(lo) >= n(hi));
    }

    #[test]
    fn slack_is_symmetric_and_scales(a in 0.1f64..1.0, b in 0.1f64..1.0, c in 0.1f64..1.0, k in 0.1f64..10.0) {
        let s = triangle_slack(&[a, b, c]);
        prop_assert!((s - triangle_slack(&[c, a, b])).abs() < 1e-12);
        prop_assert!((k * s - triangle_slack(&[k * a, k * b, k * c])).abs() < 1e-9);
    }
}
