mod common;

use common::{fixture, mesh, record, EPS, N};
use geotri_core::curve::{Segment, SurfaceCurve};
use geotri_core::format::ResultFile;
use geotri_verify::{compare_with_oracle, verify_triangulation, CheckKind, VerifyError, VerifyOptions};

fn opts() -> VerifyOptions {
    VerifyOptions { samples: 2000, ..VerifyOptions::default() }
}

fn failed(r: &ResultFile) -> Vec<CheckKind> {
    verify_triangulation(mesh(), r, &opts()).unwrap().failed_checks()
}

fn mutated(f: impl FnOnce(&mut ResultFile)) -> ResultFile {
    let mut r = fixture().clone();
    f(&mut r);
    r
}

#[test]
fn hand_built_cover_passes() {
    let r = fixture();
    assert_eq!(r.triangles.len(), 2 * N * N);
    assert!(r.triangles.iter().all(|t| t.certificate.is_some()), "fixture triangles must certify");
    let rep = verify_triangulation(mesh(), r, &opts()).unwrap();
    assert!(rep.passed, "{}", rep.to_text());
    assert!((rep.coverage.area - 1.0).abs() <= 1e-7);
    assert_eq!(rep.coverage.missed, 0);
    assert!(rep.verdicts.iter().all(|v| v.passed()));
    assert!(rep.verdicts.iter().all(|v| v.diameter_bound <= EPS + 2.0 * rep.h_net));
}

#[test]
fn removed_triangle_fails_coverage() {
    let r = mutated(|r| {
        r.triangles.remove(100);
    });
    assert_eq!(failed(&r), [CheckKind::Coverage]);
}

#[test]
fn duplicated_triangle_fails_overlap() {
    let r = mutated(|r| {
        let mut t = r.triangles[5].clone();
        t.id = r.triangles.len();
        r.triangles.push(t);
    });
    let f = failed(&r);
    assert!(f.contains(&CheckKind::Overlap), "{f:?}");
}

#[test]
fn reused_id_is_a_structure_failure() {
    let r = mutated(|r| r.triangles[7].id = r.triangles[8].id);
    assert_eq!(failed(&r), [CheckKind::Structure]);
}

#[test]
fn inflated_triangle_fails_overlap() {
    let m = mesh();
    let r = mutated(|r| {
        // Scale a triangle deep inside face 0 by three about its centroid.
        let t = &r.triangles[N * 20 + 10];
        let c: Vec<[f64; 3]> = t.sides.iter().map(|s| s.segs[0].a).collect();
        let g = [0, 1, 2].map(|k| (c[0][k] + c[1][k] + c[2][k]) / 3.0);
        let big = [0, 1, 2].map(|i| [0, 1, 2].map(|k| g[k] + 3.0 * (c[i][k] - g[k])));
        r.triangles[N * 20 + 10] = record(m, t.id, t.sides[0].segs[0].face, big);
    });
    let f = failed(&r);
    assert!(f.contains(&CheckKind::Overlap) && f.contains(&CheckKind::Coverage), "{f:?}");
}

#[test]
fn bent_side_fails_geodesic() {
    let m = mesh();
    let r = mutated(|r| {
        let t = &mut r.triangles[300];
        let s = t.sides[0].segs[0];
        // Kink the side at its midpoint, towards the inside.
        let mid = s.at(0.5);
        let third = t.sides[1].segs[0].b;
        let k = [0, 1, 2].map(|i| mid[i] + 0.05 * (third[i] - mid[i]));
        t.sides[0] = SurfaceCurve::new(vec![Segment { face: s.face, a: s.a, b: k }, Segment { face: s.face, a: k, b: s.b }]);
        t.side_lengths[0] = t.sides[0].length(m);
    });
    let f = failed(&r);
    assert!(f.contains(&CheckKind::Geodesic), "{f:?}");
}

#[test]
fn tampered_length_fails_structure() {
    let r = mutated(|r| r.triangles[42].side_lengths[1] *= 1.01);
    assert_eq!(failed(&r), [CheckKind::Structure]);
}

#[test]
fn broken_boundary_chain_fails_structure() {
    let r = mutated(|r| {
        let s = &mut r.triangles[42].sides[1].segs[0];
        s.a = [s.a[0] - 1e-4, s.a[1] + 1e-4, s.a[2]];
    });
    let f = failed(&r);
    assert!(f.contains(&CheckKind::Structure), "{f:?}");
}

#[test]
fn missing_certificate_fails_convexity() {
    let r = mutated(|r| {
        r.triangles[9].certificate = None;
        r.triangles[9].chart = None;
    });
    assert_eq!(failed(&r), [CheckKind::Convexity]);
}

#[test]
fn chart_too_small_fails_convexity() {
    let r = mutated(|r| {
        let c = r.triangles[9].chart.as_mut().unwrap();
        c.radius = 0.05;
    });
    assert_eq!(failed(&r), [CheckKind::Convexity]);
}

#[test]
fn flattened_triangle_fails_nondegeneracy() {
    let m = mesh();
    let r = mutated(|r| {
        // Corner 2 moved onto the midpoint of side 0.
        let t = &r.triangles[77];
        let c: Vec<[f64; 3]> = t.sides.iter().map(|s| s.segs[0].a).collect();
        let mid = [0, 1, 2].map(|k| 0.5 * (c[0][k] + c[1][k]));
        r.triangles[77] = record(m, t.id, t.sides[0].segs[0].face, [c[0], c[1], mid]);
    });
    let f = failed(&r);
    assert!(f.contains(&CheckKind::NonDegenerate), "{f:?}");
}

#[test]
fn smaller_target_fails_diameter() {
    let rep = verify_triangulation(mesh(), fixture(), &VerifyOptions { epsilon: Some(0.001), ..opts() }).unwrap();
    assert_eq!(rep.failed_checks(), [CheckKind::Diameter]);
}

#[test]
fn wrong_mesh_is_rejected() {
    let other = geotri_core::mesh::golden::half_square();
    assert!(matches!(verify_triangulation(&other, fixture(), &opts()), Err(VerifyError::MeshMismatch { .. })));
}

#[test]
fn reports_are_reproducible() {
    let a = verify_triangulation(mesh(), fixture(), &opts()).unwrap().to_json();
    let b = verify_triangulation(mesh(), fixture(), &opts()).unwrap().to_json();
    assert_eq!(a, b);
}

#[test]
fn straight_sides_agree_with_the_oracle() {
    let rows = compare_with_oracle(mesh(), fixture(), 32).unwrap();
    assert_eq!(rows.len(), 3 * fixture().triangles.len());
    assert!(rows.iter().all(|r| r.ok && (r.length - r.oracle).abs() <= 1e-6));
    assert!(matches!(compare_with_oracle(mesh(), fixture(), 4), Err(VerifyError::OracleTooCoarse(4))));
}
