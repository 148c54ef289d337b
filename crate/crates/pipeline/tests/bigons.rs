use geotri_core::convexity::ConvexityParams;
use geotri_core::geodesic::extremal::BigonData;
use geotri_core::geodesic::shortest::shortest_geodesics;
use geotri_core::mesh::golden;
use geotri_core::region::PolygonRegion;
use geotri_core::{IntrinsicMesh, SurfacePoint, Tolerances};
use geotri_pipeline::{consolidate, split_bigon_nondegenerate, Stage, TriangleElement};

fn bigon(m: &IntrinsicMesh, a: &SurfacePoint, b: &SurfacePoint) -> BigonData {
    let tol = Tolerances::for_mesh(m);
    let g = shortest_geodesics(m, a, b).unwrap();
    assert_eq!(g.len(), 2);
    let r = PolygonRegion::from_edges(m, vec![g[0].clone(), g[1].reversed(m, tol.len)], &tol)
        .or_else(|_| PolygonRegion::from_edges(m, vec![g[1].clone(), g[0].reversed(m, tol.len)], &tol))
        .unwrap();
    BigonData::from_region(m, &r, tol.len).unwrap()
}

#[test]
fn seam_midpoint_bigon_uses_the_corner_cut() {
    // Both corners see π/2 on the front and π/2 on the back: the boundary is
    // straight there, so the bigon becomes one triangle with sides 0.9, 0.9, 0.2.
    let m = golden::pillow();
    let tol = Tolerances::for_mesh(&m);
    let p = ConvexityParams::new(&m, 2f64.sqrt());
    let (a, b) = (SurfacePoint::on_halfedge(&m, 0, 0.5), SurfacePoint::on_halfedge(&m, 4, 0.5));
    let bg = bigon(&m, &a, &b);
    assert!((bg.left.length - 1.0).abs() < 1e-9 && (bg.right.length - 1.0).abs() < 1e-9);
    let area = bg.region(&m, &tol).unwrap().area;
    let tris = split_bigon_nondegenerate(&m, &bg, None, &p).unwrap();
    assert_eq!(tris.len(), 1);
    let t = &tris[0];
    let mut l = t.side_lengths.clone();
    l.sort_by(f64::total_cmp);
    assert!((l[0] - 0.2).abs() < 1e-9 && (l[1] - 0.9).abs() < 1e-9 && (l[2] - 0.9).abs() < 1e-9, "{l:?}");
    assert!(t.slack > 1e-6 && t.transit_ok);
    assert!((t.region.area - area).abs() <= 1e-8);
}

#[test]
fn corner_to_corner_bigon_splits_horizontally() {
    let m = golden::pillow();
    let tol = Tolerances::for_mesh(&m);
    let p = ConvexityParams::new(&m, 2f64.sqrt());
    let bg = bigon(&m, &SurfacePoint::vertex(&m, 0), &SurfacePoint::vertex(&m, 2));
    let area = bg.region(&m, &tol).unwrap().area;
    let tris = split_bigon_nondegenerate(&m, &bg, None, &p).unwrap();
    assert!(tris.len() >= 2);
    assert!(tris.iter().all(|t| t.slack > 1e-6 && t.region.n_vertices() == 3));
    let sum: f64 = tris.iter().map(|t| t.region.area).sum();
    assert!((sum - area).abs() <= 1e-8);
}

#[test]
fn degenerate_element_is_consolidated_then_split() {
    let m = golden::pillow();
    let tol = Tolerances::for_mesh(&m);
    let p = ConvexityParams::new(&m, 2f64.sqrt());
    let bg = bigon(&m, &SurfacePoint::on_halfedge(&m, 0, 0.5), &SurfacePoint::on_halfedge(&m, 4, 0.5));
    // Break the left side at its midpoint: a triangle with slack zero.
    let half = bg.left.length / 2.0;
    let l0 = geotri_core::geodesic::GeodesicPath::from_curve(&m, bg.left.curve.sub_curve(&m, 0.0, half), tol.len);
    let l1 = geotri_core::geodesic::GeodesicPath::from_curve(&m, bg.left.curve.sub_curve(&m, half, bg.left.length), tol.len);
    let r = PolygonRegion::from_edges(&m, vec![l0, l1, bg.right.reversed(&m, tol.len)], &tol).unwrap();
    let e = TriangleElement::new(&m, r, None, None, Stage::Triangulate, &tol);
    assert!(e.degenerate);
    let b2 = consolidate(&m, &e, &tol).unwrap();
    let tris = split_bigon_nondegenerate(&m, &b2, None, &p).unwrap();
    assert!(tris.iter().all(|t| !t.degenerate));
    let sum: f64 = tris.iter().map(|t| t.region.area).sum();
    assert!((sum - e.region.area).abs() <= 1e-8);
}
