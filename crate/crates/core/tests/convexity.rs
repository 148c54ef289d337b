mod common;

use common::grid_point;
use geotri_core::chart::{Chart, DiskNeighborhood};
use geotri_core::convexity::{certify_region, path_inside, split_by_geodesic, ConvexityError, ConvexityParams};
use geotri_core::geodesic::shortest::shortest_path;
use geotri_core::mesh::golden;
use geotri_core::region::PolygonRegion;
use geotri_core::{IntrinsicMesh, SurfacePoint};
use proptest::prelude::*;
use std::f64::consts::TAU;

fn params(m: &IntrinsicMesh) -> ConvexityParams {
    ConvexityParams::new(m, 10.0 * 2f64.sqrt())
}

fn polygon(m: &IntrinsicMesh, pts: &[(f64, f64)]) -> PolygonRegion {
    let v: Vec<SurfacePoint> = pts.iter().map(|&(x, y)| grid_point(m, x, y)).collect();
    let edges = (0..v.len()).map(|i| shortest_path(m, &v[i], &v[(i + 1) % v.len()]).unwrap()).collect();
    PolygonRegion::from_edges(m, edges, &params(m).tol).unwrap()
}

fn ball(m: &IntrinsicMesh, x: f64, y: f64, r: f64) -> DiskNeighborhood {
    DiskNeighborhood::ball(m, Chart::flat(grid_point(m, x, y), r), 1e-7).unwrap()
}

/// Corners on a circle with every angular gap below `π`, so the centre is inside.
fn corners() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.2..1.0f64, 3..7).prop_map(|w| {
        let total: f64 = w.iter().sum();
        let mut acc = 0.0;
        w.iter().map(|x| { acc += x; TAU * acc / total }).collect::<Vec<_>>()
    }).prop_filter("gap below pi", |a| {
        (0..a.len()).all(|i| {
            let next = if i + 1 < a.len() { a[i + 1] } else { a[0] + TAU };
            next - a[i] < 0.9 * std::f64::consts::PI
        })
    })
}

fn on_circle(x: f64, y: f64, r: f64, angles: &[f64]) -> Vec<(f64, f64)> {
    angles.iter().map(|a| (x + r * a.cos(), y + r * a.sin())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn boundary_convex_polygons_contain_their_geodesics(
        x in 3.0..7.0f64, y in 3.0..7.0f64, r in 0.01..0.05f64, angles in corners(),
        pairs in prop::collection::vec((0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64), 10),
    ) {
        let m = golden::grid_square(10, 10.0);
        let p = params(&m);
        let pts = on_circle(x, y, r, &angles);
        let k = certify_region(&m, polygon(&m, &pts), ball(&m, x, y, 2.3), &p).unwrap();
        // Points of the polygon: between the centre and a spot on a side.
        let inside = |s: f64, t: f64| {
            let i = ((s * pts.len() as f64) as usize).min(pts.len() - 1);
            let (a, b) = (pts[i], pts[(i + 1) % pts.len()]);
            let e = (a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1));
            grid_point(&m, x + t * (e.0 - x), y + t * (e.1 - y))
        };
        for (s0, t0, s1, t1) in pairs {
            let g = shortest_path(&m, &inside(s0, t0), &inside(s1, t1)).unwrap();
            prop_assert!(path_inside(&m, &k.region, &g, &p.tol));
        }
    }

    #[test]
    fn verdict_does_not_depend_on_the_ambient_disk(
        x in 3.0..7.0f64, y in 3.0..7.0f64, r in 0.01..0.05f64, angles in corners(), dent in prop::option::of(0.2..0.8f64),
    ) {
        let m = golden::grid_square(10, 10.0);
        let p = params(&m);
        let mut pts = on_circle(x, y, r, &angles);
        if let Some(d) = dent {
            // Pull the midpoint of the first side toward the centre: a reflex corner.
            let (a, b) = (pts[0], pts[1]);
            let mid = ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
            pts.insert(1, (mid.0 + d * (x - mid.0), mid.1 + d * (y - mid.1)));
        }
        let k = polygon(&m, &pts);
        let one = certify_region(&m, k.clone(), ball(&m, x, y, 2.3), &p);
        let two = certify_region(&m, k, ball(&m, x + 0.1, y - 0.07, 2.0), &p);
        let verdict = |c: &Result<_, ConvexityError>| match c {
            Ok(_) => Ok(()),
            Err(ConvexityError::Condition3Failed { .. }) => Err(()),
            Err(e) => panic!("unexpected {e}"),
        };
        prop_assert_eq!(verdict(&one), verdict(&two));
        prop_assert_eq!(verdict(&one).is_ok(), dent.is_none());
    }

    #[test]
    fn a_chord_splits_the_polygon_along_itself(
        x in 3.0..7.0f64, y in 3.0..7.0f64, r in 0.01..0.05f64, angles in corners(), dir in 0.0..TAU,
    ) {
        let m = golden::grid_square(10, 10.0);
        let p = params(&m);
        let k = certify_region(&m, polygon(&m, &on_circle(x, y, r, &angles)), ball(&m, x, y, 2.3), &p).unwrap();
        let (dx, dy) = (2.0 * r * dir.cos(), 2.0 * r * dir.sin());
        let g = shortest_path(&m, &grid_point(&m, x - dx, y - dy), &grid_point(&m, x + dx, y + dy)).unwrap();
        let parts = split_by_geodesic(&m, &k, &g, &p).unwrap();
        let area: f64 = parts.iter().map(|c| c.region.area).sum();
        prop_assert!((area - k.region.area).abs() <= p.tol.area);
        let centre = grid_point(&m, x, y);
        let touching = parts.iter().filter(|c| c.region.contains(&m, &centre, 1e-9) && c.region.boundary_distance(&m, &centre) <= 1e-9).count();
        prop_assert_eq!(touching, 2);
    }
}

#[test]
fn chord_along_an_edge_through_a_corner_still_splits() {
    // The chord runs on a mesh edge and each of its two segments has its
    // midpoint outside the triangle or on its corner.
    let m = golden::grid_square(10, 10.0);
    let p = params(&m);
    let angles = [2.735897407937487, 3.680372089713906, TAU];
    let k = certify_region(&m, polygon(&m, &on_circle(3.0, 3.0, 0.01, &angles)), ball(&m, 3.0, 3.0, 2.3), &p).unwrap();
    let g = shortest_path(&m, &grid_point(&m, 2.98, 3.0), &grid_point(&m, 3.02, 3.0)).unwrap();
    assert_eq!(split_by_geodesic(&m, &k, &g, &p).unwrap().len(), 2);
}
