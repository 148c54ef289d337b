use geotri_core::chart::{Chart, DiskNeighborhood};
use geotri_core::convexity::{certify_boundary_convex, strictly_inside, ConvexityParams};
use geotri_core::diameter::surface_diameter_lower;
use geotri_core::format::RunConfig;
use geotri_core::geodesic::shortest::shortest_path;
use geotri_core::geodesic::GeodesicPath;
use geotri_core::mesh::{face_of, golden};
use geotri_core::region::PolygonRegion;
use geotri_core::{IntrinsicMesh, SurfacePoint, Tolerances};
use geotri_pipeline::decompose::{overlapping_pairs, probe_point, Cell};
use geotri_pipeline::{triangulate_polygon, triangulate_surface, PipelineError, Stage, TriangulationResult};
use std::time::Instant;

fn run(m: &IntrinsicMesh, eps: f64) -> TriangulationResult {
    triangulate_surface(m, &RunConfig::new(eps)).unwrap()
}

fn check_conclusions(m: &IntrinsicMesh, r: &TriangulationResult, eps: f64) {
    let tol = Tolerances::for_mesh(m);
    assert!((r.total_area() - m.area()).abs() <= tol.area, "area {}", r.total_area());
    for t in &r.triangles {
        assert!(t.region.n_vertices() == 3, "element with {} corners", t.region.n_vertices());
        assert!(t.slack > tol.len);
        assert!(t.diameter <= eps);
        assert!(t.transit_ok);
        assert!(t.cert.is_some() && t.chart.is_some());
        assert!(t.region.edges.iter().all(|e| e.is_certified(tol.angle)));
    }
    let regions: Vec<_> = r.triangles.iter().map(|t| &t.region).collect();
    assert!(overlapping_pairs(&regions, tol.area).is_empty());
}

#[test]
fn flat_square_meets_every_conclusion() {
    let m = golden::flat_square();
    let t = Instant::now();
    let r = run(&m, 0.3);
    assert!(t.elapsed().as_secs_f64() < 10.0);
    check_conclusions(&m, &r, 0.3);
}

#[test]
fn cube_corners_sit_inside_exactly_one_triangle() {
    let m = golden::cube();
    let r = run(&m, 0.5);
    check_conclusions(&m, &r, 0.5);
    let tol = Tolerances::for_mesh(&m);
    for v in 0..8 {
        let c = SurfacePoint::vertex(&m, v);
        let holding = r.triangles.iter().filter(|t| t.region.contains(&m, &c, tol.len)).count();
        let strictly = r.triangles.iter().filter(|t| strictly_inside(&m, &t.region, &c, 10.0 * tol.len)).count();
        assert_eq!((holding, strictly), (1, 1), "corner {v}");
    }
}

#[test]
fn flat_torus_is_covered() {
    let m = golden::flat_torus();
    let r = run(&m, 0.4);
    check_conclusions(&m, &r, 0.4);
}

#[test]
fn rectangle_with_boundary() {
    let m = golden::half_square();
    let r = run(&m, 0.3);
    check_conclusions(&m, &r, 0.3);
}

#[test]
fn saddle_point_may_lie_on_sides() {
    let m = golden::saddle();
    let r = run(&m, 0.5);
    check_conclusions(&m, &r, 0.5);
}

#[test]
fn every_stage_conserves_area() {
    let m = golden::cube();
    let r = triangulate_surface(&m, &RunConfig { snapshots: true, ..RunConfig::new(0.5) }).unwrap();
    let names: Vec<&str> = r.stages.iter().map(|s| s.stage.as_str()).collect();
    assert_eq!(names, ["cover", "refine", "non_overlap", "triangulate", "bigon"]);
    for s in &r.stages {
        assert!((s.area - 6.0).abs() <= Tolerances::for_mesh(&m).area, "{} {}", s.stage, s.area);
    }
    assert_eq!(r.snapshots.len(), 5);
    assert_eq!(r.snapshots[4].boundaries.len(), r.triangles.len());
}

#[test]
fn stages_refine_their_predecessors() {
    // Every final triangle lies in some cover cell; sampled at its probe point
    // and corners.
    let m = golden::half_square();
    let r = triangulate_surface(&m, &RunConfig { snapshots: true, ..RunConfig::new(0.3) }).unwrap();
    let tol = Tolerances::for_mesh(&m);
    let cover: Vec<PolygonRegion> = r.snapshots[0]
        .boundaries
        .iter()
        .map(|b| PolygonRegion::from_edges(&m, vec![GeodesicPath::from_curve(&m, b.clone(), tol.len)], &tol).unwrap())
        .collect();
    for t in r.triangles.iter().step_by(97) {
        let p = probe_point(&m, &t.region).unwrap();
        assert!(cover.iter().any(|c| c.contains(&m, &p, 10.0 * tol.len)));
    }
}

#[test]
fn invalid_epsilon_is_rejected() {
    let m = golden::flat_square();
    for eps in [0.0, -1.0, f64::NAN, f64::INFINITY] {
        assert!(matches!(triangulate_surface(&m, &RunConfig::new(eps)), Err(PipelineError::InvalidEpsilon(_))));
    }
}

#[test]
fn identical_runs_are_identical() {
    let m = golden::flat_torus();
    let a = run(&m, 0.4).to_file(&m);
    let b = run(&m, 0.4).to_file(&m);
    assert_eq!(a.triangles, b.triangles);
}

fn grid_point(m: &IntrinsicMesh, x: f64, y: f64) -> SurfacePoint {
    use geotri_core::geom::{barycentric, p2};
    let (i, j) = (x.floor(), y.floor());
    let lower = y - j <= x - i;
    let f = (2 * (j as usize * 10 + i as usize) + usize::from(!lower)) as u32;
    let tri = if lower { [p2(i, j), p2(i + 1.0, j), p2(i + 1.0, j + 1.0)] } else { [p2(i, j), p2(i + 1.0, j + 1.0), p2(i, j + 1.0)] };
    SurfacePoint::new(m, f, barycentric(&tri, &p2(x, y)))
}

fn polygon(m: &IntrinsicMesh, c: &[SurfacePoint]) -> PolygonRegion {
    let tol = Tolerances::for_mesh(m);
    let n = c.len();
    let edges: Vec<GeodesicPath> = (0..n).map(|i| shortest_path(m, &c[i], &c[(i + 1) % n]).unwrap()).collect();
    PolygonRegion::from_edges(m, edges, &tol).unwrap()
}

#[test]
fn flat_pentagon_gives_three_triangles() {
    let m = golden::grid_square(10, 10.0);
    let p = ConvexityParams::new(&m, surface_diameter_lower(&m));
    let pts: Vec<SurfacePoint> = (0..5)
        .map(|i| {
            let a = std::f64::consts::TAU * (i as f64 + 0.1) / 5.0;
            grid_point(&m, 5.3 + 0.05 * a.cos(), 5.6 + 0.05 * a.sin())
        })
        .collect();
    let region = polygon(&m, &pts);
    let chart = Chart::flat(grid_point(&m, 5.3, 5.6), 2.0);
    let u = DiskNeighborhood::ball(&m, chart, p.tol.angle).unwrap();
    let cert = certify_boundary_convex(&m, &region, &u, &p).unwrap();
    let cell = Cell { region: region.clone(), chart: Some(chart), cert: Some(cert), stage: Stage::Cover };
    let tris = triangulate_polygon(&m, &cell, &p).unwrap();
    assert_eq!(tris.len(), 3);
    let area: f64 = tris.iter().map(|t| t.region.area).sum();
    assert!((area - region.area).abs() < 1e-12);
    assert!(tris.iter().all(|t| t.cert.is_some() && !t.degenerate));
}

/// A point at distance `r` from vertex `v`, at polar angle `phi`.
fn polar(m: &IntrinsicMesh, v: u32, phi: f64, r: f64) -> SurfacePoint {
    let (h, d) = m.direction_at(v, phi);
    let f = face_of(h);
    SurfacePoint::from_position(m, f, &(m.layout(f)[(h % 3) as usize] + d * r))
}

#[test]
fn quadrilateral_around_saddle_splits_through_it() {
    // Around a cone angle of 5π/2 opposite corners are 5π/4 apart, so both
    // diagonals run through the apex and the split pieces have a side through it.
    let m = golden::saddle();
    let v = 0;
    let theta = m.angle_sum(v);
    let p = ConvexityParams::new(&m, surface_diameter_lower(&m));
    let pts: Vec<SurfacePoint> = (0..4).map(|i| polar(&m, v, theta * (i as f64 + 0.3) / 4.0, 0.01)).collect();
    let region = polygon(&m, &pts);
    let chart = Chart::cone(&m, v, 0.3);
    let u = DiskNeighborhood::ball(&m, chart, p.tol.angle).unwrap();
    let cert = certify_boundary_convex(&m, &region, &u, &p).ok();
    let cell = Cell { region: region.clone(), chart: cert.as_ref().map(|_| chart), cert, stage: Stage::Cover };
    let tris = triangulate_polygon(&m, &cell, &p).unwrap();
    assert!(tris.len() >= 2);
    let area: f64 = tris.iter().map(|t| t.region.area).sum();
    assert!((area - region.area).abs() < 1e-12);
    assert!(tris.iter().all(|t| !t.degenerate && t.transit_ok));
}
