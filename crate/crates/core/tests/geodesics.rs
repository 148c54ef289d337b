mod common;

use common::{goldens, grid_point, random_point};
use geotri_core::curve::{Segment, SurfaceCurve};
use geotri_core::geodesic::homotopic::shortest_homotopic;
use geotri_core::geodesic::oracle::SteinerOracle;
use geotri_core::geodesic::shortest::shortest_path;
use geotri_core::geodesic::superfluous::normalize_to_finite_graph;
use geotri_core::geodesic::GeodesicPath;
use geotri_core::mesh::golden;
use geotri_core::overlay::cut_along_graph;
use geotri_core::point::corner_bary;
use geotri_core::trace::{trace, trace_from_vertex, TraceOptions};
use geotri_core::transit::is_transit_point;
use geotri_core::winding::winding_number;
use geotri_core::{IntrinsicMesh, SurfacePoint, Tolerances};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn reversal_keeps_length_bit_for_bit(mesh in 0usize..6, seed in any::<u64>()) {
        let (_, m) = &goldens()[mesh];
        let mut r = rng(seed);
        let (p, q) = (random_point(m, &mut r), random_point(m, &mut r));
        let c = shortest_path(m, &p, &q).unwrap().curve;
        prop_assert_eq!(c.length(m).to_bits(), c.reversed().length(m).to_bits());
    }

    #[test]
    fn winding_survives_subdivision_and_flips_with_orientation(x in 1.0..9.0f64, y in 1.0..9.0f64, r in 0.05..0.9f64, k in 3usize..7) {
        let m = golden::grid_square(10, 10.0);
        let pts: Vec<SurfacePoint> = (0..k).map(|i| {
            let a = TAU * i as f64 / k as f64;
            grid_point(&m, x + r * a.cos(), y + r * a.sin())
        }).collect();
        let loop_curve = (0..k).fold(SurfaceCurve::default(), |acc, i| acc.concat(&shortest_path(&m, &pts[i], &pts[(i + 1) % k]).unwrap().curve));
        let split = SurfaceCurve::new(loop_curve.segs.iter().flat_map(|s| {
            let mid = s.at(0.37);
            [Segment { face: s.face, a: s.a, b: mid }, Segment { face: s.face, a: mid, b: s.b }]
        }).collect());
        let centre = grid_point(&m, x, y);
        let w = winding_number(&m, &loop_curve, &centre).unwrap();
        prop_assert_eq!(w, 1);
        prop_assert_eq!(winding_number(&m, &split, &centre).unwrap(), w);
        prop_assert_eq!(winding_number(&m, &loop_curve.reversed(), &centre).unwrap(), -w);
        let outside = grid_point(&m, x + 1.5 * r + 0.01, y);
        prop_assert_eq!(winding_number(&m, &loop_curve, &outside).unwrap(), 0);
    }

    #[test]
    fn cutting_conserves_area(mesh in 0usize..6, seed in any::<u64>(), n in 1usize..4) {
        let (name, m) = &goldens()[mesh];
        let tol = Tolerances::for_mesh(m);
        let mut r = rng(seed);
        let curves: Vec<SurfaceCurve> = (0..n).map(|_| shortest_path(m, &random_point(m, &mut r), &random_point(m, &mut r)).unwrap().curve).collect();
        let comps = cut_along_graph(m, &curves).unwrap();
        let area: f64 = comps.iter().map(|c| c.area).sum();
        prop_assert!((area - m.area()).abs() <= tol.area, "{} {} vs {}", name, area, m.area());
    }

    #[test]
    fn splicing_keeps_length(seed in any::<u64>(), n in 1usize..5) {
        let m = golden::flat_torus();
        let tol = Tolerances::for_mesh(&m);
        let mut r = rng(seed);
        let sys: Vec<GeodesicPath> = (0..n).map(|_| shortest_path(&m, &random_point(&m, &mut r), &random_point(&m, &mut r)).unwrap()).collect();
        let g = shortest_path(&m, &random_point(&m, &mut r), &random_point(&m, &mut r)).unwrap();
        let out = normalize_to_finite_graph(&m, &sys, &g, tol.len);
        prop_assert!((out.length - g.length).abs() <= tol.len);
        prop_assert!(out.start(&m).same(&m, &g.start(&m), tol.len) && out.end(&m).same(&m, &g.end(&m), tol.len));
    }

    #[test]
    fn shortest_homotopic_is_idempotent(seed in any::<u64>()) {
        let m = golden::flat_square();
        let tol = Tolerances::for_mesh(&m);
        let disk = cut_along_graph(&m, &[]).unwrap().remove(0);
        let mut r = rng(seed);
        let (a, b, c) = (random_point(&m, &mut r), random_point(&m, &mut r), random_point(&m, &mut r));
        let bent = shortest_path(&m, &a, &b).unwrap().curve.concat(&shortest_path(&m, &b, &c).unwrap().curve);
        let once = shortest_homotopic(&m, &bent, &disk).unwrap();
        let twice = shortest_homotopic(&m, &once.curve, &disk).unwrap();
        prop_assert!((once.length - twice.length).abs() <= tol.len);
        prop_assert!(once.length <= bent.length(&m) + tol.len);
    }

    #[test]
    fn geodesics_avoid_convex_cone_points(mesh in 0usize..6, seed in any::<u64>()) {
        let (_, m) = &goldens()[mesh];
        let mut r = rng(seed);
        let g = shortest_path(m, &random_point(m, &mut r), &random_point(m, &mut r)).unwrap();
        for v in g.cert.vertices() {
            let flat = if m.is_boundary_vertex(v) { PI } else { TAU };
            prop_assert!(m.angle_sum(v) >= flat - 1e-9, "passes vertex {} of angle {}", v, m.angle_sum(v));
        }
    }
}

#[test]
fn shortest_paths_never_beat_the_oracle_bound() {
    for (name, m) in goldens() {
        let tol = Tolerances::for_mesh(&m);
        let oracle = SteinerOracle::new(&m, 64);
        let mut r = rng(11);
        for k in 0..1000 {
            let (p, q) = (random_point(&m, &mut r), random_point(&m, &mut r));
            let l = shortest_path(&m, &p, &q).unwrap().length;
            let o = oracle.distance(&p, &q).unwrap();
            assert!(l <= o.value + tol.len, "{name} pair {k}: {l} > {}", o.value);
        }
    }
}

#[test]
fn boundary_edges_are_geodesic() {
    for (name, m) in goldens() {
        let tol = Tolerances::for_mesh(&m);
        for h in 0..m.n_halfedges() as u32 {
            if !m.is_boundary_halfedge(h) {
                continue;
            }
            let i = (h % 3) as usize;
            let c = SurfaceCurve::new(vec![Segment { face: h / 3, a: corner_bary(i), b: corner_bary((i + 1) % 3) }]);
            assert!(GeodesicPath::from_curve(&m, c, tol.len).is_certified(tol.angle), "{name} halfedge {h}");
        }
    }
}

/// Brute force: `p` is a transit point iff some two points at distance 0.05 on
/// opposite sides of it are joined by a shortest path of length 0.1.
fn brute_transit(m: &IntrinsicMesh, p: &SurfacePoint) -> bool {
    let opt = TraceOptions::for_mesh(m);
    let d = 0.05;
    (0..16).any(|k| {
        let phi = TAU * k as f64 / 16.0;
        let (a, b) = match p.as_vertex(m) {
            Some(v) => {
                let theta = m.angle_sum(v);
                let (a, b) = (trace_from_vertex(m, v, phi, d, &opt), trace_from_vertex(m, v, phi + theta / 2.0, d, &opt));
                (a.end, b.end)
            }
            None => {
                let dir = geotri_core::geom::V2::new(phi.cos(), phi.sin());
                (trace(m, p.face, p.bary, dir, d, &opt).end, trace(m, p.face, p.bary, -dir, d, &opt).end)
            }
        };
        shortest_path(m, &a, &b).map_or(false, |g| g.length >= 2.0 * d - 1e-9)
    })
}

#[test]
fn transit_agrees_with_brute_force() {
    let tol = Tolerances::for_mesh(&golden::cube());
    let mut seen = [false; 2];
    for m in [golden::cube(), golden::saddle(), golden::flat_torus()] {
        let mut pts: Vec<SurfacePoint> = (0..m.n_vertices() as u32).filter(|&v| !m.is_boundary_vertex(v)).map(|v| SurfacePoint::vertex(&m, v)).collect();
        let mut r = rng(3);
        for _ in 0..20 {
            let p = random_point(&m, &mut r);
            // On the saddle, stay 0.07 away from the rim so both traces fit.
            if !m.has_boundary() || p.bary[0] >= 0.1 {
                pts.push(p);
            }
        }
        for p in &pts {
            let t = is_transit_point(&m, p, tol.angle).transit;
            assert_eq!(t, brute_transit(&m, p), "{:?}", p);
            seen[usize::from(t)] = true;
        }
    }
    assert_eq!(seen, [true, true]);
}
