//! Shortest closed curves around a region inside a chart ball.
//!
//! The sides of the region are straight in the chart, so the shortest curve
//! winding around it is a taut polygon on the region's vertices. In a flat
//! chart this is the convex hull. In a cone chart a vertex is dropped while the
//! boundary turns right there and its neighbours are less than π apart around
//! the apex, so that the shortcut chord exists.

use super::path::GeodesicPath;
use super::GeodesicError;
use crate::chart::{cone_chord, polar_at, ChartKind, DiskNeighborhood};
use crate::geom::{orient, rotate, P2, V2};
use crate::mesh::IntrinsicMesh;
use crate::point::SurfacePoint;
use crate::region::PolygonRegion;
use std::f64::consts::PI;

/// The taut closed curve, as counter-clockwise sides.
#[derive(Clone, Debug)]
pub struct EnclosingCurve {
    pub edges: Vec<GeodesicPath>,
    pub length: f64,
}

pub fn shortest_enclosing_curve(m: &IntrinsicMesh, k: &PolygonRegion, u: &DiskNeighborhood) -> Result<EnclosingCurve, GeodesicError> {
    let dev = u.development().ok_or_else(|| GeodesicError::InvalidCurve("ambient disk has no chart".into()))?;
    match dev.pieces_radius(&k.pieces) {
        Some(r) if r < dev.radius() * (1.0 - 1e-9) => {}
        _ => return Err(GeodesicError::NotContained),
    }
    let tol = 1e-9 * m.scale();
    let verts = k.vertices(m);
    let edges = match dev.chart.kind {
        ChartKind::Flat => {
            let pts: Vec<P2> = verts.iter().map(|v| dev.plane_point(m, v)).collect::<Option<_>>().ok_or(GeodesicError::NotContained)?;
            let hull = convex_hull(&pts, tol);
            let mut edges = Vec::with_capacity(hull.len());
            for i in 0..hull.len() {
                let (a, b) = (pts[hull[i]], pts[hull[(i + 1) % hull.len()]]);
                let c = dev.segment(m, &a, &b).ok_or(GeodesicError::NotContained)?;
                edges.push(GeodesicPath::from_curve(m, c, tol));
            }
            edges
        }
        ChartKind::Cone => {
            let v = dev.chart.center.as_vertex(m).ok_or(GeodesicError::NotContained)?;
            cone_hull(m, v, &verts, tol)?
        }
    };
    let length = edges.iter().map(|e| e.length).sum();
    Ok(EnclosingCurve { edges, length })
}

/// Indices of the counter-clockwise convex hull, collinear points dropped.
pub fn convex_hull(pts: &[P2], tol: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| pts[a].x.total_cmp(&pts[b].x).then(pts[a].y.total_cmp(&pts[b].y)));
    idx.dedup_by(|a, b| (pts[*a] - pts[*b]).norm() <= tol);
    if idx.len() < 3 {
        return idx;
    }
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2 && orient(&pts[lower[lower.len() - 2]], &pts[lower[lower.len() - 1]], &pts[i]) <= tol * tol {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2 && orient(&pts[upper[upper.len() - 2]], &pts[upper[upper.len() - 1]], &pts[i]) <= tol * tol {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Taut polygon around the apex `v` through a subset of `verts`.
fn cone_hull(m: &IntrinsicMesh, v: u32, verts: &[SurfacePoint], tol: f64) -> Result<Vec<GeodesicPath>, GeodesicError> {
    let theta = m.angle_sum(v);
    let mut pol: Vec<(f64, f64, SurfacePoint)> = Vec::new();
    for p in verts {
        let (phi, r) = polar_at(m, v, p).ok_or(GeodesicError::NotContained)?;
        if r <= tol {
            return Err(GeodesicError::NotContained);
        }
        pol.push((phi, r, *p));
    }
    // The region must wind once around the apex.
    let n = pol.len();
    let mut turn = 0.0;
    for i in 0..n {
        let d = (pol[(i + 1) % n].0 - pol[i].0).rem_euclid(theta);
        if d >= PI {
            return Err(GeodesicError::NotContained);
        }
        turn += d;
    }
    if (turn - theta).abs() > 1e-6 {
        return Err(GeodesicError::NotContained);
    }
    let mut changed = true;
    while changed && pol.len() > 3 {
        changed = false;
        for i in 0..pol.len() {
            let n = pol.len();
            let (p, x, q) = (pol[(i + n - 1) % n], pol[i], pol[(i + 1) % n]);
            let d1 = (x.0 - p.0).rem_euclid(theta);
            let d2 = (q.0 - x.0).rem_euclid(theta);
            if d1 + d2 >= PI {
                continue;
            }
            let a = P2::from(V2::new(p.1, 0.0));
            let b = P2::from(rotate(&V2::new(x.1, 0.0), d1));
            let c = P2::from(rotate(&V2::new(q.1, 0.0), d1 + d2));
            if orient(&a, &b, &c) <= tol * tol {
                pol.remove(i);
                changed = true;
                break;
            }
        }
    }
    let n = pol.len();
    (0..n)
        .map(|i| {
            let c = cone_chord(m, v, &pol[i].2, &pol[(i + 1) % n].2).ok_or(GeodesicError::NotContained)?;
            Ok(GeodesicPath::from_curve(m, c, tol))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{fit_cone, Chart};
    use crate::geom::{barycentric, p2};
    use crate::mesh::golden;
    use crate::trace::{trace_from_vertex, TraceOptions};
    use crate::Tolerances;

    #[test]
    fn hull_of_points() {
        let pts = [p2(0.0, 0.0), p2(1.0, 0.0), p2(0.5, 0.2), p2(1.0, 1.0), p2(0.0, 1.0), p2(0.5, 1.0)];
        let h = convex_hull(&pts, 1e-12);
        assert_eq!(h, vec![0, 1, 3, 4]);
    }

    fn grid_at(m: &IntrinsicMesh, x: f64, y: f64) -> SurfacePoint {
        let i = x.floor() as usize;
        let j = y.floor() as usize;
        let (x0, y0) = (i as f64, j as f64);
        let lower = y - y0 <= x - x0;
        let f = (2 * (j * 10 + i) + usize::from(!lower)) as u32;
        let tri = if lower {
            [p2(x0, y0), p2(x0 + 1.0, y0), p2(x0 + 1.0, y0 + 1.0)]
        } else {
            [p2(x0, y0), p2(x0 + 1.0, y0 + 1.0), p2(x0, y0 + 1.0)]
        };
        SurfacePoint::new(m, f, barycentric(&tri, &p2(x, y)))
    }

    #[test]
    fn convex_square_is_its_own_minimizer() {
        let m = golden::grid_square(10, 10.0);
        let tol = Tolerances::for_mesh(&m);
        let c = [grid_at(&m, 4.95, 4.95), grid_at(&m, 5.05, 4.95), grid_at(&m, 5.05, 5.05), grid_at(&m, 4.95, 5.05)];
        let edges = (0..4).map(|i| super::super::shortest::shortest_path(&m, &c[i], &c[(i + 1) % 4]).unwrap()).collect();
        let k = PolygonRegion::from_edges(&m, edges, &tol).unwrap();
        let u = DiskNeighborhood::ball(&m, Chart::flat(grid_at(&m, 5.2, 5.1), 2.0), 1e-7).unwrap();
        let e = shortest_enclosing_curve(&m, &k, &u).unwrap();
        assert!((e.length - 0.4).abs() < 1e-12);
        assert_eq!(e.edges.len(), 4);
    }

    #[test]
    fn reflex_vertex_is_bridged() {
        let m = golden::grid_square(10, 10.0);
        let tol = Tolerances::for_mesh(&m);
        let c = [grid_at(&m, 4.9, 4.9), grid_at(&m, 5.0, 4.98), grid_at(&m, 5.1, 4.9), grid_at(&m, 5.1, 5.1), grid_at(&m, 4.9, 5.1)];
        let edges = (0..5).map(|i| super::super::shortest::shortest_path(&m, &c[i], &c[(i + 1) % 5]).unwrap()).collect();
        let k = PolygonRegion::from_edges(&m, edges, &tol).unwrap();
        let u = DiskNeighborhood::ball(&m, Chart::flat(grid_at(&m, 5.0, 5.0), 2.0), 1e-7).unwrap();
        let e = shortest_enclosing_curve(&m, &k, &u).unwrap();
        assert!((e.length - 0.8).abs() < 1e-12);
        let small = DiskNeighborhood::ball(&m, Chart::flat(grid_at(&m, 5.0, 5.0), 0.12), 1e-7).unwrap();
        assert_eq!(shortest_enclosing_curve(&m, &k, &small).unwrap_err(), GeodesicError::NotContained);
    }

    #[test]
    fn loop_around_cube_corner_matches_cone_unfolding() {
        // Six points at radius 0.1 around a corner of angle 3π/2, every π/4.
        let m = golden::cube();
        let tol = Tolerances::for_mesh(&m);
        let v = 0;
        let theta = m.angle_sum(v);
        let opt = TraceOptions::for_mesh(&m);
        let n = 6;
        let radii = [0.1, 0.04, 0.1, 0.04, 0.1, 0.04];
        let pts: Vec<SurfacePoint> =
            (0..n).map(|i| trace_from_vertex(&m, v, 0.1 + theta * i as f64 / n as f64, radii[i], &opt).end).collect();
        let edges = (0..n)
            .map(|i| GeodesicPath::from_curve(&m, cone_chord(&m, v, &pts[i], &pts[(i + 1) % n]).unwrap(), tol.len))
            .collect();
        let k = PolygonRegion::from_edges(&m, edges, &tol).unwrap();
        let u = DiskNeighborhood::from_development(fit_cone(&m, v, 0.3).unwrap());
        let e = shortest_enclosing_curve(&m, &k, &u).unwrap();
        // The short spokes are cut off: a triangle of chords spanning π/2 at radius 0.1.
        let expect = 3.0 * 2.0 * 0.1 * (PI / 4.0).sin();
        assert_eq!(e.edges.len(), 3);
        assert!((e.length - expect).abs() < 1e-12, "{}", e.length);
        assert!(e.length < k.perimeter());
    }
}
