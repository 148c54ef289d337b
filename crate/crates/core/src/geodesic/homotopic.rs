//! Shortest curves in a fixed homotopy class inside a disk.
//!
//! In a disk every two paths with the same endpoints are homotopic, so the
//! shortest homotopic curve is the shortest path of the disk's own mesh. That
//! path may run along the disk boundary, bending only at reflex boundary corners.

use super::path::GeodesicPath;
use super::shortest::shortest_path;
use super::GeodesicError;
use crate::curve::SurfaceCurve;
use crate::mesh::IntrinsicMesh;
use crate::overlay::Component;

/// Shortest curve homotopic to `c` with fixed endpoints inside the component `r`,
/// returned in the coordinates of the parent mesh.
pub fn shortest_homotopic(m: &IntrinsicMesh, c: &SurfaceCurve, r: &Component) -> Result<GeodesicPath, GeodesicError> {
    if !r.is_disk() {
        return Err(GeodesicError::NotADisk);
    }
    let tol = 1e-9 * m.scale();
    let a = r.locate(m, &c.start(m), 10.0 * tol).ok_or(GeodesicError::NotContained)?;
    let b = r.locate(m, &c.end(m), 10.0 * tol).ok_or(GeodesicError::NotContained)?;
    let g = shortest_path(&r.mesh, &a, &b)?;
    let length = c.length(m);
    let curve = r.curve_to_parent(m, &g.curve);
    let out = GeodesicPath::from_curve(m, curve, tol);
    if out.length > length + tol {
        // Never longer than the input.
        return Ok(GeodesicPath::from_curve(m, c.clone(), tol));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Segment;
    use crate::geom::{barycentric, p2, P2};
    use crate::mesh::golden;
    use crate::overlay::cut_along_graph;
    use crate::point::SurfacePoint;
    use crate::trace::{trace, TraceOptions};

    fn global(f: u32) -> [P2; 3] {
        if f == 0 {
            [p2(0.0, 0.0), p2(1.0, 0.0), p2(1.0, 1.0)]
        } else {
            [p2(0.0, 0.0), p2(1.0, 1.0), p2(0.0, 1.0)]
        }
    }

    /// Straight plane polyline on the golden square as a surface curve.
    fn polyline(m: &IntrinsicMesh, pts: &[P2]) -> SurfaceCurve {
        let opt = TraceOptions::for_mesh(m);
        let mut segs: Vec<Segment> = Vec::new();
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let probe = a + (b - a) * 1e-6;
            let f = if probe.y <= probe.x { 0 } else { 1 };
            let ba = barycentric(&global(f), &a);
            let bb = barycentric(&global(f), &b);
            let d = crate::geom::from_barycentric(m.layout(f), &bb) - crate::geom::from_barycentric(m.layout(f), &ba);
            segs.extend(trace(m, f, ba, d, (b - a).norm(), &opt).curve.segs);
        }
        SurfaceCurve::new(segs)
    }

    #[test]
    fn staircase_becomes_straight() {
        let m = golden::flat_square();
        let c = polyline(&m, &[p2(0.1, 0.2), p2(0.3, 0.2), p2(0.3, 0.4), p2(0.5, 0.4), p2(0.5, 0.6)]);
        let comps = cut_along_graph(&m, &[]).unwrap();
        let g = shortest_homotopic(&m, &c, &comps[0]).unwrap();
        assert!((g.length - (0.4f64.powi(2) * 2.0).sqrt()).abs() < 1e-12);
        let again = shortest_homotopic(&m, &g.curve, &comps[0]).unwrap();
        assert!((again.length - g.length).abs() < 1e-9);
    }

    #[test]
    fn chord_is_unchanged() {
        let m = golden::flat_square();
        let c = polyline(&m, &[p2(0.2, 0.1), p2(0.8, 0.7)]);
        let comps = cut_along_graph(&m, &[]).unwrap();
        let g = shortest_homotopic(&m, &c, &comps[0]).unwrap();
        assert!((g.length - c.length(&m)).abs() < 1e-12);
    }

    #[test]
    fn path_wraps_around_a_slit() {
        // Slit from the left side to (0.5, 0.5); the path must go around its tip.
        let m = golden::flat_square();
        let slit = polyline(&m, &[p2(0.0, 0.5), p2(0.5, 0.5)]);
        let comps = cut_along_graph(&m, &[slit]).unwrap();
        assert_eq!(comps.len(), 1);
        let c = polyline(&m, &[p2(0.25, 0.6), p2(0.7, 0.6), p2(0.7, 0.4), p2(0.25, 0.4)]);
        let g = shortest_homotopic(&m, &c, &comps[0]).unwrap();
        let expect = 2.0 * (0.25f64 * 0.25 + 0.1 * 0.1).sqrt();
        assert!((g.length - expect).abs() < 1e-9, "{} vs {}", g.length, expect);
        let mid = g.curve.point_at(&m, 0.5 * g.length);
        assert!(mid.same(&m, &SurfacePoint::new(&m, 0, barycentric(&global(0), &p2(0.5, 0.5))), 1e-9));
    }

    #[test]
    fn annulus_is_rejected() {
        let m = golden::flat_square();
        let ring = polyline(&m, &[p2(0.4, 0.4), p2(0.6, 0.4), p2(0.6, 0.6), p2(0.4, 0.6), p2(0.4, 0.4)]);
        let comps = cut_along_graph(&m, &[ring.clone()]).unwrap();
        let outer = comps.iter().find(|c| c.right_of(0)).unwrap();
        let c = polyline(&m, &[p2(0.1, 0.1), p2(0.2, 0.1)]);
        assert_eq!(shortest_homotopic(&m, &c, outer).unwrap_err(), GeodesicError::NotADisk);
    }
}
