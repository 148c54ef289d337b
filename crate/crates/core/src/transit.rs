//! Transit points: points in the interior of some geodesic.

use crate::geom::{TAU, V2};
use crate::mesh::IntrinsicMesh;
use crate::point::{Location, SurfacePoint};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TransitWitness {
    /// A straight segment through the point in direction `dir` of face `face`.
    Straight { face: u32, dir: V2 },
    /// Two directions at a vertex, by angle coordinate, with at least π on each side.
    Vertex { vertex: u32, phi_in: f64, phi_out: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transit {
    pub transit: bool,
    pub witness: Option<TransitWitness>,
}

pub fn is_transit_point(m: &IntrinsicMesh, p: &SurfacePoint, tol_angle: f64) -> Transit {
    match p.location(m) {
        Location::Face => Transit {
            transit: true,
            witness: Some(TransitWitness::Straight { face: p.face, dir: V2::new(1.0, 0.0) }),
        },
        Location::Edge { h, .. } => {
            // Along the edge itself; on the boundary this is the boundary geodesic.
            Transit { transit: true, witness: Some(TransitWitness::Straight { face: h / 3, dir: m.halfedge_dir(h) }) }
        }
        Location::Vertex(v) => {
            let theta = m.angle_sum(v);
            if m.is_boundary_vertex(v) {
                if theta >= PI - tol_angle {
                    Transit { transit: true, witness: Some(TransitWitness::Vertex { vertex: v, phi_in: 0.0, phi_out: theta }) }
                } else {
                    Transit { transit: false, witness: None }
                }
            } else if theta >= TAU - tol_angle {
                Transit {
                    transit: true,
                    witness: Some(TransitWitness::Vertex { vertex: v, phi_in: 0.0, phi_out: 0.5 * theta }),
                }
            } else {
                Transit { transit: false, witness: None }
            }
        }
    }
}

/// Check a witness: both sides of the turn are at least π (or the path is straight).
pub fn check_witness(m: &IntrinsicMesh, w: &TransitWitness, tol_angle: f64) -> bool {
    match *w {
        TransitWitness::Straight { .. } => true,
        TransitWitness::Vertex { vertex, phi_in, phi_out } => {
            let theta = m.angle_sum(vertex);
            let a = (phi_out - phi_in).abs();
            if m.is_boundary_vertex(vertex) {
                a >= PI - tol_angle
            } else {
                a >= PI - tol_angle && theta - a >= PI - tol_angle
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::golden;

    #[test]
    fn face_point_is_transit() {
        let m = golden::flat_square();
        let p = SurfacePoint::new(&m, 0, [0.2, 0.3, 0.5]);
        let t = is_transit_point(&m, &p, 1e-7);
        assert!(t.transit);
    }

    #[test]
    fn cube_corner_is_not() {
        let m = golden::cube();
        for v in 0..8 {
            assert!(!is_transit_point(&m, &SurfacePoint::vertex(&m, v), 1e-7).transit);
        }
    }

    #[test]
    fn saddle_centre_is_transit() {
        let m = golden::saddle();
        let c = (0..m.n_vertices() as u32).find(|&v| !m.is_boundary_vertex(v)).unwrap();
        let t = is_transit_point(&m, &SurfacePoint::vertex(&m, c), 1e-7);
        assert!(t.transit);
        assert!(check_witness(&m, &t.witness.unwrap(), 1e-7));
    }

    #[test]
    fn square_corner_is_not_but_boundary_edge_is() {
        let m = golden::flat_square();
        assert!(!is_transit_point(&m, &SurfacePoint::vertex(&m, 0), 1e-7).transit);
        assert!(is_transit_point(&m, &SurfacePoint::on_halfedge(&m, 0, 0.3), 1e-7).transit);
    }

    /// Brute force: p is transit iff some pair of nearby points on opposite sides
    /// has a shortest path through p (distance additivity).
    #[test]
    fn agrees_with_distance_additivity() {
        use crate::geodesic::shortest::shortest_path;
        let r = 0.1;
        for (m, v) in [(golden::cube(), 0u32), (golden::flat_torus(), 0u32)] {
            let opt = crate::trace::TraceOptions::for_mesh(&m);
            let theta = m.angle_sum(v);
            let mut found = false;
            for k in 0..16 {
                let phi = theta * k as f64 / 16.0;
                let a = crate::trace::trace_from_vertex(&m, v, phi, r, &opt).end;
                let b = crate::trace::trace_from_vertex(&m, v, phi + 0.5 * theta, r, &opt).end;
                let d = shortest_path(&m, &a, &b).unwrap().length;
                if d >= 2.0 * r - 1e-9 {
                    found = true;
                }
            }
            let t = is_transit_point(&m, &SurfacePoint::vertex(&m, v), 1e-7).transit;
            assert_eq!(found, t);
        }
    }
}
