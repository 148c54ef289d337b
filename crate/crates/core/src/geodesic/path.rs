//! Geodesic paths and their local straightness certificates.

use crate::curve::{Segment, SurfaceCurve};
use crate::geom::{angle_between, cross, V2};
use crate::mesh::{face_of, IntrinsicMesh};
use crate::point::{Location, SurfacePoint};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// What happens to a curve at one of its interior junctions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Joint {
    /// Junction inside a face or on an edge; `residual` is the unfolded turning angle.
    Straight { residual: f64 },
    /// Junction at a vertex; the two angles on either side of the curve.
    /// A side that contains a boundary gap is reported as infinite.
    Vertex { vertex: u32, left: f64, right: f64 },
    /// Consecutive segments do not share a face or edge.
    Broken,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub joints: Vec<Joint>,
}

impl Certificate {
    pub fn max_residual(&self) -> f64 {
        self.joints
            .iter()
            .map(|j| match j {
                Joint::Straight { residual } => *residual,
                Joint::Vertex { left, right, .. } => (PI - left.min(*right)).max(0.0),
                Joint::Broken => f64::INFINITY,
            })
            .fold(0.0, f64::max)
    }

    pub fn passes(&self, tol_angle: f64) -> bool {
        self.max_residual() <= tol_angle
    }

    /// Vertices the path passes through.
    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        self.joints.iter().filter_map(|j| match j {
            Joint::Vertex { vertex, .. } => Some(*vertex),
            _ => None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicPath {
    pub curve: SurfaceCurve,
    pub cert: Certificate,
    pub length: f64,
}

impl GeodesicPath {
    pub fn from_curve(m: &IntrinsicMesh, curve: SurfaceCurve, tol_len: f64) -> Self {
        let curve = curve.compact(m, tol_len * 1e-3);
        let cert = certify(m, &curve, tol_len);
        let length = curve.length(m);
        GeodesicPath { curve, cert, length }
    }

    pub fn start(&self, m: &IntrinsicMesh) -> SurfacePoint {
        self.curve.start(m)
    }

    pub fn end(&self, m: &IntrinsicMesh) -> SurfacePoint {
        self.curve.end(m)
    }

    pub fn reversed(&self, m: &IntrinsicMesh, tol_len: f64) -> Self {
        GeodesicPath::from_curve(m, self.curve.reversed(), tol_len)
    }

    pub fn is_certified(&self, tol_angle: f64) -> bool {
        self.cert.passes(tol_angle)
    }
}

fn seg_dir(m: &IntrinsicMesh, s: &Segment) -> V2 {
    let (p, q) = s.points(m);
    q - p
}

/// Angle coordinate at vertex-corner `h` of direction `d` (in the frame of `face_of(h)`).
fn corner_coord(m: &IntrinsicMesh, h: u32, d: &V2) -> f64 {
    let e = m.halfedge_dir(h);
    let a = if cross(&e, d) >= -1e-15 * d.norm() { angle_between(&e, d) } else { 0.0 };
    m.corner_offset(h) + a.min(m.corner_angle(h))
}

fn corner_index(b: &[f64; 3]) -> Option<usize> {
    b.iter().position(|&x| x == 1.0)
}

/// Certificate recomputed from the curve alone. Segments shorter than
/// `tol_len` are skipped so junction directions stay meaningful.
pub fn certify(m: &IntrinsicMesh, curve: &SurfaceCurve, tol_len: f64) -> Certificate {
    let segs: Vec<&Segment> = curve.segs.iter().filter(|s| s.length(m) > tol_len).collect();
    let mut joints = Vec::new();
    for w in segs.windows(2) {
        let (s0, s1) = (w[0], w[1]);
        let d0 = seg_dir(m, s0);
        let d1 = seg_dir(m, s1);
        let end = SurfacePoint::raw(s0.face, snap(s0.b));
        let start = SurfacePoint::raw(s1.face, snap(s1.a));
        let joint = match end.location(m) {
            Location::Vertex(v) => {
                let (Some(k0), Some(k1)) = (corner_index(&end.bary), corner_index(&start.bary)) else {
                    joints.push(Joint::Broken);
                    continue;
                };
                let h0 = 3 * s0.face + k0 as u32;
                let h1 = 3 * s1.face + k1 as u32;
                if m.tail(h1) != v {
                    Joint::Broken
                } else {
                    let psi = corner_coord(m, h0, &(-d0));
                    let phi = corner_coord(m, h1, &d1);
                    let theta = m.angle_sum(v);
                    if m.is_boundary_vertex(v) {
                        let a = (phi - psi).abs();
                        let (left, right) = if phi >= psi { (a, f64::INFINITY) } else { (f64::INFINITY, a) };
                        Joint::Vertex { vertex: v, left, right }
                    } else {
                        let a = (phi - psi).rem_euclid(theta);
                        Joint::Vertex { vertex: v, left: a, right: theta - a }
                    }
                }
            }
            Location::Edge { h, .. } if s1.face != s0.face => match m.twin(h) {
                Some(tw) if face_of(tw) == s1.face => {
                    let d1u = m.transition(h).rotation.inverse() * d1;
                    Joint::Straight { residual: angle_between(&d0, &d1u) }
                }
                _ => Joint::Broken,
            },
            _ => {
                if s1.face == s0.face {
                    Joint::Straight { residual: angle_between(&d0, &d1) }
                } else {
                    Joint::Broken
                }
            }
        };
        joints.push(joint);
    }
    Certificate { joints }
}

/// Angles at the junction of two consecutive segments.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Turn {
    /// Angle on the left of the curve, from the outgoing direction counter-clockwise
    /// to the reversed incoming one.
    pub left: f64,
    /// Total angle around the junction point.
    pub total: f64,
    pub on_boundary: bool,
}

/// Angles at the point where `s0` ends and `s1` starts; `None` if they do not meet.
pub fn turn_at(m: &IntrinsicMesh, s0: &Segment, s1: &Segment) -> Option<Turn> {
    let d0 = seg_dir(m, s0);
    let d1 = seg_dir(m, s1);
    if d0.norm() == 0.0 || d1.norm() == 0.0 {
        return None;
    }
    let end = SurfacePoint::raw(s0.face, snap(s0.b));
    match end.location(m) {
        Location::Vertex(v) => {
            let k0 = corner_index(&end.bary)?;
            let k1 = corner_index(&snap(s1.a))?;
            let h0 = 3 * s0.face + k0 as u32;
            let h1 = 3 * s1.face + k1 as u32;
            if m.tail(h1) != v {
                return None;
            }
            let psi = corner_coord(m, h0, &(-d0));
            let phi = corner_coord(m, h1, &d1);
            let theta = m.angle_sum(v);
            let bnd = m.is_boundary_vertex(v);
            let left = if bnd { psi - phi } else { (psi - phi).rem_euclid(theta) };
            Some(Turn { left, total: theta, on_boundary: bnd })
        }
        Location::Edge { h, .. } => {
            let bnd = m.is_boundary_halfedge(h);
            let d1u = if s1.face == s0.face {
                d1
            } else {
                let tw = m.twin(h)?;
                if face_of(tw) != s1.face {
                    return None;
                }
                m.transition(h).rotation.inverse() * d1
            };
            let total = if bnd { PI } else { crate::geom::TAU };
            Some(Turn { left: crate::geom::ccw_angle(&d1u, &(-d0)), total, on_boundary: bnd })
        }
        Location::Face => {
            (s1.face == s0.face).then(|| Turn { left: crate::geom::ccw_angle(&d1, &(-d0)), total: crate::geom::TAU, on_boundary: false })
        }
    }
}

fn snap(b: [f64; 3]) -> [f64; 3] {
    let mut b = b;
    for x in &mut b {
        if x.abs() < 1e-10 {
            *x = 0.0;
        }
        if (*x - 1.0).abs() < 1e-10 {
            *x = 1.0;
        }
    }
    if b.contains(&1.0) {
        for x in &mut b {
            if *x != 1.0 {
                *x = 0.0;
            }
        }
    }
    b
}
