//! Winding numbers of closed curves in a disk.
//!
//! A ray is shot from the point to the boundary of the disk and the signed
//! crossings of the curve with it are counted. Rays that pass too close to a
//! curve vertex, or that run into a vertex they cannot cross, are discarded and
//! another direction is tried.

use crate::curve::SurfaceCurve;
use crate::geom::{cross, rotate, V2};
use crate::mesh::IntrinsicMesh;
use crate::point::SurfacePoint;
use crate::trace::{trace, Stop, TraceOptions};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WindingError {
    #[error("point lies on the curve")]
    PointOnCurve,
    #[error("curve is not closed")]
    NotClosed,
    #[error("no clean ray to the boundary was found")]
    NoRay,
}

/// Winding number of closed curve `c` around `p`, both given on the disk mesh `u`.
pub fn winding_number(u: &IntrinsicMesh, c: &SurfaceCurve, p: &SurfacePoint) -> Result<i64, WindingError> {
    let tol = 1e-9 * u.scale();
    if !c.is_closed(u, 1e-7 * u.scale()) {
        return Err(WindingError::NotClosed);
    }
    for s in &c.segs {
        if let Some(b) = p.in_face(u, s.face) {
            let (a, e) = s.points(u);
            let x = crate::geom::from_barycentric(u.layout(s.face), &b);
            if crate::geom::point_segment(&x, &a, &e).0 <= tol {
                return Err(WindingError::PointOnCurve);
            }
        }
    }
    let opt = TraceOptions { pass_flat: true, ..TraceOptions::for_mesh(u) };
    let far = 1e3 * (u.area().sqrt() + u.edge_lengths().iter().sum::<f64>());
    // Directions by the golden angle avoid systematic alignments.
    for k in 0..64 {
        let ang = 0.3 + 2.399_963_229_728_653 * k as f64;
        let (face, bary, dir) = start_frame(u, p, ang);
        let ray = trace(u, face, bary, dir, far, &opt);
        if !matches!(ray.stop, Stop::Boundary(_)) {
            continue;
        }
        if let Some(w) = count_crossings(u, c, &ray.curve) {
            return Ok(w);
        }
    }
    Err(WindingError::NoRay)
}

fn start_frame(u: &IntrinsicMesh, p: &SurfacePoint, ang: f64) -> (u32, [f64; 3], V2) {
    if let Some(v) = p.as_vertex(u) {
        let theta = u.angle_sum(v);
        let phi = (ang / std::f64::consts::TAU).rem_euclid(1.0) * theta;
        let (h, d) = u.direction_at(v, phi);
        return (h / 3, crate::point::corner_bary((h % 3) as usize), d);
    }
    (p.face, p.bary, rotate(&V2::new(1.0, 0.0), ang))
}

/// Signed crossings, or `None` when a crossing is too close to an endpoint of either curve.
fn count_crossings(u: &IntrinsicMesh, c: &SurfaceCurve, ray: &SurfaceCurve) -> Option<i64> {
    let eps = 1e-9;
    let mut w = 0i64;
    for r in &ray.segs {
        let (r0, r1) = r.points(u);
        let rd = r1 - r0;
        if rd.norm() == 0.0 {
            continue;
        }
        for s in &c.segs {
            if s.face != r.face {
                continue;
            }
            let (s0, s1) = s.points(u);
            let sd = s1 - s0;
            if sd.norm() == 0.0 {
                continue;
            }
            let den = cross(&rd, &sd);
            let w0 = s0 - r0;
            if den.abs() <= 1e-14 * rd.norm() * sd.norm() {
                // Parallel: reject if collinear and overlapping.
                if cross(&rd, &w0).abs() <= eps * rd.norm() * rd.norm().max(sd.norm()) {
                    let t0 = w0.dot(&rd) / rd.norm_squared();
                    let t1 = (s1 - r0).dot(&rd) / rd.norm_squared();
                    if t0.max(t1) >= -eps && t0.min(t1) <= 1.0 + eps {
                        return None;
                    }
                }
                continue;
            }
            let t = cross(&w0, &sd) / den;
            let q = cross(&w0, &rd) / den;
            let lt = eps * (1.0 + 1.0 / rd.norm());
            let lq = eps * (1.0 + 1.0 / sd.norm());
            if t < -lt || t > 1.0 + lt || q < -lq || q > 1.0 + lq {
                continue;
            }
            let inside_t = t > lt && t < 1.0 - lt;
            let inside_q = q > lq && q < 1.0 - lq;
            if !inside_t || !inside_q {
                return None;
            }
            w += if den > 0.0 { 1 } else { -1 };
        }
    }
    Some(w)
}
