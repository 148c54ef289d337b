//! Straight-ahead walks (the exponential map) across faces.

use crate::curve::{Segment, SurfaceCurve};
use crate::geom::{barycentric, ccw_angle, cross, from_barycentric, P2, TAU, V2};
use crate::mesh::{face_of, IntrinsicMesh};
use crate::point::{corner_bary, edge_bary, SurfacePoint};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Stop {
    /// The requested length was reached.
    Length,
    /// The walk ran into a vertex it may not cross.
    Vertex(u32),
    /// The walk left the surface through boundary halfedge `h`.
    Boundary(u32),
    /// Numerical trouble or step cap.
    Cap,
}

#[derive(Clone, Debug)]
pub struct Trace {
    pub curve: SurfaceCurve,
    pub end: SurfacePoint,
    pub stop: Stop,
    /// Face and unit direction at the end of the walk.
    pub face: u32,
    pub dir: V2,
    pub travelled: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct TraceOptions {
    /// Continue straight through interior vertices of total angle 2π.
    pub pass_flat: bool,
    pub tol_len: f64,
    pub tol_angle: f64,
    pub max_steps: usize,
}

impl TraceOptions {
    pub fn for_mesh(m: &IntrinsicMesh) -> Self {
        TraceOptions { pass_flat: true, tol_len: 1e-9 * m.scale(), tol_angle: 1e-7, max_steps: 1_000_000 }
    }
}

/// Angle coordinate at the vertex of corner `h` of a direction `d` given in the
/// frame of `face_of(h)`, unwrapped towards the corner.
fn corner_relative_angle(m: &IntrinsicMesh, h: u32, d: &V2) -> f64 {
    let raw = ccw_angle(&m.halfedge_dir(h), d);
    let corner = m.corner_angle(h);
    let off = m.corner_offset(h);
    if raw <= corner {
        off + raw
    } else if raw - corner < TAU - raw {
        off + raw
    } else {
        off - (TAU - raw)
    }
}

/// Walk from `(face, bary)` in direction `dir` (given in the frame of `face`) for `length`.
pub fn trace(m: &IntrinsicMesh, face: u32, bary: [f64; 3], dir: V2, length: f64, opt: &TraceOptions) -> Trace {
    let mut f = face;
    let mut b = bary;
    let mut d = dir.normalize();
    let mut rem = length;
    let mut segs: Vec<Segment> = Vec::new();

    let finish = |segs: Vec<Segment>, f: u32, b: [f64; 3], d: V2, stop: Stop, rem: f64| {
        let curve = if segs.is_empty() {
            SurfaceCurve::new(vec![Segment { face: f, a: b, b }])
        } else {
            SurfaceCurve::new(segs)
        };
        Trace { curve, end: SurfacePoint::new(m, f, b), stop, face: f, dir: d, travelled: length - rem.max(0.0) }
    };

    // Move the start into the face the direction actually points into.
    if let Some(i) = b.iter().position(|&x| x == 1.0) {
        let h = 3 * f + i as u32;
        let v = m.tail(h);
        let raw = ccw_angle(&m.halfedge_dir(h), &d);
        if raw > m.corner_angle(h) {
            let phi = corner_relative_angle(m, h, &d);
            let theta = m.angle_sum(v);
            if m.is_boundary_vertex(v) && (phi < -opt.tol_angle || phi > theta + opt.tol_angle) {
                return finish(segs, f, b, d, Stop::Boundary(m.vertex_halfedge(v)), rem);
            }
            let (h2, d2) = m.direction_at(v, phi);
            f = face_of(h2);
            b = corner_bary((h2 % 3) as usize);
            d = d2;
        }
    } else if let Some(z) = b.iter().position(|&x| x == 0.0) {
        let i = (z + 1) % 3;
        let h = 3 * f + i as u32;
        let (p0, p1) = m.halfedge_points(h);
        if cross(&d, &(p1 - p0)) > 0.0 {
            match m.twin(h) {
                Some(tw) => {
                    let t = b[(i + 1) % 3];
                    d = m.transition(h).rotation * d;
                    f = face_of(tw);
                    b = edge_bary((tw % 3) as usize, 1.0 - t);
                }
                None => return finish(segs, f, b, d, Stop::Boundary(h), rem),
            }
        }
    }

    for _ in 0..opt.max_steps {
        let l = m.layout(f);
        let pos = from_barycentric(l, &b);
        let mut best: Option<(f64, usize, f64)> = None;
        for i in 0..3 {
            let e = l[(i + 1) % 3] - l[i];
            let c = cross(&d, &e);
            if c <= 0.0 {
                continue;
            }
            let w = l[i] - pos;
            let s = cross(&w, &e) / c;
            let u = cross(&w, &d) / c;
            if best.map_or(true, |bb| s < bb.0) {
                best = Some((s, i, u));
            }
        }
        let Some((s, i, u)) = best else {
            return finish(segs, f, b, d, Stop::Cap, rem);
        };
        let s = s.max(0.0);
        if s >= rem {
            let q = pos + d * rem;
            let qb = clamp_bary(barycentric(l, &q));
            segs.push(Segment { face: f, a: b, b: qb });
            return finish(segs, f, qb, d, Stop::Length, 0.0);
        }
        let elen = (l[(i + 1) % 3] - l[i]).norm();
        let u = u.clamp(0.0, 1.0);
        rem -= s;
        let vertex_corner = if u * elen <= opt.tol_len {
            Some(i)
        } else if (1.0 - u) * elen <= opt.tol_len {
            Some((i + 1) % 3)
        } else {
            None
        };
        if let Some(k) = vertex_corner {
            let vb = corner_bary(k);
            if s > 0.0 {
                segs.push(Segment { face: f, a: b, b: vb });
            }
            let h = 3 * f + k as u32;
            let v = m.tail(h);
            let flat = !m.is_boundary_vertex(v) && (m.angle_sum(v) - TAU).abs() <= opt.tol_angle;
            if !(opt.pass_flat && flat) {
                return finish(segs, f, vb, d, Stop::Vertex(v), rem);
            }
            let psi = corner_relative_angle(m, h, &(-d));
            let (h2, d2) = m.direction_at(v, psi + std::f64::consts::PI);
            f = face_of(h2);
            b = corner_bary((h2 % 3) as usize);
            d = d2;
            continue;
        }
        let eb = edge_bary(i, u);
        segs.push(Segment { face: f, a: b, b: eb });
        let h = 3 * f + i as u32;
        match m.twin(h) {
            Some(tw) => {
                d = m.transition(h).rotation * d;
                f = face_of(tw);
                b = edge_bary((tw % 3) as usize, 1.0 - u);
            }
            None => return finish(segs, f, eb, d, Stop::Boundary(h), rem),
        }
    }
    finish(segs, f, b, d, Stop::Cap, rem)
}

/// Walk from vertex `v` in the direction with angle coordinate `phi`.
pub fn trace_from_vertex(m: &IntrinsicMesh, v: u32, phi: f64, length: f64, opt: &TraceOptions) -> Trace {
    let (h, d) = m.direction_at(v, phi);
    trace(m, face_of(h), corner_bary((h % 3) as usize), d, length, opt)
}

fn clamp_bary(mut b: [f64; 3]) -> [f64; 3] {
    for x in &mut b {
        if *x < 0.0 {
            *x = 0.0;
        }
    }
    let s: f64 = b.iter().sum();
    [b[0] / s, b[1] / s, b[2] / s]
}

/// Position of the end of a trace in the frame of its final face.
pub fn end_position(m: &IntrinsicMesh, t: &Trace) -> P2 {
    t.end.in_face(m, t.face).map(|b| from_barycentric(m.layout(t.face), &b)).unwrap_or(t.end.position(m))
}
