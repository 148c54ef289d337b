//! Planar helpers used inside face frames and unfoldings.

use std::f64::consts::PI;

pub type P2 = nalgebra::Point2<f64>;
pub type V2 = nalgebra::Vector2<f64>;
pub type Iso = nalgebra::Isometry2<f64>;

pub const TAU: f64 = 2.0 * PI;

#[inline]
pub fn p2(x: f64, y: f64) -> P2 {
    P2::new(x, y)
}

#[inline]
pub fn cross(a: &V2, b: &V2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Twice the signed area of `abc`; positive when counter-clockwise.
#[inline]
pub fn orient(a: &P2, b: &P2, c: &P2) -> f64 {
    cross(&(b - a), &(c - a))
}

/// Counter-clockwise angle from `a` to `b`, in `[0, 2π)`.
pub fn ccw_angle(a: &V2, b: &V2) -> f64 {
    let t = cross(a, b).atan2(a.dot(b));
    if t < 0.0 {
        t + TAU
    } else {
        t
    }
}

/// Unsigned angle between two vectors, in `[0, π]`.
pub fn angle_between(a: &V2, b: &V2) -> f64 {
    cross(a, b).abs().atan2(a.dot(b))
}

pub fn rotate(v: &V2, angle: f64) -> V2 {
    let (s, c) = angle.sin_cos();
    V2::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

pub fn polygon_area(poly: &[P2]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for i in 0..n {
        let a = &poly[i];
        let b = &poly[(i + 1) % n];
        s += a.x * b.y - a.y * b.x;
    }
    0.5 * s
}

pub fn triangle_area(a: &P2, b: &P2, c: &P2) -> f64 {
    0.5 * orient(a, b, c)
}

/// Barycentric coordinates of `p` with respect to `tri`.
pub fn barycentric(tri: &[P2; 3], p: &P2) -> [f64; 3] {
    let d = orient(&tri[0], &tri[1], &tri[2]);
    let l0 = orient(p, &tri[1], &tri[2]) / d;
    let l1 = orient(&tri[0], p, &tri[2]) / d;
    [l0, l1, 1.0 - l0 - l1]
}

pub fn from_barycentric(tri: &[P2; 3], b: &[f64; 3]) -> P2 {
    P2::from(tri[0].coords * b[0] + tri[1].coords * b[1] + tri[2].coords * b[2])
}

/// Distance from `p` to the closed segment `ab`, with the segment parameter of the foot.
pub fn point_segment(p: &P2, a: &P2, b: &P2) -> (f64, f64) {
    let e = b - a;
    let l2 = e.norm_squared();
    if l2 == 0.0 {
        return ((p - a).norm(), 0.0);
    }
    let t = ((p - a).dot(&e) / l2).clamp(0.0, 1.0);
    ((p - (a + e * t)).norm(), t)
}

/// Proper or touching intersection of segments `p0p1` and `q0q1`.
/// Returns the parameters along both segments; parallel pairs return `None`.
pub fn segment_intersection(p0: &P2, p1: &P2, q0: &P2, q1: &P2, eps: f64) -> Option<(f64, f64)> {
    let r = p1 - p0;
    let s = q1 - q0;
    let d = cross(&r, &s);
    let scale = r.norm() * s.norm();
    if d.abs() <= 1e-14 * scale {
        return None;
    }
    let w = q0 - p0;
    let t = cross(&w, &s) / d;
    let u = cross(&w, &r) / d;
    let et = eps / r.norm().max(1e-300);
    let eu = eps / s.norm().max(1e-300);
    if t < -et || t > 1.0 + et || u < -eu || u > 1.0 + eu {
        return None;
    }
    Some((t.clamp(0.0, 1.0), u.clamp(0.0, 1.0)))
}

/// Clip a polygon against a convex counter-clockwise polygon (Sutherland–Hodgman).
pub fn clip_convex(subject: &[P2], clip: &[P2]) -> Vec<P2> {
    let mut out: Vec<P2> = subject.to_vec();
    let n = clip.len();
    for i in 0..n {
        if out.is_empty() {
            break;
        }
        let a = clip[i];
        let b = clip[(i + 1) % n];
        let input = std::mem::take(&mut out);
        let m = input.len();
        for j in 0..m {
            let cur = input[j];
            let prev = input[(j + m - 1) % m];
            let cin = orient(&a, &b, &cur) >= 0.0;
            let pin = orient(&a, &b, &prev) >= 0.0;
            if cin {
                if !pin {
                    out.push(line_cut(&a, &b, &prev, &cur));
                }
                out.push(cur);
            } else if pin {
                out.push(line_cut(&a, &b, &prev, &cur));
            }
        }
    }
    out
}

fn line_cut(a: &P2, b: &P2, p: &P2, q: &P2) -> P2 {
    let dp = orient(a, b, p);
    let dq = orient(a, b, q);
    let t = dp / (dp - dq);
    p + (q - p) * t
}

/// Area of the intersection of two counter-clockwise triangles.
pub fn triangle_overlap(t1: &[P2; 3], t2: &[P2; 3]) -> f64 {
    let c = clip_convex(t1, t2);
    if c.len() < 3 {
        0.0
    } else {
        polygon_area(&c).max(0.0)
    }
}

/// Whether `p` lies in the closed triangle, allowing `tol` of slack in barycentric units.
pub fn in_triangle(tri: &[P2; 3], p: &P2, tol: f64) -> bool {
    let b = barycentric(tri, p);
    b.iter().all(|&x| x >= -tol)
}

/// Triangulate a simple counter-clockwise polygon by ear clipping; returns index triples.
pub fn ear_clip(poly: &[P2]) -> Vec<[usize; 3]> {
    let mut idx: Vec<usize> = (0..poly.len()).collect();
    let mut out = Vec::new();
    let mut guard = 0;
    while idx.len() > 3 && guard < 4 * poly.len() * poly.len() {
        guard += 1;
        let n = idx.len();
        let mut clipped = false;
        for k in 0..n {
            let (a, b, c) = (idx[(k + n - 1) % n], idx[k], idx[(k + 1) % n]);
            if orient(&poly[a], &poly[b], &poly[c]) <= 0.0 {
                continue;
            }
            let tri = [poly[a], poly[b], poly[c]];
            let blocked = idx.iter().any(|&j| j != a && j != b && j != c && in_triangle(&tri, &poly[j], 1e-12));
            if blocked {
                continue;
            }
            out.push([a, b, c]);
            idx.remove(k);
            clipped = true;
            break;
        }
        if !clipped {
            // Only collinear runs are left; drop the flattest vertex.
            let k = (0..n)
                .min_by(|&i, &j| {
                    let f = |k: usize| orient(&poly[idx[(k + n - 1) % n]], &poly[idx[k]], &poly[idx[(k + 1) % n]]).abs();
                    f(i).total_cmp(&f(j))
                })
                .unwrap_or(0);
            idx.remove(k);
        }
    }
    if idx.len() == 3 && orient(&poly[idx[0]], &poly[idx[1]], &poly[idx[2]]) > 0.0 {
        out.push([idx[0], idx[1], idx[2]]);
    }
    out
}
