//! Intersections between geodesics and their normalization.
//!
//! Two shortest paths that meet twice bound a region only if the pieces
//! between the meeting points have equal length. Replacing the piece of one by
//! the piece of the other leaves a shortest path whose intersection with the
//! other is a single arc. That splice, taken between the first and the last
//! meeting point, is all the normalization here does.

use super::path::GeodesicPath;
use super::shortest::shortest_path;
use super::GeodesicError;
use crate::curve::{Segment, SurfaceCurve};
use crate::geom::{cross, segment_intersection, P2};
use crate::mesh::{face_of, IntrinsicMesh};
use crate::point::{Location, SurfacePoint};
use crate::region::PolygonRegion;
use smallvec::SmallVec;

/// One connected piece of `|a| ∩ |b|`, as arclength intervals on each curve.
/// `b.0` corresponds to `a.0` and `b.1` to `a.1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Overlap {
    pub a: (f64, f64),
    pub b: (f64, f64),
}

impl Overlap {
    pub fn is_point(&self, tol: f64) -> bool {
        self.a.1 - self.a.0 <= tol
    }
}

/// Placements of a segment: its own face, and the neighbouring face when it runs along an edge.
fn placements(m: &IntrinsicMesh, s: &Segment) -> SmallVec<[(u32, P2, P2); 2]> {
    let (p, q) = s.points(m);
    let mut out = SmallVec::new();
    out.push((s.face, p, q));
    for k in 0..3 {
        if s.a[k] == 0.0 && s.b[k] == 0.0 {
            let h = 3 * s.face + ((k + 1) % 3) as u32;
            if let Some(t) = m.twin(h) {
                let tr = m.transition(h);
                out.push((face_of(t), tr * p, tr * q));
            }
        }
    }
    out
}

fn cumulative(m: &IntrinsicMesh, c: &SurfaceCurve) -> Vec<f64> {
    let mut acc = vec![0.0];
    for s in &c.segs {
        acc.push(acc.last().unwrap() + s.length(m));
    }
    acc
}

/// Connected components of `|a| ∩ |b|` ordered along `a`.
pub fn intersection_components(m: &IntrinsicMesh, a: &SurfaceCurve, b: &SurfaceCurve, tol: f64) -> Vec<Overlap> {
    let ca = cumulative(m, a);
    let cb = cumulative(m, b);
    let mut raw: Vec<Overlap> = Vec::new();
    let bplace: Vec<_> = b.segs.iter().map(|s| placements(m, s)).collect();
    for (i, sa) in a.segs.iter().enumerate() {
        let (p0, p1) = sa.points(m);
        let la = ca[i + 1] - ca[i];
        for (j, pl) in bplace.iter().enumerate() {
            let lb = cb[j + 1] - cb[j];
            for &(f, q0, q1) in pl {
                if f != sa.face {
                    continue;
                }
                if let Some(o) = segment_overlap(&p0, &p1, &q0, &q1, tol) {
                    raw.push(Overlap {
                        a: (ca[i] + o.0 * la, ca[i] + o.1 * la),
                        b: (cb[j] + o.2 * lb, cb[j] + o.3 * lb),
                    });
                }
            }
        }
    }
    // Shared vertices reached through different faces.
    let va = vertex_params(m, a, &ca);
    let vb = vertex_params(m, b, &cb);
    for &(v, s) in &va {
        for &(w, t) in &vb {
            if v == w {
                raw.push(Overlap { a: (s, s), b: (t, t) });
            }
        }
    }
    raw.sort_by(|x, y| x.a.0.total_cmp(&y.a.0).then(x.a.1.total_cmp(&y.a.1)));
    let mut out: Vec<Overlap> = Vec::new();
    for o in raw {
        match out.last_mut() {
            Some(l) if o.a.0 <= l.a.1 + tol => {
                if o.a.1 > l.a.1 {
                    l.a.1 = o.a.1;
                    l.b.1 = o.b.1;
                }
            }
            _ => out.push(o),
        }
    }
    out
}

fn vertex_params(m: &IntrinsicMesh, c: &SurfaceCurve, cum: &[f64]) -> Vec<(u32, f64)> {
    let mut out = Vec::new();
    for (i, s) in c.segs.iter().enumerate() {
        for (b, t) in [(s.a, cum[i]), (s.b, cum[i + 1])] {
            if let Location::Vertex(v) = SurfacePoint::raw(s.face, b).location(m) {
                out.push((v, t));
            }
        }
    }
    out
}

/// Overlap of plane segments `p` and `q` as `(t0, t1, u0, u1)`: parameters on `p`
/// and the matching parameters on `q`.
fn segment_overlap(p0: &P2, p1: &P2, q0: &P2, q1: &P2, tol: f64) -> Option<(f64, f64, f64, f64)> {
    let dp = p1 - p0;
    let dq = q1 - q0;
    let lp = dp.norm();
    let lq = dq.norm();
    if lp <= tol || lq <= tol {
        // Degenerate pieces meet only at points.
        let x = if lp <= tol { *p0 } else { *q0 };
        let (d1, t) = crate::geom::point_segment(&x, p0, p1);
        let (d2, u) = crate::geom::point_segment(&x, q0, q1);
        return (d1 <= tol && d2 <= tol).then_some((t, t, u, u));
    }
    let par = cross(&dp, &dq).abs() <= 1e-12 * lp * lq;
    let near = cross(&dp, &(q0 - p0)).abs() <= tol * lp;
    if par && near {
        let t0 = (q0 - p0).dot(&dp) / (lp * lp);
        let t1 = (q1 - p0).dot(&dp) / (lp * lp);
        let (lo, hi) = (t0.min(t1).max(0.0), t0.max(t1).min(1.0));
        let eps = tol / lp;
        if lo > hi + eps {
            return None;
        }
        let hi = hi.max(lo);
        let u_of = |t: f64| ((p0 + dp * t) - q0).dot(&dq) / (lq * lq);
        return Some((lo, hi, u_of(lo), u_of(hi)));
    }
    let (t, u) = segment_intersection(p0, p1, q0, q1, tol / lp.min(lq))?;
    let (t, u) = (t.clamp(0.0, 1.0), u.clamp(0.0, 1.0));
    Some((t, t, u, u))
}

/// Replace the part of `g` between its first and last meeting with `eta` by the
/// matching part of `eta`, when the two have equal length.
fn splice(m: &IntrinsicMesh, g: &GeodesicPath, eta: &GeodesicPath, tol: f64) -> Option<GeodesicPath> {
    let comps = intersection_components(m, &g.curve, &eta.curve, tol);
    if comps.len() < 2 {
        return None;
    }
    let (first, last) = (comps[0], comps[comps.len() - 1]);
    let (s0, s1) = (first.a.0, last.a.1);
    let (u0, u1) = (first.b.0, last.b.1);
    if ((s1 - s0) - (u1 - u0).abs()).abs() > tol {
        return None;
    }
    let mid = if u0 <= u1 {
        eta.curve.sub_curve(m, u0, u1)
    } else {
        eta.curve.sub_curve(m, u1, u0).reversed()
    };
    let mut segs = Vec::new();
    if s0 > tol {
        segs.extend(g.curve.sub_curve(m, 0.0, s0).segs);
    }
    segs.extend(mid.segs);
    if g.length - s1 > tol {
        segs.extend(g.curve.sub_curve(m, s1, g.length).segs);
    }
    let out = GeodesicPath::from_curve(m, SurfaceCurve::new(segs), tol);
    ((out.length - g.length).abs() <= tol).then_some(out)
}

/// A geodesic with the endpoints and length of `g` meeting each path of
/// `system` in at most one component, or along pieces of it.
pub fn normalize_to_finite_graph(m: &IntrinsicMesh, system: &[GeodesicPath], g: &GeodesicPath, tol: f64) -> GeodesicPath {
    let mut cur = g.clone();
    for _ in 0..4 * system.len().max(1) {
        let mut changed = false;
        for eta in system {
            if let Some(next) = splice(m, &cur, eta, tol) {
                cur = next;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    cur
}

/// Geodesics from `p0` to `p1` and from `p0` to `p2` without superfluous
/// intersections with the sides of `poly` or with each other.
pub fn remove_superfluous_pair(
    m: &IntrinsicMesh,
    poly: &PolygonRegion,
    p0: &SurfacePoint,
    p1: &SurfacePoint,
    p2: &SurfacePoint,
    tol: f64,
) -> Result<(GeodesicPath, GeodesicPath), GeodesicError> {
    if poly.n_vertices() == 2 {
        let corners = poly.vertices(m);
        if [p0, p1, p2].iter().any(|p| corners.iter().any(|c| c.same(m, p, tol))) {
            return Err(GeodesicError::BigonVertexCase);
        }
    }
    let g1 = normalize_to_finite_graph(m, &poly.edges, &shortest_path(m, p0, p1)?, tol);
    let mut sys = poly.edges.clone();
    sys.push(g1.clone());
    let g2 = normalize_to_finite_graph(m, &sys, &shortest_path(m, p0, p2)?, tol);
    Ok((g1, g2))
}

/// A family of geodesics with the pairwise intersection complex.
#[derive(Clone, Debug)]
pub struct GeodesicSystem {
    pub paths: Vec<GeodesicPath>,
    /// `(i, j, components)` for every intersecting pair `i < j`.
    pub nodes: Vec<(usize, usize, Vec<Overlap>)>,
}

impl GeodesicSystem {
    pub fn new(m: &IntrinsicMesh, paths: Vec<GeodesicPath>, tol: f64) -> Self {
        let mut nodes = Vec::new();
        for i in 0..paths.len() {
            for j in i + 1..paths.len() {
                let c = intersection_components(m, &paths[i].curve, &paths[j].curve, tol);
                if !c.is_empty() {
                    nodes.push((i, j, c));
                }
            }
        }
        GeodesicSystem { paths, nodes }
    }

    /// Largest number of components in a pairwise intersection.
    pub fn max_components(&self) -> usize {
        self.nodes.iter().map(|n| n.2.len()).max().unwrap_or(0)
    }

    /// No pair meets in more than one component.
    pub fn is_free_of_superfluous(&self) -> bool {
        self.max_components() <= 1
    }
}
