//! Metric balls used as ambient disks.
//!
//! A flat chart is a ball with no singular point inside. It is laid out in the
//! plane by unfolding face copies outward from the centre; the ball is then the
//! developed disk, and distances to the centre are Euclidean norms. A cone chart
//! is a ball around a vertex that stays inside the open star of the vertex, so
//! the distance to the centre is the distance to the corner in each face.

use crate::curve::{Segment, SurfaceCurve};
use crate::geom::{barycentric, in_triangle, orient, point_segment, rotate, Iso, P2, TAU, V2};
use crate::mesh::{face_of, IntrinsicMesh};
use crate::overlay::snap_bary;
use crate::point::{Location, SurfacePoint};
use crate::region::{FacePiece, PolygonRegion};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::f64::consts::PI;
use thiserror::Error;

/// Hard cap on face copies in one development.
const MAX_COPIES: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartKind {
    Flat,
    Cone,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chart {
    pub kind: ChartKind,
    pub center: SurfacePoint,
    pub radius: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChartError {
    #[error("radius must be positive")]
    BadRadius,
    #[error("vertex {vertex} at distance {distance} is singular")]
    Singular { vertex: u32, distance: f64 },
    #[error("the ball wraps onto itself")]
    NotInjective,
    #[error("development needs more than {0} face copies")]
    TooManyCopies(usize),
    #[error("cone chart centre is not a vertex")]
    NotAVertex,
    #[error("ball leaves the star of its centre")]
    LeavesStar,
}

/// One face placed in the chart plane: `iso` maps the face frame to the plane.
#[derive(Clone, Debug)]
pub struct FaceCopy {
    pub face: u32,
    pub iso: Iso,
    pub tri: [P2; 3],
}

impl FaceCopy {
    pub fn new(m: &IntrinsicMesh, face: u32, iso: Iso) -> Self {
        let l = m.layout(face);
        FaceCopy { face, iso, tri: [iso * l[0], iso * l[1], iso * l[2]] }
    }

    fn same_placement(&self, other: &FaceCopy, tol: f64) -> bool {
        self.face == other.face && (0..3).all(|i| (self.tri[i] - other.tri[i]).norm() <= tol)
    }
}

#[derive(Clone, Debug)]
pub struct Development {
    pub chart: Chart,
    pub copies: Vec<FaceCopy>,
}

/// Whether a vertex may lie inside a flat chart.
pub fn is_flat_vertex(m: &IntrinsicMesh, v: u32, tol_angle: f64) -> bool {
    let a = m.angle_sum(v);
    if m.is_boundary_vertex(v) {
        a <= PI + tol_angle
    } else {
        (a - TAU).abs() <= tol_angle
    }
}

impl Chart {
    pub fn flat(center: SurfacePoint, radius: f64) -> Self {
        Chart { kind: ChartKind::Flat, center, radius }
    }

    pub fn cone(m: &IntrinsicMesh, v: u32, radius: f64) -> Self {
        Chart { kind: ChartKind::Cone, center: SurfacePoint::vertex(m, v), radius }
    }

    pub fn diameter_bound(&self) -> f64 {
        2.0 * self.radius
    }

    /// Validate the chart and lay it out.
    pub fn develop(&self, m: &IntrinsicMesh, tol_angle: f64) -> Result<Development, ChartError> {
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(ChartError::BadRadius);
        }
        match self.kind {
            ChartKind::Flat => develop_flat(m, self, tol_angle),
            ChartKind::Cone => develop_cone(m, self),
        }
    }
}

fn develop_flat(m: &IntrinsicMesh, c: &Chart, tol_angle: f64) -> Result<Development, ChartError> {
    let r = c.radius;
    let tol = 1e-9 * m.scale();
    let x0 = c.center.position(m);
    let mut copies = vec![FaceCopy::new(m, c.center.face, Iso::translation(-x0.x, -x0.y))];
    let mut queue = VecDeque::from([0usize]);
    let origin = P2::origin();
    while let Some(i) = queue.pop_front() {
        for j in 0..3 {
            let (a, b) = (copies[i].tri[j], copies[i].tri[(j + 1) % 3]);
            if point_segment(&origin, &a, &b).0 >= r {
                continue;
            }
            let h = 3 * copies[i].face + j as u32;
            let Some(t) = m.twin(h) else { continue };
            let iso = copies[i].iso * m.transition(h).inverse();
            let cand = FaceCopy::new(m, face_of(t), iso);
            if copies.iter().any(|k| k.same_placement(&cand, tol)) {
                continue;
            }
            if copies.len() >= MAX_COPIES {
                return Err(ChartError::TooManyCopies(MAX_COPIES));
            }
            copies.push(cand);
            queue.push_back(copies.len() - 1);
        }
    }
    let mut worst: Option<(u32, f64)> = None;
    for k in &copies {
        for j in 0..3 {
            let d = k.tri[j].coords.norm();
            if d <= r {
                let v = m.corner_vertex(k.face, j);
                if !is_flat_vertex(m, v, tol_angle) && worst.map_or(true, |w| d < w.1) {
                    worst = Some((v, d));
                }
            }
        }
    }
    if let Some((vertex, distance)) = worst {
        return Err(ChartError::Singular { vertex, distance });
    }
    for (i, a) in copies.iter().enumerate() {
        for b in &copies[i + 1..] {
            if a.face == b.face {
                let ca = a.iso.inverse() * origin;
                let cb = b.iso.inverse() * origin;
                if lens_meets_triangle(m.layout(a.face), &ca, &cb, r) {
                    return Err(ChartError::NotInjective);
                }
            }
        }
    }
    Ok(Development { chart: *c, copies })
}

/// Does the triangle meet both open disks of radius `r` around `a` and `b` at a common point?
fn lens_meets_triangle(tri: &[P2; 3], a: &P2, b: &P2, r: f64) -> bool {
    let d = (b - a).norm();
    if d >= 2.0 * r {
        return false;
    }
    let inside = |x: &P2| (x - a).norm() < r && (x - b).norm() < r;
    if tri.iter().any(inside) {
        return true;
    }
    let mid = P2::from((a.coords + b.coords) * 0.5);
    if in_triangle(tri, &mid, 0.0) {
        return true;
    }
    if d > 0.0 {
        let n = V2::new(-(b.y - a.y), b.x - a.x) / d;
        let h = (r * r - 0.25 * d * d).max(0.0).sqrt();
        if in_triangle(tri, &(mid + n * h), 0.0) || in_triangle(tri, &(mid - n * h), 0.0) {
            return true;
        }
    }
    for i in 0..3 {
        let (p, q) = (tri[i], tri[(i + 1) % 3]);
        if let (Some(s), Some(t)) = (disk_interval(&p, &q, a, r), disk_interval(&p, &q, b, r)) {
            if s.0.max(t.0) < s.1.min(t.1) {
                return true;
            }
        }
    }
    false
}

/// Parameters of segment `pq` inside the open disk of radius `r` around `c`.
fn disk_interval(p: &P2, q: &P2, c: &P2, r: f64) -> Option<(f64, f64)> {
    let d = q - p;
    let f = p - c;
    let a = d.norm_squared();
    if a == 0.0 {
        return None;
    }
    let b = f.dot(&d);
    let cc = f.norm_squared() - r * r;
    let disc = b * b - a * cc;
    if disc <= 0.0 {
        return None;
    }
    let s = disc.sqrt();
    let (t0, t1) = ((-b - s) / a, (-b + s) / a);
    let (t0, t1) = (t0.max(0.0), t1.min(1.0));
    (t0 < t1).then_some((t0, t1))
}

fn develop_cone(m: &IntrinsicMesh, c: &Chart) -> Result<Development, ChartError> {
    let v = c.center.as_vertex(m).ok_or(ChartError::NotAVertex)?;
    let mut copies = Vec::new();
    for h in m.outgoing(v) {
        let f = face_of(h);
        let i = (h % 3) as usize;
        if (0..3).filter(|&j| m.corner_vertex(f, j) == v).count() != 1 {
            return Err(ChartError::LeavesStar);
        }
        let l = m.layout(f);
        if point_segment(&l[i], &l[(i + 1) % 3], &l[(i + 2) % 3]).0 <= c.radius {
            return Err(ChartError::LeavesStar);
        }
        copies.push(FaceCopy::new(m, f, corner_iso(m, h, m.corner_offset(h))));
    }
    let mut faces: Vec<u32> = copies.iter().map(|k| k.face).collect();
    faces.sort_unstable();
    faces.dedup();
    if faces.len() != copies.len() {
        return Err(ChartError::LeavesStar);
    }
    Ok(Development { chart: *c, copies })
}

/// Map the frame of `face_of(h)` so that the tail of `h` is the origin and `h`
/// points at angle `phi`.
pub fn corner_iso(m: &IntrinsicMesh, h: u32, phi: f64) -> Iso {
    let (a, _) = m.halfedge_points(h);
    let d = m.halfedge_dir(h);
    let rot = phi - d.y.atan2(d.x);
    Iso::rotation(rot) * Iso::translation(-a.x, -a.y)
}

impl Development {
    pub fn radius(&self) -> f64 {
        self.chart.radius
    }

    /// Smallest distance from the centre to `p` over its placements, if placed.
    pub fn point_radius(&self, m: &IntrinsicMesh, p: &SurfacePoint) -> Option<f64> {
        let mut best: Option<f64> = None;
        for (f, b) in p.representations(m) {
            let x = crate::geom::from_barycentric(m.layout(f), &b);
            for k in self.copies.iter().filter(|k| k.face == f) {
                let d = (k.iso * x).coords.norm();
                best = Some(best.map_or(d, |b: f64| b.min(d)));
            }
        }
        best
    }

    /// Upper bound on the distance from the centre to any point of the pieces,
    /// or `None` if some piece is not inside the ball.
    ///
    /// Pieces are convex, so one placement with every corner inside the disk
    /// puts the whole piece inside, and the norm is largest at a corner.
    pub fn pieces_radius(&self, pieces: &[FacePiece]) -> Option<f64> {
        let mut worst: f64 = 0.0;
        for pc in pieces {
            let mut best = f64::INFINITY;
            for k in self.copies.iter().filter(|k| k.face == pc.face) {
                let r = pc.poly.iter().map(|x| (k.iso * x).coords.norm()).fold(0.0, f64::max);
                best = best.min(r);
            }
            if !(best < self.chart.radius) {
                return None;
            }
            worst = worst.max(best);
        }
        Some(worst)
    }

    /// Position of `p` in the plane, using the placement closest to the centre.
    pub fn plane_point(&self, m: &IntrinsicMesh, p: &SurfacePoint) -> Option<P2> {
        let mut best: Option<P2> = None;
        for (f, b) in p.representations(m) {
            let x = crate::geom::from_barycentric(m.layout(f), &b);
            for k in self.copies.iter().filter(|k| k.face == f) {
                let y = k.iso * x;
                if best.map_or(true, |q| y.coords.norm() < q.coords.norm()) {
                    best = Some(y);
                }
            }
        }
        best
    }

    /// Surface point at plane position `y` (flat charts).
    pub fn locate(&self, m: &IntrinsicMesh, y: &P2) -> Option<SurfacePoint> {
        let k = self.copies.iter().find(|k| in_triangle(&k.tri, y, 1e-12))?;
        let x = k.iso.inverse() * y;
        Some(SurfacePoint::new(m, k.face, snap_bary(barycentric(m.layout(k.face), &x), 1e-12)))
    }

    /// The straight segment from `y0` to `y1` as a surface curve (flat charts).
    pub fn segment(&self, m: &IntrinsicMesh, y0: &P2, y1: &P2) -> Option<SurfaceCurve> {
        strip_segment(m, &self.copies, y0, y1)
    }
}

/// Clip the plane segment `y0y1` against placed faces and pull the pieces back.
/// Fails if the pieces do not cover the segment.
pub fn strip_segment(m: &IntrinsicMesh, copies: &[FaceCopy], y0: &P2, y1: &P2) -> Option<SurfaceCurve> {
    let len = (y1 - y0).norm();
    if len == 0.0 {
        let k = copies.iter().find(|k| in_triangle(&k.tri, y0, 1e-12))?;
        let b = snap_bary(barycentric(m.layout(k.face), &(k.iso.inverse() * y0)), 1e-12);
        return Some(SurfaceCurve::new(vec![Segment { face: k.face, a: b, b }]));
    }
    let eps = 1e-12;
    let mut parts: Vec<(f64, f64, usize)> = Vec::new();
    for (i, k) in copies.iter().enumerate() {
        if let Some((t0, t1)) = clip_to_triangle(&k.tri, y0, y1) {
            if t1 - t0 > eps {
                parts.push((t0, t1, i));
            }
        }
    }
    parts.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.total_cmp(&a.1)));
    let mut segs = Vec::new();
    let mut reached = 0.0;
    for (t0, t1, i) in parts {
        if t1 <= reached + eps {
            continue;
        }
        if t0 > reached + 1e-9 {
            return None;
        }
        let s = reached.max(t0);
        let k = &copies[i];
        let inv = k.iso.inverse();
        let l = m.layout(k.face);
        let pa = inv * (y0 + (y1 - y0) * s);
        let pb = inv * (y0 + (y1 - y0) * t1);
        segs.push(Segment {
            face: k.face,
            a: snap_bary(barycentric(l, &pa), 1e-12),
            b: snap_bary(barycentric(l, &pb), 1e-12),
        });
        reached = t1;
    }
    (reached >= 1.0 - 1e-9).then(|| SurfaceCurve::new(segs))
}

/// Parameter interval of segment `ab` inside a counter-clockwise triangle.
fn clip_to_triangle(tri: &[P2; 3], a: &P2, b: &P2) -> Option<(f64, f64)> {
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for i in 0..3 {
        let (p, q) = (tri[i], tri[(i + 1) % 3]);
        let fa = orient(&p, &q, a);
        let fb = orient(&p, &q, b);
        let scale = (q - p).norm() * (b - a).norm().max((a - p).norm());
        let slack = 1e-12 * scale;
        if fa < -slack && fb < -slack {
            return None;
        }
        if (fa - fb).abs() > 0.0 {
            let t = fa / (fa - fb);
            if fa < -slack {
                t0 = t0.max(t);
            } else if fb < -slack {
                t1 = t1.min(t);
            }
        }
    }
    (t0 < t1).then_some((t0, t1))
}

/// Angle coordinate and distance of `p` around vertex `v`, if `p` lies in a face at `v`.
pub fn polar_at(m: &IntrinsicMesh, v: u32, p: &SurfacePoint) -> Option<(f64, f64)> {
    for (f, b) in p.representations(m) {
        for i in 0..3 {
            if m.corner_vertex(f, i) != v {
                continue;
            }
            let h = 3 * f + i as u32;
            let x = crate::geom::from_barycentric(m.layout(f), &b);
            let d = x - m.layout(f)[i];
            let r = d.norm();
            if r == 0.0 {
                return Some((0.0, 0.0));
            }
            return Some((m.angle_coord(h, &d), r));
        }
    }
    None
}

/// Straight chord between two points of the star of `v`, swept counter-clockwise
/// from `p` to `q` through an angle below π.
pub fn cone_chord(m: &IntrinsicMesh, v: u32, p: &SurfacePoint, q: &SurfacePoint) -> Option<SurfaceCurve> {
    let (phi_p, rp) = polar_at(m, v, p)?;
    let (phi_q, rq) = polar_at(m, v, q)?;
    let theta = m.angle_sum(v);
    let gap = if m.is_boundary_vertex(v) { phi_q - phi_p } else { (phi_q - phi_p).rem_euclid(theta) };
    if !(0.0..PI).contains(&gap) {
        return None;
    }
    // Lay out corners counter-clockwise from the one holding `p`.
    let outs = m.outgoing(v);
    let n = outs.len();
    let start = outs
        .iter()
        .position(|&h| phi_p >= m.corner_offset(h) - 1e-12 && phi_p <= m.corner_offset(h) + m.corner_angle(h) + 1e-12)?;
    let mut copies = Vec::new();
    let mut phi = m.corner_offset(outs[start]);
    for k in 0..=n {
        if k == n && m.is_boundary_vertex(v) {
            break;
        }
        let h = outs[(start + k) % n];
        copies.push(FaceCopy::new(m, face_of(h), corner_iso(m, h, phi)));
        phi += m.corner_angle(h);
        if phi > phi_p + gap + 1e-12 {
            break;
        }
    }
    let y0 = P2::from(rotate(&V2::new(rp, 0.0), phi_p));
    let y1 = P2::from(rotate(&V2::new(rq, 0.0), phi_p + gap));
    strip_segment(m, &copies, &y0, &y1)
}

/// Whether `p` lies on the boundary of the surface.
pub fn on_surface_boundary(m: &IntrinsicMesh, p: &SurfacePoint) -> bool {
    match p.location(m) {
        Location::Vertex(v) => m.is_boundary_vertex(v),
        Location::Edge { h, .. } => m.is_boundary_halfedge(h),
        Location::Face => false,
    }
}

/// Largest valid flat chart at `center` with radius at most `r_max`.
pub fn fit_flat(m: &IntrinsicMesh, center: SurfacePoint, r_max: f64, tol_angle: f64) -> Result<Development, ChartError> {
    let mut r = r_max;
    for _ in 0..12 {
        match Chart::flat(center, r).develop(m, tol_angle) {
            Ok(d) => return Ok(d),
            Err(ChartError::Singular { distance, .. }) if distance > 1e-9 * r_max => r = distance * (1.0 - 1e-6),
            Err(ChartError::NotInjective) | Err(ChartError::TooManyCopies(_)) => r *= 0.5,
            Err(e) => return Err(e),
        }
    }
    Err(ChartError::NotInjective)
}

/// Largest valid cone chart at `v` with radius at most `r_max`.
pub fn fit_cone(m: &IntrinsicMesh, v: u32, r_max: f64) -> Result<Development, ChartError> {
    let mut limit = r_max;
    for h in m.outgoing(v) {
        let f = face_of(h);
        let i = (h % 3) as usize;
        let l = m.layout(f);
        limit = limit.min(point_segment(&l[i], &l[(i + 1) % 3], &l[(i + 2) % 3]).0 * (1.0 - 1e-6));
    }
    Chart::cone(m, v, limit).develop(m, 0.0)
}

/// The ambient disk of a convexity certificate.
#[derive(Clone, Debug)]
pub enum Ambient {
    Ball(Chart),
    Polygon(Box<PolygonRegion>),
}

/// A disk `U` with an upper bound on its diameter.
#[derive(Clone, Debug)]
pub struct DiskNeighborhood {
    pub ambient: Ambient,
    pub diameter: f64,
    dev: Option<Development>,
}

impl DiskNeighborhood {
    pub fn ball(m: &IntrinsicMesh, chart: Chart, tol_angle: f64) -> Result<Self, ChartError> {
        let dev = chart.develop(m, tol_angle)?;
        Ok(DiskNeighborhood { ambient: Ambient::Ball(chart), diameter: chart.diameter_bound(), dev: Some(dev) })
    }

    pub fn from_development(dev: Development) -> Self {
        DiskNeighborhood { ambient: Ambient::Ball(dev.chart), diameter: dev.chart.diameter_bound(), dev: Some(dev) }
    }

    pub fn polygon(m: &IntrinsicMesh, region: PolygonRegion, h_net: f64) -> Self {
        let diameter = region.diameter(m, h_net).upper;
        DiskNeighborhood { ambient: Ambient::Polygon(Box::new(region)), diameter, dev: None }
    }

    pub fn development(&self) -> Option<&Development> {
        self.dev.as_ref()
    }

    pub fn chart(&self) -> Option<Chart> {
        match &self.ambient {
            Ambient::Ball(c) => Some(*c),
            Ambient::Polygon(_) => None,
        }
    }

    pub fn contains(&self, m: &IntrinsicMesh, p: &SurfacePoint, tol: f64) -> bool {
        match (&self.ambient, &self.dev) {
            (Ambient::Ball(c), Some(d)) => d.point_radius(m, p).is_some_and(|r| r < c.radius),
            (Ambient::Polygon(u), _) => u.contains(m, p, tol),
            _ => false,
        }
    }

    /// Lower bound on `d(K, ∂U∖∂X)`, or `None` when `K ⊄ U`.
    ///
    /// For a ball, every point of `∂U` is at distance `R` from the centre, so
    /// the margin is at least `R` minus the largest distance from the centre to `K`.
    /// For a polygon both boundaries are sampled at spacing `h` and the exact
    /// distances between samples, less `h`, bound the margin.
    pub fn margin(&self, m: &IntrinsicMesh, k: &PolygonRegion) -> Option<f64> {
        match (&self.ambient, &self.dev) {
            (Ambient::Ball(c), Some(d)) => d.pieces_radius(&k.pieces).map(|r| c.radius - r),
            (Ambient::Polygon(u), _) => polygon_margin(m, u, k),
            _ => None,
        }
    }
}

fn polygon_margin(m: &IntrinsicMesh, u: &PolygonRegion, k: &PolygonRegion) -> Option<f64> {
    use crate::geodesic::shortest::shortest_path;
    let tol = 1e-9 * m.scale();
    for pc in &k.pieces {
        for x in &pc.poly {
            let p = SurfacePoint::new(m, pc.face, snap_bary(barycentric(m.layout(pc.face), x), 1e-12));
            if !u.contains(m, &p, tol) {
                return None;
            }
        }
    }
    let h = (k.perimeter() / 16.0).min(u.perimeter() / 64.0).max(tol);
    let kb = k.boundary();
    let ub = u.boundary();
    let ks: Vec<SurfacePoint> = kb.sample_params(m, h).iter().map(|&s| kb.point_at(m, s)).collect();
    let mut best = f64::INFINITY;
    for s in ub.sample_params(m, h) {
        let y = ub.point_at(m, s);
        if on_surface_boundary(m, &y) {
            continue;
        }
        for x in &ks {
            if let Ok(g) = shortest_path(m, x, &y) {
                best = best.min(g.length - h);
            }
        }
    }
    Some(best)
}
