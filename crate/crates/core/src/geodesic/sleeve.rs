//! Face strips ("sleeves"), the funnel algorithm inside their unfolding, and
//! straightening by rerouting the strip around vertices where the funnel bends
//! with less than π on the far side.

use super::GeodesicError;
use crate::curve::{Segment, SurfaceCurve};
use crate::geom::{angle_between, cross, from_barycentric, Iso, P2};
use crate::mesh::{face_of, next, prev, IntrinsicMesh};
use crate::point::{corner_bary, edge_bary};
use std::f64::consts::PI;

/// Sequence of faces; `portals[j]` is the halfedge of `faces[j]` whose twin lies in `faces[j + 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sleeve {
    pub faces: Vec<u32>,
    pub portals: Vec<u32>,
}

#[derive(Clone, Copy, Debug)]
pub struct StraightenOptions {
    pub tol_len: f64,
    pub tol_angle: f64,
    pub max_iter: usize,
}

impl StraightenOptions {
    pub fn for_mesh(m: &IntrinsicMesh) -> Self {
        StraightenOptions { tol_len: 1e-9 * m.scale(), tol_angle: 1e-7, max_iter: 100_000 }
    }
}

fn bary_corner(b: &[f64; 3]) -> Option<usize> {
    let i = (0..3).max_by(|&i, &j| b[i].partial_cmp(&b[j]).unwrap())?;
    (b[i] > 1.0 - 1e-10).then_some(i)
}

fn bary_edge(b: &[f64; 3]) -> Option<(usize, f64)> {
    let z = (0..3).find(|&i| b[i].abs() < 1e-10)?;
    let i = (z + 1) % 3;
    Some((i, b[(i + 1) % 3]))
}

/// Rotate around the tail of `from` until reaching outgoing halfedge `to`,
/// counter-clockwise if possible, else clockwise. Returns crossed portals and faces entered.
fn fan_between(m: &IntrinsicMesh, from: u32, to: u32) -> Option<(Vec<u32>, Vec<u32>)> {
    let limit = 4 * m.n_halfedges();
    let mut portals = Vec::new();
    let mut faces = Vec::new();
    let mut h = from;
    let mut ok = true;
    for _ in 0..limit {
        if h == to {
            break;
        }
        let p = prev(h);
        match m.twin(p) {
            Some(t) => {
                portals.push(p);
                faces.push(face_of(t));
                h = t;
            }
            None => {
                ok = false;
                break;
            }
        }
        if h == from {
            ok = false;
            break;
        }
    }
    if ok && h == to {
        return Some((portals, faces));
    }
    portals.clear();
    faces.clear();
    h = from;
    for _ in 0..limit {
        if h == to {
            return Some((portals, faces));
        }
        let t = m.twin(h)?;
        portals.push(h);
        faces.push(face_of(t));
        h = next(t);
        if h == from {
            return None;
        }
    }
    None
}

impl Sleeve {
    /// The strip of faces a curve passes through; vertex junctions are expanded into fans.
    pub fn from_curve(m: &IntrinsicMesh, c: &SurfaceCurve) -> Result<Sleeve, GeodesicError> {
        let segs = &c.segs;
        if segs.is_empty() {
            return Err(GeodesicError::InvalidCurve("empty curve".into()));
        }
        let mut faces = vec![segs[0].face];
        let mut portals = Vec::new();
        for w in segs.windows(2) {
            let (s0, s1) = (&w[0], &w[1]);
            if let Some(k0) = bary_corner(&s0.b) {
                let k1 = bary_corner(&s1.a)
                    .ok_or_else(|| GeodesicError::InvalidCurve("vertex junction not at a corner".into()))?;
                let h0 = 3 * s0.face + k0 as u32;
                let h1 = 3 * s1.face + k1 as u32;
                if m.tail(h0) != m.tail(h1) {
                    return Err(GeodesicError::InvalidCurve("junction vertices differ".into()));
                }
                let (ps, fs) = fan_between(m, h0, h1)
                    .ok_or_else(|| GeodesicError::InvalidCurve("no fan between junction corners".into()))?;
                portals.extend(ps);
                faces.extend(fs);
            } else if let Some((i, _)) = bary_edge(&s0.b) {
                if s1.face == s0.face {
                    continue;
                }
                let h = 3 * s0.face + i as u32;
                match m.twin(h) {
                    Some(t) if face_of(t) == s1.face => {
                        portals.push(h);
                        faces.push(s1.face);
                    }
                    _ => return Err(GeodesicError::InvalidCurve("edge junction between non-adjacent faces".into())),
                }
            } else if s1.face != s0.face {
                return Err(GeodesicError::InvalidCurve("interior junction changes face".into()));
            }
        }
        Ok(Sleeve { faces, portals })
    }

    /// Isometries from each face frame into the plane of `faces[0]`.
    pub fn unfold(&self, m: &IntrinsicMesh) -> Vec<Iso> {
        let mut isos = Vec::with_capacity(self.faces.len());
        isos.push(Iso::identity());
        for (j, &h) in self.portals.iter().enumerate() {
            let t = m.transition(h).inverse();
            isos.push(isos[j] * t);
        }
        isos
    }
}

#[derive(Clone, Copy, Debug)]
struct Bend {
    pos: P2,
    lo: usize,
    hi: usize,
    left: bool,
}

/// Simple stupid funnel over portals given as (left, right) pairs.
/// Returns the bends as (position, portal index, is_left).
fn funnel(p: P2, q: P2, lefts: &[P2], rights: &[P2], eq: f64) -> Vec<(P2, usize, bool)> {
    let n = lefts.len();
    let portal = |i: usize| -> (P2, P2) {
        if i == 0 {
            (p, p)
        } else if i <= n {
            (lefts[i - 1], rights[i - 1])
        } else {
            (q, q)
        }
    };
    let same = |a: &P2, b: &P2| (a - b).norm() <= eq;
    let mut out = Vec::new();
    let mut apex = p;
    let (mut left, mut right) = (p, p);
    let (mut left_i, mut right_i) = (0usize, 0usize);
    let mut i = 1;
    let mut guard = 0usize;
    while i <= n + 1 {
        guard += 1;
        if guard > 4 * (n + 2) * (n + 2) + 16 {
            break;
        }
        let (l, r) = portal(i);
        if cross(&(right - apex), &(r - apex)) >= 0.0 {
            if same(&apex, &right) || cross(&(left - apex), &(r - apex)) < 0.0 {
                right = r;
                right_i = i;
            } else {
                if !same(&left, &apex) {
                    out.push((left, left_i, true));
                }
                apex = left;
                right = apex;
                right_i = left_i;
                i = left_i + 1;
                continue;
            }
        }
        if cross(&(left - apex), &(l - apex)) <= 0.0 {
            if same(&apex, &left) || cross(&(right - apex), &(l - apex)) > 0.0 {
                left = l;
                left_i = i;
            } else {
                if !same(&right, &apex) {
                    out.push((right, right_i, false));
                }
                apex = right;
                left = apex;
                left_i = right_i;
                i = right_i + 1;
                continue;
            }
        }
        i += 1;
    }
    // Portal indices were shifted by the leading (p, p) portal.
    out.into_iter()
        .filter(|(pos, k, _)| *k >= 1 && *k <= n && !same(pos, &q) && !same(pos, &p))
        .map(|(pos, k, s)| (pos, k - 1, s))
        .collect()
}

/// Result of straightening a sleeve between two fixed endpoints.
#[derive(Clone, Debug)]
pub struct Straightened {
    pub curve: SurfaceCurve,
    pub sleeve: Sleeve,
    pub length: f64,
    pub iterations: usize,
}

fn portal_vertex(m: &IntrinsicMesh, h: u32, left: bool) -> u32 {
    if left {
        m.head(h)
    } else {
        m.tail(h)
    }
}

/// Shortest path homotopic (rel endpoints) to the strip's core, with the strip
/// rerouted around interior vertices until every bend is locally geodesic.
pub fn straighten(
    m: &IntrinsicMesh,
    sleeve: Sleeve,
    pb: [f64; 3],
    qb: [f64; 3],
    opt: &StraightenOptions,
) -> Result<Straightened, GeodesicError> {
    let mut sleeve = sleeve;
    for iter in 0..opt.max_iter {
        let isos = sleeve.unfold(m);
        let n = sleeve.portals.len();
        let p = from_barycentric(m.layout(sleeve.faces[0]), &pb);
        let q = isos[n] * from_barycentric(m.layout(sleeve.faces[n]), &qb);
        let mut lefts = Vec::with_capacity(n);
        let mut rights = Vec::with_capacity(n);
        for (j, &h) in sleeve.portals.iter().enumerate() {
            let (a, b) = m.halfedge_points(h);
            rights.push(isos[j] * a);
            lefts.push(isos[j] * b);
        }
        let eq = opt.tol_len;
        let raw = funnel(p, q, &lefts, &rights, eq);
        let mut bends: Vec<Bend> = Vec::new();
        for (pos, k, left) in raw {
            let v = portal_vertex(m, sleeve.portals[k], left);
            let side = |j: usize| if left { lefts[j] } else { rights[j] };
            let (mut lo, mut hi) = (k, k);
            while lo > 0
                && portal_vertex(m, sleeve.portals[lo - 1], left) == v
                && (side(lo - 1) - pos).norm() <= eq
            {
                lo -= 1;
            }
            while hi + 1 < n && portal_vertex(m, sleeve.portals[hi + 1], left) == v && (side(hi + 1) - pos).norm() <= eq
            {
                hi += 1;
            }
            if let Some(b) = bends.last() {
                if b.hi >= lo {
                    continue;
                }
            }
            bends.push(Bend { pos, lo, hi, left });
        }

        let mut flipped = false;
        for (bi, b) in bends.iter().enumerate() {
            let a_pt = if bi == 0 { p } else { bends[bi - 1].pos };
            let c_pt = if bi + 1 < bends.len() { bends[bi + 1].pos } else { q };
            let v = portal_vertex(m, sleeve.portals[b.lo], b.left);
            if m.is_boundary_vertex(v) {
                continue;
            }
            let corridor = corridor_angle(m, &sleeve, &isos, b, a_pt, c_pt);
            let wall = m.angle_sum(v) - corridor;
            if wall < PI - opt.tol_angle {
                if let Some(s) = flip(m, &sleeve, b) {
                    sleeve = s;
                    flipped = true;
                    break;
                }
            }
        }
        if flipped {
            continue;
        }
        let curve = build_curve(m, &sleeve, &isos, &bends, p, q, pb, qb, &lefts, &rights);
        let length = curve.length(m);
        return Ok(Straightened { curve, sleeve, length, iterations: iter });
    }
    Err(GeodesicError::NotConverged(opt.max_iter))
}

fn corridor_angle(m: &IntrinsicMesh, s: &Sleeve, isos: &[Iso], b: &Bend, a: P2, c: P2) -> f64 {
    let f0 = b.lo;
    let fl = b.hi + 1;
    let da = isos[f0].rotation.inverse() * (a - b.pos);
    let dc = isos[fl].rotation.inverse() * (c - b.pos);
    let h_lo = s.portals[b.lo];
    let (x, y) = m.halfedge_points(h_lo);
    let e_lo = if b.left { x - y } else { y - x };
    let tw_hi = m.twin(s.portals[b.hi]).unwrap();
    let (x2, y2) = m.halfedge_points(tw_hi);
    let e_hi = if b.left { y2 - x2 } else { x2 - y2 };
    let mut total = angle_between(&da, &e_lo) + angle_between(&e_hi, &dc);
    for k in b.lo + 1..=b.hi {
        let tw = m.twin(s.portals[k - 1]).unwrap();
        let corner = if b.left { tw } else { next(tw) };
        total += m.corner_angle(corner);
    }
    total
}

/// Reroute the strip around the bend vertex through the faces on the other side.
fn flip(m: &IntrinsicMesh, s: &Sleeve, b: &Bend) -> Option<Sleeve> {
    let first = s.portals[b.lo];
    let last = s.portals[b.hi];
    let limit = m.n_halfedges() + 3;
    let mut new_portals = Vec::new();
    let mut new_faces = Vec::new();
    if b.left {
        // The run turns counter-clockwise around the head; go clockwise instead.
        let start = next(first);
        let target = m.twin(last)?;
        let mut h = start;
        for _ in 0..limit {
            if h == target {
                break;
            }
            let t = m.twin(h)?;
            new_portals.push(h);
            new_faces.push(face_of(t));
            h = next(t);
        }
        if h != target {
            return None;
        }
    } else {
        let start = first;
        let target = next(m.twin(last)?);
        let mut h = start;
        for _ in 0..limit {
            if h == target {
                break;
            }
            let p = prev(h);
            let t = m.twin(p)?;
            new_portals.push(p);
            new_faces.push(face_of(t));
            h = t;
        }
        if h != target {
            return None;
        }
    }
    if new_portals.is_empty() {
        return None;
    }
    new_faces.pop();
    let mut faces = s.faces[..=b.lo].to_vec();
    faces.extend(new_faces);
    faces.extend_from_slice(&s.faces[b.hi + 1..]);
    let mut portals = s.portals[..b.lo].to_vec();
    portals.extend(new_portals);
    portals.extend_from_slice(&s.portals[b.hi + 1..]);
    debug_assert_eq!(faces.len(), portals.len() + 1);
    Some(Sleeve { faces, portals })
}

#[allow(clippy::too_many_arguments)]
fn build_curve(
    m: &IntrinsicMesh,
    s: &Sleeve,
    _isos: &[Iso],
    bends: &[Bend],
    p: P2,
    q: P2,
    pb: [f64; 3],
    qb: [f64; 3],
    lefts: &[P2],
    rights: &[P2],
) -> SurfaceCurve {
    let n = s.portals.len();
    // Polyline vertices with the portal range each one occupies.
    let mut pts: Vec<(P2, isize, isize)> = vec![(p, -1, -1)];
    for b in bends {
        pts.push((b.pos, b.lo as isize, b.hi as isize));
    }
    pts.push((q, n as isize, n as isize));
    let mut params = vec![0.0f64; n];
    let mut k = 0usize;
    for (j, param) in params.iter_mut().enumerate() {
        let ji = j as isize;
        while k + 1 < pts.len() && pts[k + 1].1 <= ji {
            k += 1;
        }
        let (pos, lo, hi) = pts[k];
        *param = if lo <= ji && ji <= hi {
            let b = bends.iter().find(|b| b.lo as isize == lo).unwrap();
            if b.left {
                1.0
            } else {
                0.0
            }
        } else {
            let a = pos;
            let c = pts[k + 1].0;
            let r = rights[j];
            let l = lefts[j];
            let e = l - r;
            let d = c - a;
            let den = cross(&d, &e);
            if den.abs() < 1e-300 {
                0.5
            } else {
                (cross(&(a - r), &d) / -den).clamp(0.0, 1.0)
            }
        };
    }
    let snap = |t: f64| {
        if t < 1e-12 {
            0.0
        } else if t > 1.0 - 1e-12 {
            1.0
        } else {
            t
        }
    };
    let mut segs = Vec::with_capacity(n + 1);
    let mut entry = pb;
    for j in 0..=n {
        let f = s.faces[j];
        let exit = if j < n {
            let h = s.portals[j];
            let t = snap(params[j]);
            if t == 0.0 {
                corner_bary((h % 3) as usize)
            } else if t == 1.0 {
                corner_bary(((h + 1) % 3) as usize)
            } else {
                edge_bary((h % 3) as usize, t)
            }
        } else {
            qb
        };
        let l = m.layout(f);
        if (from_barycentric(l, &entry) - from_barycentric(l, &exit)).norm() > 0.0 {
            segs.push(Segment { face: f, a: entry, b: exit });
        }
        if j < n {
            let h = s.portals[j];
            let tw = m.twin(h).unwrap();
            let t = snap(params[j]);
            entry = if t == 0.0 {
                corner_bary(((tw + 1) % 3) as usize)
            } else if t == 1.0 {
                corner_bary((tw % 3) as usize)
            } else {
                edge_bary((tw % 3) as usize, 1.0 - t)
            };
        }
    }
    if segs.is_empty() {
        segs.push(Segment { face: s.faces[0], a: pb, b: pb });
    }
    SurfaceCurve::new(segs)
}

/// Straighten a curve within its homotopy class, keeping the endpoints.
pub fn straighten_curve(m: &IntrinsicMesh, c: &SurfaceCurve, opt: &StraightenOptions) -> Result<Straightened, GeodesicError> {
    let sleeve = Sleeve::from_curve(m, c)?;
    let pb = c.segs[0].a;
    let qb = c.segs.last().unwrap().b;
    straighten(m, sleeve, pb, qb, opt)
}
