//! Cutting a mesh along a set of curves.
//!
//! Every face is re-triangulated (constrained Delaunay) with the curve pieces
//! inside it as constraints. The triangulation is done in an affine frame where
//! the face is `(0,0) (1,0) (1,1)`, so that points on face edges lie exactly on
//! the hull lines and neighbouring faces agree on how each mesh edge is split.
//! Sub-triangles are then grouped into components across untagged edges.

use crate::curve::{Segment, SurfaceCurve};
use crate::geom::{barycentric, cross, from_barycentric, Iso, P2};
use crate::mesh::{IntrinsicMesh, MeshError, NONE};
use crate::point::SurfacePoint;
use smallvec::SmallVec;
use spade::{ConstrainedDelaunayTriangulation, Point2, Triangulation};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OverlayError {
    #[error("curve {0} is not a valid surface curve")]
    BadCurve(usize),
    #[error("could not triangulate face {0}")]
    Triangulation(u32),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

/// Tag on a sub-halfedge: the curve it lies on and whether the curve runs along it.
pub type Tag = (u32, bool);
pub type Tags = SmallVec<[Tag; 2]>;

/// One complementary component of the cut.
#[derive(Clone, Debug)]
pub struct Component {
    pub mesh: IntrinsicMesh,
    /// Parent face of each sub-face.
    pub parent_face: Vec<u32>,
    /// Sub-face frame to parent-face frame.
    pub frame: Vec<Iso>,
    pub tags: Vec<Tags>,
    pub euler: i64,
    pub boundary_loops: usize,
    pub area: f64,
}

impl Component {
    pub fn is_disk(&self) -> bool {
        self.euler == 1 && self.boundary_loops == 1
    }

    /// Lies to the left of curve `c` somewhere (i.e. `c` runs along its boundary counter-clockwise).
    pub fn left_of(&self, c: u32) -> bool {
        self.tags.iter().any(|t| t.contains(&(c, true)))
    }

    pub fn right_of(&self, c: u32) -> bool {
        self.tags.iter().any(|t| t.contains(&(c, false)))
    }

    fn parent_triangle(&self, s: u32) -> [P2; 3] {
        let l = self.mesh.layout(s);
        let fr = &self.frame[s as usize];
        [fr * l[0], fr * l[1], fr * l[2]]
    }

    pub fn point_to_parent(&self, parent: &IntrinsicMesh, p: &SurfacePoint) -> SurfacePoint {
        let f = self.parent_face[p.face as usize];
        let x = self.frame[p.face as usize] * p.position(&self.mesh);
        SurfacePoint::new(parent, f, snap_bary(barycentric(parent.layout(f), &x), 1e-10))
    }

    pub fn curve_to_parent(&self, parent: &IntrinsicMesh, c: &SurfaceCurve) -> SurfaceCurve {
        let mut segs = Vec::with_capacity(c.segs.len());
        for s in &c.segs {
            let f = self.parent_face[s.face as usize];
            let fr = &self.frame[s.face as usize];
            let l = self.mesh.layout(s.face);
            let pl = parent.layout(f);
            let a = snap_bary(barycentric(pl, &(fr * from_barycentric(l, &s.a))), 1e-10);
            let b = snap_bary(barycentric(pl, &(fr * from_barycentric(l, &s.b))), 1e-10);
            segs.push(Segment { face: f, a, b });
        }
        SurfaceCurve::new(segs)
    }

    /// Every sub-triangle as (parent face, corners in the parent face frame).
    pub fn pieces(&self) -> Vec<(u32, [P2; 3])> {
        (0..self.parent_face.len() as u32).map(|s| (self.parent_face[s as usize], self.parent_triangle(s))).collect()
    }

    /// Sub-faces of this component lying in parent face `f`.
    pub fn faces_in_parent(&self, f: u32) -> impl Iterator<Item = u32> + '_ {
        (0..self.parent_face.len() as u32).filter(move |&s| self.parent_face[s as usize] == f)
    }

    /// The point as a point of this component, if it lies in it (within `tol` in parent units).
    pub fn locate(&self, parent: &IntrinsicMesh, p: &SurfacePoint, tol: f64) -> Option<SurfacePoint> {
        for (f, b) in p.representations(parent) {
            let x = from_barycentric(parent.layout(f), &b);
            if let Some(q) = self.locate_in_parent_face(f, &x, tol) {
                return Some(q);
            }
        }
        None
    }

    fn locate_in_parent_face(&self, f: u32, x: &P2, tol: f64) -> Option<SurfacePoint> {
        let mut best: Option<(f64, u32, [f64; 3])> = None;
        for s in self.faces_in_parent(f) {
            let t = self.parent_triangle(s);
            let d = point_triangle_distance(&t, x);
            if d <= tol && best.map_or(true, |b| d < b.0) {
                let b = clamp_bary(barycentric(&t, x));
                best = Some((d, s, b));
            }
        }
        best.map(|(_, s, b)| SurfacePoint::new(&self.mesh, s, snap_bary(b, 1e-9)))
    }

    /// Re-express a parent curve inside this component; `None` if it leaves the component.
    pub fn curve_from_parent(&self, parent: &IntrinsicMesh, c: &SurfaceCurve, tol: f64) -> Option<SurfaceCurve> {
        let mut out = Vec::new();
        for s in &c.segs {
            let pl = parent.layout(s.face);
            let a = from_barycentric(pl, &s.a);
            let b = from_barycentric(pl, &s.b);
            let mut ts = vec![0.0, 1.0];
            let subs: Vec<u32> = self.faces_in_parent(s.face).collect();
            for &sf in &subs {
                let t = self.parent_triangle(sf);
                for i in 0..3 {
                    if let Some((u, _)) = crate::geom::segment_intersection(&a, &b, &t[i], &t[(i + 1) % 3], 1e-12) {
                        ts.push(u.clamp(0.0, 1.0));
                    }
                }
            }
            ts.sort_by(f64::total_cmp);
            ts.dedup_by(|x, y| (*x - *y).abs() * (b - a).norm() <= tol * 1e-3);
            if (b - a).norm() == 0.0 {
                ts = vec![0.0, 1.0];
            }
            for w in ts.windows(2) {
                let (p0, p1) = (a + (b - a) * w[0], a + (b - a) * w[1]);
                let mid = a + (b - a) * (0.5 * (w[0] + w[1]));
                let mut found = None;
                let mut best = f64::INFINITY;
                for &sf in &subs {
                    let t = self.parent_triangle(sf);
                    let d = point_triangle_distance(&t, &mid);
                    if d < best {
                        best = d;
                        found = Some((sf, t));
                    }
                }
                let (sf, t) = found?;
                if best > tol {
                    return None;
                }
                let ba = snap_bary(clamp_bary(barycentric(&t, &p0)), 1e-9);
                let bb = snap_bary(clamp_bary(barycentric(&t, &p1)), 1e-9);
                out.push(Segment { face: sf, a: ba, b: bb });
            }
        }
        if out.is_empty() {
            return None;
        }
        Some(SurfaceCurve::new(out))
    }

    /// Boundary halfedges tagged by curve `c`.
    pub fn curve_halfedges(&self, c: u32) -> impl Iterator<Item = (u32, bool)> + '_ {
        self.tags.iter().enumerate().flat_map(move |(h, t)| {
            t.iter().filter(move |x| x.0 == c).map(move |x| (h as u32, x.1))
        })
    }
}

fn point_triangle_distance(t: &[P2; 3], x: &P2) -> f64 {
    let b = barycentric(t, x);
    if b.iter().all(|&v| v >= 0.0) {
        return 0.0;
    }
    (0..3).map(|i| crate::geom::point_segment(x, &t[i], &t[(i + 1) % 3]).0).fold(f64::INFINITY, f64::min)
}

fn clamp_bary(b: [f64; 3]) -> [f64; 3] {
    let c = [b[0].max(0.0), b[1].max(0.0), b[2].max(0.0)];
    let s = c[0] + c[1] + c[2];
    [c[0] / s, c[1] / s, c[2] / s]
}

pub fn snap_bary(b: [f64; 3], tol: f64) -> [f64; 3] {
    let mut b = b;
    for x in &mut b {
        if x.abs() <= tol {
            *x = 0.0;
        }
    }
    if let Some(i) = (0..3).find(|&i| (b[i] - 1.0).abs() <= tol) {
        let mut c = [0.0; 3];
        c[i] = 1.0;
        return c;
    }
    let s = b[0] + b[1] + b[2];
    [b[0] / s, b[1] / s, b[2] / s]
}

#[derive(Clone, Copy, Debug)]
enum Kind {
    Corner(usize),
    /// Edge `i` of the face, cluster index on the canonical edge.
    Edge(usize, usize),
    Interior,
}

/// Standard-frame coordinates: corners at (0,0), (1,0), (1,1).
fn to_std(b: &[f64; 3]) -> Point2<f64> {
    Point2::new(b[1] + b[2], b[2])
}

fn from_std(p: &Point2<f64>) -> [f64; 3] {
    [1.0 - p.x, p.x - p.y, p.y]
}

fn std_on_edge(i: usize, t: f64) -> Point2<f64> {
    match i {
        0 => Point2::new(t, 0.0),
        1 => Point2::new(1.0, t),
        _ => {
            let s = 1.0 - t;
            Point2::new(s, s)
        }
    }
}

struct Piece {
    face: u32,
    pos: [P2; 3],
}

/// The overlay: all sub-triangles with their adjacency and curve tags.
pub struct Overlay {
    pieces: Vec<Piece>,
    twin: Vec<u32>,
    tags: Vec<Tags>,
}

/// Cut `m` along `curves` and return the complementary components.
pub fn cut_along_graph(m: &IntrinsicMesh, curves: &[SurfaceCurve]) -> Result<Vec<Component>, OverlayError> {
    let ov = build_overlay(m, curves)?;
    components(&ov)
}

pub fn build_overlay(m: &IntrinsicMesh, curves: &[SurfaceCurve]) -> Result<Overlay, OverlayError> {
    let tolb = 1e-9;
    let tol_len = 1e-9 * m.scale();
    // Pass 1: classify endpoints and collect edge points per canonical edge.
    let mut edge_raw: Vec<Vec<f64>> = vec![Vec::new(); m.n_edges()];
    let classify = |f: u32, b: &[f64; 3]| -> (Option<usize>, Option<(usize, f64)>) {
        if let Some(i) = (0..3).find(|&i| b[i] >= 1.0 - tolb) {
            return (Some(i), None);
        }
        if let Some(z) = (0..3).find(|&z| b[z] <= tolb) {
            let i = (z + 1) % 3;
            let s = b[i] + b[(i + 1) % 3];
            let _ = f;
            return (None, Some((i, b[(i + 1) % 3] / s)));
        }
        (None, None)
    };
    let canon = |f: u32, i: usize, t: f64| -> (u32, f64) {
        let h = 3 * f + i as u32;
        let e = m.edge(h);
        (e, if m.edge_halfedge(e) == h { t } else { 1.0 - t })
    };
    for (ci, c) in curves.iter().enumerate() {
        for s in &c.segs {
            if s.face as usize >= m.n_faces() {
                return Err(OverlayError::BadCurve(ci));
            }
            for b in [&s.a, &s.b] {
                if let (None, Some((i, t))) = classify(s.face, b) {
                    let (e, tc) = canon(s.face, i, t);
                    edge_raw[e as usize].push(tc);
                }
            }
        }
    }
    // Pass 2: cluster edge points; drop those that coincide with edge ends.
    let mut clusters: Vec<Vec<f64>> = Vec::with_capacity(m.n_edges());
    for (e, raw) in edge_raw.iter_mut().enumerate() {
        let len = m.edge_lengths()[e];
        let tt = tol_len / len;
        raw.sort_by(f64::total_cmp);
        let mut cl: Vec<f64> = Vec::new();
        for &t in raw.iter() {
            if t <= tt || t >= 1.0 - tt {
                continue;
            }
            match cl.last() {
                Some(&l) if t - l <= tt => {}
                _ => cl.push(t),
            }
        }
        clusters.push(cl);
    }
    let lookup_edge = |e: u32, tc: f64| -> Result<usize, bool> {
        // Ok(cluster) or Err(at_start)
        let cl = &clusters[e as usize];
        let len = m.edge_lengths()[e as usize];
        let tt = 2.0 * tol_len / len;
        if tc <= tt {
            return Err(true);
        }
        if tc >= 1.0 - tt {
            return Err(false);
        }
        let k = cl.partition_point(|&x| x < tc);
        let mut best = (f64::INFINITY, 0);
        for j in [k.saturating_sub(1), k.min(cl.len().saturating_sub(1))] {
            if j < cl.len() {
                let d = (cl[j] - tc).abs();
                if d < best.0 {
                    best = (d, j);
                }
            }
        }
        Ok(best.1)
    };

    // Segments per face.
    let mut per_face: Vec<Vec<(u32, [f64; 3], [f64; 3])>> = vec![Vec::new(); m.n_faces()];
    for (ci, c) in curves.iter().enumerate() {
        for s in &c.segs {
            per_face[s.face as usize].push((ci as u32, s.a, s.b));
        }
    }

    let mut pieces: Vec<Piece> = Vec::new();
    let mut tags: Vec<Tags> = Vec::new();
    let mut twin: Vec<u32> = Vec::new();
    // (canonical edge, lower boundary index) -> piece halfedges
    let mut across: HashMap<(u32, usize), SmallVec<[u32; 2]>> = HashMap::new();

    for f in 0..m.n_faces() as u32 {
        let mut cdt: ConstrainedDelaunayTriangulation<Point2<f64>> = ConstrainedDelaunayTriangulation::new();
        let mut kinds: Vec<Kind> = Vec::new();
        let add = |cdt: &mut ConstrainedDelaunayTriangulation<Point2<f64>>,
                       kinds: &mut Vec<Kind>,
                       p: Point2<f64>,
                       k: Kind|
         -> Result<usize, OverlayError> {
            let h = cdt.insert(p).map_err(|_| OverlayError::Triangulation(f))?;
            let idx = h.index();
            if idx >= kinds.len() {
                kinds.resize(idx + 1, Kind::Interior);
                kinds[idx] = k;
            }
            Ok(idx)
        };
        let mut corner_h = [0usize; 3];
        for (i, ch) in corner_h.iter_mut().enumerate() {
            let b = crate::point::corner_bary(i);
            *ch = add(&mut cdt, &mut kinds, to_std(&b), Kind::Corner(i))?;
        }
        let mut edge_h: [Vec<usize>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for i in 0..3 {
            let h = 3 * f + i as u32;
            let e = m.edge(h);
            let fwd = m.edge_halfedge(e) == h;
            for (k, &tc) in clusters[e as usize].iter().enumerate() {
                let t = if fwd { tc } else { 1.0 - tc };
                let idx = add(&mut cdt, &mut kinds, std_on_edge(i, t), Kind::Edge(i, k))?;
                edge_h[i].push(idx);
            }
        }
        let mut interior: Vec<(Point2<f64>, usize)> = Vec::new();
        let mut handle_of = |cdt: &mut ConstrainedDelaunayTriangulation<Point2<f64>>,
                             kinds: &mut Vec<Kind>,
                             b: &[f64; 3]|
         -> Result<usize, OverlayError> {
            match classify(f, b) {
                (Some(i), _) => Ok(corner_h[i]),
                (None, Some((i, t))) => {
                    let (e, tc) = canon(f, i, t);
                    match lookup_edge(e, tc) {
                        // edge_h is stored in canonical cluster order.
                        Ok(k) => Ok(edge_h[i][k]),
                        Err(at_start) => {
                            let fwd = m.edge_halfedge(e) == 3 * f + i as u32;
                            let first = at_start == fwd;
                            Ok(if first { corner_h[i] } else { corner_h[(i + 1) % 3] })
                        }
                    }
                }
                _ => {
                    // Segment endpoints shared by consecutive segments may differ by rounding.
                    let q = to_std(b);
                    if let Some(&(_, h)) = interior.iter().find(|(p, _)| (p.x - q.x).abs().max((p.y - q.y).abs()) <= tolb) {
                        return Ok(h);
                    }
                    let h = add(cdt, kinds, q, Kind::Interior)?;
                    interior.push((q, h));
                    Ok(h)
                }
            }
        };
        let mut std_segs: Vec<(u32, Point2<f64>, Point2<f64>)> = Vec::new();
        for &(ci, a, b) in &per_face[f as usize] {
            let ha = handle_of(&mut cdt, &mut kinds, &a)?;
            let hb = handle_of(&mut cdt, &mut kinds, &b)?;
            if ha == hb {
                continue;
            }
            let pa = cdt.vertex(spade::handles::FixedVertexHandle::from_index(ha)).position();
            let pb = cdt.vertex(spade::handles::FixedVertexHandle::from_index(hb)).position();
            std_segs.push((ci, pa, pb));
            cdt.add_constraint_and_split(
                spade::handles::FixedVertexHandle::from_index(ha),
                spade::handles::FixedVertexHandle::from_index(hb),
                |p| p,
            );
        }
        kinds.resize(cdt.num_vertices(), Kind::Interior);
        // Sorted boundary positions along each face edge, as indices into the canonical order.
        let on_edge = |idx: usize, i: usize| -> Option<usize> {
            // position along canonical edge order: 0 = canonical start, n+1 = end
            let h = 3 * f + i as u32;
            let e = m.edge(h);
            let fwd = m.edge_halfedge(e) == h;
            let n = clusters[e as usize].len();
            match kinds[idx] {
                Kind::Corner(c) if c == i => Some(if fwd { 0 } else { n + 1 }),
                Kind::Corner(c) if c == (i + 1) % 3 => Some(if fwd { n + 1 } else { 0 }),
                Kind::Edge(j, k) if j == i => Some(k + 1),
                _ => None,
            }
        };
        let mut local: HashMap<(usize, usize), u32> = HashMap::new();
        for face in cdt.inner_faces() {
            let edges = face.adjacent_edges();
            let pid = pieces.len() as u32;
            let mut pos = [P2::origin(); 3];
            for j in 0..3 {
                let v = edges[j].from();
                let b = from_std(&v.position());
                pos[j] = from_barycentric(m.layout(f), &b);
            }
            pieces.push(Piece { face: f, pos });
            for (j, e) in edges.iter().enumerate() {
                let (u, v) = (e.from().fix().index(), e.to().fix().index());
                let h = 3 * pid + j as u32;
                twin.push(NONE);
                let mut t: Tags = SmallVec::new();
                if e.is_constraint_edge() {
                    let (pu, pv) = (e.from().position(), e.to().position());
                    for &(ci, a, b) in &std_segs {
                        if let Some(fw) = on_segment(&pu, &pv, &a, &b) {
                            if !t.contains(&(ci, fw)) {
                                t.push((ci, fw));
                            }
                        }
                    }
                }
                tags.push(t);
                local.insert((u, v), h);
                for i in 0..3 {
                    if let (Some(a), Some(b)) = (on_edge(u, i), on_edge(v, i)) {
                        let e = m.edge(3 * f + i as u32);
                        if a.abs_diff(b) == 1 {
                            across.entry((e, a.min(b))).or_default().push(h);
                        }
                    }
                }
            }
        }
        for (&(u, v), &h) in &local {
            if let Some(&t) = local.get(&(v, u)) {
                twin[h as usize] = t;
            }
        }
    }
    for (_, hs) in across {
        if hs.len() == 2 {
            let (a, b) = (hs[0], hs[1]);
            twin[a as usize] = b;
            twin[b as usize] = a;
            let ta: Tags = tags[a as usize].clone();
            let tb: Tags = tags[b as usize].clone();
            for (c, fw) in tb {
                if !tags[a as usize].contains(&(c, !fw)) {
                    tags[a as usize].push((c, !fw));
                }
            }
            for (c, fw) in ta {
                if !tags[b as usize].contains(&(c, !fw)) {
                    tags[b as usize].push((c, !fw));
                }
            }
        }
    }
    Ok(Overlay { pieces, twin, tags })
}

/// Whether segment `u→v` lies on `a→b`; returns the relative direction.
fn on_segment(u: &Point2<f64>, v: &Point2<f64>, a: &Point2<f64>, b: &Point2<f64>) -> Option<bool> {
    let eps = 1e-9;
    let ab = P2::new(b.x, b.y) - P2::new(a.x, a.y);
    let l2 = ab.norm_squared();
    if l2 == 0.0 {
        return None;
    }
    let l = l2.sqrt();
    let check = |p: &Point2<f64>| {
        let ap = P2::new(p.x, p.y) - P2::new(a.x, a.y);
        let t = ap.dot(&ab) / l2;
        cross(&ab, &ap).abs() / l <= eps && t >= -eps / l && t <= 1.0 + eps / l
    };
    if !check(u) || !check(v) {
        return None;
    }
    let uv = P2::new(v.x, v.y) - P2::new(u.x, u.y);
    Some(uv.dot(&ab) > 0.0)
}

fn components(ov: &Overlay) -> Result<Vec<Component>, OverlayError> {
    let n = ov.pieces.len();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = count;
        while let Some(p) = stack.pop() {
            for j in 0..3 {
                let h = 3 * p + j;
                let t = ov.twin[h];
                if t == NONE || !ov.tags[h].is_empty() {
                    continue;
                }
                let q = (t / 3) as usize;
                if comp[q] == usize::MAX {
                    comp[q] = count;
                    stack.push(q);
                }
            }
        }
        count += 1;
    }
    let mut out = Vec::with_capacity(count);
    for c in 0..count {
        let members: Vec<usize> = (0..n).filter(|&p| comp[p] == c).collect();
        let mut index = vec![u32::MAX; n];
        for (k, &p) in members.iter().enumerate() {
            index[p] = k as u32;
        }
        let mut twin = Vec::with_capacity(3 * members.len());
        let mut he_len = Vec::with_capacity(3 * members.len());
        let mut tags = Vec::with_capacity(3 * members.len());
        for &p in &members {
            let pos = &ov.pieces[p].pos;
            for j in 0..3 {
                let h = 3 * p + j;
                let t = ov.twin[h];
                let glued = t != NONE && ov.tags[h].is_empty() && comp[(t / 3) as usize] == c;
                twin.push(if glued { 3 * index[(t / 3) as usize] + t % 3 } else { NONE });
                he_len.push((pos[(j + 1) % 3] - pos[j]).norm().max(1e-300));
                tags.push(ov.tags[h].clone());
            }
        }
        // Twins must agree on length exactly.
        for h in 0..twin.len() {
            let t = twin[h];
            if t != NONE && (t as usize) > h {
                let l = 0.5 * (he_len[h] + he_len[t as usize]);
                he_len[h] = l;
                he_len[t as usize] = l;
            }
        }
        let mesh = IntrinsicMesh::from_gluing(None, twin, &he_len, false)?;
        let mut frame = Vec::with_capacity(members.len());
        let mut parent_face = Vec::with_capacity(members.len());
        for (k, &p) in members.iter().enumerate() {
            let pos = &ov.pieces[p].pos;
            let l = mesh.layout(k as u32);
            let d = pos[1] - pos[0];
            let ld = l[1] - l[0];
            let ang = d.y.atan2(d.x) - ld.y.atan2(ld.x);
            let rot = nalgebra::UnitComplex::new(ang);
            let tr = pos[0].coords - rot * l[0].coords;
            frame.push(Iso::from_parts(nalgebra::Translation2::from(tr), rot));
            parent_face.push(ov.pieces[p].face);
        }
        let euler = mesh.euler_characteristic();
        let boundary_loops = mesh.boundary_loops().len();
        let area = mesh.area();
        out.push(Component { mesh, parent_face, frame, tags, euler, boundary_loops, area });
    }
    Ok(out)
}
