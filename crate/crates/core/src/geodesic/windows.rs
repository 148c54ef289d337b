//! Enumeration of every straight unfolding from a source within a length budget.
//!
//! A window is a cone of directions from an apex in some unfolding plane that
//! reaches a face through a chain of edge crossings. Windows are split at face
//! corners and never merged, so each surviving window corresponds to one face
//! sequence. Saddle vertices (interior angle above 2π, or boundary angle above π)
//! re-emit windows over the directions that keep the path locally shortest.

use super::path::GeodesicPath;
use super::GeodesicError;
use crate::curve::{Segment, SurfaceCurve};
use crate::geom::{cross, from_barycentric, rotate, Iso, P2, TAU, V2};
use crate::mesh::{face_of, next, IntrinsicMesh};
use crate::point::{corner_bary, edge_bary, SurfacePoint};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug)]
pub struct EnumOptions {
    pub l_max: f64,
    /// Maximum number of edge crossings along a single path.
    pub w_cap: usize,
    pub max_windows: usize,
    pub tol_len: f64,
    pub tol_angle: f64,
}

impl EnumOptions {
    pub fn new(m: &IntrinsicMesh, l_max: f64) -> Self {
        EnumOptions { l_max, w_cap: default_cap(m, l_max), max_windows: 4_000_000, tol_len: 1e-9 * m.scale(), tol_angle: 1e-7 }
    }
}

/// Crossing-count budget derived from the thinnest face.
pub fn default_cap(m: &IntrinsicMesh, l_max: f64) -> usize {
    let mut alt = f64::INFINITY;
    for f in 0..m.n_faces() as u32 {
        let a = m.face_area(f);
        for i in 0..3 {
            alt = alt.min(2.0 * a / m.length(3 * f + i));
        }
    }
    16 + 8 * (l_max / alt.max(1e-300)).ceil().min(1e7) as usize
}

#[derive(Clone, Copy, Debug)]
enum Origin {
    /// Root at the source point, which has barycentric `start` in this face.
    Source { start: [f64; 3] },
    /// Continuation of the parent window through `entry`.
    Child,
    /// Re-emitted at a saddle vertex; the vertex is corner `corner` of this face
    /// and corner `hit` of the parent window's face.
    Vertex { corner: u8, hit: u8 },
}

#[derive(Clone, Debug)]
struct Window {
    face: u32,
    iso: Iso,
    apex: P2,
    r: V2,
    l: V2,
    d0: f64,
    /// Halfedge of `face` through which the window entered.
    entry: Option<u32>,
    /// Halfedges of `face` the window may leave through.
    exits: [Option<u32>; 2],
    parent: Option<usize>,
    origin: Origin,
    depth: usize,
}

fn in_cone(r: &V2, l: &V2, d: &V2, tol: f64) -> bool {
    let n = d.norm();
    if n == 0.0 {
        return true;
    }
    cross(r, d) >= -tol * n * r.norm() && cross(d, l) >= -tol * n * l.norm() && (r.normalize() + l.normalize()).dot(d) > 0.0
}

struct Enumerator<'a> {
    m: &'a IntrinsicMesh,
    opt: EnumOptions,
    wins: Vec<Window>,
    q_reps: Vec<(u32, [f64; 3])>,
    q_vertex: Option<u32>,
    p_vertex: Option<u32>,
    /// Arrivals: window index, target barycentric in its face, length.
    arrivals: Vec<(usize, [f64; 3], f64)>,
    spawned: Vec<Vec<(f64, f64)>>,
    capped: bool,
}

impl<'a> Enumerator<'a> {
    fn push(&mut self, w: Window) -> Result<(), GeodesicError> {
        if self.wins.len() >= self.opt.max_windows {
            return Err(GeodesicError::EnumerationCapExceeded);
        }
        self.wins.push(w);
        Ok(())
    }

    fn roots(&mut self, p: &SurfacePoint) -> Result<(), GeodesicError> {
        for (f, b) in p.representations(self.m) {
            let l = self.m.layout(f);
            let apex = from_barycentric(l, &b);
            for i in 0..3 {
                let (a, bb) = (l[i], l[(i + 1) % 3]);
                if cross(&(bb - a), &(apex - a)).abs() <= 1e-14 * (bb - a).norm_squared() {
                    continue;
                }
                self.push(Window {
                    face: f,
                    iso: Iso::identity(),
                    apex,
                    r: a - apex,
                    l: bb - apex,
                    d0: 0.0,
                    entry: None,
                    exits: [Some(3 * f + i as u32), None],
                    parent: None,
                    origin: Origin::Source { start: b },
                    depth: 0,
                })?;
            }
        }
        Ok(())
    }

    fn run(&mut self) -> Result<(), GeodesicError> {
        let mut i = 0;
        while i < self.wins.len() {
            self.process(i)?;
            i += 1;
        }
        Ok(())
    }

    fn process(&mut self, wi: usize) -> Result<(), GeodesicError> {
        let w = self.wins[wi].clone();
        let m = self.m;
        let lay = m.layout(w.face);
        let tol = 1e-12;
        for &(g, b) in &self.q_reps {
            if g != w.face {
                continue;
            }
            let x = w.iso * from_barycentric(lay, &b);
            let d = x - w.apex;
            let len = w.d0 + d.norm();
            if len <= self.opt.l_max + self.opt.tol_len && in_cone(&w.r, &w.l, &d, tol) {
                self.arrivals.push((wi, b, len));
            }
        }
        // Vertices reachable straight from the apex inside this face.
        let mut corners: smallvec::SmallVec<[usize; 3]> = smallvec::SmallVec::new();
        match w.entry {
            Some(e) => corners.push(((e % 3 + 2) % 3) as usize),
            None => {
                for h in w.exits.iter().flatten() {
                    corners.push((h % 3) as usize);
                    corners.push(((h % 3 + 1) % 3) as usize);
                }
            }
        }
        for k in corners {
            let c = w.iso * lay[k];
            let d = c - w.apex;
            if d.norm() <= self.opt.tol_len || !in_cone(&w.r, &w.l, &d, tol) {
                continue;
            }
            self.vertex_hit(wi, &w, k as u8, c)?;
        }
        let exits: smallvec::SmallVec<[u32; 2]> = match w.entry {
            Some(e) => [next(e), next(next(e))].into_iter().collect(),
            None => w.exits.iter().flatten().copied().collect(),
        };
        for h in exits {
            let Some(tw) = m.twin(h) else { continue };
            let (a, b) = m.halfedge_points(h);
            let (a, b) = (w.iso * a, w.iso * b);
            let (da, db) = (a - w.apex, b - w.apex);
            let (lo, hi) = if w.entry.is_none() {
                (w.r, w.l)
            } else {
                (if cross(&w.r, &da) > 0.0 { da } else { w.r }, if cross(&db, &w.l) > 0.0 { db } else { w.l })
            };
            if cross(&lo, &hi) <= 0.0 {
                continue;
            }
            let (dist, _) = crate::geom::point_segment(&w.apex, &a, &b);
            if w.d0 + dist > self.opt.l_max + self.opt.tol_len {
                continue;
            }
            if w.depth + 1 > self.opt.w_cap {
                self.capped = true;
                continue;
            }
            let iso = w.iso * m.transition(h).inverse();
            self.push(Window {
                face: face_of(tw),
                iso,
                apex: w.apex,
                r: lo,
                l: hi,
                d0: w.d0,
                entry: Some(tw),
                exits: [None, None],
                parent: Some(wi),
                origin: Origin::Child,
                depth: w.depth + 1,
            })?;
        }
        Ok(())
    }

    fn vertex_hit(&mut self, wi: usize, w: &Window, k: u8, c: P2) -> Result<(), GeodesicError> {
        let m = self.m;
        let hc = 3 * w.face + k as u32;
        let v = m.tail(hc);
        if Some(v) == self.q_vertex || Some(v) == self.p_vertex {
            return Ok(());
        }
        let dist = w.d0 + (c - w.apex).norm();
        if dist >= self.opt.l_max + self.opt.tol_len {
            return Ok(());
        }
        let theta = m.angle_sum(v);
        let boundary = m.is_boundary_vertex(v);
        let ta = self.opt.tol_angle;
        let saddle = if boundary { theta > PI + ta } else { theta > TAU + ta };
        if !saddle {
            return Ok(());
        }
        let back = w.iso.rotation.inverse() * (w.apex - c);
        let psi = m.angle_coord(hc, &back);
        if self.spawned[v as usize]
            .iter()
            .any(|&(d, s)| (d - dist).abs() <= self.opt.tol_len && (s - psi).abs() <= 1e-9)
        {
            return Ok(());
        }
        self.spawned[v as usize].push((dist, psi));
        let mut ranges: smallvec::SmallVec<[(f64, f64); 4]> = smallvec::SmallVec::new();
        if boundary {
            if psi + PI < theta {
                ranges.push((psi + PI, theta));
            }
            if psi - PI > 0.0 {
                ranges.push((0.0, psi - PI));
            }
        } else {
            let a = (psi + PI).rem_euclid(theta);
            let b = a + theta - TAU;
            ranges.push((a, b));
            ranges.push((a - theta, b - theta));
        }
        for h in m.outgoing(v) {
            let o = m.corner_offset(h);
            let ca = m.corner_angle(h);
            for &(a, b) in &ranges {
                let x = a.max(o);
                let y = b.min(o + ca);
                if y - x <= 1e-12 {
                    continue;
                }
                let g = face_of(h);
                let kk = (h % 3) as usize;
                let lay = m.layout(g);
                let e = m.halfedge_dir(h);
                if w.depth + 1 > self.opt.w_cap {
                    self.capped = true;
                    continue;
                }
                self.push(Window {
                    face: g,
                    iso: Iso::identity(),
                    apex: lay[kk],
                    r: rotate(&e, x - o),
                    l: rotate(&e, y - o),
                    d0: dist,
                    entry: None,
                    exits: [Some(3 * g + ((kk + 1) % 3) as u32), None],
                    parent: Some(wi),
                    origin: Origin::Vertex { corner: kk as u8, hit: k },
                    depth: w.depth + 1,
                })?;
            }
        }
        Ok(())
    }

    /// Segments from the source to `end` (barycentric in the face of window `wi`).
    fn rebuild(&self, wi: usize, end: [f64; 3]) -> Vec<Segment> {
        let m = self.m;
        let mut chain = vec![wi];
        let mut cur = wi;
        while let Origin::Child = self.wins[cur].origin {
            cur = self.wins[cur].parent.expect("child window has a parent");
            chain.push(cur);
        }
        chain.reverse();
        let root = &self.wins[chain[0]];
        let last = &self.wins[wi];
        let apex = root.apex;
        let x = last.iso * from_barycentric(m.layout(last.face), &end);
        let (mut segs, mut entry) = match root.origin {
            Origin::Source { start } => (Vec::new(), start),
            Origin::Vertex { corner, hit } => {
                let parent = root.parent.expect("vertex window has a parent");
                (self.rebuild(parent, corner_bary(hit as usize)), corner_bary(corner as usize))
            }
            Origin::Child => unreachable!(),
        };
        for j in 0..chain.len() {
            let w = &self.wins[chain[j]];
            if j + 1 == chain.len() {
                segs.push(Segment { face: w.face, a: entry, b: end });
                break;
            }
            let nx = &self.wins[chain[j + 1]];
            let tw = nx.entry.expect("child window has an entry");
            let h = m.twin(tw).expect("entry halfedge is interior");
            let (a, b) = m.halfedge_points(h);
            let (a, b) = (w.iso * a, w.iso * b);
            let d = x - apex;
            let den = cross(&(b - a), &d);
            let t = if den.abs() < 1e-300 { 0.5 } else { (cross(&(apex - a), &d) / den).clamp(0.0, 1.0) };
            let t = if t < 1e-13 {
                0.0
            } else if t > 1.0 - 1e-13 {
                1.0
            } else {
                t
            };
            let (exit_b, next_entry) = if t == 0.0 {
                (corner_bary((h % 3) as usize), corner_bary(((tw + 1) % 3) as usize))
            } else if t == 1.0 {
                (corner_bary(((h + 1) % 3) as usize), corner_bary((tw % 3) as usize))
            } else {
                (edge_bary((h % 3) as usize, t), edge_bary((tw % 3) as usize, 1.0 - t))
            };
            segs.push(Segment { face: w.face, a: entry, b: exit_b });
            entry = next_entry;
        }
        segs
    }
}

/// All straight unfoldings from `p` to `q` of length at most `opt.l_max`,
/// sorted by length with duplicates removed.
pub fn enumerate_geodesics(
    m: &IntrinsicMesh,
    p: &SurfacePoint,
    q: &SurfacePoint,
    opt: &EnumOptions,
) -> Result<Vec<GeodesicPath>, GeodesicError> {
    if p.same(m, q, opt.tol_len) {
        return Ok(vec![GeodesicPath::from_curve(m, SurfaceCurve::constant(p), opt.tol_len)]);
    }
    let mut e = Enumerator {
        m,
        opt: *opt,
        wins: Vec::new(),
        q_reps: q.representations(m).into_iter().collect(),
        q_vertex: q.as_vertex(m),
        p_vertex: p.as_vertex(m),
        arrivals: Vec::new(),
        spawned: vec![Vec::new(); m.n_vertices()],
        capped: false,
    };
    e.roots(p)?;
    e.run()?;
    if e.capped {
        return Err(GeodesicError::EnumerationCapExceeded);
    }
    let mut arrivals = e.arrivals.clone();
    arrivals.sort_by(|a, b| a.2.total_cmp(&b.2));
    let mut out: Vec<GeodesicPath> = Vec::new();
    for (wi, b, _) in arrivals {
        let segs = e.rebuild(wi, b);
        let g = GeodesicPath::from_curve(m, SurfaceCurve::new(segs), opt.tol_len);
        if out.iter().any(|o| same_path(m, o, &g, opt.tol_len)) {
            continue;
        }
        out.push(g);
    }
    out.sort_by(|a, b| a.length.total_cmp(&b.length));
    Ok(out)
}

/// Same length and same points at a few interior parameters.
pub fn same_path(m: &IntrinsicMesh, a: &GeodesicPath, b: &GeodesicPath, tol_len: f64) -> bool {
    if (a.length - b.length).abs() > 10.0 * tol_len {
        return false;
    }
    let tol = 1e-6 * m.scale();
    [0.25, 0.5, 0.75].iter().all(|&s| {
        a.curve.point_at(m, s * a.length).same(m, &b.curve.point_at(m, s * b.length), tol)
    })
}
