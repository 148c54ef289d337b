//! Intrinsic triangle meshes: combinatorics, explicit gluing and edge lengths.
//!
//! Halfedge `h` lives in face `h / 3` and runs from corner `h % 3` to corner
//! `(h % 3 + 1) % 3`. Vertices are not taken from the input; they are the
//! equivalence classes of corners under the gluing, so abstract gluings such
//! as the one-vertex flat torus come out right.

use crate::geom::{ccw_angle, cross, rotate, Iso, P2, TAU, V2};
use sha2::{Digest, Sha256};
use std::collections::HashMap;
use thiserror::Error;

pub const NONE: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("malformed mesh input: {0}")]
    Parse(String),
    #[error("non-manifold configuration: {0}")]
    NonManifold(String),
    #[error("face {face} violates the strict triangle inequality ({a}, {b}, {c})")]
    TriangleInequalityViolation { face: usize, a: f64, b: f64, c: f64 },
    #[error("mesh is not connected")]
    Disconnected,
}

#[inline]
pub fn next(h: u32) -> u32 {
    if h % 3 == 2 {
        h - 2
    } else {
        h + 1
    }
}

#[inline]
pub fn prev(h: u32) -> u32 {
    if h % 3 == 0 {
        h + 2
    } else {
        h - 1
    }
}

#[inline]
pub fn face_of(h: u32) -> u32 {
    h / 3
}

#[derive(Clone, Debug)]
pub struct IntrinsicMesh {
    tail: Vec<u32>,
    twin: Vec<u32>,
    edge_of: Vec<u32>,
    edge_len: Vec<f64>,
    edge_he: Vec<u32>,
    vertex_he: Vec<u32>,
    vertex_angle: Vec<f64>,
    vertex_boundary: Vec<bool>,
    corner_angle: Vec<f64>,
    corner_offset: Vec<f64>,
    layout: Vec<[P2; 3]>,
    transition: Vec<Iso>,
    boundary_loops: Vec<Vec<u32>>,
    area: f64,
    scale: f64,
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n as u32).collect())
    }
    fn find(&mut self, mut x: u32) -> u32 {
        while self.0[x as usize] != x {
            let p = self.0[x as usize];
            self.0[x as usize] = self.0[p as usize];
            x = p;
        }
        x
    }
    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb) as usize] = ra.min(rb);
        }
    }
}

/// Planar layout of a triangle with halfedge lengths `l0` (v0→v1), `l1` (v1→v2), `l2` (v2→v0).
pub fn layout_triangle(l0: f64, l1: f64, l2: f64) -> [P2; 3] {
    let x = (l0 * l0 + l2 * l2 - l1 * l1) / (2.0 * l0);
    let y = (l2 * l2 - x * x).max(0.0).sqrt();
    [P2::new(0.0, 0.0), P2::new(l0, 0.0), P2::new(x, y)]
}

impl IntrinsicMesh {
    /// Build from face corner labels, an explicit twin map and per-halfedge lengths.
    ///
    /// `labels` are only used to reject bow-tie vertices (one input vertex that
    /// ends up in two corner classes). With `strict` unset, faces violating the
    /// triangle inequality by rounding noise are laid out flat instead of rejected.
    pub fn from_gluing(
        labels: Option<&[[u32; 3]]>,
        twin: Vec<u32>,
        he_len: &[f64],
        strict: bool,
    ) -> Result<Self, MeshError> {
        let nh = twin.len();
        if nh % 3 != 0 || he_len.len() != nh {
            return Err(MeshError::Parse("halfedge arrays have inconsistent sizes".into()));
        }
        let nf = nh / 3;
        if nf == 0 {
            return Err(MeshError::Parse("mesh has no faces".into()));
        }
        for h in 0..nh as u32 {
            let t = twin[h as usize];
            if t != NONE {
                if t as usize >= nh || twin[t as usize] != h || t == h {
                    return Err(MeshError::NonManifold(format!("halfedge {h} has an asymmetric twin")));
                }
                let (a, b) = (he_len[h as usize], he_len[t as usize]);
                if (a - b).abs() > 1e-9 * a.max(b) {
                    return Err(MeshError::NonManifold(format!(
                        "glued halfedges {h} and {t} have different lengths {a} and {b}"
                    )));
                }
            }
        }
        for (h, &l) in he_len.iter().enumerate() {
            if !(l > 0.0 && l.is_finite()) {
                return Err(MeshError::Parse(format!("halfedge {h} has non-positive length {l}")));
            }
        }

        let mut uf = UnionFind::new(nh);
        for h in 0..nh as u32 {
            let t = twin[h as usize];
            if t != NONE {
                uf.union(h, next(t));
                uf.union(next(h), t);
            }
        }
        let mut class_id: HashMap<u32, u32> = HashMap::new();
        let mut tail = vec![0u32; nh];
        for h in 0..nh as u32 {
            let r = uf.find(h);
            let n = class_id.len() as u32;
            tail[h as usize] = *class_id.entry(r).or_insert(n);
        }
        let nv = class_id.len();
        if let Some(labels) = labels {
            let mut seen: HashMap<u32, u32> = HashMap::new();
            for h in 0..nh {
                let l = labels[h / 3][h % 3];
                let v = tail[h];
                if *seen.entry(l).or_insert(v) != v {
                    return Err(MeshError::NonManifold(format!("input vertex {l} is a pinch point")));
                }
            }
        }

        let mut edge_of = vec![NONE; nh];
        let mut edge_he = Vec::new();
        let mut edge_len = Vec::new();
        for h in 0..nh {
            if edge_of[h] == NONE {
                let e = edge_he.len() as u32;
                edge_of[h] = e;
                if twin[h] != NONE {
                    edge_of[twin[h] as usize] = e;
                }
                edge_he.push(h as u32);
                edge_len.push(he_len[h]);
            }
        }

        let mut layout = Vec::with_capacity(nf);
        let mut corner_angle = vec![0.0; nh];
        let mut area = 0.0;
        for f in 0..nf {
            let l0 = edge_len[edge_of[3 * f] as usize];
            let l1 = edge_len[edge_of[3 * f + 1] as usize];
            let l2 = edge_len[edge_of[3 * f + 2] as usize];
            if strict {
                let m = l0.max(l1).max(l2);
                if l0 + l1 + l2 - m <= m {
                    return Err(MeshError::TriangleInequalityViolation { face: f, a: l0, b: l1, c: l2 });
                }
            }
            let p = layout_triangle(l0, l1, l2);
            for i in 0..3 {
                let a = p[i];
                let e1 = p[(i + 1) % 3] - a;
                let e2 = p[(i + 2) % 3] - a;
                corner_angle[3 * f + i] = cross(&e1, &e2).abs().atan2(e1.dot(&e2));
            }
            area += 0.5 * cross(&(p[1] - p[0]), &(p[2] - p[0]));
            layout.push(p);
        }

        let mut out_of: Vec<Vec<u32>> = vec![Vec::new(); nv];
        for h in 0..nh {
            out_of[tail[h] as usize].push(h as u32);
        }
        let mut vertex_he = vec![NONE; nv];
        let mut vertex_boundary = vec![false; nv];
        let mut vertex_angle = vec![0.0; nv];
        let mut corner_offset = vec![0.0; nh];
        for v in 0..nv {
            let outs = &out_of[v];
            let starts: Vec<u32> = outs.iter().copied().filter(|&h| twin[h as usize] == NONE).collect();
            if starts.len() > 1 {
                return Err(MeshError::NonManifold(format!("vertex {v} has {} boundary fans", starts.len())));
            }
            let start = if starts.len() == 1 { starts[0] } else { outs[0] };
            vertex_boundary[v] = starts.len() == 1;
            vertex_he[v] = start;
            let mut h = start;
            let mut acc = 0.0;
            let mut count = 0;
            loop {
                corner_offset[h as usize] = acc;
                acc += corner_angle[h as usize];
                count += 1;
                let p = twin[prev(h) as usize];
                if p == NONE || p == start || count > outs.len() {
                    break;
                }
                h = p;
            }
            if count != outs.len() {
                return Err(MeshError::NonManifold(format!("vertex {v} link is not a single fan")));
            }
            vertex_angle[v] = acc;
        }

        // Connectivity over faces.
        let mut seen = vec![false; nf];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(f) = stack.pop() {
            for i in 0..3 {
                let t = twin[3 * f + i];
                if t != NONE {
                    let g = (t / 3) as usize;
                    if !seen[g] {
                        seen[g] = true;
                        reached += 1;
                        stack.push(g);
                    }
                }
            }
        }
        if reached != nf {
            return Err(MeshError::Disconnected);
        }

        let mut transition = vec![Iso::identity(); nh];
        for h in 0..nh {
            let t = twin[h];
            if t == NONE {
                continue;
            }
            let (f, i) = (h / 3, h % 3);
            let (g, j) = ((t / 3) as usize, (t % 3) as usize);
            let a = layout[f][i];
            let b = layout[f][(i + 1) % 3];
            let a2 = layout[g][(j + 1) % 3];
            let b2 = layout[g][j];
            let ang = (b2 - a2).y.atan2((b2 - a2).x) - (b - a).y.atan2((b - a).x);
            let rot = nalgebra::UnitComplex::new(ang);
            let tr = a2.coords - rot * a.coords;
            transition[h] = Iso::from_parts(nalgebra::Translation2::from(tr), rot);
        }

        let mut boundary_loops = Vec::new();
        let mut on_loop = vec![false; nh];
        for h in 0..nh {
            if twin[h] != NONE || on_loop[h] {
                continue;
            }
            let mut lp = Vec::new();
            let mut c = h as u32;
            loop {
                on_loop[c as usize] = true;
                lp.push(c);
                let hv = tail[next(c) as usize];
                c = vertex_he[hv as usize];
                if c as usize == h || on_loop[c as usize] {
                    break;
                }
            }
            boundary_loops.push(lp);
        }

        Ok(IntrinsicMesh {
            tail,
            twin,
            edge_of,
            edge_len,
            edge_he,
            vertex_he,
            vertex_angle,
            vertex_boundary,
            corner_angle,
            corner_offset,
            layout,
            transition,
            boundary_loops,
            area,
            scale: area.sqrt(),
        })
    }

    pub fn n_faces(&self) -> usize {
        self.layout.len()
    }
    pub fn n_halfedges(&self) -> usize {
        self.twin.len()
    }
    pub fn n_vertices(&self) -> usize {
        self.vertex_he.len()
    }
    pub fn n_edges(&self) -> usize {
        self.edge_he.len()
    }
    #[inline]
    pub fn tail(&self, h: u32) -> u32 {
        self.tail[h as usize]
    }
    #[inline]
    pub fn head(&self, h: u32) -> u32 {
        self.tail[next(h) as usize]
    }
    /// Vertex at corner `i` of face `f`.
    #[inline]
    pub fn corner_vertex(&self, f: u32, i: usize) -> u32 {
        self.tail[3 * f as usize + i]
    }
    pub fn face_vertices(&self, f: u32) -> [u32; 3] {
        let b = 3 * f as usize;
        [self.tail[b], self.tail[b + 1], self.tail[b + 2]]
    }
    #[inline]
    pub fn twin(&self, h: u32) -> Option<u32> {
        let t = self.twin[h as usize];
        (t != NONE).then_some(t)
    }
    #[inline]
    pub fn twin_raw(&self, h: u32) -> u32 {
        self.twin[h as usize]
    }
    #[inline]
    pub fn edge(&self, h: u32) -> u32 {
        self.edge_of[h as usize]
    }
    #[inline]
    pub fn edge_halfedge(&self, e: u32) -> u32 {
        self.edge_he[e as usize]
    }
    #[inline]
    pub fn length(&self, h: u32) -> f64 {
        self.edge_len[self.edge_of[h as usize] as usize]
    }
    pub fn edge_lengths(&self) -> &[f64] {
        &self.edge_len
    }
    #[inline]
    pub fn layout(&self, f: u32) -> &[P2; 3] {
        &self.layout[f as usize]
    }
    /// Rigid map from the frame of `face_of(h)` to the frame of the face across `h`.
    #[inline]
    pub fn transition(&self, h: u32) -> &Iso {
        &self.transition[h as usize]
    }
    /// Start and end of halfedge `h` in its own face frame.
    pub fn halfedge_points(&self, h: u32) -> (P2, P2) {
        let l = &self.layout[(h / 3) as usize];
        let i = (h % 3) as usize;
        (l[i], l[(i + 1) % 3])
    }
    pub fn halfedge_dir(&self, h: u32) -> V2 {
        let (a, b) = self.halfedge_points(h);
        (b - a).normalize()
    }
    #[inline]
    pub fn corner_angle(&self, h: u32) -> f64 {
        self.corner_angle[h as usize]
    }
    /// Angle swept around `tail(h)` before the corner of `h`, counted
    /// counter-clockwise from [`Self::vertex_halfedge`].
    #[inline]
    pub fn corner_offset(&self, h: u32) -> f64 {
        self.corner_offset[h as usize]
    }
    pub fn vertex_halfedge(&self, v: u32) -> u32 {
        self.vertex_he[v as usize]
    }
    /// Total angle at `v`: the cone angle of an interior vertex, the boundary angle otherwise.
    pub fn angle_sum(&self, v: u32) -> f64 {
        self.vertex_angle[v as usize]
    }
    pub fn is_boundary_vertex(&self, v: u32) -> bool {
        self.vertex_boundary[v as usize]
    }
    pub fn cone_angle(&self, v: u32) -> Option<f64> {
        (!self.vertex_boundary[v as usize]).then(|| self.vertex_angle[v as usize])
    }
    pub fn boundary_angle(&self, v: u32) -> Option<f64> {
        self.vertex_boundary[v as usize].then(|| self.vertex_angle[v as usize])
    }
    pub fn is_boundary_halfedge(&self, h: u32) -> bool {
        self.twin[h as usize] == NONE
    }
    pub fn has_boundary(&self) -> bool {
        !self.boundary_loops.is_empty()
    }
    pub fn boundary_loops(&self) -> &[Vec<u32>] {
        &self.boundary_loops
    }
    pub fn area(&self) -> f64 {
        self.area
    }
    pub fn face_area(&self, f: u32) -> f64 {
        let p = &self.layout[f as usize];
        0.5 * cross(&(p[1] - p[0]), &(p[2] - p[0]))
    }
    /// Length scale used for tolerances: the square root of the total area.
    pub fn scale(&self) -> f64 {
        self.scale
    }
    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices() as i64 - self.n_edges() as i64 + self.n_faces() as i64
    }

    /// Outgoing halfedges of `v`, counter-clockwise from [`Self::vertex_halfedge`].
    pub fn outgoing(&self, v: u32) -> Vec<u32> {
        let start = self.vertex_he[v as usize];
        let mut out = vec![start];
        let mut h = start;
        loop {
            let p = self.twin[prev(h) as usize];
            if p == NONE || p == start {
                break;
            }
            out.push(p);
            h = p;
        }
        out
    }

    /// Next outgoing halfedge counter-clockwise around the tail of `h`.
    pub fn ccw_next(&self, h: u32) -> Option<u32> {
        self.twin(prev(h))
    }
    /// Next outgoing halfedge clockwise around the tail of `h`.
    pub fn cw_next(&self, h: u32) -> Option<u32> {
        self.twin(h).map(next)
    }

    /// Angular coordinate at `tail(h)` of a direction given in the frame of `face_of(h)`.
    pub fn angle_coord(&self, h: u32, dir: &V2) -> f64 {
        let a = ccw_angle(&self.halfedge_dir(h), dir);
        // Directions just clockwise of the corner's first edge wrap to ~2π; fold them back.
        let a = if a > TAU - 1e-12 { 0.0 } else { a };
        self.corner_offset[h as usize] + a.min(self.corner_angle[h as usize])
    }

    /// Outgoing halfedge whose corner contains angular coordinate `phi` at `v`,
    /// and the direction in that face's frame.
    pub fn direction_at(&self, v: u32, phi: f64) -> (u32, V2) {
        let theta = self.vertex_angle[v as usize];
        let phi = if self.vertex_boundary[v as usize] {
            phi.clamp(0.0, theta)
        } else {
            phi.rem_euclid(theta)
        };
        let outs = self.outgoing(v);
        let mut best = outs[outs.len() - 1];
        for &h in &outs {
            let o = self.corner_offset[h as usize];
            if phi >= o && phi <= o + self.corner_angle[h as usize] {
                best = h;
                break;
            }
        }
        let o = self.corner_offset[best as usize];
        let local = (phi - o).clamp(0.0, self.corner_angle[best as usize]);
        (best, rotate(&self.halfedge_dir(best), local))
    }

    /// Stable digest over combinatorics and lengths.
    pub fn hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.n_faces() as u64).to_le_bytes());
        for &t in &self.twin {
            hasher.update(t.to_le_bytes());
        }
        for h in 0..self.n_halfedges() as u32 {
            hasher.update(self.length(h).to_bits().to_le_bytes());
        }
        hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Mesh description as read from disk.
#[derive(Clone, Debug, Default)]
pub struct RawMesh {
    pub positions: Vec<[f64; 3]>,
    pub faces: Vec<[u32; 3]>,
}

/// An explicit gluing of local edge `e1` of face `f1` to local edge `e2` of face `f2`.
pub type Identification = (u32, u8, u32, u8);

pub fn parse_off(text: &str) -> Result<RawMesh, MeshError> {
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split_whitespace())
        .peekable();
    if tokens.peek() == Some(&"OFF") {
        tokens.next();
    }
    let mut num = |what: &str| -> Result<f64, MeshError> {
        tokens
            .next()
            .ok_or_else(|| MeshError::Parse(format!("unexpected end of input reading {what}")))?
            .parse::<f64>()
            .map_err(|e| MeshError::Parse(format!("bad {what}: {e}")))
    };
    let nv = num("vertex count")? as usize;
    let nf = num("face count")? as usize;
    let _ne = num("edge count")?;
    let mut positions = Vec::with_capacity(nv);
    for _ in 0..nv {
        positions.push([num("x")?, num("y")?, num("z")?]);
    }
    let mut faces = Vec::with_capacity(nf);
    for i in 0..nf {
        let k = num("face arity")? as usize;
        if k != 3 {
            return Err(MeshError::Parse(format!("face {i} is not a triangle")));
        }
        let mut f = [0u32; 3];
        for c in &mut f {
            let v = num("face index")?;
            if v < 0.0 || v as usize >= nv {
                return Err(MeshError::Parse(format!("face {i} references missing vertex {v}")));
            }
            *c = v as u32;
        }
        faces.push(f);
    }
    Ok(RawMesh { positions, faces })
}

/// Sidecar lengths: one `edge_id length` pair per line.
pub fn parse_lengths(text: &str) -> Result<Vec<(u32, f64)>, MeshError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(MeshError::Parse(format!("lengths line {}: expected `edge_id length`", n + 1)));
        }
        let e = parts[0].parse::<u32>().map_err(|e| MeshError::Parse(format!("lengths line {}: {e}", n + 1)))?;
        let l = parts[1].parse::<f64>().map_err(|e| MeshError::Parse(format!("lengths line {}: {e}", n + 1)))?;
        out.push((e, l));
    }
    Ok(out)
}

/// Identifications: one `face local_edge face local_edge` quadruple per line.
pub fn parse_identifications(text: &str) -> Result<Vec<Identification>, MeshError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v: Result<Vec<u32>, _> = line.split_whitespace().map(|s| s.parse::<u32>()).collect();
        let v = v.map_err(|e| MeshError::Parse(format!("identifications line {}: {e}", n + 1)))?;
        if v.len() != 4 || v[1] > 2 || v[3] > 2 {
            return Err(MeshError::Parse(format!("identifications line {}: expected `f e f e`", n + 1)));
        }
        out.push((v[0], v[1] as u8, v[2], v[3] as u8));
    }
    Ok(out)
}

/// Glue, measure and validate a raw mesh.
pub fn load_mesh(
    raw: &RawMesh,
    lengths: &[(u32, f64)],
    idents: &[Identification],
) -> Result<IntrinsicMesh, MeshError> {
    let nf = raw.faces.len();
    let nh = 3 * nf;
    let lab = |h: usize| raw.faces[h / 3][h % 3];
    let head_lab = |h: usize| raw.faces[h / 3][(h % 3 + 1) % 3];
    let mut twin = vec![NONE; nh];
    for &(f1, e1, f2, e2) in idents {
        if f1 as usize >= nf || f2 as usize >= nf {
            return Err(MeshError::Parse(format!("identification references missing face ({f1}, {f2})")));
        }
        let h1 = 3 * f1 as usize + e1 as usize;
        let h2 = 3 * f2 as usize + e2 as usize;
        if h1 == h2 || twin[h1] != NONE || twin[h2] != NONE {
            return Err(MeshError::NonManifold(format!("halfedge glued twice ({f1} {e1} / {f2} {e2})")));
        }
        twin[h1] = h2 as u32;
        twin[h2] = h1 as u32;
    }
    let mut directed: HashMap<(u32, u32), Vec<usize>> = HashMap::new();
    for h in 0..nh {
        if twin[h] == NONE {
            let key = (lab(h), head_lab(h));
            if key.0 == key.1 {
                return Err(MeshError::Parse(format!("face {} has a repeated vertex", h / 3)));
            }
            directed.entry(key).or_default().push(h);
        }
    }
    for (key, hs) in &directed {
        if hs.len() > 1 {
            return Err(MeshError::NonManifold(format!("edge {}-{} is used twice in one direction", key.0, key.1)));
        }
    }
    for h in 0..nh {
        if twin[h] != NONE {
            continue;
        }
        if let Some(partners) = directed.get(&(head_lab(h), lab(h))) {
            let t = partners[0];
            if twin[t] == NONE {
                twin[h] = t as u32;
                twin[t] = h as u32;
            }
        }
    }

    // Edge ids in order of first appearance, matching the sidecar convention.
    let mut edge_of = vec![NONE; nh];
    let mut n_edges = 0u32;
    for h in 0..nh {
        if edge_of[h] == NONE {
            edge_of[h] = n_edges;
            if twin[h] != NONE {
                edge_of[twin[h] as usize] = n_edges;
            }
            n_edges += 1;
        }
    }
    let mut elen: Vec<Option<f64>> = vec![None; n_edges as usize];
    if !raw.positions.is_empty() {
        for h in 0..nh {
            let a = raw.positions[lab(h) as usize];
            let b = raw.positions[head_lab(h) as usize];
            let d = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt();
            let e = edge_of[h] as usize;
            match elen[e] {
                None => elen[e] = Some(d),
                Some(l) if twin[h] != NONE && idents.is_empty() && (l - d).abs() > 1e-9 * l.max(d) => {
                    return Err(MeshError::NonManifold(format!("edge {e} has inconsistent positional length")));
                }
                _ => {}
            }
        }
    }
    for &(e, l) in lengths {
        if e >= n_edges {
            return Err(MeshError::Parse(format!("length given for missing edge {e}")));
        }
        elen[e as usize] = Some(l);
    }
    let mut he_len = vec![0.0; nh];
    for h in 0..nh {
        he_len[h] = elen[edge_of[h] as usize]
            .ok_or_else(|| MeshError::Parse(format!("no length for edge {}", edge_of[h])))?;
    }
    IntrinsicMesh::from_gluing(Some(&raw.faces), twin, &he_len, true)
}

pub fn load_mesh_files(
    off: &std::path::Path,
    lengths: Option<&std::path::Path>,
    idents: Option<&std::path::Path>,
) -> Result<IntrinsicMesh, LoadError> {
    let raw = parse_off(&std::fs::read_to_string(off).map_err(|e| LoadError::Io(off.display().to_string(), e))?)?;
    let lens = match lengths {
        Some(p) => parse_lengths(&std::fs::read_to_string(p).map_err(|e| LoadError::Io(p.display().to_string(), e))?)?,
        None => Vec::new(),
    };
    let ids = match idents {
        Some(p) => {
            parse_identifications(&std::fs::read_to_string(p).map_err(|e| LoadError::Io(p.display().to_string(), e))?)?
        }
        None => Vec::new(),
    };
    Ok(load_mesh(&raw, &lens, &ids)?)
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

/// Reference meshes used throughout the tests and the CLI.
pub mod golden {
    use super::*;

    pub fn flat_square() -> IntrinsicMesh {
        let raw = RawMesh {
            positions: vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]],
            faces: vec![[0, 1, 2], [0, 2, 3]],
        };
        load_mesh(&raw, &[], &[]).expect("flat square")
    }

    /// Rectangle `[0,1] × [0,0.5]`.
    pub fn half_square() -> IntrinsicMesh {
        let raw = RawMesh {
            positions: vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 0.5, 0.0], [0.0, 0.5, 0.0]],
            faces: vec![[0, 1, 2], [0, 2, 3]],
        };
        load_mesh(&raw, &[], &[]).expect("half square")
    }

    /// Square `[0,s]²` split into `n × n` cells, two triangles each.
    pub fn grid_square(n: usize, s: f64) -> IntrinsicMesh {
        let mut positions = Vec::new();
        for j in 0..=n {
            for i in 0..=n {
                positions.push([s * i as f64 / n as f64, s * j as f64 / n as f64, 0.0]);
            }
        }
        let id = |i: usize, j: usize| (j * (n + 1) + i) as u32;
        let mut faces = Vec::new();
        for j in 0..n {
            for i in 0..n {
                faces.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                faces.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        load_mesh(&RawMesh { positions, faces }, &[], &[]).expect("grid square")
    }

    pub fn cube() -> IntrinsicMesh {
        let positions = vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [1.0, 1.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            [1.0, 0.0, 1.0],
            [1.0, 1.0, 1.0],
            [0.0, 1.0, 1.0],
        ];
        let quads = [[0, 3, 2, 1], [4, 5, 6, 7], [0, 1, 5, 4], [1, 2, 6, 5], [2, 3, 7, 6], [3, 0, 4, 7]];
        let mut faces = Vec::new();
        for q in quads {
            faces.push([q[0], q[1], q[2]]);
            faces.push([q[0], q[2], q[3]]);
        }
        load_mesh(&RawMesh { positions, faces }, &[], &[]).expect("cube")
    }

    /// Unit square with opposite sides identified; a single vertex.
    pub fn flat_torus() -> IntrinsicMesh {
        let raw = RawMesh {
            positions: vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]],
            faces: vec![[0, 1, 2], [0, 2, 3]],
        };
        load_mesh(&raw, &[], &torus_identifications()).expect("flat torus")
    }

    pub fn torus_identifications() -> Vec<Identification> {
        // bottom 0→1 with top 2→3, right 1→2 with left 3→0
        vec![(0, 0, 1, 1), (0, 1, 1, 2)]
    }

    /// Two unit squares glued along their boundary: a sphere with four cone points of angle π.
    /// The front uses the diagonal 0–2, the back the diagonal 1–3.
    pub fn pillow() -> IntrinsicMesh {
        let raw = RawMesh {
            positions: vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]],
            faces: vec![[0, 1, 2], [0, 2, 3], [0, 3, 1], [3, 2, 1]],
        };
        load_mesh(&raw, &[], &[]).expect("pillow")
    }

    /// Five right isosceles triangles around a centre: a disk whose centre has cone angle 5π/2.
    pub fn saddle() -> IntrinsicMesh {
        let nf = 5;
        let mut faces = Vec::new();
        for i in 0..nf {
            faces.push([0, 1 + i as u32, 1 + ((i + 1) % nf) as u32]);
        }
        let mut lengths = Vec::new();
        let raw = RawMesh { positions: Vec::new(), faces };
        // Edge ids follow first appearance: spokes have length 1, rims √2.
        let mut edge_ids: HashMap<(u32, u32), u32> = HashMap::new();
        for f in &raw.faces {
            for i in 0..3 {
                let (a, b) = (f[i], f[(i + 1) % 3]);
                let key = (a.min(b), a.max(b));
                let n = edge_ids.len() as u32;
                edge_ids.entry(key).or_insert_with(|| {
                    lengths.push((n, if key.0 == 0 { 1.0 } else { 2f64.sqrt() }));
                    n
                });
            }
        }
        load_mesh(&raw, &lengths, &[]).expect("saddle")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn square_has_no_cone_points() {
        let m = golden::flat_square();
        assert_eq!(m.n_vertices(), 4);
        assert_eq!(m.n_faces(), 2);
        assert!((m.area() - 1.0).abs() < 1e-15);
        for v in 0..4 {
            assert!(m.is_boundary_vertex(v));
        }
        assert_eq!(m.boundary_loops().len(), 1);
        assert_eq!(m.boundary_loops()[0].len(), 4);
        let total: f64 = (0..4).map(|v| m.angle_sum(v)).sum();
        assert!((total - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn cube_corners_have_three_halves_pi() {
        let m = golden::cube();
        assert_eq!(m.n_vertices(), 8);
        assert_eq!(m.euler_characteristic(), 2);
        for v in 0..8 {
            let a = m.cone_angle(v).unwrap();
            assert!((a - 1.5 * PI).abs() < 1e-12, "vertex {v}: {a}");
        }
    }

    #[test]
    fn torus_has_one_flat_vertex() {
        let m = golden::flat_torus();
        assert_eq!(m.n_vertices(), 1);
        assert_eq!(m.n_edges(), 3);
        assert_eq!(m.euler_characteristic(), 0);
        assert!((m.cone_angle(0).unwrap() - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn pillow_corners_have_angle_pi() {
        let m = golden::pillow();
        assert_eq!(m.n_vertices(), 4);
        assert_eq!(m.euler_characteristic(), 2);
        for v in 0..4 {
            assert!((m.cone_angle(v).unwrap() - PI).abs() < 1e-12);
        }
    }

    #[test]
    fn saddle_centre_is_five_halves_pi() {
        let m = golden::saddle();
        let c = m.corner_vertex(0, 0);
        assert!((m.cone_angle(c).unwrap() - 2.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn rejects_triangle_inequality_violation() {
        let raw = RawMesh { positions: Vec::new(), faces: vec![[0, 1, 2]] };
        let err = load_mesh(&raw, &[(0, 1.0), (1, 1.0), (2, 2.5)], &[]).unwrap_err();
        assert!(matches!(err, MeshError::TriangleInequalityViolation { face: 0, .. }));
    }

    #[test]
    fn rejects_disconnected_and_nonmanifold() {
        let raw = RawMesh {
            positions: vec![
                [0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [5.0, 0.0, 0.0],
                [6.0, 0.0, 0.0],
                [5.0, 1.0, 0.0],
            ],
            faces: vec![[0, 1, 2], [3, 4, 5]],
        };
        assert_eq!(load_mesh(&raw, &[], &[]).unwrap_err(), MeshError::Disconnected);
        let fin = RawMesh {
            positions: vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, -1.0, 0.0], [0.5, 0.5, 1.0]],
            faces: vec![[0, 1, 2], [1, 0, 3], [1, 0, 4]],
        };
        assert!(matches!(load_mesh(&fin, &[], &[]), Err(MeshError::NonManifold(_))));
    }

    #[test]
    fn transitions_map_shared_edges() {
        let m = golden::cube();
        for h in 0..m.n_halfedges() as u32 {
            let t = m.twin(h).unwrap();
            let (a, b) = m.halfedge_points(h);
            let (a2, b2) = m.halfedge_points(t);
            let tr = m.transition(h);
            assert!((tr * a - b2).norm() < 1e-12);
            assert!((tr * b - a2).norm() < 1e-12);
        }
    }

    #[test]
    fn parse_round_trip() {
        let text = "OFF\n# square\n4 2 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n3 0 1 2\n3 0 2 3\n";
        let raw = parse_off(text).unwrap();
        let m = load_mesh(&raw, &parse_lengths("0 2\n1 2\n2 2.8284271247461903\n3 2\n4 2\n").unwrap(), &[]).unwrap();
        assert!((m.area() - 4.0).abs() < 1e-12);
        assert!(parse_off("OFF\n1 1 0\n0 0 0\n3 0 1 2\n").is_err());
    }

    #[test]
    fn angle_coordinates_round_trip() {
        let m = golden::cube();
        for v in 0..m.n_vertices() as u32 {
            for k in 0..12 {
                let phi = k as f64 * 0.37;
                let (h, d) = m.direction_at(v, phi);
                let back = m.angle_coord(h, &d);
                let theta = m.angle_sum(v);
                let diff = (back - phi.rem_euclid(theta)).abs();
                assert!(diff < 1e-12 || (diff - theta).abs() < 1e-12, "{v} {phi} {back}");
            }
        }
    }
}
