//! Points on the surface, in face-barycentric form with a canonical representative.

use crate::geom::{from_barycentric, P2};
use crate::mesh::{face_of, next, IntrinsicMesh};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

pub const TOL_BARY: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub face: u32,
    pub bary: [f64; 3],
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Location {
    Vertex(u32),
    /// Point on halfedge `h` at parameter `t` measured from its tail.
    Edge { h: u32, t: f64 },
    Face,
}

/// Barycentric coordinates of the point at parameter `t` along local edge `i`.
pub fn edge_bary(i: usize, t: f64) -> [f64; 3] {
    let mut b = [0.0; 3];
    b[i] = 1.0 - t;
    b[(i + 1) % 3] = t;
    b
}

pub fn corner_bary(i: usize) -> [f64; 3] {
    let mut b = [0.0; 3];
    b[i] = 1.0;
    b
}

fn snap(mut b: [f64; 3], tol: f64) -> [f64; 3] {
    for x in &mut b {
        if *x < tol {
            *x = 0.0;
        }
    }
    let s: f64 = b.iter().sum();
    if s > 0.0 {
        for x in &mut b {
            *x /= s;
        }
    }
    for x in &mut b {
        if *x > 1.0 - tol {
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

impl SurfacePoint {
    /// Snapped and canonicalized point.
    pub fn new(m: &IntrinsicMesh, face: u32, bary: [f64; 3]) -> Self {
        SurfacePoint { face, bary: snap(bary, TOL_BARY) }.canonical(m)
    }

    /// Point without snapping or canonicalization.
    pub fn raw(face: u32, bary: [f64; 3]) -> Self {
        SurfacePoint { face, bary }
    }

    pub fn vertex(m: &IntrinsicMesh, v: u32) -> Self {
        let h = m.vertex_halfedge(v);
        SurfacePoint { face: face_of(h), bary: corner_bary((h % 3) as usize) }
    }

    /// Point at parameter `t` along halfedge `h`.
    pub fn on_halfedge(m: &IntrinsicMesh, h: u32, t: f64) -> Self {
        SurfacePoint::new(m, face_of(h), edge_bary((h % 3) as usize, t))
    }

    pub fn from_position(m: &IntrinsicMesh, face: u32, p: &P2) -> Self {
        let b = crate::geom::barycentric(m.layout(face), p);
        SurfacePoint::new(m, face, b)
    }

    pub fn position(&self, m: &IntrinsicMesh) -> P2 {
        from_barycentric(m.layout(self.face), &self.bary)
    }

    pub fn location(&self, m: &IntrinsicMesh) -> Location {
        let zeros = self.bary.iter().filter(|&&x| x == 0.0).count();
        let f = self.face;
        match zeros {
            2 => {
                let i = self.bary.iter().position(|&x| x == 1.0).unwrap_or(0);
                Location::Vertex(m.corner_vertex(f, i))
            }
            1 => {
                let z = self.bary.iter().position(|&x| x == 0.0).unwrap();
                // The zero coordinate is opposite the edge the point lies on.
                let i = (z + 1) % 3;
                Location::Edge { h: 3 * f + i as u32, t: self.bary[(i + 1) % 3] }
            }
            _ => Location::Face,
        }
    }

    /// Unique representative: vertices use their first outgoing halfedge,
    /// edge points the lower-indexed halfedge of their edge.
    pub fn canonical(&self, m: &IntrinsicMesh) -> Self {
        match self.location(m) {
            Location::Vertex(v) => SurfacePoint::vertex(m, v),
            Location::Edge { h, t } => match m.twin(h) {
                Some(tw) if tw < h => SurfacePoint { face: face_of(tw), bary: edge_bary((tw % 3) as usize, 1.0 - t) },
                _ => *self,
            },
            Location::Face => *self,
        }
    }

    pub fn is_vertex(&self) -> bool {
        self.bary.contains(&1.0)
    }

    pub fn as_vertex(&self, m: &IntrinsicMesh) -> Option<u32> {
        match self.location(m) {
            Location::Vertex(v) => Some(v),
            _ => None,
        }
    }

    /// Every (face, barycentric) pair describing this point.
    pub fn representations(&self, m: &IntrinsicMesh) -> SmallVec<[(u32, [f64; 3]); 6]> {
        let mut out = SmallVec::new();
        match self.location(m) {
            Location::Vertex(v) => {
                for h in m.outgoing(v) {
                    out.push((face_of(h), corner_bary((h % 3) as usize)));
                }
            }
            Location::Edge { h, t } => {
                out.push((face_of(h), edge_bary((h % 3) as usize, t)));
                if let Some(tw) = m.twin(h) {
                    out.push((face_of(tw), edge_bary((tw % 3) as usize, 1.0 - t)));
                }
            }
            Location::Face => out.push((self.face, self.bary)),
        }
        out
    }

    /// Barycentric coordinates in face `f`, if the point lies on its closure.
    /// A vertex appearing at several corners of `f` yields the first one.
    pub fn in_face(&self, m: &IntrinsicMesh, f: u32) -> Option<[f64; 3]> {
        if self.face == f {
            return Some(self.bary);
        }
        self.representations(m).into_iter().find(|r| r.0 == f).map(|r| r.1)
    }

    /// Whether two points coincide up to `tol` in length units.
    pub fn same(&self, m: &IntrinsicMesh, other: &SurfacePoint, tol: f64) -> bool {
        if let (Location::Vertex(a), Location::Vertex(b)) = (self.location(m), other.location(m)) {
            return a == b;
        }
        let mine = self.representations(m);
        for (f, b) in other.representations(m) {
            let q = from_barycentric(m.layout(f), &b);
            for (g, c) in &mine {
                if *g == f && (from_barycentric(m.layout(f), c) - q).norm() <= tol {
                    return true;
                }
            }
        }
        false
    }
}

/// Halfedge of face `f` whose tail is corner `i`.
pub fn corner_halfedge(f: u32, i: usize) -> u32 {
    3 * f + i as u32
}

/// Local edge index in face `f` of the edge containing both corners `i` and `j`.
pub fn edge_between(i: usize, j: usize) -> usize {
    if (i + 1) % 3 == j {
        i
    } else {
        j
    }
}

/// The halfedge after `h` in its face, re-exported for callers working on points.
pub fn next_halfedge(h: u32) -> u32 {
    next(h)
}
