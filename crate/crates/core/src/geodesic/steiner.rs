//! Lazy Steiner-graph Dijkstra used to seed straightening.
//!
//! Every edge is divided into `n` equal parts; nodes are mesh vertices and the
//! division points, and any two nodes on a common face are joined by a straight
//! segment inside that face.

use crate::curve::{Segment, SurfaceCurve};
use crate::geom::{from_barycentric, P2};
use crate::mesh::{face_of, IntrinsicMesh};
use crate::point::{corner_bary, edge_bary, SurfacePoint};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Clone, Copy, PartialEq)]
pub(crate) struct HeapItem(pub f64, pub u32);

impl Eq for HeapItem {}
impl Ord for HeapItem {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
    }
}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// A node as seen from one face: its id and barycentric position there.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Slot {
    pub node: u32,
    pub bary: [f64; 3],
}

pub(crate) struct SteinerLayout {
    pub n: usize,
    pub nv: u32,
    pub n_nodes: u32,
}

impl SteinerLayout {
    pub fn new(m: &IntrinsicMesh, n: usize) -> Self {
        let n = n.max(1);
        let nv = m.n_vertices() as u32;
        let n_nodes = nv + (m.n_edges() * (n - 1)) as u32;
        SteinerLayout { n, nv, n_nodes }
    }

    /// Vertex and edge-division slots of face `f`.
    pub fn face_slots(&self, m: &IntrinsicMesh, f: u32, out: &mut Vec<Slot>) {
        for i in 0..3 {
            out.push(Slot { node: m.corner_vertex(f, i), bary: corner_bary(i) });
        }
        for i in 0..3 {
            let h = 3 * f + i as u32;
            let e = m.edge(h);
            let canon = m.edge_halfedge(e);
            for k in 1..self.n {
                let t = k as f64 / self.n as f64;
                let tl = if canon == h { t } else { 1.0 - t };
                out.push(Slot { node: self.nv + e * (self.n as u32 - 1) + (k as u32 - 1), bary: edge_bary(i, tl) });
            }
        }
    }

    /// Faces adjacent to a graph node.
    pub fn node_faces(&self, m: &IntrinsicMesh, node: u32, out: &mut Vec<u32>) {
        if node < self.nv {
            for h in m.outgoing(node) {
                let f = face_of(h);
                if !out.contains(&f) {
                    out.push(f);
                }
            }
        } else {
            let e = (node - self.nv) / (self.n as u32 - 1);
            let h = m.edge_halfedge(e);
            out.push(face_of(h));
            if let Some(t) = m.twin(h) {
                if face_of(t) != face_of(h) {
                    out.push(face_of(t));
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct SteinerPath {
    pub length: f64,
    pub curve: SurfaceCurve,
    /// Number of graph nodes strictly between the endpoints.
    pub hops: usize,
}

#[derive(Clone, Copy)]
struct Pred {
    node: u32,
    face: u32,
    from: [f64; 3],
    to: [f64; 3],
}

/// Shortest path from `p` to `q` in the Steiner graph with `n` divisions per edge.
pub fn steiner_shortest(m: &IntrinsicMesh, p: &SurfacePoint, q: &SurfacePoint, n: usize) -> Option<SteinerPath> {
    let lay = SteinerLayout::new(m, n);
    let src = lay.n_nodes;
    let dst = lay.n_nodes + 1;
    let total = (lay.n_nodes + 2) as usize;
    let p_reps = p.representations(m);
    let q_reps = q.representations(m);
    let mut dist = vec![f64::INFINITY; total];
    let mut pred: Vec<Option<Pred>> = vec![None; total];
    let mut heap = BinaryHeap::new();
    dist[src as usize] = 0.0;
    heap.push(HeapItem(0.0, src));
    let mut faces = Vec::new();
    let mut slots = Vec::new();
    while let Some(HeapItem(d, u)) = heap.pop() {
        if d > dist[u as usize] {
            continue;
        }
        if u == dst {
            break;
        }
        faces.clear();
        if u == src {
            for (f, _) in &p_reps {
                if !faces.contains(f) {
                    faces.push(*f);
                }
            }
        } else {
            lay.node_faces(m, u, &mut faces);
        }
        for &f in &faces {
            slots.clear();
            lay.face_slots(m, f, &mut slots);
            for (g, b) in &q_reps {
                if *g == f {
                    slots.push(Slot { node: dst, bary: *b });
                }
            }
            let l = m.layout(f);
            let mine: Vec<[f64; 3]> = if u == src {
                p_reps.iter().filter(|r| r.0 == f).map(|r| r.1).collect()
            } else {
                slots.iter().filter(|s| s.node == u).map(|s| s.bary).collect()
            };
            for ub in &mine {
                let up: P2 = from_barycentric(l, ub);
                for s in &slots {
                    if s.node == u {
                        continue;
                    }
                    let nd = d + (from_barycentric(l, &s.bary) - up).norm();
                    if nd < dist[s.node as usize] {
                        dist[s.node as usize] = nd;
                        pred[s.node as usize] = Some(Pred { node: u, face: f, from: *ub, to: s.bary });
                        heap.push(HeapItem(nd, s.node));
                    }
                }
            }
        }
    }
    if !dist[dst as usize].is_finite() {
        return None;
    }
    let mut segs = Vec::new();
    let mut cur = dst;
    while cur != src {
        let pr = pred[cur as usize]?;
        segs.push(Segment { face: pr.face, a: pr.from, b: pr.to });
        cur = pr.node;
    }
    segs.reverse();
    let hops = segs.len().saturating_sub(1);
    Some(SteinerPath { length: dist[dst as usize], curve: SurfaceCurve::new(segs), hops })
}
