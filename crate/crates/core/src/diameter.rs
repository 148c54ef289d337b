//! Diameter bounds for regions and whole surfaces.
//!
//! Regions are covered by small triangular cells, each with a centre and a
//! radius. For two cells, `d(centres) ± (rA + rB)` brackets every distance
//! between their points, so splitting the cells of the pairs with the largest
//! upper estimate narrows the gap between the best lower and upper bounds.

use crate::geodesic::oracle::SteinerOracle;
use crate::geodesic::shortest::shortest_path;
use crate::geom::{barycentric, P2};
use crate::mesh::IntrinsicMesh;
use crate::overlay::snap_bary;
use crate::point::{edge_bary, SurfacePoint};
use crate::region::FacePiece;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiameterBound {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug)]
struct Cell {
    face: u32,
    tri: [P2; 3],
    center: P2,
    radius: f64,
}

impl Cell {
    fn new(face: u32, tri: [P2; 3]) -> Self {
        let center = P2::from((tri[0].coords + tri[1].coords + tri[2].coords) / 3.0);
        let radius = tri.iter().map(|p| (p - center).norm()).fold(0.0, f64::max);
        Cell { face, tri, center, radius }
    }

    fn split(&self) -> [Cell; 4] {
        let [a, b, c] = self.tri;
        let ab = P2::from((a.coords + b.coords) * 0.5);
        let bc = P2::from((b.coords + c.coords) * 0.5);
        let ca = P2::from((c.coords + a.coords) * 0.5);
        [
            Cell::new(self.face, [a, ab, ca]),
            Cell::new(self.face, [ab, b, bc]),
            Cell::new(self.face, [ca, bc, c]),
            Cell::new(self.face, [ab, bc, ca]),
        ]
    }

    fn point(&self, m: &IntrinsicMesh) -> SurfacePoint {
        SurfacePoint::new(m, self.face, snap_bary(barycentric(m.layout(self.face), &self.center), 1e-12))
    }
}

fn cells_of(pieces: &[FacePiece]) -> Vec<Cell> {
    let mut out = Vec::new();
    for p in pieces {
        for i in 1..p.poly.len().saturating_sub(1) {
            out.push(Cell::new(p.face, [p.poly[0], p.poly[i], p.poly[i + 1]]));
        }
    }
    out
}

/// Upper bound from paths through shared cell corners; no geodesic computations.
pub fn quick_bound(m: &IntrinsicMesh, pieces: &[FacePiece], lower: f64) -> DiameterBound {
    let cells = cells_of(pieces);
    let n = cells.len();
    if n == 0 {
        return DiameterBound { lower, upper: lower };
    }
    // Nodes: cell centres, then distinct corner points.
    let mut corners: Vec<SurfacePoint> = Vec::new();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    let tol = 1e-9 * m.scale();
    for (i, c) in cells.iter().enumerate() {
        for p in &c.tri {
            let sp = SurfacePoint::new(m, c.face, snap_bary(barycentric(m.layout(c.face), p), 1e-12));
            let k = match corners.iter().position(|q| q.same(m, &sp, tol)) {
                Some(k) => k,
                None => {
                    corners.push(sp);
                    adj.push(Vec::new());
                    corners.len() - 1
                }
            };
            let w = (p - c.center).norm();
            adj[i].push((n + k, w));
            adj[n + k].push((i, w));
        }
    }
    let mut upper: f64 = 0.0;
    for s in 0..n {
        let d = dijkstra(&adj, s);
        for t in 0..n {
            if d[t].is_finite() {
                upper = upper.max(cells[s].radius + d[t] + cells[t].radius);
            } else {
                upper = f64::INFINITY;
            }
        }
    }
    DiameterBound { lower, upper: upper.max(lower) }
}

fn dijkstra(adj: &[Vec<(usize, f64)>], s: usize) -> Vec<f64> {
    let mut d = vec![f64::INFINITY; adj.len()];
    let mut heap = BinaryHeap::new();
    d[s] = 0.0;
    heap.push(Entry(0.0, s));
    while let Some(Entry(du, u)) = heap.pop() {
        if du > d[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            if du + w < d[v] {
                d[v] = du + w;
                heap.push(Entry(d[v], v));
            }
        }
    }
    d
}

/// Min-heap on the first field, or max-heap when used through [`Pair`].
#[derive(Clone, Copy, Debug)]
struct Entry(f64, usize);

impl PartialEq for Entry {
    fn eq(&self, o: &Self) -> bool {
        self.0 == o.0
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Entry {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0)
    }
}

#[derive(Clone, Debug)]
struct Pair {
    upper: f64,
    a: usize,
    b: usize,
}

impl PartialEq for Pair {
    fn eq(&self, o: &Self) -> bool {
        self.upper == o.upper
    }
}
impl Eq for Pair {}
impl PartialOrd for Pair {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Pair {
    fn cmp(&self, o: &Self) -> Ordering {
        self.upper.total_cmp(&o.upper)
    }
}

/// Cap on geodesic distance evaluations in one bound computation.
const MAX_EVALS: usize = 20_000;

struct Search<'a> {
    m: &'a IntrinsicMesh,
    cells: Vec<Cell>,
    points: Vec<SurfacePoint>,
    heap: BinaryHeap<Pair>,
    lower: f64,
    evals: usize,
}

impl<'a> Search<'a> {
    fn add_cell(&mut self, c: Cell) -> usize {
        self.points.push(c.point(self.m));
        self.cells.push(c);
        self.cells.len() - 1
    }

    fn push(&mut self, a: usize, b: usize, h_net: f64) {
        let d = if a == b {
            0.0
        } else {
            self.evals += 1;
            match shortest_path(self.m, &self.points[a], &self.points[b]) {
                Ok(g) => g.length,
                Err(_) => f64::INFINITY,
            }
        };
        if d.is_finite() {
            self.lower = self.lower.max(d);
        }
        let upper = d + self.cells[a].radius + self.cells[b].radius;
        if upper > self.lower + 2.0 * h_net {
            self.heap.push(Pair { upper, a, b });
        }
    }
}

/// Branch-and-bound diameter of the union of `pieces`, to within `2 h_net`
/// unless the evaluation cap is reached first.
pub fn region_diameter(m: &IntrinsicMesh, pieces: &[FacePiece], h_net: f64, lower: f64) -> DiameterBound {
    let quick = quick_bound(m, pieces, lower);
    if quick.upper <= quick.lower + 2.0 * h_net {
        return quick;
    }
    let mut s = Search { m, cells: Vec::new(), points: Vec::new(), heap: BinaryHeap::new(), lower, evals: 0 };
    let ids: Vec<usize> = cells_of(pieces).into_iter().map(|c| s.add_cell(c)).collect();
    for (k, &a) in ids.iter().enumerate() {
        for &b in &ids[k..] {
            s.push(a, b, h_net);
        }
    }
    let mut upper = s.lower;
    while let Some(p) = s.heap.pop() {
        if p.upper <= s.lower + 2.0 * h_net {
            upper = upper.max(p.upper);
            break;
        }
        if s.evals >= MAX_EVALS {
            upper = upper.max(p.upper);
            break;
        }
        if p.a == p.b {
            let kids: Vec<usize> = s.cells[p.a].split().into_iter().map(|c| s.add_cell(c)).collect();
            for i in 0..4 {
                for j in i..4 {
                    s.push(kids[i], kids[j], h_net);
                }
            }
        } else {
            let (big, other) = if s.cells[p.a].radius >= s.cells[p.b].radius { (p.a, p.b) } else { (p.b, p.a) };
            let kids: Vec<usize> = s.cells[big].split().into_iter().map(|c| s.add_cell(c)).collect();
            for k in kids {
                s.push(k, other, h_net);
            }
        }
    }
    // Whatever is left in the heap is bounded by the pair popped last.
    let rest = s.heap.peek().map_or(0.0, |p| p.upper);
    DiameterBound { lower: s.lower, upper: upper.max(rest).max(s.lower).min(quick.upper) }
}

/// Every face as a piece.
pub fn face_pieces(m: &IntrinsicMesh) -> Vec<FacePiece> {
    (0..m.n_faces() as u32).map(|f| FacePiece { face: f, poly: m.layout(f).to_vec() }).collect()
}

pub fn surface_diameter(m: &IntrinsicMesh, h_net: f64) -> DiameterBound {
    region_diameter(m, &face_pieces(m), h_net, surface_diameter_lower(m))
}

/// A lower bound on the surface diameter from vertices, edge midpoints and face
/// centroids: the oracle ranks all pairs and the best few are measured exactly.
pub fn surface_diameter_lower(m: &IntrinsicMesh) -> f64 {
    let mut pts: Vec<SurfacePoint> = (0..m.n_vertices() as u32).map(|v| SurfacePoint::vertex(m, v)).collect();
    for e in 0..m.n_edges() as u32 {
        let h = m.edge_halfedge(e);
        pts.push(SurfacePoint::new(m, h / 3, edge_bary((h % 3) as usize, 0.5)));
    }
    for f in 0..m.n_faces() as u32 {
        pts.push(SurfacePoint::new(m, f, [1.0 / 3.0; 3]));
    }
    let oracle = SteinerOracle::new(m, 8);
    let mut ranked: Vec<(f64, usize, usize)> = Vec::new();
    let rows = crate::par::par_map(&(0..pts.len()).collect::<Vec<_>>(), |&i| oracle.distances_from(&pts[i], &pts[i + 1..]));
    for (i, row) in rows.into_iter().enumerate() {
        for (k, d) in row.into_iter().enumerate() {
            if let Some(d) = d {
                ranked.push((d, i, i + 1 + k));
            }
        }
    }
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best: f64 = 0.0;
    for &(_, i, j) in ranked.iter().take(8) {
        if let Ok(g) = shortest_path(m, &pts[i], &pts[j]) {
            best = best.max(g.length);
        }
    }
    best
}
