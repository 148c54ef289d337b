//! Explicit Steiner graph for repeated distance queries.
//!
//! Used as an independent reference for the straightening code: its distances
//! are lengths of genuine surface paths, so they bound the true distance from
//! above, and they decrease monotonically as `n` doubles because the division
//! points nest.

use super::steiner::{HeapItem, Slot, SteinerLayout};
use crate::geom::from_barycentric;
use crate::mesh::IntrinsicMesh;
use crate::point::SurfacePoint;
use std::collections::BinaryHeap;

pub struct SteinerOracle<'a> {
    m: &'a IntrinsicMesh,
    lay: SteinerLayout,
    offsets: Vec<u32>,
    adj: Vec<(u32, f64)>,
    max_edge: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleDistance {
    pub value: f64,
    /// Graph nodes strictly between the endpoints on the returned path.
    pub hops: usize,
    /// Heuristic gap between `value` and the exact distance, `2 (hops + 1) L / n`
    /// with `L` the longest edge.
    pub error: f64,
}

impl<'a> SteinerOracle<'a> {
    pub fn new(m: &'a IntrinsicMesh, n: usize) -> Self {
        let lay = SteinerLayout::new(m, n);
        let nn = lay.n_nodes as usize;
        let mut lists: Vec<Vec<(u32, f64)>> = vec![Vec::new(); nn];
        let mut slots = Vec::new();
        for f in 0..m.n_faces() as u32 {
            slots.clear();
            lay.face_slots(m, f, &mut slots);
            let l = m.layout(f);
            let pos: Vec<_> = slots.iter().map(|s| from_barycentric(l, &s.bary)).collect();
            for (i, a) in slots.iter().enumerate() {
                for (j, b) in slots.iter().enumerate() {
                    if i != j && a.node != b.node {
                        lists[a.node as usize].push((b.node, (pos[i] - pos[j]).norm()));
                    }
                }
            }
        }
        let mut offsets = Vec::with_capacity(nn + 1);
        let mut adj = Vec::new();
        offsets.push(0);
        for mut l in lists {
            l.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)));
            l.dedup_by_key(|x| x.0);
            adj.extend(l);
            offsets.push(adj.len() as u32);
        }
        let max_edge = m.edge_lengths().iter().copied().fold(0.0, f64::max);
        SteinerOracle { m, lay, offsets, adj, max_edge }
    }

    pub fn divisions(&self) -> usize {
        self.lay.n
    }

    fn attach(&self, p: &SurfacePoint) -> Vec<(u32, f64)> {
        let mut out = Vec::new();
        let mut slots: Vec<Slot> = Vec::new();
        for (f, b) in p.representations(self.m) {
            slots.clear();
            self.lay.face_slots(self.m, f, &mut slots);
            let l = self.m.layout(f);
            let x = from_barycentric(l, &b);
            for s in &slots {
                out.push((s.node, (from_barycentric(l, &s.bary) - x).norm()));
            }
        }
        out
    }

    fn direct(&self, p: &SurfacePoint, q: &SurfacePoint) -> Option<f64> {
        let mut best: Option<f64> = None;
        for (f, b) in p.representations(self.m) {
            for (g, c) in q.representations(self.m) {
                if f == g {
                    let l = self.m.layout(f);
                    let d = (from_barycentric(l, &b) - from_barycentric(l, &c)).norm();
                    best = Some(best.map_or(d, |x: f64| x.min(d)));
                }
            }
        }
        best
    }

    /// Graph distances from `p` to each of `qs` with one search; the same values
    /// as [`Self::distance`].
    pub fn distances_from(&self, p: &SurfacePoint, qs: &[SurfacePoint]) -> Vec<Option<f64>> {
        let nn = self.lay.n_nodes as usize;
        let mut dist = vec![f64::INFINITY; nn];
        let mut heap = BinaryHeap::new();
        for (v, d) in self.attach(p) {
            if d < dist[v as usize] {
                dist[v as usize] = d;
                heap.push(HeapItem(d, v));
            }
        }
        while let Some(HeapItem(d, u)) = heap.pop() {
            if d > dist[u as usize] {
                continue;
            }
            let (a, b) = (self.offsets[u as usize] as usize, self.offsets[u as usize + 1] as usize);
            for &(v, w) in &self.adj[a..b] {
                let nd = d + w;
                if nd < dist[v as usize] {
                    dist[v as usize] = nd;
                    heap.push(HeapItem(nd, v));
                }
            }
        }
        qs.iter()
            .map(|q| {
                let via = self.attach(q).into_iter().map(|(v, d)| dist[v as usize] + d).fold(f64::INFINITY, f64::min);
                let best = self.direct(p, q).map_or(via, |d| d.min(via));
                best.is_finite().then_some(best)
            })
            .collect()
    }

    pub fn distance(&self, p: &SurfacePoint, q: &SurfacePoint) -> Option<OracleDistance> {
        let nn = self.lay.n_nodes as usize;
        let mut dist = vec![f64::INFINITY; nn];
        let mut hops = vec![0u32; nn];
        let mut heap = BinaryHeap::new();
        for (v, d) in self.attach(p) {
            if d < dist[v as usize] {
                dist[v as usize] = d;
                heap.push(HeapItem(d, v));
            }
        }
        let targets = self.attach(q);
        let mut tgt = vec![f64::INFINITY; nn];
        for &(v, d) in &targets {
            tgt[v as usize] = tgt[v as usize].min(d);
        }
        let mut best = self.direct(p, q).map(|d| (d, 0usize));
        while let Some(HeapItem(d, u)) = heap.pop() {
            if d > dist[u as usize] {
                continue;
            }
            if best.is_some_and(|b| d >= b.0) {
                break;
            }
            let t = d + tgt[u as usize];
            if best.map_or(true, |b| t < b.0) {
                best = Some((t, hops[u as usize] as usize + 1));
            }
            let (a, b) = (self.offsets[u as usize] as usize, self.offsets[u as usize + 1] as usize);
            for &(v, w) in &self.adj[a..b] {
                let nd = d + w;
                if nd < dist[v as usize] {
                    dist[v as usize] = nd;
                    hops[v as usize] = hops[u as usize] + 1;
                    heap.push(HeapItem(nd, v));
                }
            }
        }
        best.map(|(value, h)| OracleDistance {
            value,
            hops: h,
            error: 2.0 * (h as f64 + 1.0) * self.max_edge / self.lay.n as f64,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::golden;

    #[test]
    fn cube_corner_distance_converges_monotonically() {
        let m = golden::cube();
        let p = SurfacePoint::vertex(&m, 0);
        let q = SurfacePoint::vertex(&m, 6);
        let mut last = f64::INFINITY;
        for n in [4, 8, 16, 32, 64] {
            let d = SteinerOracle::new(&m, n).distance(&p, &q).unwrap();
            assert!(d.value <= last + 1e-12);
            assert!(d.value >= 5f64.sqrt() - 1e-12);
            last = d.value;
        }
        assert!(last - 5f64.sqrt() < 1e-2);
    }

    #[test]
    fn torus_distance_wraps() {
        let m = golden::flat_torus();
        let p = SurfacePoint::from_position(&m, 0, &crate::geom::p2(0.05, 0.02));
        let q = SurfacePoint::from_position(&m, 0, &crate::geom::p2(0.95, 0.02));
        let d = SteinerOracle::new(&m, 32).distance(&p, &q).unwrap();
        assert!(d.value < 0.1 + 0.02 && d.value >= 0.1 - 1e-12, "{}", d.value);
    }

    #[test]
    fn single_source_matches_pairwise() {
        let m = golden::cube();
        let o = SteinerOracle::new(&m, 8);
        let pts: Vec<SurfacePoint> = (0..8).map(|v| SurfacePoint::vertex(&m, v)).collect();
        let all = o.distances_from(&pts[0], &pts);
        for (q, d) in pts.iter().zip(all) {
            let pair = o.distance(&pts[0], q).map(|x| x.value);
            assert!((d.unwrap() - pair.unwrap()).abs() < 1e-12);
        }
    }
}
