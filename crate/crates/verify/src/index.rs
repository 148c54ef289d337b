use geotri_core::geom::{ear_clip, from_barycentric, in_triangle, triangle_overlap, P2};
use geotri_core::region::PolygonRegion;
use geotri_core::{IntrinsicMesh, SurfacePoint};
use std::collections::BTreeMap;

struct Tri {
    owner: usize,
    t: [P2; 3],
    lo: P2,
    hi: P2,
}

/// Uniform grid over one face's layout.
struct FaceGrid {
    lo: P2,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<u32>>,
}

impl FaceGrid {
    fn range(&self, lo: &P2, hi: &P2) -> (usize, usize, usize, usize) {
        let c = |v: f64, o: f64, n: usize| (((v - o) / self.cell).floor().max(0.0) as usize).min(n - 1);
        (c(lo.x, self.lo.x, self.nx), c(hi.x, self.lo.x, self.nx), c(lo.y, self.lo.y, self.ny), c(hi.y, self.lo.y, self.ny))
    }
}

/// Face pieces of many regions, split into triangles and bucketed per face.
pub struct PieceIndex {
    tris: Vec<Tri>,
    grids: BTreeMap<u32, FaceGrid>,
}

impl PieceIndex {
    pub fn new(m: &IntrinsicMesh, regions: &[&PolygonRegion]) -> Self {
        let mut tris = Vec::new();
        let mut by_face: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for (owner, r) in regions.iter().enumerate() {
            for pc in &r.pieces {
                for ix in ear_clip(&pc.poly) {
                    let t = [pc.poly[ix[0]], pc.poly[ix[1]], pc.poly[ix[2]]];
                    let lo = P2::new(t.iter().map(|p| p.x).fold(f64::INFINITY, f64::min), t.iter().map(|p| p.y).fold(f64::INFINITY, f64::min));
                    let hi = P2::new(t.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max), t.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max));
                    by_face.entry(pc.face).or_default().push(tris.len() as u32);
                    tris.push(Tri { owner, t, lo, hi });
                }
            }
        }
        let mut grids = BTreeMap::new();
        for (f, ids) in by_face {
            let l = m.layout(f);
            let lo = P2::new(l.iter().map(|p| p.x).fold(f64::INFINITY, f64::min), l.iter().map(|p| p.y).fold(f64::INFINITY, f64::min));
            let hi = P2::new(l.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max), l.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max));
            let side = (hi.x - lo.x).max(hi.y - lo.y).max(1e-300);
            let n = ((ids.len() as f64).sqrt().ceil() as usize).clamp(1, 512);
            let cell = side / n as f64;
            let (nx, ny) = ((((hi.x - lo.x) / cell).ceil() as usize).max(1), (((hi.y - lo.y) / cell).ceil() as usize).max(1));
            let mut g = FaceGrid { lo, cell, nx, ny, buckets: vec![Vec::new(); nx * ny] };
            for id in ids {
                let t = &tris[id as usize];
                let (x0, x1, y0, y1) = g.range(&t.lo, &t.hi);
                for y in y0..=y1 {
                    for x in x0..=x1 {
                        g.buckets[y * nx + x].push(id);
                    }
                }
            }
            grids.insert(f, g);
        }
        PieceIndex { tris, grids }
    }

    /// Regions holding `p` (within `tol` in barycentric units), counted up to `limit`.
    pub fn count_containing(&self, m: &IntrinsicMesh, p: &SurfacePoint, tol: f64, limit: usize) -> usize {
        let mut owners: Vec<usize> = Vec::new();
        for (f, b) in p.representations(m) {
            let Some(g) = self.grids.get(&f) else { continue };
            let x = from_barycentric(m.layout(f), &b);
            let (x0, _, y0, _) = g.range(&x, &x);
            for &id in &g.buckets[y0 * g.nx + x0] {
                let t = &self.tris[id as usize];
                if !owners.contains(&t.owner) && in_triangle(&t.t, &x, tol) {
                    owners.push(t.owner);
                    if owners.len() >= limit {
                        return owners.len();
                    }
                }
            }
        }
        owners.len()
    }

    /// Owner pairs `(i, j, area)`, `i < j`, sharing more than `tol_area`.
    pub fn overlaps(&self, tol_area: f64) -> Vec<(usize, usize, f64)> {
        let mut shared: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        let mut cand: Vec<u32> = Vec::new();
        for g in self.grids.values() {
            let mut ids: Vec<u32> = g.buckets.iter().flatten().copied().collect();
            ids.sort_unstable();
            ids.dedup();
            for &a in &ids {
                let ta = &self.tris[a as usize];
                let (x0, x1, y0, y1) = g.range(&ta.lo, &ta.hi);
                cand.clear();
                for y in y0..=y1 {
                    for x in x0..=x1 {
                        cand.extend(g.buckets[y * g.nx + x].iter().copied().filter(|&b| b > a));
                    }
                }
                cand.sort_unstable();
                cand.dedup();
                for &b in &cand {
                    let tb = &self.tris[b as usize];
                    if tb.owner == ta.owner || tb.lo.x >= ta.hi.x || ta.lo.x >= tb.hi.x || tb.lo.y >= ta.hi.y || ta.lo.y >= tb.hi.y {
                        continue;
                    }
                    let s = triangle_overlap(&ta.t, &tb.t);
                    if s > 0.0 {
                        *shared.entry((ta.owner.min(tb.owner), ta.owner.max(tb.owner))).or_default() += s;
                    }
                }
            }
        }
        shared.into_iter().filter(|&(_, s)| s > tol_area).map(|((i, j), s)| (i, j, s)).collect()
    }
}
