//! The cover stage: a tiling of the surface by small certified triangles.
//!
//! Every face is cut into `k²` triangles similar to it, `k` being the same for
//! all faces so that subdivision points match along shared edges. The
//! triangles at an interior cone point of angle below 2π are refined towards
//! it, and the innermost ones are replaced by a cell: a triangle of three
//! chords around the cone point plus ear triangles filling the rest of its
//! star. No tile side then meets such a point. Each tile is certified in a ball
//! chart; one that cannot be is cut into four. Neighbouring tiles may meet at
//! T-junctions.

use crate::PipelineError;
use geotri_core::chart::{corner_iso, fit_cone, fit_flat, is_flat_vertex, strip_segment, Chart, DiskNeighborhood, FaceCopy};
use geotri_core::convexity::{certify_boundary_convex, BoundaryConvexCertificate, ConvexityParams};
use geotri_core::geodesic::GeodesicPath;
use geotri_core::geom::{clip_convex, cross, ear_clip, from_barycentric, orient, polygon_area, rotate, P2, V2};
use geotri_core::mesh::face_of;
use geotri_core::par::par_map;
use geotri_core::point::{corner_bary, edge_bary};
use geotri_core::region::{FacePiece, PolygonRegion};
use geotri_core::{IntrinsicMesh, Segment, SurfaceCurve, SurfacePoint};
use std::f64::consts::{PI, TAU};

/// Four-way splits allowed below the base subdivision.
pub const MAX_SPLIT_DEPTH: u32 = 8;
/// Halvings of the star of a cone point tried before giving up.
const MAX_CONE_LEVEL: u32 = 16;
/// Refuse subdivisions beyond this many base tiles.
const MAX_BASE_TILES: usize = 4_000_000;

/// A certified tile.
#[derive(Clone, Debug)]
pub struct Tile {
    pub region: PolygonRegion,
    pub chart: Chart,
    pub cert: BoundaryConvexCertificate,
}

#[derive(Clone, Debug)]
pub struct Tiling {
    pub tiles: Vec<Tile>,
    /// Subdivision of every face edge.
    pub k: usize,
    /// Tiles cut into four.
    pub splits: usize,
    /// Cone points enclosed by a cell, with the halving level used.
    pub cone_cells: Vec<(u32, u32)>,
}

/// A triangle inside one face, corners in barycentric coordinates, counter-clockwise.
#[derive(Clone, Copy, Debug)]
struct Sub {
    face: u32,
    b: [[f64; 3]; 3],
    depth: u32,
}

fn mid(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])]
}

impl Sub {
    /// The four halves-scaled children; the first keeps corner 0.
    fn split(&self) -> [Sub; 4] {
        let [p0, p1, p2] = self.b;
        let (m01, m12, m20) = (mid(&p0, &p1), mid(&p1, &p2), mid(&p2, &p0));
        let d = self.depth + 1;
        let s = |b| Sub { face: self.face, b, depth: d };
        [s([p0, m01, m20]), s([m01, p1, m12]), s([m20, m12, p2]), s([m01, m12, m20])]
    }

    fn region(&self, m: &IntrinsicMesh, tol_len: f64) -> PolygonRegion {
        let l = m.layout(self.face);
        let poly: Vec<P2> = self.b.iter().map(|b| from_barycentric(l, b)).collect();
        let edges = (0..3)
            .map(|i| {
                let seg = Segment { face: self.face, a: self.b[i], b: self.b[(i + 1) % 3] };
                GeodesicPath::from_curve(m, SurfaceCurve::new(vec![seg]), tol_len)
            })
            .collect();
        PolygonRegion::from_parts(edges, vec![FacePiece { face: self.face, poly }])
    }

    fn centroid(&self, m: &IntrinsicMesh) -> SurfacePoint {
        let c = [0, 1, 2].map(|i| (self.b[0][i] + self.b[1][i] + self.b[2][i]) / 3.0);
        SurfacePoint::new(m, self.face, c)
    }
}

/// Interior vertices whose cone angle is below 2π.
pub fn positive_cone_points(m: &IntrinsicMesh, tol_angle: f64) -> Vec<u32> {
    (0..m.n_vertices() as u32).filter(|&v| !m.is_boundary_vertex(v) && m.angle_sum(v) < TAU - tol_angle).collect()
}

/// Edge subdivision so that a base tile fits, with room to spare, in a ball of radius `r0`.
pub fn base_subdivision(m: &IntrinsicMesh, r0: f64, epsilon: f64) -> usize {
    let mut k: f64 = 2.0;
    for f in 0..m.n_faces() as u32 {
        let l = m.layout(f);
        let c = P2::from((l[0].coords + l[1].coords + l[2].coords) / 3.0);
        let edges = [(l[1] - l[0]).norm(), (l[2] - l[1]).norm(), (l[0] - l[2]).norm()];
        let perim: f64 = edges.iter().sum();
        let rc = l.iter().map(|p| (p - c).norm()).fold(0.0, f64::max);
        let longest = edges.iter().cloned().fold(0.0, f64::max);
        k = k.max((4.0 * perim + rc) / (0.97 * r0)).max(longest / epsilon * 1.0001);
    }
    k.ceil() as usize
}

pub(crate) struct TileContext<'a> {
    pub m: &'a IntrinsicMesh,
    pub params: ConvexityParams,
    /// Largest chart radius allowed by the diameter condition.
    pub r0: f64,
    pub epsilon: f64,
}

pub(crate) fn build_tiling(cx: &TileContext) -> Result<Tiling, PipelineError> {
    let m = cx.m;
    let tol = cx.params.tol;
    let k = base_subdivision(m, cx.r0, cx.epsilon);
    if k.saturating_mul(k).saturating_mul(m.n_faces()) > MAX_BASE_TILES {
        return Err(PipelineError::TooManyTiles(k * k * m.n_faces()));
    }
    let cones = positive_cone_points(m, tol.angle);
    let is_cone = |v: u32| cones.contains(&v);
    let kf = k as f64;

    let mut queue: Vec<Sub> = Vec::new();
    for f in 0..m.n_faces() as u32 {
        let at = |i: usize, j: usize| [(k - i - j) as f64 / kf, i as f64 / kf, j as f64 / kf];
        for j in 0..k {
            for i in 0..k - j {
                let corner = match (i, j) {
                    (0, 0) => Some(0),
                    (x, 0) if x == k - 1 => Some(1),
                    (0, y) if y == k - 1 => Some(2),
                    _ => None,
                };
                if !corner.is_some_and(|c| is_cone(m.corner_vertex(f, c))) {
                    queue.push(Sub { face: f, b: [at(i, j), at(i + 1, j), at(i, j + 1)], depth: 0 });
                }
                if i + j + 1 < k {
                    queue.push(Sub { face: f, b: [at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)], depth: 0 });
                }
            }
        }
    }

    let mut tiles = Vec::new();
    let mut cone_cells = Vec::new();
    for &v in &cones {
        let (level, cell) = cone_cell_tiles(cx, v, 1.0 / kf)?;
        cone_cells.push((v, level));
        tiles.extend(cell);
        // Rings between the base corner tiles and the cell.
        for h in m.outgoing(v) {
            let i = (h % 3) as usize;
            let t0 = 1.0 / kf;
            let mut c = Sub { face: face_of(h), b: [corner_bary(i), edge_bary(i, t0), edge_bary((i + 2) % 3, 1.0 - t0)], depth: 0 };
            for _ in 0..level {
                let kids = c.split();
                queue.extend_from_slice(&kids[1..]);
                c = Sub { depth: 0, ..kids[0] };
            }
        }
    }

    let mut splits = 0;
    while !queue.is_empty() {
        let done = par_map(&queue, |s| certify_sub(cx, s));
        let mut next = Vec::new();
        for (s, r) in queue.iter().zip(done) {
            match r {
                Some(t) => tiles.push(t),
                None if s.depth < MAX_SPLIT_DEPTH => {
                    splits += 1;
                    next.extend_from_slice(&s.split());
                }
                None => return Err(PipelineError::Uncertifiable { face: s.face, depth: s.depth }),
            }
        }
        queue = next;
    }
    Ok(Tiling { tiles, k, splits, cone_cells })
}

/// First chart, flat at the centroid or a cone at a singular corner of the face,
/// in which the tile certifies.
fn certify_sub(cx: &TileContext, s: &Sub) -> Option<Tile> {
    let m = cx.m;
    let tol = cx.params.tol;
    let region = s.region(m, tol.len);
    let mut devs = Vec::with_capacity(4);
    if let Ok(d) = fit_flat(m, s.centroid(m), cx.r0, tol.angle) {
        devs.push(d);
    }
    for v in m.face_vertices(s.face) {
        if !is_flat_vertex(m, v, tol.angle) {
            if let Ok(d) = fit_cone(m, v, cx.r0) {
                devs.push(d);
            }
        }
    }
    for d in devs {
        let chart = d.chart;
        let u = DiskNeighborhood::from_development(d);
        if let Ok(cert) = certify_boundary_convex(m, &region, &u, &cx.params) {
            return Some(Tile { region, chart, cert });
        }
    }
    None
}

/// Cell around cone point `v` at the first halving level where all its tiles
/// certify in the cone chart at `v`.
fn cone_cell_tiles(cx: &TileContext, v: u32, t0: f64) -> Result<(u32, Vec<Tile>), PipelineError> {
    let m = cx.m;
    let dev = fit_cone(m, v, cx.r0).map_err(|e| PipelineError::ConeCell { vertex: v, detail: e.to_string() })?;
    let chart = dev.chart;
    let u = DiskNeighborhood::from_development(dev);
    let mut last = String::new();
    for level in 0..=MAX_CONE_LEVEL {
        let t = t0 / f64::powi(2.0, level as i32);
        let regions = match cone_cell(m, v, t, cx.params.tol.len) {
            Ok(r) => r,
            Err(e) => return Err(PipelineError::ConeCell { vertex: v, detail: e }),
        };
        let certs: Result<Vec<_>, _> = regions.iter().map(|r| certify_boundary_convex(m, r, &u, &cx.params)).collect();
        match certs {
            Ok(c) => {
                let tiles = regions.into_iter().zip(c).map(|(region, cert)| Tile { region, chart, cert }).collect();
                return Ok((level, tiles));
            }
            Err(e) => last = e.to_string(),
        }
    }
    Err(PipelineError::ConeCell { vertex: v, detail: last })
}

/// The star of `v` cut at fraction `t` of every edge, split into a triangle of
/// chords containing `v` and ear triangles.
pub fn cone_cell(m: &IntrinsicMesh, v: u32, t: f64, tol_len: f64) -> Result<Vec<PolygonRegion>, String> {
    let outs = m.outgoing(v);
    let d = outs.len();
    let theta = m.angle_sum(v);
    let mut phi = vec![0.0; d];
    for i in 1..d {
        phi[i] = phi[i - 1] + m.corner_angle(outs[i - 1]);
    }
    let r: Vec<f64> = outs.iter().map(|&h| t * m.length(h)).collect();
    // Unwrapped index: `u` and `u + d` name the same link point, a turn apart.
    let ang = |u: usize| phi[u % d] + theta * (u / d) as f64;
    let pos = |u: usize, base: f64| P2::from(rotate(&V2::new(r[u % d], 0.0), ang(u) - base));
    let scale = r.iter().cloned().fold(0.0, f64::max);
    let flat_tol = 1e-12 * scale * scale;
    // A chord from `u0` to `u1` is usable if it spans less than π and no link
    // point between them lies on the apex side.
    let chord_ok = |u0: usize, u1: usize| {
        if ang(u1) - ang(u0) >= PI - 1e-9 {
            return false;
        }
        let (p, q) = (pos(u0, ang(u0)), pos(u1, ang(u0)));
        (u0 + 1..u1).all(|u| orient(&p, &q, &pos(u, ang(u0))) <= flat_tol)
    };
    let mut best: Option<(f64, [usize; 3])> = None;
    for a in 0..d {
        for b in a + 1..d {
            for c in b + 1..d {
                if !(chord_ok(a, b) && chord_ok(b, c) && chord_ok(c, a + d)) {
                    continue;
                }
                let worst = (ang(b) - ang(a)).max(ang(c) - ang(b)).max(ang(a + d) - ang(c));
                if best.map_or(true, |(w, _)| worst < w - 1e-12) {
                    best = Some((worst, [a, b, c]));
                }
            }
        }
    }
    let [a, b, c] = best.ok_or_else(|| format!("no chord triangle around vertex {v}"))?.1;

    let mut t0_edges = Vec::new();
    let mut t0_pieces = Vec::new();
    let mut ears = Vec::new();
    for (u0, u1) in [(a, b), (b, c), (c, a + d)] {
        let base = ang(u0);
        let copies: Vec<FaceCopy> = (u0..u1)
            .map(|u| {
                let h = outs[u % d];
                FaceCopy::new(m, face_of(h), corner_iso(m, h, ang(u) - base))
            })
            .collect();
        let (p, q) = (pos(u0, base), pos(u1, base));
        let chord = strip_segment(m, &copies, &p, &q).ok_or("chord leaves the star")?;
        t0_edges.push(GeodesicPath::from_curve(m, chord, tol_len));
        // The chord side of each corner sector.
        for (k, u) in (u0..u1).enumerate() {
            let h = outs[u % d];
            let psi0 = ang(u) - base;
            let psi1 = psi0 + m.corner_angle(h);
            let x0 = ray_hit(psi0, &p, &q);
            let x1 = ray_hit(psi1, &p, &q);
            let inv = copies[k].iso.inverse();
            t0_pieces.push(FacePiece { face: face_of(h), poly: vec![inv * P2::origin(), inv * x0, inv * x1] });
        }
        // Ears between the chord and the link.
        let mut poly = vec![p];
        for u in u0 + 1..u1 {
            let y = pos(u, base);
            if orient(&p, &q, &y) < -flat_tol {
                poly.push(y);
            }
        }
        poly.push(q);
        if poly.len() < 3 {
            continue;
        }
        for tri in ear_clip(&poly) {
            let pts = tri.map(|i| poly[i]);
            let mut edges = Vec::with_capacity(3);
            for i in 0..3 {
                let c = strip_segment(m, &copies, &pts[i], &pts[(i + 1) % 3]).ok_or("ear side leaves the star")?;
                edges.push(GeodesicPath::from_curve(m, c, tol_len));
            }
            let mut pieces = Vec::new();
            for (k, u) in (u0..u1).enumerate() {
                let sector = [P2::origin(), pos(u, base), pos(u + 1, base)];
                let cut = clip_convex(&pts, &sector);
                if cut.len() >= 3 && polygon_area(&cut) > flat_tol {
                    let inv = copies[k].iso.inverse();
                    pieces.push(FacePiece { face: copies[k].face, poly: cut.iter().map(|y| inv * y).collect() });
                }
            }
            ears.push(PolygonRegion::from_parts(edges, pieces));
        }
    }
    let mut out = vec![PolygonRegion::from_parts(t0_edges, t0_pieces)];
    out.extend(ears);
    Ok(out)
}

/// Where the ray from the origin at angle `psi` meets the line through `p` and `q`.
fn ray_hit(psi: f64, p: &P2, q: &P2) -> P2 {
    let dir = V2::new(psi.cos(), psi.sin());
    let e = q - p;
    let s = cross(&p.coords, &e) / cross(&dir, &e);
    P2::from(dir * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use geotri_core::mesh::golden;
    use geotri_core::Tolerances;

    #[test]
    fn cube_corner_cell_tiles_the_star() {
        let m = golden::cube();
        let tol = Tolerances::for_mesh(&m);
        let t = 0.05;
        let cell = cone_cell(&m, 0, t, tol.len).unwrap();
        // The star at fraction t is made of corner triangles similar to the faces.
        let star: f64 = m.outgoing(0).iter().map(|&h| m.face_area(face_of(h)) * t * t).sum();
        let area: f64 = cell.iter().map(|r| r.area).sum();
        assert!((area - star).abs() < 1e-12, "{area} vs {star}");
        // The chord triangle contains the apex and no side meets it.
        let apex = SurfacePoint::vertex(&m, 0);
        assert!(cell[0].contains(&m, &apex, 0.0));
        for r in &cell {
            assert!(r.is_triangle());
            for e in &r.edges {
                assert!(e.curve.segs.iter().all(|s| !s.a.contains(&1.0) || SurfacePoint::new(&m, s.face, s.a).as_vertex(&m) != Some(0)));
            }
        }
        for r in &cell[1..] {
            assert!(!r.contains(&m, &apex, 1e-12));
        }
    }

    #[test]
    fn chord_triangle_sides_match_cone_unfolding() {
        // Corner of angle 3π/2: each chord spans π/2 around the apex.
        let m = golden::cube();
        let tol = Tolerances::for_mesh(&m);
        let cell = cone_cell(&m, 0, 0.1, tol.len).unwrap();
        let total: f64 = cell[0].edges.iter().map(|e| e.length).sum();
        let outs = m.outgoing(0);
        let r: Vec<f64> = outs.iter().map(|&h| 0.1 * m.length(h)).collect();
        assert!(total > 0.0 && total < 3.0 * 2.0 * r.iter().cloned().fold(0.0, f64::max));
        for e in &cell[0].edges {
            assert!(e.is_certified(1e-9));
        }
    }

    #[test]
    fn split_children_cover_parent() {
        let m = golden::flat_square();
        let s = Sub { face: 0, b: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]], depth: 0 };
        let area: f64 = s.split().iter().map(|c| c.region(&m, 1e-12).area).sum();
        assert!((area - 0.5).abs() < 1e-15);
        assert!(s.split().iter().all(|c| c.region(&m, 1e-12).area > 0.0));
    }

    #[test]
    fn subdivision_grows_as_the_ball_shrinks() {
        let m = golden::flat_square();
        let a = base_subdivision(&m, 0.2357, 0.3);
        let b = base_subdivision(&m, 0.1, 0.3);
        assert!(a >= 2 && b > a);
        assert!(base_subdivision(&m, 100.0, 0.01) as f64 >= 2f64.sqrt() / 0.01);
    }
}
