//! Polygonal regions: disks bounded by closed chains of geodesics.

use crate::curve::{Segment, SurfaceCurve};
use crate::diameter::{quick_bound, region_diameter, DiameterBound};
use crate::geodesic::path::{turn_at, GeodesicPath, Turn};
use crate::geom::{orient, point_segment, polygon_area, segment_intersection, P2};
use crate::mesh::IntrinsicMesh;
use crate::overlay::{cut_along_graph, Component, OverlayError};
use crate::point::{corner_bary, SurfacePoint};
use std::f64::consts::PI;
use crate::Tolerances;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RegionError {
    #[error("boundary edges do not form a closed chain")]
    NotClosed,
    #[error("boundary does not bound a disk on its left")]
    NotADisk,
    #[error("region has no area")]
    Empty,
    #[error(transparent)]
    Overlay(#[from] OverlayError),
}

/// The part of a region inside one mesh face, as a counter-clockwise polygon in the face frame.
#[derive(Clone, Debug, PartialEq)]
pub struct FacePiece {
    pub face: u32,
    pub poly: Vec<P2>,
}

impl FacePiece {
    pub fn area(&self) -> f64 {
        polygon_area(&self.poly)
    }

    /// Inside or within `tol` of the polygon.
    pub fn contains(&self, x: &P2, tol: f64) -> bool {
        let n = self.poly.len();
        let mut inside = false;
        for i in 0..n {
            let a = self.poly[i];
            let b = self.poly[(i + 1) % n];
            if point_segment(x, &a, &b).0 <= tol {
                return true;
            }
            if (a.y > x.y) != (b.y > x.y) {
                let t = (x.y - a.y) / (b.y - a.y);
                if x.x < a.x + t * (b.x - a.x) {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

/// A disk whose boundary is the concatenation of `edges`, on their left.
#[derive(Clone, Debug)]
pub struct PolygonRegion {
    pub edges: Vec<GeodesicPath>,
    pub pieces: Vec<FacePiece>,
    pub area: f64,
}

impl PolygonRegion {
    pub fn from_edges(m: &IntrinsicMesh, edges: Vec<GeodesicPath>, tol: &Tolerances) -> Result<Self, RegionError> {
        if edges.is_empty() {
            return Err(RegionError::NotClosed);
        }
        let slack = 10.0 * tol.len;
        for i in 0..edges.len() {
            let a = edges[i].end(m);
            let b = edges[(i + 1) % edges.len()].start(m);
            if !a.same(m, &b, slack) {
                return Err(RegionError::NotClosed);
            }
        }
        let boundary = concat(&edges);
        let pieces = match single_face_polygon(m, &boundary, tol.len) {
            Some(p) => vec![p],
            None => overlay_pieces(m, &boundary)?,
        };
        let area: f64 = pieces.iter().map(FacePiece::area).sum();
        if area <= tol.area {
            return Err(RegionError::Empty);
        }
        Ok(PolygonRegion { edges, pieces, area })
    }

    /// Assemble a region from boundary edges and face pieces already known to match.
    pub fn from_parts(edges: Vec<GeodesicPath>, pieces: Vec<FacePiece>) -> Self {
        let area = pieces.iter().map(FacePiece::area).sum();
        PolygonRegion { edges, pieces, area }
    }

    pub fn n_vertices(&self) -> usize {
        self.edges.len()
    }

    pub fn is_triangle(&self) -> bool {
        self.edges.len() <= 3
    }

    pub fn is_bigon(&self) -> bool {
        self.edges.len() == 2
    }

    pub fn vertices(&self, m: &IntrinsicMesh) -> Vec<SurfacePoint> {
        self.edges.iter().map(|e| e.start(m)).collect()
    }

    pub fn perimeter(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    pub fn side_lengths(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.length).collect()
    }

    pub fn boundary(&self) -> SurfaceCurve {
        concat(&self.edges)
    }

    /// Angles at each vertex, vertex `i` being the start of edge `i`.
    pub fn corner_turns(&self, m: &IntrinsicMesh, tol_len: f64) -> Vec<Option<Turn>> {
        let n = self.edges.len();
        (0..n)
            .map(|i| {
                let prev = &self.edges[(i + n - 1) % n].curve;
                let cur = &self.edges[i].curve;
                let s0 = prev.segs.iter().rev().find(|s| s.length(m) > tol_len)?;
                let s1 = cur.segs.iter().find(|s| s.length(m) > tol_len)?;
                turn_at(m, s0, s1)
            })
            .collect()
    }

    pub fn contains(&self, m: &IntrinsicMesh, p: &SurfacePoint, tol: f64) -> bool {
        for (f, b) in p.representations(m) {
            let x = crate::geom::from_barycentric(m.layout(f), &b);
            if self.pieces.iter().any(|pc| pc.face == f && pc.contains(&x, tol)) {
                return true;
            }
        }
        false
    }

    /// Distance from `p` to the boundary, measured inside the faces holding `p`.
    pub fn boundary_distance(&self, m: &IntrinsicMesh, p: &SurfacePoint) -> f64 {
        let mut best = f64::INFINITY;
        for (f, b) in p.representations(m) {
            let x = crate::geom::from_barycentric(m.layout(f), &b);
            for e in &self.edges {
                for s in e.curve.segs.iter().filter(|s| s.face == f) {
                    let (a, c) = s.points(m);
                    best = best.min(point_segment(&x, &a, &c).0);
                }
            }
        }
        best
    }

    /// Cheap diameter bounds from the face pieces; the sides give the lower bound.
    pub fn diameter_quick(&self, m: &IntrinsicMesh) -> DiameterBound {
        let lower = self.edges.iter().map(|e| e.length).fold(0.0, f64::max);
        quick_bound(m, &self.pieces, lower)
    }

    pub fn diameter(&self, m: &IntrinsicMesh, h_net: f64) -> DiameterBound {
        let lower = self.edges.iter().map(|e| e.length).fold(0.0, f64::max);
        region_diameter(m, &self.pieces, h_net, lower)
    }
}

pub fn concat(edges: &[GeodesicPath]) -> SurfaceCurve {
    SurfaceCurve::new(edges.iter().flat_map(|e| e.curve.segs.iter().copied()).collect())
}

/// Disk components of the complement of `curves` that satisfy `keep`, as regions.
///
/// `keep` is asked about one interior point of each component. Corners are
/// placed where the component boundary turns by more than `tol_angle`; runs of
/// boundary between corners become the edges.
pub fn arrangement_regions(
    m: &IntrinsicMesh,
    curves: &[SurfaceCurve],
    keep: impl Fn(&SurfacePoint) -> bool,
    tol: &Tolerances,
) -> Result<Vec<PolygonRegion>, RegionError> {
    let mut out = Vec::new();
    for comp in cut_along_graph(m, curves)? {
        if comp.area <= tol.area {
            continue;
        }
        let s = (0..comp.mesh.n_faces() as u32)
            .max_by(|&a, &b| comp.mesh.face_area(a).total_cmp(&comp.mesh.face_area(b)))
            .unwrap_or(0);
        let probe = comp.point_to_parent(m, &SurfacePoint::raw(s, [1.0 / 3.0; 3]));
        if !keep(&probe) {
            continue;
        }
        if !comp.is_disk() {
            return Err(RegionError::NotADisk);
        }
        out.push(component_region(m, &comp, tol));
    }
    Ok(out)
}

/// The region covered by a disk component, with edges split at its corners.
pub fn component_region(m: &IntrinsicMesh, comp: &Component, tol: &Tolerances) -> PolygonRegion {
    let u = &comp.mesh;
    let lp = &u.boundary_loops()[0];
    let is_corner = |h: u32| {
        let v = u.tail(h);
        (u.angle_sum(v) - PI).abs() > tol.angle
    };
    let n = lp.len();
    let first = (0..n).find(|&i| is_corner(lp[i])).unwrap_or(0);
    let mut edges = Vec::new();
    let mut segs = Vec::new();
    for k in 0..n {
        let h = lp[(first + k) % n];
        if k > 0 && is_corner(h) {
            edges.push(std::mem::take(&mut segs));
        }
        let f = crate::mesh::face_of(h);
        let i = (h % 3) as usize;
        segs.push(Segment { face: f, a: corner_bary(i), b: corner_bary((i + 1) % 3) });
    }
    edges.push(segs);
    let edges = edges
        .into_iter()
        .map(|e| GeodesicPath::from_curve(m, comp.curve_to_parent(m, &SurfaceCurve::new(e)), tol.len))
        .collect();
    let pieces = comp.pieces().into_iter().map(|(face, t)| FacePiece { face, poly: t.to_vec() }).collect();
    PolygonRegion::from_parts(edges, pieces)
}

/// The polygon of a boundary lying in one face, if it is simple and counter-clockwise.
fn single_face_polygon(m: &IntrinsicMesh, c: &SurfaceCurve, tol: f64) -> Option<FacePiece> {
    let f = c.segs.first()?.face;
    if c.segs.iter().any(|s| s.face != f) {
        return None;
    }
    let mut poly: Vec<P2> = Vec::new();
    for s in &c.segs {
        let (a, _) = s.points(m);
        if poly.last().map_or(true, |q| (q - a).norm() > tol) {
            poly.push(a);
        }
    }
    while poly.len() > 1 && (poly[0] - poly[poly.len() - 1]).norm() <= tol {
        poly.pop();
    }
    // Drop collinear points so the polygon stays well conditioned.
    let mut clean: Vec<P2> = Vec::new();
    let n = poly.len();
    for i in 0..n {
        let a = poly[(i + n - 1) % n];
        let b = poly[i];
        let d = poly[(i + 1) % n];
        if orient(&a, &b, &d).abs() > tol * (d - a).norm() {
            clean.push(b);
        }
    }
    if clean.len() < 3 || polygon_area(&clean) <= 0.0 {
        return None;
    }
    let n = clean.len();
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let hit = segment_intersection(&clean[i], &clean[(i + 1) % n], &clean[j], &clean[(j + 1) % n], 0.0);
            if hit.is_some() {
                return None;
            }
        }
    }
    Some(FacePiece { face: f, poly: clean })
}

fn overlay_pieces(m: &IntrinsicMesh, c: &SurfaceCurve) -> Result<Vec<FacePiece>, RegionError> {
    let comps = cut_along_graph(m, std::slice::from_ref(c))?;
    let mut left = comps.into_iter().filter(|k| k.left_of(0) && !k.right_of(0));
    let k = left.next().ok_or(RegionError::NotADisk)?;
    if left.next().is_some() || !k.is_disk() {
        return Err(RegionError::NotADisk);
    }
    Ok(k.pieces().into_iter().map(|(face, t)| FacePiece { face, poly: t.to_vec() }).collect())
}
