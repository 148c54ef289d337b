//! Bottommost and topmost geodesics across a bigon.

use super::path::GeodesicPath;
use super::shortest::shortest_geodesics;
use super::GeodesicError;
use crate::curve::SurfaceCurve;
use crate::mesh::IntrinsicMesh;
use crate::point::SurfacePoint;
use crate::region::PolygonRegion;
use crate::Tolerances;
use serde::{Deserialize, Serialize};

/// A bigon with bottom `b`, top `t` and sides `left`, `right` running from `b` to `t`.
/// The region lies to the left of `left`.
#[derive(Clone, Debug)]
pub struct BigonData {
    pub bottom: SurfacePoint,
    pub top: SurfacePoint,
    pub left: GeodesicPath,
    pub right: GeodesicPath,
}

impl BigonData {
    /// Sides of `r` read as a bigon from its first vertex.
    pub fn from_region(m: &IntrinsicMesh, r: &PolygonRegion, tol: f64) -> Option<Self> {
        if r.edges.len() != 2 {
            return None;
        }
        Some(BigonData {
            bottom: r.edges[0].start(m),
            top: r.edges[0].end(m),
            left: r.edges[0].clone(),
            right: r.edges[1].reversed(m, tol),
        })
    }

    pub fn side_length(&self) -> f64 {
        0.5 * (self.left.length + self.right.length)
    }

    /// The bigon as a region, boundary `left` then reversed `right`.
    pub fn region(&self, m: &IntrinsicMesh, tol: &Tolerances) -> Result<PolygonRegion, crate::region::RegionError> {
        PolygonRegion::from_edges(m, vec![self.left.clone(), self.right.reversed(m, tol.len)], tol)
    }

    /// Region cut off on the side of `b` by a geodesic from `left(s)` to `right(u)`.
    pub fn bottom_part(&self, m: &IntrinsicMesh, g: &GeodesicPath, s: f64, u: f64, tol: &Tolerances) -> Option<PolygonRegion> {
        let l = GeodesicPath::from_curve(m, self.left.curve.sub_curve(m, 0.0, s), tol.len);
        let r = GeodesicPath::from_curve(m, self.right.curve.sub_curve(m, 0.0, u).reversed(), tol.len);
        PolygonRegion::from_edges(m, vec![l, g.clone(), r], tol).ok()
    }

    /// Region cut off on the side of `t`.
    pub fn top_part(&self, m: &IntrinsicMesh, g: &GeodesicPath, s: f64, u: f64, tol: &Tolerances) -> Option<PolygonRegion> {
        let l = GeodesicPath::from_curve(m, self.left.curve.sub_curve(m, s, self.left.length), tol.len);
        let r = GeodesicPath::from_curve(m, self.right.curve.sub_curve(m, u, self.right.length).reversed(), tol.len);
        PolygonRegion::from_edges(m, vec![l, r, g.reversed(m, tol.len)], tol).ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Bottom,
    Top,
}

/// Among the shortest geodesics from `left(s)` to `right(u)`, the one whose
/// region toward the bottom (or top) of the bigon is smallest.
pub fn extremal_geodesic(
    m: &IntrinsicMesh,
    s: f64,
    u: f64,
    side: Side,
    frame: &BigonData,
    tol: &Tolerances,
) -> Result<GeodesicPath, GeodesicError> {
    let p = frame.left.curve.point_at(m, s);
    let q = frame.right.curve.point_at(m, u);
    let all = shortest_geodesics(m, &p, &q)?;
    if all.len() <= 1 {
        return all.into_iter().next().ok_or(GeodesicError::Unreachable);
    }
    let area = |g: &GeodesicPath| {
        let part = match side {
            Side::Bottom => frame.bottom_part(m, g, s, u, tol),
            Side::Top => frame.top_part(m, g, s, u, tol),
        };
        part.map_or(f64::INFINITY, |r| r.area)
    };
    let mut best: Option<(f64, GeodesicPath)> = None;
    for g in all {
        let a = area(&g);
        let better = match &best {
            None => true,
            Some((b, bg)) => a < *b - tol.area || ((a - *b).abs() <= tol.area && word(&g.curve) < word(&bg.curve)),
        };
        if better {
            best = Some((a, g));
        }
    }
    best.map(|b| b.1).ok_or(GeodesicError::Unreachable)
}

/// Face sequence, used to break ties deterministically.
fn word(c: &SurfaceCurve) -> Vec<u32> {
    c.segs.iter().map(|s| s.face).collect()
}
