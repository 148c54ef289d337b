//! Degenerate elements read as bigons, and their splitting into
//! non-degenerate triangles.

use crate::{PipelineError, Stage, TriangleElement};
use geotri_core::chart::DiskNeighborhood;
use geotri_core::convexity::{certify_boundary_convex, ConvexityParams};
use geotri_core::geodesic::extremal::{extremal_geodesic, BigonData, Side};
use geotri_core::geodesic::shortest::shortest_path;
use geotri_core::geodesic::GeodesicPath;
use geotri_core::region::PolygonRegion;
use geotri_core::{IntrinsicMesh, Tolerances};
use std::f64::consts::PI;

pub const MAX_BIGON_DEPTH: usize = 64;
/// Halvings of the corner cut tried at a locally geodesic corner.
const MAX_CUT_HALVINGS: usize = 20;

/// A degenerate element as a bigon: two sides whose lengths add up to the
/// third are merged into one side. Bigons are returned as they are.
pub fn consolidate(m: &IntrinsicMesh, e: &TriangleElement, tol: &Tolerances) -> Option<BigonData> {
    let r = &e.region;
    match r.edges.len() {
        2 => BigonData::from_region(m, r, tol.len),
        3 => {
            let l = &e.side_lengths;
            let i = (0..3).min_by(|&a, &b| (l[a] + l[(a + 1) % 3] - l[(a + 2) % 3]).total_cmp(&(l[b] + l[(b + 1) % 3] - l[(b + 2) % 3])))?;
            if l[i] + l[(i + 1) % 3] - l[(i + 2) % 3] > tol.len {
                return None;
            }
            let (e0, e1, e2) = (&r.edges[i], &r.edges[(i + 1) % 3], &r.edges[(i + 2) % 3]);
            let left = GeodesicPath::from_curve(m, e0.curve.concat(&e1.curve), tol.len);
            Some(BigonData { bottom: e0.start(m), top: e1.end(m), left, right: e2.reversed(m, tol.len) })
        }
        _ => None,
    }
}

/// Non-degenerate triangles covering the bigon `b`, certified in `ambient` when one is given.
pub fn split_bigon_nondegenerate(
    m: &IntrinsicMesh,
    b: &BigonData,
    ambient: Option<&DiskNeighborhood>,
    p: &ConvexityParams,
) -> Result<Vec<TriangleElement>, PipelineError> {
    let mut out = Vec::new();
    split_rec(m, b, ambient, p, 0, &mut out)?;
    Ok(out)
}

fn element(m: &IntrinsicMesh, r: PolygonRegion, ambient: Option<&DiskNeighborhood>, p: &ConvexityParams) -> TriangleElement {
    let cert = ambient.and_then(|u| certify_boundary_convex(m, &r, u, p).ok());
    let chart = if cert.is_some() { ambient.and_then(|u| u.chart()) } else { None };
    TriangleElement::new(m, r, chart, cert, Stage::Bigon, &p.tol)
}

/// The two sides leave the corner in opposite directions, with at least a
/// straight angle on each side.
fn straight_at_bottom(m: &IntrinsicMesh, b: &BigonData, tol: &Tolerances) -> bool {
    let Ok(r) = b.region(m, tol) else { return false };
    match r.corner_turns(m, tol.len).first().copied().flatten() {
        Some(t) => t.left >= PI - tol.angle && t.total - t.left >= PI - tol.angle,
        None => false,
    }
}

fn flipped(m: &IntrinsicMesh, b: &BigonData, tol: f64) -> BigonData {
    BigonData { bottom: b.top, top: b.bottom, left: b.right.reversed(m, tol), right: b.left.reversed(m, tol) }
}

fn split_rec(
    m: &IntrinsicMesh,
    b: &BigonData,
    ambient: Option<&DiskNeighborhood>,
    p: &ConvexityParams,
    depth: usize,
    out: &mut Vec<TriangleElement>,
) -> Result<(), PipelineError> {
    let tol = p.tol;
    if depth > MAX_BIGON_DEPTH {
        return Err(PipelineError::BigonSplitDiverged);
    }
    if straight_at_bottom(m, b, &tol) {
        out.push(cut_corner(m, b, ambient, p)?);
        return Ok(());
    }
    let f = flipped(m, b, tol.len);
    if straight_at_bottom(m, &f, &tol) {
        out.push(cut_corner(m, &f, ambient, p)?);
        return Ok(());
    }
    let (s, u) = (0.5 * b.left.length, 0.5 * b.right.length);
    let g = extremal_geodesic(m, s, u, Side::Bottom, b, &tol)?;
    let parts = [b.bottom_part(m, &g, s, u, &tol), b.top_part(m, &g, s, u, &tol)];
    for r in parts.into_iter().flatten() {
        let e = element(m, r, ambient, p);
        if !e.degenerate {
            out.push(e);
            continue;
        }
        let nb = consolidate(m, &e, &tol).ok_or(PipelineError::BigonSplitDiverged)?;
        split_rec(m, &nb, ambient, p, depth + 1, out)?;
    }
    Ok(())
}

/// Move the bottom corner a distance `δ` along both sides: the sides become
/// `left[δ..]`, `right[δ..]` and the broken path through the old corner, which
/// is still shortest there. The region is unchanged.
fn cut_corner(m: &IntrinsicMesh, b: &BigonData, ambient: Option<&DiskNeighborhood>, p: &ConvexityParams) -> Result<TriangleElement, PipelineError> {
    let tol = p.tol;
    let region = b.region(m, &tol)?;
    let a = b.left.length.min(b.right.length);
    let mut delta = 0.1 * a;
    for _ in 0..MAX_CUT_HALVINGS {
        let lp = |c: &GeodesicPath, s0: f64, s1: f64| GeodesicPath::from_curve(m, c.curve.sub_curve(m, s0, s1), tol.len);
        let e1 = lp(&b.left, delta, b.left.length);
        let e2 = lp(&b.right, delta, b.right.length).reversed(m, tol.len);
        let e3 = GeodesicPath::from_curve(m, b.right.curve.sub_curve(m, 0.0, delta).reversed().concat(&b.left.curve.sub_curve(m, 0.0, delta)), tol.len);
        let short = shortest_path(m, &e3.start(m), &e3.end(m))?;
        if (short.length - e3.length).abs() <= tol.len && e3.is_certified(tol.angle) {
            let r = PolygonRegion::from_parts(vec![e1, e2, e3], region.pieces.clone());
            let r = PolygonRegion { area: region.area, ..r };
            return Ok(element(m, r, ambient, p));
        }
        delta *= 0.5;
    }
    Err(PipelineError::BigonSplitDiverged)
}
