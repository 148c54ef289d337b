//! Small polygons around a point, fan triangles over them, their convex hulls,
//! and the cover of the whole surface.

use crate::decompose::Cell;
use crate::tiling::{build_tiling, TileContext};
use crate::{max_chart_radius, PipelineError, Stage, TriangleElement};
use geotri_core::chart::{cone_chord, fit_cone, fit_flat, DiskNeighborhood};
use geotri_core::convexity::{certify_boundary_convex, is_completely_convex, CertifiedRegion, ConvexityParams};
use geotri_core::geodesic::enclosing::{convex_hull, shortest_enclosing_curve};
use geotri_core::geodesic::superfluous::{intersection_components, remove_superfluous_pair};
use geotri_core::geodesic::GeodesicPath;
use geotri_core::geom::{from_barycentric, rotate, P2, V2};
use geotri_core::mesh::face_of;
use geotri_core::point::corner_bary;
use geotri_core::region::{PolygonRegion, RegionError};
use geotri_core::{IntrinsicMesh, Location, Segment, SurfaceCurve, SurfacePoint, Tolerances};
use std::f64::consts::{PI, TAU};

/// Halvings of the radius tried before giving up.
const MAX_HALVINGS: usize = 20;
/// Enlargement rounds of the hull.
const MAX_ENLARGEMENTS: usize = 8;

/// A geodesic polygon of diameter at most `epsilon` around `x`, with `x` on its
/// boundary when `x` is on the surface boundary.
///
/// Vertices sit on a circle of radius below `epsilon / 2` in a chart at `x`
/// (a cone chart when `x` is a vertex) and sides are chords of that chart, so
/// they avoid every singular vertex.
pub fn polygon_neighborhood(m: &IntrinsicMesh, x: &SurfacePoint, epsilon: f64, tol: &Tolerances) -> Result<PolygonRegion, PipelineError> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(PipelineError::InvalidEpsilon(epsilon));
    }
    let mut rho = 0.45 * epsilon;
    for _ in 0..MAX_HALVINGS {
        if let Some(r) = try_neighborhood(m, x, rho, tol) {
            return Ok(r);
        }
        rho *= 0.5;
    }
    Err(PipelineError::SamplingTooCoarse)
}

fn try_neighborhood(m: &IntrinsicMesh, x: &SurfacePoint, rho: f64, tol: &Tolerances) -> Option<PolygonRegion> {
    let path = |c: SurfaceCurve| GeodesicPath::from_curve(m, c, tol.len);
    let edges = match x.location(m) {
        Location::Vertex(v) => {
            let dev = fit_cone(m, v, rho / 0.9).ok()?;
            let r = rho.min(0.9 * dev.radius());
            let theta = m.angle_sum(v);
            let at = |phi: f64| {
                let (h, d) = m.direction_at(v, phi);
                let f = face_of(h);
                let p = m.layout(f)[(h % 3) as usize] + d * r;
                SurfacePoint::from_position(m, f, &p)
            };
            if m.is_boundary_vertex(v) {
                let n = ((2.0 * theta / PI).ceil() as usize).max(2);
                let pts: Vec<SurfacePoint> = (0..=n).map(|i| at(theta * i as f64 / n as f64)).collect();
                let outs = m.outgoing(v);
                let (h0, h1) = (outs[0], outs[outs.len() - 1]);
                let apex = SurfacePoint::vertex(m, v);
                let first = Segment { face: face_of(h0), a: corner_bary((h0 % 3) as usize), b: pts[0].in_face(m, face_of(h0))? };
                let last = Segment { face: face_of(h1), a: pts[n].in_face(m, face_of(h1))?, b: corner_bary((h1 % 3) as usize) };
                let mut e = vec![path(SurfaceCurve::new(vec![first]))];
                for i in 0..n {
                    e.push(path(cone_chord(m, v, &pts[i], &pts[i + 1])?));
                }
                e.push(path(SurfaceCurve::new(vec![last])));
                debug_assert!(e[0].start(m).same(m, &apex, 1e-9));
                e
            } else {
                let n = ((2.0 * theta / PI).ceil() as usize).max(4);
                // Offset so that no vertex lies on a mesh edge direction.
                let pts: Vec<SurfacePoint> = (0..n).map(|i| at(theta * (i as f64 + 0.37) / n as f64)).collect();
                (0..n).map(|i| cone_chord(m, v, &pts[i], &pts[(i + 1) % n]).map(path)).collect::<Option<Vec<_>>>()?
            }
        }
        loc => {
            let dev = fit_flat(m, *x, rho / 0.9, tol.angle).ok()?;
            let r = rho.min(0.9 * dev.radius());
            let boundary = match loc {
                Location::Edge { h, .. } if m.is_boundary_halfedge(h) => Some(m.halfedge_dir(h)),
                _ => None,
            };
            let o = P2::origin();
            let ring: Vec<P2> = match boundary {
                Some(d) => {
                    let a0 = d.y.atan2(d.x);
                    let mut v: Vec<P2> = (0..=4).map(|i| P2::from(rotate(&V2::new(r, 0.0), a0 + PI * i as f64 / 4.0))).collect();
                    v.insert(0, o);
                    v
                }
                None => (0..4).map(|i| P2::from(rotate(&V2::new(r, 0.0), TAU * (i as f64 + 0.37) / 4.0))).collect(),
            };
            let n = ring.len();
            (0..n).map(|i| dev.segment(m, &ring[i], &ring[(i + 1) % n]).map(path)).collect::<Option<Vec<_>>>()?
        }
    };
    PolygonRegion::from_edges(m, edges, tol).ok()
}

/// Fan triangles from the first vertex of the polygon neighbourhood of `x`.
///
/// The fan curve for vertices `i, i+1` is `γ_i`, the side `e_i`, then `γ_{i+1}`
/// backwards. A shared initial stretch of `γ_i` and `γ_{i+1}` is cut off, and
/// curves that enclose no area are dropped. Every sample of the neighbourhood
/// must land in some triangle.
pub fn triangle_fan_cover(m: &IntrinsicMesh, x: &SurfacePoint, epsilon: f64, tol: &Tolerances) -> Result<Vec<TriangleElement>, PipelineError> {
    let p = polygon_neighborhood(m, x, epsilon, tol)?;
    let vs = p.vertices(m);
    let n = vs.len();
    let mut out = Vec::new();
    for i in 1..n - 1 {
        let (g1, g2) = remove_superfluous_pair(m, &p, &vs[0], &vs[i], &vs[i + 1], tol.len)?;
        let (g1, g2) = trim_common_start(m, g1, g2, tol.len);
        let edges = vec![g1, p.edges[i].clone(), g2.reversed(m, tol.len)];
        match PolygonRegion::from_edges(m, edges, tol) {
            Ok(r) if r.area <= p.area + tol.area => out.push(TriangleElement::new(m, r, None, None, Stage::Cover, tol)),
            Ok(_) | Err(RegionError::Empty) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let covered = |q: &SurfacePoint| out.iter().any(|t| t.region.contains(m, q, 10.0 * tol.len));
    for pc in &p.pieces {
        for i in 1..pc.poly.len() - 1 {
            let tri = [pc.poly[0], pc.poly[i], pc.poly[i + 1]];
            for b in [[1.0 / 3.0; 3], [0.6, 0.2, 0.2], [0.2, 0.6, 0.2], [0.2, 0.2, 0.6]] {
                let y = from_barycentric(&tri, &b);
                if !covered(&SurfacePoint::from_position(m, pc.face, &y)) {
                    return Err(PipelineError::CoverageFailed);
                }
            }
        }
    }
    Ok(out)
}

/// Drop the stretch where two paths from the same point run together.
fn trim_common_start(m: &IntrinsicMesh, g1: GeodesicPath, g2: GeodesicPath, tol: f64) -> (GeodesicPath, GeodesicPath) {
    let shared = intersection_components(m, &g1.curve, &g2.curve, tol)
        .into_iter()
        .find(|o| o.a.0 <= tol && o.b.0 <= tol && o.a.1 > tol);
    match shared {
        Some(o) if o.a.1 < g1.length - tol && o.b.1 < g2.length - tol => (
            GeodesicPath::from_curve(m, g1.curve.sub_curve(m, o.a.1, g1.length), tol),
            GeodesicPath::from_curve(m, g2.curve.sub_curve(m, o.b.1, g2.length), tol),
        ),
        _ => (g1, g2),
    }
}

/// The taut hull of `p` inside the ball `u`, enlarged until no geodesic between
/// its net points leaves it, then certified boundary convex in `u`.
pub fn absolutely_convex_hull(
    m: &IntrinsicMesh,
    p: &PolygonRegion,
    x: &SurfacePoint,
    u: &DiskNeighborhood,
    params: &ConvexityParams,
) -> Result<CertifiedRegion, PipelineError> {
    let tol = params.tol;
    let enc = shortest_enclosing_curve(m, p, u)?;
    let mut q = PolygonRegion::from_edges(m, enc.edges, &tol)?;
    for _ in 0..MAX_ENLARGEMENTS {
        let net = q.perimeter() / 12.0;
        match is_completely_convex(m, &q, net, &tol)? {
            None => {
                if !q.contains(m, x, 10.0 * tol.len) {
                    return Err(PipelineError::Stage { stage: Stage::Cover.name(), detail: "hull lost its centre point".into() });
                }
                let cert = certify_boundary_convex(m, &q, u, params)?;
                return Ok(CertifiedRegion { region: q, ambient: u.clone(), cert });
            }
            Some((a, b)) => {
                // Add the escaping geodesic's bends to the hull's vertex set.
                let dev = u.development().filter(|d| d.chart.kind == geotri_core::chart::ChartKind::Flat);
                let dev = dev.ok_or(PipelineError::EnlargementDiverged)?;
                let g = geotri_core::geodesic::shortest::shortest_path(m, &a, &b)?;
                let mut pts: Vec<P2> = q.vertices(m).iter().filter_map(|v| dev.plane_point(m, v)).collect();
                for s in &g.curve.segs {
                    for bb in [s.a, s.b] {
                        if let Some(y) = dev.plane_point(m, &SurfacePoint::new(m, s.face, bb)) {
                            pts.push(y);
                        }
                    }
                }
                let hull = convex_hull(&pts, tol.len);
                let mut edges = Vec::with_capacity(hull.len());
                for i in 0..hull.len() {
                    let c = dev.segment(m, &pts[hull[i]], &pts[hull[(i + 1) % hull.len()]]).ok_or(PipelineError::EnlargementDiverged)?;
                    edges.push(GeodesicPath::from_curve(m, c, tol.len));
                }
                q = PolygonRegion::from_edges(m, edges, &tol)?;
            }
        }
    }
    Err(PipelineError::EnlargementDiverged)
}

/// A cover of the surface by certified tiles: pairwise disjoint interiors,
/// diameters at most `epsilon`, boundaries through transit points only.
pub struct Cover {
    pub cells: Vec<Cell>,
    /// Edge subdivision used for the base tiles.
    pub k: usize,
    pub splits: usize,
}

pub fn cover_absolutely_convex(m: &IntrinsicMesh, epsilon: f64, params: &ConvexityParams) -> Result<Cover, PipelineError> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(PipelineError::InvalidEpsilon(epsilon));
    }
    let cx = TileContext { m, params: *params, r0: max_chart_radius(params.surface_diameter), epsilon };
    let t = build_tiling(&cx)?;
    let cells = t
        .tiles
        .into_iter()
        .map(|tile| Cell { region: tile.region, chart: Some(tile.chart), cert: Some(tile.cert), stage: Stage::Cover })
        .collect();
    Ok(Cover { cells, k: t.k, splits: t.splits })
}
