//! Boundary-convex disks: certification, complete convexity, intersection and splitting.
//!
//! A region `K` inside a disk `U` is boundary convex when
//! 1. `d(K, ∂U∖∂X) > 4 ℓ(∂K)`,
//! 2. `diam U ≤ diam X / 3`,
//! 3. every arc of `∂K` is no longer than any path homotopic to it in `U∖K°`.
//!
//! Condition 3 is checked on the arcs between break points spaced `h_arc`
//! apart. An arc without a corner lies on one side and is a shortest path. An
//! arc with a single corner is decided by the exterior angle at the corner,
//! provided a ball of radius `3 h_arc` around it is a valid chart: within such a
//! ball the only competitors are the arc and the chord. Anything else is
//! decided by an exact shortest path in the closure of `X∖K`.

use crate::chart::{on_surface_boundary, Chart, DiskNeighborhood};
use crate::geodesic::shortest::{shortest_geodesics, shortest_path};
use crate::geodesic::{GeodesicError, GeodesicPath};
use crate::mesh::IntrinsicMesh;
use crate::overlay::{cut_along_graph, Component};
use crate::point::SurfacePoint;
use crate::region::{arrangement_regions, PolygonRegion, RegionError};
use crate::Tolerances;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// Arcs per boundary used when certifying.
pub const ARCS_PER_BOUNDARY: f64 = 64.0;

#[derive(Debug, Error)]
pub enum ConvexityError {
    #[error("region is not contained in the ambient disk")]
    NotContained,
    #[error("margin {margin} does not exceed four times the perimeter {perimeter}")]
    Condition1Failed { margin: f64, perimeter: f64 },
    #[error("ambient diameter {diameter} exceeds a third of the surface diameter bound {surface}")]
    Condition2Failed { diameter: f64, surface: f64 },
    #[error("arc [{s0}, {s1}] of length {length} has a homotopic competitor of length {competitor}")]
    Condition3Failed { s0: f64, s1: f64, length: f64, competitor: f64 },
    #[error("geodesic endpoint lies inside the region")]
    GeodesicEndpointInside,
    #[error(transparent)]
    Geodesic(#[from] GeodesicError),
    #[error(transparent)]
    Region(#[from] RegionError),
}

/// What decided condition 3 at a corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CornerRule {
    /// The corner is on the surface boundary; every competitor passes through it.
    Boundary,
    /// Exterior angle in a chart of radius `3 h_arc`.
    LocalAngle,
    /// Exact shortest path outside the region.
    Search,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CornerWitness {
    /// Index of the polygon vertex.
    pub corner: usize,
    pub arc_length: f64,
    /// Length of the shortest competitor found (the arc itself when it is taut).
    pub competitor: f64,
    /// Angle inside the region at the corner, when it could be measured.
    pub interior_angle: Option<f64>,
    pub total_angle: Option<f64>,
    pub rule: CornerRule,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryConvexCertificate {
    pub perimeter: f64,
    /// Lower bound on `d(K, ∂U∖∂X)`.
    pub margin: f64,
    /// Upper bound on `diam U`.
    pub ambient_diameter: f64,
    /// Lower bound on `diam X`.
    pub surface_diameter: f64,
    pub h_arc: f64,
    pub n_arcs: usize,
    pub corners: Vec<CornerWitness>,
}

impl BoundaryConvexCertificate {
    pub fn condition1(&self) -> bool {
        self.margin > 4.0 * self.perimeter
    }

    pub fn condition2(&self) -> bool {
        self.ambient_diameter <= self.surface_diameter / 3.0
    }
}

/// A region with its ambient disk and certificate.
#[derive(Clone, Debug)]
pub struct CertifiedRegion {
    pub region: PolygonRegion,
    pub ambient: DiskNeighborhood,
    pub cert: BoundaryConvexCertificate,
}

/// Surface-wide inputs to certification.
#[derive(Clone, Copy, Debug)]
pub struct ConvexityParams {
    pub tol: Tolerances,
    /// Lower bound on the diameter of the surface.
    pub surface_diameter: f64,
    /// Arc resolution; `None` uses a 64th of the perimeter.
    pub h_arc: Option<f64>,
}

impl ConvexityParams {
    pub fn new(m: &IntrinsicMesh, surface_diameter: f64) -> Self {
        ConvexityParams { tol: Tolerances::for_mesh(m), surface_diameter, h_arc: None }
    }

    fn h_arc(&self, perimeter: f64) -> f64 {
        self.h_arc.unwrap_or(perimeter / ARCS_PER_BOUNDARY)
    }
}

pub fn certify_boundary_convex(
    m: &IntrinsicMesh,
    k: &PolygonRegion,
    u: &DiskNeighborhood,
    p: &ConvexityParams,
) -> Result<BoundaryConvexCertificate, ConvexityError> {
    let perimeter = k.perimeter();
    let margin = u.margin(m, k).ok_or(ConvexityError::NotContained)?;
    if !(margin > 4.0 * perimeter) {
        return Err(ConvexityError::Condition1Failed { margin, perimeter });
    }
    if !(u.diameter <= p.surface_diameter / 3.0) {
        return Err(ConvexityError::Condition2Failed { diameter: u.diameter, surface: p.surface_diameter });
    }
    let h = p.h_arc(perimeter);
    let (n_arcs, corners) = check_arcs(m, k, h, &p.tol)?;
    Ok(BoundaryConvexCertificate {
        perimeter,
        margin,
        ambient_diameter: u.diameter,
        surface_diameter: p.surface_diameter,
        h_arc: h,
        n_arcs,
        corners,
    })
}

/// Certify and bundle.
pub fn certify_region(
    m: &IntrinsicMesh,
    region: PolygonRegion,
    ambient: DiskNeighborhood,
    p: &ConvexityParams,
) -> Result<CertifiedRegion, ConvexityError> {
    let cert = certify_boundary_convex(m, &region, &ambient, p)?;
    Ok(CertifiedRegion { region, ambient, cert })
}

/// Condition 3 on arcs of length at most `h`.
fn check_arcs(
    m: &IntrinsicMesh,
    k: &PolygonRegion,
    h: f64,
    tol: &Tolerances,
) -> Result<(usize, Vec<CornerWitness>), ConvexityError> {
    let total: f64 = k.perimeter();
    let n_arcs = ((total / h).ceil() as usize).max(1);
    let h = total / n_arcs as f64;
    let mut at = Vec::with_capacity(k.edges.len());
    let mut acc = 0.0;
    for e in &k.edges {
        at.push(acc);
        acc += e.length;
    }
    // Shift the breaks so that corners sit well inside their arcs.
    let offset = (0..16)
        .map(|j| h * j as f64 / 16.0)
        .max_by(|&a, &b| clearance(&at, a, h).total_cmp(&clearance(&at, b, h)))
        .unwrap_or(0.0);
    let arc_of = |s: f64| (((s - offset) / h).floor() as i64).rem_euclid(n_arcs as i64) as usize;
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n_arcs];
    for (i, &s) in at.iter().enumerate() {
        groups[arc_of(s)].push(i);
    }
    let turns = k.corner_turns(m, tol.len);
    let boundary = k.boundary();
    let mut outside: Option<Vec<Component>> = None;
    let mut witnesses = Vec::with_capacity(at.len());
    for (j, g) in groups.iter().enumerate() {
        if g.is_empty() {
            continue;
        }
        let s0 = offset + h * j as f64;
        let s1 = s0 + h;
        if g.len() == 1 {
            let i = g[0];
            let s = at[i] + if at[i] < s0 { total } else { 0.0 };
            let (a, b) = (s - s0, s1 - s);
            if let Some(w) = local_rule(m, k, i, turns[i], a, b, h, tol) {
                if w.competitor < a + b - tol.len && w.rule != CornerRule::LocalAngle {
                    return Err(ConvexityError::Condition3Failed { s0, s1, length: a + b, competitor: w.competitor });
                }
                if w.competitor >= a + b - tol.len {
                    witnesses.push(w);
                    continue;
                }
            }
        }
        // Exact search in the closure of the complement.
        let comps = match &outside {
            Some(c) => c,
            None => {
                let c = cut_along_graph(m, std::slice::from_ref(&boundary)).map_err(RegionError::from)?;
                outside.insert(c.into_iter().filter(|c| c.right_of(0)).collect())
            }
        };
        let pa = boundary_point(m, &boundary, s0, total);
        let pb = boundary_point(m, &boundary, s1, total);
        let competitor = shortest_outside(m, comps, &pa, &pb, tol).unwrap_or(f64::MAX);
        let length = h;
        if competitor < length - tol.len {
            return Err(ConvexityError::Condition3Failed { s0, s1, length, competitor });
        }
        for &i in g {
            let (left, tot) = (turns[i].map(|t| t.left), turns[i].map(|t| t.total));
            witnesses.push(CornerWitness {
                corner: i,
                arc_length: length,
                competitor,
                interior_angle: left,
                total_angle: tot,
                rule: CornerRule::Search,
            });
        }
    }
    witnesses.sort_by_key(|w| w.corner);
    Ok((n_arcs, witnesses))
}

fn boundary_point(m: &IntrinsicMesh, c: &crate::curve::SurfaceCurve, s: f64, total: f64) -> SurfacePoint {
    c.point_at(m, s.rem_euclid(total))
}

/// Smallest distance from a corner parameter to a break.
fn clearance(at: &[f64], offset: f64, h: f64) -> f64 {
    at.iter()
        .map(|&s| {
            let r = (s - offset).rem_euclid(h);
            r.min(h - r)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Condition 3 at corner `i` with `a`, `b` the arc lengths on either side.
/// `None` when the local rule does not apply.
#[allow(clippy::too_many_arguments)]
fn local_rule(
    m: &IntrinsicMesh,
    k: &PolygonRegion,
    i: usize,
    turn: Option<crate::geodesic::path::Turn>,
    a: f64,
    b: f64,
    h: f64,
    tol: &Tolerances,
) -> Option<CornerWitness> {
    let x = k.edges[i].start(m);
    let t = turn?;
    let mut w = CornerWitness {
        corner: i,
        arc_length: a + b,
        competitor: a + b,
        interior_angle: Some(t.left),
        total_angle: Some(t.total),
        rule: CornerRule::Boundary,
    };
    if on_surface_boundary(m, &x) {
        return Some(w);
    }
    local_chart_ok(m, &x, 3.0 * h, tol).then_some(())?;
    w.rule = CornerRule::LocalAngle;
    let ext = t.total - t.left;
    if ext < PI - tol.angle {
        w.competitor = (a * a + b * b - 2.0 * a * b * ext.cos()).max(0.0).sqrt();
    }
    Some(w)
}

/// Whether the ball of radius `r` around `x` is a valid flat or cone chart.
pub fn local_chart_ok(m: &IntrinsicMesh, x: &SurfacePoint, r: f64, tol: &Tolerances) -> bool {
    let chart = match x.as_vertex(m) {
        Some(v) if !crate::chart::is_flat_vertex(m, v, tol.angle) => Chart::cone(m, v, r),
        _ => Chart::flat(*x, r),
    };
    chart.develop(m, tol.angle).is_ok()
}

/// Shortest path between two boundary points through the outside components.
fn shortest_outside(
    m: &IntrinsicMesh,
    comps: &[Component],
    a: &SurfacePoint,
    b: &SurfacePoint,
    tol: &Tolerances,
) -> Option<f64> {
    let mut best: Option<f64> = None;
    for c in comps {
        let (Some(pa), Some(pb)) = (c.locate(m, a, 10.0 * tol.len), c.locate(m, b, 10.0 * tol.len)) else {
            continue;
        };
        if let Ok(g) = shortest_path(&c.mesh, &pa, &pb) {
            best = Some(best.map_or(g.length, |x: f64| x.min(g.length)));
        }
    }
    best
}

/// Net of points on a region: piece corners, piece centroids, and boundary
/// samples at spacing `h_net`.
pub fn region_net(m: &IntrinsicMesh, k: &PolygonRegion, h_net: f64) -> Vec<SurfacePoint> {
    let mut out = Vec::new();
    let snap = |f: u32, x: &crate::geom::P2| {
        SurfacePoint::new(m, f, crate::overlay::snap_bary(crate::geom::barycentric(m.layout(f), x), 1e-12))
    };
    for pc in &k.pieces {
        let n = pc.poly.len() as f64;
        let c = crate::geom::P2::from(pc.poly.iter().map(|p| p.coords).sum::<crate::geom::V2>() / n);
        out.push(snap(pc.face, &c));
    }
    let b = k.boundary();
    for s in b.sample_params(m, h_net) {
        out.push(b.point_at(m, s));
    }
    let tol = 1e-9 * m.scale();
    let mut uniq: Vec<SurfacePoint> = Vec::new();
    for p in out {
        if !uniq.iter().any(|q| q.same(m, &p, tol)) {
            uniq.push(p);
        }
    }
    uniq
}

/// Every shortest geodesic between net points of `K` stays in `K`; otherwise the
/// offending pair.
pub fn is_completely_convex(
    m: &IntrinsicMesh,
    k: &PolygonRegion,
    h_net: f64,
    tol: &Tolerances,
) -> Result<Option<(SurfacePoint, SurfacePoint)>, ConvexityError> {
    let net = region_net(m, k, h_net);
    for i in 0..net.len() {
        for j in i + 1..net.len() {
            for g in shortest_geodesics(m, &net[i], &net[j])? {
                if !path_inside(m, k, &g, tol) {
                    return Ok(Some((net[i], net[j])));
                }
            }
        }
    }
    Ok(None)
}

/// Segment midpoints and junctions of `g` all lie in `k`.
pub fn path_inside(m: &IntrinsicMesh, k: &PolygonRegion, g: &GeodesicPath, tol: &Tolerances) -> bool {
    let slack = 10.0 * tol.len;
    g.curve.segs.iter().all(|s| {
        [s.a, s.at(0.5), s.b].iter().all(|b| k.contains(m, &SurfacePoint::new(m, s.face, *b), slack))
    })
}

/// Whether `p` is in the interior of `k`, away from its boundary by more than `tol`.
pub fn strictly_inside(m: &IntrinsicMesh, k: &PolygonRegion, p: &SurfacePoint, tol: f64) -> bool {
    k.contains(m, p, 0.0) && k.boundary_distance(m, p) > tol
}

/// Components of `K1 ∩ K2`, certified in the ambient disk of the input with the
/// longer perimeter.
pub fn intersect_boundary_convex(
    m: &IntrinsicMesh,
    k1: &CertifiedRegion,
    k2: &CertifiedRegion,
    p: &ConvexityParams,
) -> Result<Vec<CertifiedRegion>, ConvexityError> {
    let (big, small) = if k1.cert.perimeter >= k2.cert.perimeter { (k1, k2) } else { (k2, k1) };
    let slack = 10.0 * p.tol.len;
    if contains_region(m, &big.region, &small.region, slack) {
        return Ok(vec![small.clone()]);
    }
    if contains_region(m, &small.region, &big.region, slack) {
        return Ok(vec![big.clone()]);
    }
    let curves = [big.region.boundary(), small.region.boundary()];
    let parts = arrangement_regions(
        m,
        &curves,
        |x| big.region.contains(m, x, slack) && small.region.contains(m, x, slack),
        &p.tol,
    )?;
    parts.into_iter().map(|r| certify_region(m, r, big.ambient.clone(), p)).collect()
}

/// Whether every boundary sample of `inner` lies in `outer`.
fn contains_region(m: &IntrinsicMesh, outer: &PolygonRegion, inner: &PolygonRegion, slack: f64) -> bool {
    let b = inner.boundary();
    let h = inner.perimeter() / 256.0;
    b.sample_params(m, h).iter().all(|&s| outer.contains(m, &b.point_at(m, s), slack))
        && b.segs.iter().all(|s| outer.contains(m, &SurfacePoint::new(m, s.face, s.a), slack))
}

/// Components of `P ∖ |γ|`, certified in the ambient disk of `P`.
pub fn split_by_geodesic(
    m: &IntrinsicMesh,
    pr: &CertifiedRegion,
    g: &GeodesicPath,
    p: &ConvexityParams,
) -> Result<Vec<CertifiedRegion>, ConvexityError> {
    let slack = 10.0 * p.tol.len;
    for e in [g.start(m), g.end(m)] {
        if strictly_inside(m, &pr.region, &e, slack) {
            return Err(ConvexityError::GeodesicEndpointInside);
        }
    }
    // Segment midpoints alone miss a chord that enters through a corner.
    let spacing = pr.region.perimeter() / 256.0;
    let enters = g.curve.segs.iter().any(|s| strictly_inside(m, &pr.region, &SurfacePoint::new(m, s.face, s.at(0.5)), slack))
        || g.curve.sample_params(m, spacing).iter().any(|&t| strictly_inside(m, &pr.region, &g.curve.point_at(m, t), slack));
    if !enters {
        return Ok(vec![pr.clone()]);
    }
    let curves = [pr.region.boundary(), g.curve.clone()];
    let parts = arrangement_regions(m, &curves, |x| pr.region.contains(m, x, slack), &p.tol)?;
    parts.into_iter().map(|r| certify_region(m, r, pr.ambient.clone(), p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Chart;
    use crate::curve::{Segment, SurfaceCurve};
    use crate::geom::{barycentric, p2, P2};
    use crate::mesh::golden;

    /// Grid square helper: a point given in global coordinates.
    fn grid_point(m: &IntrinsicMesh, n: usize, s: f64, x: f64, y: f64) -> SurfacePoint {
        let c = s / n as f64;
        let i = ((x / c).floor() as usize).min(n - 1);
        let j = ((y / c).floor() as usize).min(n - 1);
        let (x0, y0) = (i as f64 * c, j as f64 * c);
        let lower = (y - y0) <= (x - x0);
        let f = (2 * (j * n + i) + if lower { 0 } else { 1 }) as u32;
        let tri = if lower {
            [p2(x0, y0), p2(x0 + c, y0), p2(x0 + c, y0 + c)]
        } else {
            [p2(x0, y0), p2(x0 + c, y0 + c), p2(x0, y0 + c)]
        };
        SurfacePoint::new(m, f, crate::overlay::snap_bary(barycentric(&tri, &p2(x, y)), 1e-12))
    }

    fn polygon(m: &IntrinsicMesh, pts: &[SurfacePoint], tol: &Tolerances) -> PolygonRegion {
        let edges = (0..pts.len()).map(|i| shortest_path(m, &pts[i], &pts[(i + 1) % pts.len()]).unwrap()).collect();
        PolygonRegion::from_edges(m, edges, tol).unwrap()
    }

    fn square_grid() -> (IntrinsicMesh, ConvexityParams) {
        let m = golden::grid_square(10, 10.0);
        let p = ConvexityParams::new(&m, 10.0 * 2f64.sqrt());
        (m, p)
    }

    #[test]
    fn small_square_in_big_square_certifies() {
        let (m, p) = square_grid();
        let at = |x, y| grid_point(&m, 10, 10.0, x, y);
        let k = polygon(&m, &[at(4.95, 4.95), at(5.05, 4.95), at(5.05, 5.05), at(4.95, 5.05)], &p.tol);
        let u = DiskNeighborhood::ball(&m, Chart::flat(at(5.0, 5.0), 2.3), 1e-7).unwrap();
        let c = certify_boundary_convex(&m, &k, &u, &p).unwrap();
        assert!((c.perimeter - 0.4).abs() < 1e-12);
        // The farthest point of K is a corner at distance 0.05·√2 from the centre.
        assert!((c.margin - (2.3 - 0.05 * 2f64.sqrt())).abs() < 1e-12);
        assert!(c.condition1() && c.condition2());
        assert_eq!(c.corners.len(), 4);
        assert!(c.corners.iter().all(|w| w.rule == CornerRule::LocalAngle && w.competitor == w.arc_length));
    }

    #[test]
    fn large_ambient_breaks_condition_two() {
        // The side-9 square of the worked example has diameter 9√2 > 10√2 / 3.
        let (m, p) = square_grid();
        let at = |x, y| grid_point(&m, 10, 10.0, x, y);
        let k = polygon(&m, &[at(4.95, 4.95), at(5.05, 4.95), at(5.05, 5.05), at(4.95, 5.05)], &p.tol);
        let u = DiskNeighborhood::ball(&m, Chart::flat(at(5.0, 5.0), 4.5), 1e-7).unwrap();
        assert!(matches!(certify_boundary_convex(&m, &k, &u, &p), Err(ConvexityError::Condition2Failed { .. })));
    }

    #[test]
    fn reflex_kink_fails_condition_three() {
        let (m, p) = square_grid();
        let at = |x, y| grid_point(&m, 10, 10.0, x, y);
        // Arrow shape with a reflex corner at (5, 4.998).
        let k = polygon(&m, &[at(4.99, 4.99), at(5.0, 4.998), at(5.01, 4.99), at(5.01, 5.01), at(4.99, 5.01)], &p.tol);
        let u = DiskNeighborhood::ball(&m, Chart::flat(at(5.0, 5.0), 2.3), 1e-7).unwrap();
        match certify_boundary_convex(&m, &k, &u, &p) {
            Err(ConvexityError::Condition3Failed { length, competitor, .. }) => assert!(competitor < length),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tight_ambient_breaks_condition_one() {
        let (m, p) = square_grid();
        let at = |x, y| grid_point(&m, 10, 10.0, x, y);
        let k = polygon(&m, &[at(4.5, 4.5), at(5.5, 4.5), at(5.5, 5.5), at(4.5, 5.5)], &p.tol);
        let u = DiskNeighborhood::ball(&m, Chart::flat(at(5.0, 5.0), 2.0), 1e-7).unwrap();
        assert!(matches!(certify_boundary_convex(&m, &k, &u, &p), Err(ConvexityError::Condition1Failed { .. })));
    }

    #[test]
    fn triangle_around_cube_corner_certifies_in_cone_ball() {
        let m = golden::cube();
        let p = ConvexityParams::new(&m, crate::diameter::surface_diameter_lower(&m));
        let v = 6;
        let theta = m.angle_sum(v);
        let opt = crate::trace::TraceOptions::for_mesh(&m);
        let pts: Vec<SurfacePoint> =
            (0..3).map(|i| crate::trace::trace_from_vertex(&m, v, 0.2 + theta * i as f64 / 3.0, 0.02, &opt).end).collect();
        let edges = (0..3)
            .map(|i| GeodesicPath::from_curve(&m, crate::chart::cone_chord(&m, v, &pts[i], &pts[(i + 1) % 3]).unwrap(), p.tol.len))
            .collect();
        let k = PolygonRegion::from_edges(&m, edges, &p.tol).unwrap();
        let u = DiskNeighborhood::from_development(crate::chart::fit_cone(&m, v, 0.37).unwrap());
        let c = certify_boundary_convex(&m, &k, &u, &p).unwrap();
        assert!((c.margin - (u.chart().unwrap().radius - 0.02)).abs() < 1e-9);
    }

    #[test]
    fn completely_convex_flat_triangle_and_l_shape() {
        let m = golden::flat_square();
        let tol = Tolerances::for_mesh(&m);
        let l = m.layout(0);
        let f = |x: f64, y: f64| SurfacePoint::new(&m, 0, barycentric(l, &p2(x, y)));
        let tri = polygon(&m, &[f(0.3, 0.1), f(0.9, 0.1), f(0.9, 0.7)], &tol);
        assert!(is_completely_convex(&m, &tri, 0.2, &tol).unwrap().is_none());
        let g = |x: f64, y: f64| {
            let (face, t) = if y <= x {
                (0, [p2(0.0, 0.0), p2(1.0, 0.0), p2(1.0, 1.0)])
            } else {
                (1, [p2(0.0, 0.0), p2(1.0, 1.0), p2(0.0, 1.0)])
            };
            SurfacePoint::new(&m, face, barycentric(&t, &p2(x, y)))
        };
        let lshape = polygon(&m, &[g(0.1, 0.1), g(0.9, 0.1), g(0.9, 0.3), g(0.3, 0.3), g(0.3, 0.9), g(0.1, 0.9)], &tol);
        let w = is_completely_convex(&m, &lshape, 0.2, &tol).unwrap();
        assert!(w.is_some());
    }

    #[test]
    fn half_pillow_is_not_completely_convex() {
        let m = golden::pillow();
        let tol = Tolerances::for_mesh(&m);
        // Front square: faces 0 and 1 with the boundary of the doubled square.
        let corners: Vec<SurfacePoint> = (0..4).map(|v| SurfacePoint::vertex(&m, v)).collect();
        let k = polygon(&m, &corners, &tol);
        assert!((k.area - 1.0).abs() < 1e-9, "{}", k.area);
        assert!(is_completely_convex(&m, &k, 0.5, &tol).unwrap().is_some());
    }

    fn flat_square_region(m: &IntrinsicMesh, tol: &Tolerances, pts: &[P2]) -> PolygonRegion {
        let at = |q: &P2| {
            let (face, t) = if q.y <= q.x {
                (0, [p2(0.0, 0.0), p2(1.0, 0.0), p2(1.0, 1.0)])
            } else {
                (1, [p2(0.0, 0.0), p2(1.0, 1.0), p2(0.0, 1.0)])
            };
            SurfacePoint::new(m, face, barycentric(&t, q))
        };
        let v: Vec<SurfacePoint> = pts.iter().map(at).collect();
        polygon(m, &v, tol)
    }

    fn certified(m: &IntrinsicMesh, r: PolygonRegion, c: P2, radius: f64) -> CertifiedRegion {
        let p = ConvexityParams::new(m, 2f64.sqrt());
        let (face, t) = if c.y <= c.x {
            (0, [p2(0.0, 0.0), p2(1.0, 0.0), p2(1.0, 1.0)])
        } else {
            (1, [p2(0.0, 0.0), p2(1.0, 1.0), p2(0.0, 1.0)])
        };
        let center = SurfacePoint::new(m, face, barycentric(&t, &c));
        let u = DiskNeighborhood::ball(m, Chart::flat(center, radius), 1e-7).unwrap();
        certify_region(m, r, u, &p).unwrap()
    }

    #[test]
    fn intersection_of_overlapping_squares() {
        let m = golden::flat_square();
        let tol = Tolerances::for_mesh(&m);
        let s = 0.01;
        let a = flat_square_region(&m, &tol, &[p2(0.5, 0.5), p2(0.5 + s, 0.5), p2(0.5 + s, 0.5 + s), p2(0.5, 0.5 + s)]);
        let b = flat_square_region(
            &m,
            &tol,
            &[p2(0.505, 0.5025), p2(0.515, 0.5025), p2(0.515, 0.5125), p2(0.505, 0.5125)],
        );
        let ca = certified(&m, a, p2(0.505, 0.505), 0.23);
        let cb = certified(&m, b, p2(0.51, 0.5075), 0.23);
        let p = ConvexityParams::new(&m, 2f64.sqrt());
        let w = intersect_boundary_convex(&m, &ca, &cb, &p).unwrap();
        assert_eq!(w.len(), 1);
        assert!((w[0].region.area - 0.005 * 0.0075).abs() < 1e-12, "{}", w[0].region.area);
        assert!(w[0].cert.perimeter <= ca.cert.perimeter.min(cb.cert.perimeter) + 1e-9);
        assert_eq!(w[0].region.n_vertices(), 4);
        let far = flat_square_region(&m, &tol, &[p2(0.7, 0.4), p2(0.71, 0.4), p2(0.71, 0.41), p2(0.7, 0.41)]);
        let cf = certified(&m, far, p2(0.705, 0.405), 0.23);
        assert!(intersect_boundary_convex(&m, &ca, &cf, &p).unwrap().is_empty());
    }

    #[test]
    fn split_square_along_diagonal() {
        let m = golden::flat_square();
        let tol = Tolerances::for_mesh(&m);
        let a = flat_square_region(&m, &tol, &[p2(0.4, 0.3), p2(0.41, 0.3), p2(0.41, 0.31), p2(0.4, 0.31)]);
        let ca = certified(&m, a, p2(0.405, 0.305), 0.23);
        let p = ConvexityParams::new(&m, 2f64.sqrt());
        let l = m.layout(0);
        let seg = Segment { face: 0, a: barycentric(l, &p2(0.39, 0.29)), b: barycentric(l, &p2(0.42, 0.32)) };
        let g = GeodesicPath::from_curve(&m, SurfaceCurve::new(vec![seg]), tol.len);
        let parts = split_by_geodesic(&m, &ca, &g, &p).unwrap();
        assert_eq!(parts.len(), 2);
        let area: f64 = parts.iter().map(|c| c.region.area).sum();
        assert!((area - 1e-4).abs() < 1e-12);
        assert!(parts.iter().all(|c| c.region.n_vertices() == 3));
        let inside = Segment { face: 0, a: barycentric(l, &p2(0.405, 0.305)), b: barycentric(l, &p2(0.5, 0.305)) };
        let g2 = GeodesicPath::from_curve(&m, SurfaceCurve::new(vec![inside]), tol.len);
        assert!(matches!(split_by_geodesic(&m, &ca, &g2, &p), Err(ConvexityError::GeodesicEndpointInside)));
    }
}
