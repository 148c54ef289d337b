//! From a cover to non-overlapping polygons, and from polygons to triangles.

use crate::{PipelineError, Stage, TriangleElement};
use geotri_core::chart::{Chart, DiskNeighborhood};
use geotri_core::convexity::{certify_boundary_convex, path_inside, strictly_inside, BoundaryConvexCertificate, ConvexityParams};
use geotri_core::geodesic::shortest::shortest_path;
use geotri_core::geodesic::superfluous::normalize_to_finite_graph;
use geotri_core::geodesic::GeodesicPath;
use geotri_core::geom::{ear_clip, triangle_area, triangle_overlap, P2};
use geotri_core::region::{arrangement_regions, PolygonRegion};
use geotri_core::{IntrinsicMesh, SurfacePoint, Tolerances};

/// Diagonal splits allowed along one branch.
const MAX_DIAGONAL_DEPTH: usize = 16;

/// A polygon of the decomposition with the ball its certificate refers to.
#[derive(Clone, Debug)]
pub struct Cell {
    pub region: PolygonRegion,
    pub chart: Option<Chart>,
    pub cert: Option<BoundaryConvexCertificate>,
    pub stage: Stage,
}

impl Cell {
    pub fn ambient(&self, m: &IntrinsicMesh, tol_angle: f64) -> Option<DiskNeighborhood> {
        DiskNeighborhood::ball(m, self.chart?, tol_angle).ok()
    }

    fn recertified(m: &IntrinsicMesh, region: PolygonRegion, amb: Option<&DiskNeighborhood>, p: &ConvexityParams, stage: Stage) -> Cell {
        let cert = amb.and_then(|u| certify_boundary_convex(m, &region, u, p).ok());
        let chart = if cert.is_some() { amb.and_then(|u| u.chart()) } else { None };
        Cell { region, chart, cert, stage }
    }
}

/// An interior point of the region: the centroid of its largest piece triangle.
pub fn probe_point(m: &IntrinsicMesh, r: &PolygonRegion) -> Option<SurfacePoint> {
    let mut best: Option<(f64, u32, P2)> = None;
    for pc in &r.pieces {
        for t in ear_clip(&pc.poly) {
            let (a, b, c) = (pc.poly[t[0]], pc.poly[t[1]], pc.poly[t[2]]);
            let area = triangle_area(&a, &b, &c);
            if best.is_none_or(|(ba, _, _)| area > ba) {
                best = Some((area, pc.face, P2::from((a.coords + b.coords + c.coords) / 3.0)));
            }
        }
    }
    best.map(|(_, f, y)| SurfacePoint::from_position(m, f, &y))
}

/// Pairs `(i, j)`, `i < j`, whose regions share more than `tol_area` of area.
///
/// Pieces are compared face by face with a sweep over their x-extents.
pub fn overlapping_pairs(regions: &[&PolygonRegion], tol_area: f64) -> Vec<(usize, usize)> {
    struct Item {
        face: u32,
        owner: usize,
        lo: P2,
        hi: P2,
        tris: Vec<[P2; 3]>,
    }
    let mut items = Vec::new();
    for (owner, r) in regions.iter().enumerate() {
        for pc in &r.pieces {
            let (mut lo, mut hi) = (pc.poly[0], pc.poly[0]);
            for y in &pc.poly {
                lo = P2::new(lo.x.min(y.x), lo.y.min(y.y));
                hi = P2::new(hi.x.max(y.x), hi.y.max(y.y));
            }
            let tris = ear_clip(&pc.poly).into_iter().map(|t| [pc.poly[t[0]], pc.poly[t[1]], pc.poly[t[2]]]).collect();
            items.push(Item { face: pc.face, owner, lo, hi, tris });
        }
    }
    items.sort_by(|a, b| a.face.cmp(&b.face).then(a.lo.x.total_cmp(&b.lo.x)));
    let mut shared: std::collections::BTreeMap<(usize, usize), f64> = Default::default();
    let mut start = 0;
    while start < items.len() {
        let face = items[start].face;
        let end = start + items[start..].iter().take_while(|it| it.face == face).count();
        for i in start..end {
            let a = &items[i];
            for b in &items[i + 1..end] {
                if b.lo.x >= a.hi.x {
                    break;
                }
                if b.owner == a.owner || b.lo.y >= a.hi.y || a.lo.y >= b.hi.y {
                    continue;
                }
                let s: f64 = a.tris.iter().flat_map(|t| b.tris.iter().map(move |u| triangle_overlap(t, u))).sum();
                if s > 0.0 {
                    *shared.entry((a.owner.min(b.owner), a.owner.max(b.owner))).or_default() += s;
                }
            }
        }
        start = end;
    }
    shared.into_iter().filter(|&(_, s)| s > tol_area).map(|(k, _)| k).collect()
}

fn overlaps(cells: &[Cell], tol: &Tolerances) -> Vec<(usize, usize)> {
    overlapping_pairs(&cells.iter().map(|c| &c.region).collect::<Vec<_>>(), tol.area)
}

/// Re-route the sides of overlapping cells so each pair of sides meets in
/// finitely many components. Cells without overlaps are returned as they are.
pub fn refine_cover_to_finite_graph(m: &IntrinsicMesh, mut cells: Vec<Cell>, p: &ConvexityParams) -> Result<Vec<Cell>, PipelineError> {
    let tol = p.tol;
    let pairs = overlaps(&cells, &tol);
    if pairs.is_empty() {
        return Ok(cells);
    }
    let mut nbrs = vec![Vec::new(); cells.len()];
    for &(i, j) in &pairs {
        nbrs[i].push(j);
        nbrs[j].push(i);
    }
    for i in 0..cells.len() {
        if nbrs[i].is_empty() {
            continue;
        }
        let system: Vec<GeodesicPath> = nbrs[i].iter().flat_map(|&j| cells[j].region.edges.iter().cloned()).collect();
        let edges: Vec<GeodesicPath> = cells[i].region.edges.iter().map(|e| normalize_to_finite_graph(m, &system, e, tol.len)).collect();
        // A re-routed side may sweep across a vertex; keep it only if the region is unchanged.
        if let Ok(r) = PolygonRegion::from_edges(m, edges, &tol) {
            if (r.area - cells[i].region.area).abs() <= tol.area {
                let amb = cells[i].ambient(m, tol.angle);
                cells[i] = Cell::recertified(m, r, amb.as_ref(), p, Stage::Refine);
            }
        }
    }
    Ok(cells)
}

/// Replace each group of overlapping cells by the faces of the arrangement of
/// their boundaries. A face is certified in the ball of the first cell holding
/// it; faces that fail are cut along geodesic diagonals.
pub fn make_non_overlapping(m: &IntrinsicMesh, cells: Vec<Cell>, p: &ConvexityParams) -> Result<Vec<Cell>, PipelineError> {
    let tol = p.tol;
    let pairs = overlaps(&cells, &tol);
    if pairs.is_empty() {
        return Ok(cells);
    }
    let n = cells.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(i, j) in &pairs {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        parent[a.max(b)] = a.min(b);
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let slack = 10.0 * tol.len;
    let mut out = Vec::new();
    for members in groups.into_values() {
        if members.len() == 1 {
            out.push(cells[members[0]].clone());
            continue;
        }
        let curves: Vec<_> = members.iter().map(|&i| cells[i].region.boundary()).collect();
        let parts = arrangement_regions(m, &curves, |x| members.iter().any(|&i| cells[i].region.contains(m, x, slack)), &tol)?;
        for r in parts {
            let probe = probe_point(m, &r).ok_or(PipelineError::Stage { stage: Stage::NonOverlap.name(), detail: "empty face".into() })?;
            let owner = members.iter().copied().find(|&i| cells[i].region.contains(m, &probe, slack)).unwrap_or(members[0]);
            let amb = cells[owner].ambient(m, tol.angle);
            out.extend(certified_parts(m, r, amb.as_ref(), p, 0)?);
        }
    }
    Ok(out)
}

fn certified_parts(m: &IntrinsicMesh, r: PolygonRegion, amb: Option<&DiskNeighborhood>, p: &ConvexityParams, depth: usize) -> Result<Vec<Cell>, PipelineError> {
    let c = Cell::recertified(m, r, amb, p, Stage::NonOverlap);
    if c.cert.is_some() || amb.is_none() {
        return Ok(vec![c]);
    }
    if depth >= MAX_DIAGONAL_DEPTH || c.region.n_vertices() <= 3 {
        return Err(PipelineError::Stage { stage: Stage::NonOverlap.name(), detail: "arrangement face cannot be certified".into() });
    }
    let mut v = Vec::new();
    for part in split_by_diagonal(m, &c.region, &p.tol)? {
        v.extend(certified_parts(m, part, amb, p, depth + 1)?);
    }
    Ok(v)
}

/// Shortest diagonal that runs through the interior, or any diagonal if none does.
fn split_by_diagonal(m: &IntrinsicMesh, r: &PolygonRegion, tol: &Tolerances) -> Result<Vec<PolygonRegion>, PipelineError> {
    let vs = r.vertices(m);
    let n = vs.len();
    let slack = 10.0 * tol.len;
    let mut best: Option<(bool, f64, GeodesicPath)> = None;
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let Ok(g) = shortest_path(m, &vs[i], &vs[j]) else { continue };
            let g = normalize_to_finite_graph(m, &r.edges, &g, tol.len);
            let mid = g.curve.point_at(m, 0.5 * g.length);
            let inside = path_inside(m, r, &g, tol) && strictly_inside(m, r, &mid, slack);
            let better = match &best {
                None => true,
                Some((bi, bl, _)) => (inside && !bi) || (inside == *bi && g.length < *bl),
            };
            if better {
                best = Some((inside, g.length, g));
            }
        }
    }
    let (_, _, g) = best.ok_or(PipelineError::Stage { stage: Stage::Triangulate.name(), detail: "polygon has no diagonal".into() })?;
    let parts = arrangement_regions(m, &[r.boundary(), g.curve.clone()], |x| r.contains(m, x, slack), tol)?;
    if parts.len() < 2 {
        return Err(PipelineError::Stage { stage: Stage::Triangulate.name(), detail: "diagonal does not separate the polygon".into() });
    }
    Ok(parts)
}

/// Triangles of `cell`: the cell itself when it has at most three corners,
/// otherwise the pieces of repeated splits along shortest interior diagonals.
pub fn triangulate_polygon(m: &IntrinsicMesh, cell: &Cell, p: &ConvexityParams) -> Result<Vec<TriangleElement>, PipelineError> {
    if cell.region.n_vertices() <= 3 {
        return Ok(vec![TriangleElement::new(m, cell.region.clone(), cell.chart, cell.cert.clone(), cell.stage, &p.tol)]);
    }
    let amb = cell.ambient(m, p.tol.angle);
    let mut out = Vec::new();
    let mut stack = vec![(cell.region.clone(), 0usize)];
    while let Some((r, depth)) = stack.pop() {
        if r.n_vertices() <= 3 {
            let c = Cell::recertified(m, r, amb.as_ref(), p, Stage::Triangulate);
            out.push(TriangleElement::new(m, c.region, c.chart, c.cert, Stage::Triangulate, &p.tol));
            continue;
        }
        if depth >= MAX_DIAGONAL_DEPTH {
            return Err(PipelineError::Stage { stage: Stage::Triangulate.name(), detail: "diagonal splitting did not terminate".into() });
        }
        for part in split_by_diagonal(m, &r, &p.tol)? {
            stack.push((part, depth + 1));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use geotri_core::geom::{barycentric, p2};
    use geotri_core::mesh::golden;

    fn point(m: &IntrinsicMesh, x: f64, y: f64) -> SurfacePoint {
        let (i, j) = (x.floor().min(9.0), y.floor().min(9.0));
        let lower = y - j <= x - i;
        let f = (2 * (j as usize * 10 + i as usize) + usize::from(!lower)) as u32;
        let tri = if lower { [p2(i, j), p2(i + 1.0, j), p2(i + 1.0, j + 1.0)] } else { [p2(i, j), p2(i + 1.0, j + 1.0), p2(i, j + 1.0)] };
        SurfacePoint::new(m, f, barycentric(&tri, &p2(x, y)))
    }

    fn polygon(m: &IntrinsicMesh, pts: &[(f64, f64)]) -> PolygonRegion {
        let tol = Tolerances::for_mesh(m);
        let c: Vec<SurfacePoint> = pts.iter().map(|&(x, y)| point(m, x, y)).collect();
        let n = c.len();
        let edges = (0..n).map(|i| shortest_path(m, &c[i], &c[(i + 1) % n]).unwrap()).collect();
        PolygonRegion::from_edges(m, edges, &tol).unwrap()
    }

    fn cell(m: &IntrinsicMesh, pts: &[(f64, f64)], centre: (f64, f64)) -> Cell {
        let p = ConvexityParams::new(m, 10.0 * 2f64.sqrt());
        let chart = Chart::flat(point(m, centre.0, centre.1), 2.3);
        let amb = DiskNeighborhood::ball(m, chart, p.tol.angle).unwrap();
        Cell::recertified(m, polygon(m, pts), Some(&amb), &p, Stage::Cover)
    }

    #[test]
    fn hexagon_becomes_four_triangles() {
        let m = golden::grid_square(10, 10.0);
        let p = ConvexityParams::new(&m, 10.0 * 2f64.sqrt());
        let pts = [(5.0, 4.93), (5.06, 4.965), (5.06, 5.035), (5.0, 5.07), (4.94, 5.035), (4.94, 4.965)];
        let c = cell(&m, &pts, (5.0, 5.0));
        assert!(c.cert.is_some());
        let tris = triangulate_polygon(&m, &c, &p).unwrap();
        assert_eq!(tris.len(), 4);
        let area: f64 = tris.iter().map(|t| t.region.area).sum();
        assert!((area - c.region.area).abs() < 1e-12);
        assert!(tris.iter().all(|t| t.region.n_vertices() == 3 && !t.degenerate && t.cert.is_some()));
        assert!(overlapping_pairs(&tris.iter().map(|t| &t.region).collect::<Vec<_>>(), 1e-12).is_empty());
    }

    #[test]
    fn overlapping_squares_become_disjoint_faces() {
        let m = golden::grid_square(10, 10.0);
        let p = ConvexityParams::new(&m, 10.0 * 2f64.sqrt());
        let a = cell(&m, &[(4.95, 4.95), (5.05, 4.95), (5.05, 5.05), (4.95, 5.05)], (5.0, 5.0));
        let b = cell(&m, &[(5.0, 5.0), (5.1, 5.0), (5.1, 5.1), (5.0, 5.1)], (5.05, 5.05));
        let cells = vec![a, b];
        assert_eq!(overlaps(&cells, &p.tol), vec![(0, 1)]);
        let refined = refine_cover_to_finite_graph(&m, cells, &p).unwrap();
        let out = make_non_overlapping(&m, refined, &p).unwrap();
        // The overlap plus two L-shapes, each of which is cut at its reflex corner.
        assert!(out.len() >= 5, "{}", out.len());
        let area: f64 = out.iter().map(|c| c.region.area).sum();
        assert!((area - (0.02 - 0.0025)).abs() < 1e-12, "{area}");
        assert!(overlaps(&out, &p.tol).is_empty());
        assert!(out.iter().all(|c| c.cert.is_some()));
    }

    #[test]
    fn disjoint_cells_pass_through() {
        let m = golden::grid_square(10, 10.0);
        let p = ConvexityParams::new(&m, 10.0 * 2f64.sqrt());
        let a = cell(&m, &[(2.0, 2.0), (2.2, 2.0), (2.1, 2.2)], (2.1, 2.1));
        let b = cell(&m, &[(2.2, 2.0), (2.3, 2.2), (2.1, 2.2)], (2.1, 2.1));
        let out = make_non_overlapping(&m, vec![a.clone(), b], &p).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].region.area, a.region.area);
    }
}
