//! Decomposition of a piecewise-flat surface into small, non-overlapping,
//! non-degenerate, boundary-convex geodesic triangles.
//!
//! [`triangulate_surface`] runs the stages in order: cover, refinement to a
//! finite edge graph, removal of overlaps, triangulation of polygons and bigon
//! repair. The cover already tiles the surface, so the middle stages take
//! their fast paths on it; they remain usable on arbitrary covers.

pub mod bigon;
pub mod decompose;
pub mod neighborhood;
pub mod tiling;

pub use bigon::{consolidate, split_bigon_nondegenerate};
pub use decompose::{make_non_overlapping, refine_cover_to_finite_graph, triangulate_polygon};
pub use neighborhood::{absolutely_convex_hull, cover_absolutely_convex, polygon_neighborhood, triangle_fan_cover};

use geotri_core::chart::{on_surface_boundary, Chart};
use geotri_core::convexity::{BoundaryConvexCertificate, ConvexityError, ConvexityParams};
use geotri_core::diameter::{quick_bound, surface_diameter_lower};
use geotri_core::format::{ResultFile, RunConfig, Snapshot, StageStats, TriangleRecord, FORMAT};
use geotri_core::geodesic::GeodesicError;
use geotri_core::region::{PolygonRegion, RegionError};
use geotri_core::transit::is_transit_point;
use geotri_core::{IntrinsicMesh, SurfacePoint, Tolerances};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
    #[error("no separating polygon found after repeated halving")]
    SamplingTooCoarse,
    #[error("complete-convexity enlargement did not settle")]
    EnlargementDiverged,
    #[error("bigon splitting exceeded the recursion cap")]
    BigonSplitDiverged,
    #[error("fan triangles do not cover the neighbourhood")]
    CoverageFailed,
    #[error("subdivision would need {0} tiles")]
    TooManyTiles(usize),
    #[error("tile in face {face} still uncertified after {depth} splits")]
    Uncertifiable { face: u32, depth: u32 },
    #[error("no certified cell around cone point {vertex}: {detail}")]
    ConeCell { vertex: u32, detail: String },
    #[error("stage {stage}: {detail}")]
    Stage { stage: &'static str, detail: String },
    #[error(transparent)]
    Convexity(#[from] ConvexityError),
    #[error(transparent)]
    Geodesic(#[from] GeodesicError),
    #[error(transparent)]
    Region(#[from] RegionError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Cover,
    Refine,
    NonOverlap,
    Triangulate,
    Bigon,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Cover => "cover",
            Stage::Refine => "refine",
            Stage::NonOverlap => "non_overlap",
            Stage::Triangulate => "triangulate",
            Stage::Bigon => "bigon",
        }
    }
}

/// A final triangle (or a degenerate one awaiting repair).
#[derive(Clone, Debug)]
pub struct TriangleElement {
    pub region: PolygonRegion,
    pub side_lengths: Vec<f64>,
    /// Smallest triangle-inequality margin; zero for fewer than three sides.
    pub slack: f64,
    pub degenerate: bool,
    /// Boundary points off the surface boundary that were tested for transit.
    pub transit_samples: usize,
    pub transit_ok: bool,
    pub chart: Option<Chart>,
    pub cert: Option<BoundaryConvexCertificate>,
    pub diameter: f64,
    pub stage: Stage,
}

/// `min(a + b - c)` over the three orderings.
pub fn triangle_slack(l: &[f64]) -> f64 {
    if l.len() != 3 {
        return 0.0;
    }
    let s: f64 = l.iter().sum();
    l.iter().map(|x| s - 2.0 * x).fold(f64::INFINITY, f64::min)
}

impl TriangleElement {
    pub fn new(
        m: &IntrinsicMesh,
        region: PolygonRegion,
        chart: Option<Chart>,
        cert: Option<BoundaryConvexCertificate>,
        stage: Stage,
        tol: &Tolerances,
    ) -> Self {
        let side_lengths = region.side_lengths();
        let slack = triangle_slack(&side_lengths);
        let (transit_samples, transit_ok) = transit_check(m, &region, tol.angle);
        let diameter = diameter_bound(m, &region);
        TriangleElement {
            region,
            side_lengths,
            slack,
            degenerate: !(slack > tol.len),
            transit_samples,
            transit_ok,
            chart,
            cert,
            diameter,
            stage,
        }
    }

    pub fn record(&self, m: &IntrinsicMesh, id: usize) -> TriangleRecord {
        let _ = m;
        TriangleRecord {
            id,
            stage: self.stage.name().into(),
            sides: self.region.edges.iter().map(|e| e.curve.clone()).collect(),
            side_lengths: self.side_lengths.clone(),
            slack: self.slack,
            diameter: self.diameter,
            chart: self.chart,
            certificate: self.cert.clone(),
        }
    }
}

/// Corners, segment ends and segment midpoints of the boundary, off the surface boundary.
fn transit_check(m: &IntrinsicMesh, r: &PolygonRegion, tol_angle: f64) -> (usize, bool) {
    let mut n = 0;
    for e in &r.edges {
        for s in &e.curve.segs {
            for b in [s.a, s.at(0.5)] {
                let p = SurfacePoint::new(m, s.face, b);
                if on_surface_boundary(m, &p) {
                    continue;
                }
                n += 1;
                if !is_transit_point(m, &p, tol_angle).transit {
                    return (n, false);
                }
            }
        }
    }
    (n, true)
}

/// Exact for a region inside one face, which is a convex polygon there; the
/// cell-graph bound otherwise.
fn diameter_bound(m: &IntrinsicMesh, r: &PolygonRegion) -> f64 {
    let longest = r.side_lengths().into_iter().fold(0.0, f64::max);
    if let [pc] = r.pieces.as_slice() {
        let mut d: f64 = 0.0;
        for a in &pc.poly {
            for b in &pc.poly {
                d = d.max((a - b).norm());
            }
        }
        return d.max(longest);
    }
    quick_bound(m, &r.pieces, longest).upper
}

#[derive(Clone, Debug)]
pub struct TriangulationResult {
    pub triangles: Vec<TriangleElement>,
    pub config: RunConfig,
    pub mesh_hash: String,
    pub surface_diameter: f64,
    pub stages: Vec<StageStats>,
    pub snapshots: Vec<Snapshot>,
    /// Edge subdivision of the cover.
    pub subdivision: usize,
}

impl TriangulationResult {
    pub fn to_file(&self, m: &IntrinsicMesh) -> ResultFile {
        ResultFile {
            format: FORMAT.into(),
            mesh_hash: self.mesh_hash.clone(),
            config: self.config.clone(),
            surface_diameter: self.surface_diameter,
            triangles: self.triangles.iter().enumerate().map(|(i, t)| t.record(m, i)).collect(),
            stages: self.stages.clone(),
            snapshots: self.snapshots.clone(),
        }
    }

    pub fn total_area(&self) -> f64 {
        self.triangles.iter().map(|t| t.region.area).sum()
    }
}

/// Largest ball radius whose diameter bound meets the surface-diameter condition.
pub fn max_chart_radius(surface_diameter: f64) -> f64 {
    surface_diameter / 6.0 * (1.0 - 1e-9)
}

pub fn triangulate_surface(m: &IntrinsicMesh, cfg: &RunConfig) -> Result<TriangulationResult, PipelineError> {
    if !(cfg.epsilon > 0.0 && cfg.epsilon.is_finite()) {
        return Err(PipelineError::InvalidEpsilon(cfg.epsilon));
    }
    let tol = cfg.tolerances(m);
    let diam = surface_diameter_lower(m);
    let params = ConvexityParams { tol, surface_diameter: diam, h_arc: cfg.h_arc };
    let mut stages = Vec::new();
    let mut snapshots = Vec::new();
    let mut stat = |stage: Stage, regions: &[PolygonRegion], started: Instant, stages: &mut Vec<StageStats>| {
        stages.push(StageStats {
            stage: stage.name().into(),
            regions: regions.len(),
            area: regions.iter().map(|r| r.area).sum(),
            seconds: started.elapsed().as_secs_f64(),
        });
        if cfg.snapshots {
            snapshots.push(Snapshot { stage: stage.name().into(), boundaries: regions.iter().map(|r| r.boundary()).collect() });
        }
    };

    let t = Instant::now();
    let cover = cover_absolutely_convex(m, cfg.epsilon, &params)?;
    let subdivision = cover.k;
    let mut cells = cover.cells;
    stat(Stage::Cover, &cells.iter().map(|c| c.region.clone()).collect::<Vec<_>>(), t, &mut stages);

    let t = Instant::now();
    cells = refine_cover_to_finite_graph(m, cells, &params).map_err(|e| tagged(Stage::Refine, e))?;
    stat(Stage::Refine, &cells.iter().map(|c| c.region.clone()).collect::<Vec<_>>(), t, &mut stages);

    let t = Instant::now();
    cells = make_non_overlapping(m, cells, &params).map_err(|e| tagged(Stage::NonOverlap, e))?;
    stat(Stage::NonOverlap, &cells.iter().map(|c| c.region.clone()).collect::<Vec<_>>(), t, &mut stages);

    let t = Instant::now();
    let mut triangles = Vec::new();
    for c in &cells {
        triangles.extend(triangulate_polygon(m, c, &params).map_err(|e| tagged(Stage::Triangulate, e))?);
    }
    stat(Stage::Triangulate, &triangles.iter().map(|e: &TriangleElement| e.region.clone()).collect::<Vec<_>>(), t, &mut stages);

    let t = Instant::now();
    let mut out = Vec::with_capacity(triangles.len());
    for e in triangles {
        if !e.degenerate {
            out.push(e);
            continue;
        }
        let b = consolidate(m, &e, &tol).ok_or_else(|| PipelineError::Stage {
            stage: Stage::Bigon.name(),
            detail: "degenerate element cannot be read as a bigon".into(),
        })?;
        out.extend(split_bigon_nondegenerate(m, &b, None, &params).map_err(|e| tagged(Stage::Bigon, e))?);
    }
    stat(Stage::Bigon, &out.iter().map(|e| e.region.clone()).collect::<Vec<_>>(), t, &mut stages);

    Ok(TriangulationResult {
        triangles: out,
        config: cfg.clone(),
        mesh_hash: m.hash(),
        surface_diameter: diam,
        stages,
        snapshots,
        subdivision,
    })
}

fn tagged(stage: Stage, e: PipelineError) -> PipelineError {
    match e {
        PipelineError::Stage { .. } => e,
        other => PipelineError::Stage { stage: stage.name(), detail: other.to_string() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slack_of_right_triangle() {
        let s = triangle_slack(&[1.0, 1.0, 2f64.sqrt()]);
        assert!((s - (2.0 - 2f64.sqrt())).abs() < 1e-15);
        assert_eq!(triangle_slack(&[1.0, 1.0]), 0.0);
        assert!(triangle_slack(&[1.0, 2.0, 3.0]).abs() < 1e-15);
    }
}
