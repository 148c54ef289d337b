//! Re-checks a triangulation result against its mesh, trusting nothing in the
//! file except the curves and the balls named by the certificates.
//!
//! Every check is recomputed from the mesh: side certificates, lengths,
//! slacks, diameters, transit points, convexity certificates (at a quarter of
//! the recorded arc resolution), coverage, pairwise overlap, and agreement with
//! a Steiner-graph distance oracle. Tolerances are ten times those of the run.

mod index;

pub use index::PieceIndex;

use geotri_core::chart::{on_surface_boundary, ChartKind, DiskNeighborhood};
use geotri_core::convexity::{certify_boundary_convex, ConvexityParams};
use geotri_core::diameter::{quick_bound, surface_diameter_lower};
use geotri_core::format::{ResultFile, TriangleRecord};
use geotri_core::geodesic::oracle::SteinerOracle;
use geotri_core::geodesic::GeodesicPath;
use geotri_core::geom::{ear_clip, triangle_overlap, P2};
use geotri_core::par::par_map;
use geotri_core::region::PolygonRegion;
use geotri_core::transit::is_transit_point;
use geotri_core::{IntrinsicMesh, SurfacePoint, Tolerances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt::Write as _;
use thiserror::Error;

/// Verification tolerances relative to the run's.
pub const TOLERANCE_FACTOR: f64 = 10.0;
pub const DEFAULT_SEED: u64 = 0x6765_6f74_7269;
pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_ORACLE_N: usize = 8;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("result was computed on mesh {found}, not {expected}")]
    MeshMismatch { expected: String, found: String },
    #[error("oracle refinement must be at least 8, got {0}")]
    OracleTooCoarse(usize),
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Diameter target; the run's epsilon when unset.
    pub epsilon: Option<f64>,
    pub seed: u64,
    pub samples: usize,
    pub oracle_n: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { epsilon: None, seed: DEFAULT_SEED, samples: DEFAULT_SAMPLES, oracle_n: DEFAULT_ORACLE_N }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Structure,
    Coverage,
    Overlap,
    Diameter,
    Geodesic,
    Oracle,
    NonDegenerate,
    Transit,
    Convexity,
    ConePoints,
}

impl CheckKind {
    pub const ALL: [CheckKind; 10] = [
        CheckKind::Structure,
        CheckKind::Coverage,
        CheckKind::Overlap,
        CheckKind::Diameter,
        CheckKind::Geodesic,
        CheckKind::Oracle,
        CheckKind::NonDegenerate,
        CheckKind::Transit,
        CheckKind::Convexity,
        CheckKind::ConePoints,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Structure => "structure",
            CheckKind::Coverage => "coverage",
            CheckKind::Overlap => "overlap",
            CheckKind::Diameter => "diameter",
            CheckKind::Geodesic => "geodesic",
            CheckKind::Oracle => "oracle",
            CheckKind::NonDegenerate => "non_degenerate",
            CheckKind::Transit => "transit",
            CheckKind::Convexity => "convexity",
            CheckKind::ConePoints => "cone_points",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub kind: CheckKind,
    pub passed: bool,
    pub failures: usize,
    /// First few offenders, one per line.
    pub detail: Vec<String>,
}

const MAX_DETAIL: usize = 8;

impl Check {
    fn new(kind: CheckKind, offenders: Vec<String>) -> Self {
        let failures = offenders.len();
        Check { kind, passed: failures == 0, failures, detail: offenders.into_iter().take(MAX_DETAIL).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TriangleVerdict {
    pub id: usize,
    /// Sides close up, bound a disk, and match the recorded lengths.
    pub structure: bool,
    pub diameter_bound: f64,
    pub diameter_ok: bool,
    pub max_residual: f64,
    pub geodesic_ok: bool,
    pub slack: f64,
    pub nondegenerate_ok: bool,
    pub transit_samples: usize,
    pub transit_ok: bool,
    pub convexity_ok: bool,
    /// Why convexity failed, if it did.
    pub convexity_note: Option<String>,
}

impl TriangleVerdict {
    pub fn passed(&self) -> bool {
        self.structure && self.diameter_ok && self.geodesic_ok && self.nondegenerate_ok && self.transit_ok && self.convexity_ok
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleRow {
    pub triangle: usize,
    pub side: usize,
    pub length: f64,
    pub oracle: f64,
    pub error: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageSummary {
    pub area: f64,
    pub surface_area: f64,
    pub samples: usize,
    pub missed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub mesh_hash: String,
    pub triangles: usize,
    pub epsilon: f64,
    pub h_net: f64,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub surface_diameter: f64,
    pub checks: Vec<Check>,
    pub coverage: CoverageSummary,
    pub verdicts: Vec<TriangleVerdict>,
    pub oracle: Vec<OracleRow>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn check(&self, kind: CheckKind) -> &Check {
        self.checks.iter().find(|c| c.kind == kind).expect("every check is run")
    }

    pub fn failed_checks(&self) -> Vec<CheckKind> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.kind).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable summary; per-triangle verdicts stay in the JSON form.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let t = &self.tolerances;
        let _ = writeln!(s, "mesh        {}", self.mesh_hash);
        let _ = writeln!(s, "triangles   {}", self.triangles);
        let _ = writeln!(s, "epsilon     {}   h_net {}", self.epsilon, self.h_net);
        let _ = writeln!(s, "tolerances  len {:e}  area {:e}  angle {:e}", t.len, t.area, t.angle);
        let _ = writeln!(s, "coverage    area {} of {}, {} of {} samples missed", self.coverage.area, self.coverage.surface_area, self.coverage.missed, self.coverage.samples);
        let _ = writeln!(s);
        for c in &self.checks {
            let _ = writeln!(s, "{:<15} {:<5} {}", c.kind.name(), if c.passed { "PASS" } else { "FAIL" }, c.failures);
            for d in &c.detail {
                let _ = writeln!(s, "    {d}");
            }
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "{}", if self.passed { "PASS" } else { "FAIL" });
        s
    }
}

/// Per-triangle data rebuilt from the record.
struct Rebuilt {
    region: Option<PolygonRegion>,
    lengths: Vec<f64>,
    verdict: TriangleVerdict,
}

fn slack_of(l: &[f64]) -> f64 {
    if l.len() != 3 {
        return 0.0;
    }
    let s: f64 = l.iter().sum();
    l.iter().map(|x| s - 2.0 * x).fold(f64::INFINITY, f64::min)
}

struct Ctx<'a> {
    m: &'a IntrinsicMesh,
    run_tol: Tolerances,
    tol: Tolerances,
    eps: f64,
    h_net: f64,
    params: ConvexityParams,
}

fn rebuild(cx: &Ctx, t: &TriangleRecord) -> Rebuilt {
    let m = cx.m;
    let tol = &cx.tol;
    let edges: Vec<GeodesicPath> = t.sides.iter().map(|c| GeodesicPath::from_curve(m, c.clone(), cx.run_tol.len)).collect();
    let lengths: Vec<f64> = edges.iter().map(|e| e.length).collect();
    let max_residual = edges.iter().map(|e| e.cert.max_residual()).fold(0.0, f64::max);
    let valid_curves = t.sides.iter().all(|c| c.validate(m, tol.len).is_ok() && !c.is_empty());
    let lengths_match = lengths.len() == t.side_lengths.len() && lengths.iter().zip(&t.side_lengths).all(|(a, b)| (a - b).abs() <= tol.len);
    let region = if valid_curves && edges.len() == 3 { PolygonRegion::from_edges(m, edges, tol).ok() } else { None };
    let slack = slack_of(&lengths);
    let mut v = TriangleVerdict {
        id: t.id,
        structure: region.is_some() && lengths_match,
        diameter_bound: f64::INFINITY,
        diameter_ok: false,
        max_residual,
        geodesic_ok: valid_curves && max_residual <= tol.angle,
        slack,
        nondegenerate_ok: slack > cx.run_tol.len,
        transit_samples: 0,
        transit_ok: false,
        convexity_ok: false,
        convexity_note: None,
    };
    let Some(r) = region else {
        v.convexity_note = Some("region could not be rebuilt".into());
        return Rebuilt { region: None, lengths, verdict: v };
    };
    let limit = cx.eps + 2.0 * cx.h_net;
    let longest = lengths.iter().copied().fold(0.0, f64::max);
    let quick = quick_bound(m, &r.pieces, longest);
    v.diameter_bound = if quick.upper <= limit { quick.upper } else { r.diameter(m, cx.h_net).upper };
    v.diameter_ok = v.diameter_bound <= limit;
    let (n, ok) = transit_samples(m, &r, cx.h_net, tol.angle);
    v.transit_samples = n;
    v.transit_ok = ok;
    match (&t.chart, &t.certificate) {
        (Some(chart), Some(cert)) => match DiskNeighborhood::ball(m, *chart, tol.angle) {
            Ok(u) => {
                let p = ConvexityParams { h_arc: Some(cert.h_arc / 4.0), ..cx.params };
                match certify_boundary_convex(m, &r, &u, &p) {
                    Ok(_) => v.convexity_ok = true,
                    Err(e) => v.convexity_note = Some(e.to_string()),
                }
            }
            Err(e) => v.convexity_note = Some(format!("{} chart invalid: {e}", kind_name(chart.kind))),
        },
        _ => v.convexity_note = Some("no certificate".into()),
    }
    Rebuilt { region: Some(r), lengths, verdict: v }
}

fn kind_name(k: ChartKind) -> &'static str {
    match k {
        ChartKind::Flat => "flat",
        ChartKind::Cone => "cone",
    }
}

/// Segment ends, midpoints and points every `spacing` along the boundary,
/// skipping those on the surface boundary.
fn transit_samples(m: &IntrinsicMesh, r: &PolygonRegion, spacing: f64, tol_angle: f64) -> (usize, bool) {
    let mut n = 0;
    let mut check = |p: SurfacePoint| {
        if on_surface_boundary(m, &p) {
            return true;
        }
        n += 1;
        is_transit_point(m, &p, tol_angle).transit
    };
    for e in &r.edges {
        for s in &e.curve.segs {
            for b in [s.a, s.at(0.5), s.b] {
                if !check(SurfacePoint::new(m, s.face, b)) {
                    return (n, false);
                }
            }
        }
        for s in e.curve.sample_params(m, spacing) {
            if !check(e.curve.point_at(m, s)) {
                return (n, false);
            }
        }
    }
    (n, true)
}

/// For every side, the oracle distance between its ends at refinement `n`;
/// a side longer than the oracle by more than the length tolerance is not shortest.
pub fn compare_with_oracle(m: &IntrinsicMesh, result: &ResultFile, n: usize) -> Result<Vec<OracleRow>, VerifyError> {
    if n < 8 {
        return Err(VerifyError::OracleTooCoarse(n));
    }
    let tol = result.config.tolerances(m).scaled(TOLERANCE_FACTOR);
    let oracle = SteinerOracle::new(m, n);
    let rows = par_map(&result.triangles, |t| {
        t.sides
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_empty())
            .map(|(i, c)| {
                let length = c.length(m);
                let (oracle_d, error) = oracle.distance(&c.start(m), &c.end(m)).map_or((f64::INFINITY, 0.0), |o| (o.value, o.error));
                OracleRow { triangle: t.id, side: i, length, oracle: oracle_d, error, ok: length <= oracle_d + tol.len }
            })
            .collect::<Vec<_>>()
    });
    Ok(rows.into_iter().flatten().collect())
}

pub fn verify_triangulation(m: &IntrinsicMesh, result: &ResultFile, opts: &VerifyOptions) -> Result<VerificationReport, VerifyError> {
    let hash = m.hash();
    if result.mesh_hash != hash {
        return Err(VerifyError::MeshMismatch { expected: hash, found: result.mesh_hash.clone() });
    }
    let run_tol = result.config.tolerances(m);
    let tol = run_tol.scaled(TOLERANCE_FACTOR);
    let eps = opts.epsilon.unwrap_or(result.config.epsilon);
    let h_net = result.config.h_net();
    let diam = surface_diameter_lower(m);
    let cx = Ctx { m, run_tol, tol, eps, h_net, params: ConvexityParams { tol, surface_diameter: diam, h_arc: None } };

    let rebuilt = par_map(&result.triangles, |t| rebuild(&cx, t));
    let oracle = compare_with_oracle(m, result, opts.oracle_n)?;

    let mut per: Vec<(CheckKind, Vec<String>)> = CheckKind::ALL.iter().map(|&k| (k, Vec::new())).collect();
    let mut push = |k: CheckKind, msg: String| per.iter_mut().find(|(c, _)| *c == k).expect("known check").1.push(msg);

    let mut ids = std::collections::BTreeSet::new();
    for (t, rb) in result.triangles.iter().zip(&rebuilt) {
        let v = &rb.verdict;
        if !ids.insert(t.id) {
            push(CheckKind::Structure, format!("triangle {}: duplicate id", t.id));
        }
        if !v.structure {
            let why = if rb.region.is_none() { "sides do not bound a triangle".to_string() } else { format!("recorded side lengths {:?} differ from {:?}", t.side_lengths, rb.lengths) };
            push(CheckKind::Structure, format!("triangle {}: {why}", t.id));
        }
        if rb.region.is_some() && !v.diameter_ok {
            push(CheckKind::Diameter, format!("triangle {}: diameter bound {} > {}", t.id, v.diameter_bound, eps + 2.0 * h_net));
        }
        if !v.geodesic_ok {
            push(CheckKind::Geodesic, format!("triangle {}: straightness residual {:e}", t.id, v.max_residual));
        }
        if !v.nondegenerate_ok {
            push(CheckKind::NonDegenerate, format!("triangle {}: slack {:e}", t.id, v.slack));
        }
        if rb.region.is_some() && !v.transit_ok {
            push(CheckKind::Transit, format!("triangle {}: boundary passes through a non-transit point", t.id));
        }
        if !v.convexity_ok {
            push(CheckKind::Convexity, format!("triangle {}: {}", t.id, v.convexity_note.clone().unwrap_or_default()));
        }
    }
    for row in oracle.iter().filter(|r| !r.ok) {
        push(CheckKind::Oracle, format!("triangle {} side {}: length {} exceeds oracle {}", row.triangle, row.side, row.length, row.oracle));
    }

    let regions: Vec<&PolygonRegion> = rebuilt.iter().filter_map(|r| r.region.as_ref()).collect();
    let owners: Vec<usize> = result.triangles.iter().zip(&rebuilt).filter(|(_, r)| r.region.is_some()).map(|(t, _)| t.id).collect();
    let area: f64 = regions.iter().map(|r| r.area).sum();
    if (area - m.area()).abs() > tol.area {
        push(CheckKind::Coverage, format!("total area {} differs from surface area {}", area, m.area()));
    }
    let index = PieceIndex::new(m, &regions);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let samples = sample_points(m, &mut rng, opts.samples);
    let hits = par_map(&samples, |p| index.count_containing(m, p, tol.bary, 1));
    let missed = hits.iter().filter(|&&h| h == 0).count();
    for (p, _) in samples.iter().zip(&hits).filter(|(_, &h)| h == 0) {
        push(CheckKind::Coverage, format!("point {:?} in face {} is not covered", p.bary, p.face));
    }
    for (i, j, a) in index.overlaps(tol.area) {
        push(CheckKind::Overlap, format!("triangles {} and {} share area {:e}", owners[i], owners[j], a));
    }
    for v in 0..m.n_vertices() as u32 {
        if m.is_boundary_vertex(v) {
            continue;
        }
        let p = SurfacePoint::vertex(m, v);
        if is_transit_point(m, &p, tol.angle).transit {
            continue;
        }
        let inside = regions.iter().filter(|r| r.contains(m, &p, 0.0) && r.boundary_distance(m, &p) > tol.len).count();
        if inside != 1 {
            push(CheckKind::ConePoints, format!("cone point {v} lies strictly inside {inside} triangles"));
        }
    }

    let checks: Vec<Check> = per.into_iter().map(|(k, v)| Check::new(k, v)).collect();
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerificationReport {
        mesh_hash: hash,
        triangles: result.triangles.len(),
        epsilon: eps,
        h_net,
        seed: opts.seed,
        tolerances: tol,
        surface_diameter: diam,
        checks,
        coverage: CoverageSummary { area, surface_area: m.area(), samples: samples.len(), missed },
        verdicts: rebuilt.into_iter().map(|r| r.verdict).collect(),
        oracle,
        passed,
    })
}

/// Points uniformly distributed by area.
pub fn sample_points(m: &IntrinsicMesh, rng: &mut impl Rng, n: usize) -> Vec<SurfacePoint> {
    let mut cum = Vec::with_capacity(m.n_faces());
    let mut acc = 0.0;
    for f in 0..m.n_faces() as u32 {
        acc += m.face_area(f);
        cum.push(acc);
    }
    (0..n)
        .map(|_| {
            let x = rng.gen::<f64>() * acc;
            let f = cum.partition_point(|&c| c < x).min(m.n_faces() - 1) as u32;
            let (mut u, mut v) = (rng.gen::<f64>(), rng.gen::<f64>());
            if u + v > 1.0 {
                (u, v) = (1.0 - u, 1.0 - v);
            }
            SurfacePoint::new(m, f, [1.0 - u - v, u, v])
        })
        .collect()
}

/// Area shared by two regions, summed over faces.
pub fn shared_area(a: &PolygonRegion, b: &PolygonRegion) -> f64 {
    let tris = |r: &PolygonRegion| -> Vec<(u32, [P2; 3])> {
        r.pieces.iter().flat_map(|pc| ear_clip(&pc.poly).into_iter().map(move |t| (pc.face, [pc.poly[t[0]], pc.poly[t[1]], pc.poly[t[2]]]))).collect()
    };
    let (ta, tb) = (tris(a), tris(b));
    ta.iter().flat_map(|(f, t)| tb.iter().filter(move |(g, _)| g == f).map(move |(_, u)| triangle_overlap(t, u))).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use geotri_core::mesh::golden;

    #[test]
    fn slack_is_the_smallest_margin() {
        assert!((slack_of(&[3.0, 4.0, 5.0]) - 2.0).abs() < 1e-15);
        assert_eq!(slack_of(&[1.0, 2.0]), 0.0);
        assert!(slack_of(&[1.0, 1.0, 2.0]).abs() < 1e-15);
    }

    #[test]
    fn check_names_match_serialized_names() {
        for k in CheckKind::ALL {
            assert_eq!(serde_json::to_string(&k).unwrap(), format!("\"{}\"", k.name()));
        }
    }

    #[test]
    fn samples_follow_area() {
        // Two faces of equal area: each should get about half.
        let m = golden::flat_square();
        let pts = sample_points(&m, &mut ChaCha8Rng::seed_from_u64(3), 4000);
        let in0 = pts.iter().filter(|p| p.face == 0).count() as f64 / 4000.0;
        assert!((in0 - 0.5).abs() < 0.05, "{in0}");
        assert!(pts.iter().all(|p| p.bary.iter().all(|&b| b >= -1e-15) && (p.bary.iter().sum::<f64>() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn piece_index_counts_and_overlaps() {
        use geotri_core::geodesic::shortest::shortest_path;
        let m = golden::flat_square();
        let tol = Tolerances::for_mesh(&m);
        let tri = |c: [[f64; 3]; 3]| {
            let pts = c.map(|b| SurfacePoint::new(&m, 0, b));
            let edges = (0..3).map(|i| shortest_path(&m, &pts[i], &pts[(i + 1) % 3]).unwrap()).collect();
            PolygonRegion::from_edges(&m, edges, &tol).unwrap()
        };
        let a = tri([[0.8, 0.1, 0.1], [0.2, 0.7, 0.1], [0.2, 0.1, 0.7]]);
        let b = tri([[0.7, 0.2, 0.1], [0.1, 0.8, 0.1], [0.1, 0.2, 0.7]]);
        let ix = PieceIndex::new(&m, &[&a, &b]);
        let inside_both = SurfacePoint::new(&m, 0, [0.4, 0.35, 0.25]);
        assert_eq!(ix.count_containing(&m, &inside_both, 0.0, 5), 2);
        assert_eq!(ix.count_containing(&m, &SurfacePoint::new(&m, 1, [0.3, 0.3, 0.4]), 0.0, 5), 0);
        let ov = ix.overlaps(1e-12);
        assert_eq!(ov.len(), 1);
        assert!((ov[0].2 - shared_area(&a, &b)).abs() < 1e-12);
    }
}
