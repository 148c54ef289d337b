//! A result file built by hand: each face of the flat square cut into `N²`
//! similar triangles, each certified in a flat ball at its centroid.

#![allow(dead_code)]

use geotri_core::chart::{Chart, DiskNeighborhood};
use geotri_core::convexity::{certify_boundary_convex, ConvexityParams};
use geotri_core::curve::{Segment, SurfaceCurve};
use geotri_core::diameter::surface_diameter_lower;
use geotri_core::format::{ResultFile, RunConfig, TriangleRecord, FORMAT};
use geotri_core::geodesic::GeodesicPath;
use geotri_core::mesh::golden;
use geotri_core::region::PolygonRegion;
use geotri_core::{IntrinsicMesh, SurfacePoint, Tolerances};
use std::sync::OnceLock;

pub const N: usize = 64;
pub const EPS: f64 = 0.3;

pub fn mesh() -> &'static IntrinsicMesh {
    static M: OnceLock<IntrinsicMesh> = OnceLock::new();
    M.get_or_init(golden::flat_square)
}

fn grid(i: usize, j: usize) -> [f64; 3] {
    let n = N as f64;
    [(N - i - j) as f64 / n, i as f64 / n, j as f64 / n]
}

/// A triangle with straight sides inside face `f`, certified when possible.
pub fn record(m: &IntrinsicMesh, id: usize, f: u32, c: [[f64; 3]; 3]) -> TriangleRecord {
    let tol = Tolerances::for_mesh(m);
    let sides: Vec<SurfaceCurve> = (0..3).map(|i| SurfaceCurve::new(vec![Segment { face: f, a: c[i], b: c[(i + 1) % 3] }])).collect();
    let side_lengths: Vec<f64> = sides.iter().map(|s| s.length(m)).collect();
    let s: f64 = side_lengths.iter().sum();
    let slack = side_lengths.iter().map(|l| s - 2.0 * l).fold(f64::INFINITY, f64::min);
    let diameter = side_lengths.iter().copied().fold(0.0, f64::max);
    let centroid = SurfacePoint::new(m, f, [(c[0][0] + c[1][0] + c[2][0]) / 3.0, (c[0][1] + c[1][1] + c[2][1]) / 3.0, (c[0][2] + c[1][2] + c[2][2]) / 3.0]);
    let d = surface_diameter_lower(m);
    let chart = Chart::flat(centroid, d / 6.0 * (1.0 - 1e-9));
    let edges = sides.iter().map(|s| GeodesicPath::from_curve(m, s.clone(), tol.len)).collect();
    let certificate = PolygonRegion::from_edges(m, edges, &tol).ok().and_then(|r| {
        let u = DiskNeighborhood::ball(m, chart, tol.angle).ok()?;
        certify_boundary_convex(m, &r, &u, &ConvexityParams::new(m, d)).ok()
    });
    TriangleRecord { id, stage: "triangulate".into(), sides, side_lengths, slack, diameter, chart: certificate.as_ref().map(|_| chart), certificate }
}

pub fn fixture() -> &'static ResultFile {
    static R: OnceLock<ResultFile> = OnceLock::new();
    R.get_or_init(|| {
        let m = mesh();
        let mut tris = Vec::new();
        for f in 0..m.n_faces() as u32 {
            for i in 0..N {
                for j in 0..N - i {
                    tris.push((f, [grid(i, j), grid(i + 1, j), grid(i, j + 1)]));
                    if i + j + 2 <= N {
                        tris.push((f, [grid(i + 1, j), grid(i + 1, j + 1), grid(i, j + 1)]));
                    }
                }
            }
        }
        let triangles = tris.into_iter().enumerate().map(|(id, (f, c))| record(m, id, f, c)).collect();
        ResultFile {
            format: FORMAT.into(),
            mesh_hash: m.hash(),
            config: RunConfig::new(EPS),
            surface_diameter: surface_diameter_lower(m),
            triangles,
            stages: Vec::new(),
            snapshots: Vec::new(),
        }
    })
}
