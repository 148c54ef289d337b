#![allow(dead_code)]

use geotri_core::geom::{barycentric, p2};
use geotri_core::mesh::golden;
use geotri_core::overlay::snap_bary;
use geotri_core::{IntrinsicMesh, SurfacePoint};
use rand::Rng;

pub fn goldens() -> Vec<(&'static str, IntrinsicMesh)> {
    vec![
        ("square", golden::flat_square()),
        ("half", golden::half_square()),
        ("cube", golden::cube()),
        ("torus", golden::flat_torus()),
        ("pillow", golden::pillow()),
        ("saddle", golden::saddle()),
    ]
}

/// Uniform face, then uniform point in it.
pub fn random_point(m: &IntrinsicMesh, rng: &mut impl Rng) -> SurfacePoint {
    let f = rng.gen_range(0..m.n_faces()) as u32;
    let (mut u, mut v) = (rng.gen::<f64>(), rng.gen::<f64>());
    if u + v > 1.0 {
        (u, v) = (1.0 - u, 1.0 - v);
    }
    SurfacePoint::new(m, f, [1.0 - u - v, u, v])
}

/// Point `(x, y)` of `golden::grid_square(10, 10.0)`.
pub fn grid_point(m: &IntrinsicMesh, x: f64, y: f64) -> SurfacePoint {
    let (i, j) = (x.floor().min(9.0), y.floor().min(9.0));
    let lower = y - j <= x - i;
    let f = (2 * (j as usize * 10 + i as usize) + usize::from(!lower)) as u32;
    let tri = if lower { [p2(i, j), p2(i + 1.0, j), p2(i + 1.0, j + 1.0)] } else { [p2(i, j), p2(i + 1.0, j + 1.0), p2(i, j + 1.0)] };
    SurfacePoint::new(m, f, snap_bary(barycentric(&tri, &p2(x, y)), 1e-12))
}
