//! Globally shortest paths and enumeration of shortest geodesics.

use super::path::GeodesicPath;
use super::sleeve::{straighten_curve, StraightenOptions};
use super::steiner::steiner_shortest;
use super::windows::{default_cap, enumerate_geodesics, EnumOptions};
use super::GeodesicError;
use crate::curve::SurfaceCurve;
use crate::mesh::IntrinsicMesh;
use crate::point::SurfacePoint;

/// Steiner divisions used to seed straightening.
const SEED_DIVISIONS: usize = 4;

/// Enumerate with the crossing cap doubled up to three times.
pub fn enumerate_with_doubling(
    m: &IntrinsicMesh,
    p: &SurfacePoint,
    q: &SurfacePoint,
    l_max: f64,
) -> Result<Vec<GeodesicPath>, GeodesicError> {
    let mut opt = EnumOptions::new(m, l_max);
    let base = default_cap(m, l_max);
    let mut last = GeodesicError::EnumerationCapExceeded;
    for k in 0..4 {
        opt.w_cap = base << k;
        match enumerate_geodesics(m, p, q, &opt) {
            Ok(v) => return Ok(v),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Seed from the Steiner graph and straighten; a locally shortest upper bound.
pub fn straightened_seed(m: &IntrinsicMesh, p: &SurfacePoint, q: &SurfacePoint) -> Result<GeodesicPath, GeodesicError> {
    let tol = 1e-9 * m.scale();
    let seed = steiner_shortest(m, p, q, SEED_DIVISIONS).ok_or(GeodesicError::Unreachable)?;
    match straighten_curve(m, &seed.curve, &StraightenOptions::for_mesh(m)) {
        Ok(s) => Ok(GeodesicPath::from_curve(m, s.curve, tol)),
        Err(_) => Ok(GeodesicPath::from_curve(m, seed.curve, tol)),
    }
}

/// A globally shortest path from `p` to `q`.
///
/// The straightened Steiner seed bounds the distance; the window enumeration
/// below that bound then finds the true minimum.
pub fn shortest_path(m: &IntrinsicMesh, p: &SurfacePoint, q: &SurfacePoint) -> Result<GeodesicPath, GeodesicError> {
    let tol = 1e-9 * m.scale();
    if p.same(m, q, tol) {
        return Ok(GeodesicPath::from_curve(m, SurfaceCurve::constant(p), tol));
    }
    let seed = straightened_seed(m, p, q)?;
    match enumerate_with_doubling(m, p, q, seed.length + tol) {
        Ok(v) => match v.into_iter().next() {
            Some(g) if g.length <= seed.length || !seed.is_certified(1e-7) => Ok(g),
            _ => Ok(seed),
        },
        Err(_) => Ok(seed),
    }
}

/// Every geodesic from `p` to `q` of length at most `l_max`, shortest first.
pub fn all_geodesics_between(
    m: &IntrinsicMesh,
    p: &SurfacePoint,
    q: &SurfacePoint,
    l_max: f64,
) -> Result<Vec<GeodesicPath>, GeodesicError> {
    enumerate_with_doubling(m, p, q, l_max)
}

/// The globally shortest geodesics only (all within `10 tol_len` of the minimum).
pub fn shortest_geodesics(m: &IntrinsicMesh, p: &SurfacePoint, q: &SurfacePoint) -> Result<Vec<GeodesicPath>, GeodesicError> {
    let tol = 1e-9 * m.scale();
    let d = shortest_path(m, p, q)?.length;
    let all = all_geodesics_between(m, p, q, d + 10.0 * tol)?;
    Ok(all.into_iter().filter(|g| g.length <= d + 10.0 * tol).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesic::oracle::SteinerOracle;
    use crate::geom::p2;
    use crate::mesh::golden;
    use proptest::prelude::*;

    #[test]
    fn same_face_is_straight_segment() {
        let m = golden::flat_square();
        let p = SurfacePoint::from_position(&m, 0, &p2(0.5, 0.1));
        let q = SurfacePoint::from_position(&m, 0, &p2(0.9, 0.6));
        let g = shortest_path(&m, &p, &q).unwrap();
        assert!((g.length - (0.16f64 + 0.25).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn cube_opposite_corners() {
        let m = golden::cube();
        let g = shortest_path(&m, &SurfacePoint::vertex(&m, 0), &SurfacePoint::vertex(&m, 6)).unwrap();
        assert!((g.length - 5f64.sqrt()).abs() < 1e-9);
        assert!(g.is_certified(1e-7));
    }

    #[test]
    fn torus_wraps_around() {
        let m = golden::flat_torus();
        let p = SurfacePoint::vertex(&m, 0);
        let q = SurfacePoint::on_halfedge(&m, 0, 0.6);
        let g = shortest_path(&m, &p, &q).unwrap();
        assert!((g.length - 0.4).abs() < 1e-9, "{}", g.length);
    }

    #[test]
    fn torus_half_shift_has_two_shortest() {
        let m = golden::flat_torus();
        let p = SurfacePoint::from_position(&m, 0, &p2(0.2, 0.1));
        let q = SurfacePoint::from_position(&m, 0, &p2(0.7, 0.1));
        let gs = shortest_geodesics(&m, &p, &q).unwrap();
        assert_eq!(gs.len(), 2);
        for g in &gs {
            assert!((g.length - 0.5).abs() < 1e-9);
            assert!(g.is_certified(1e-7));
        }
    }

    #[test]
    fn pillow_seam_midpoints_have_two_geodesics() {
        let m = golden::pillow();
        let p = SurfacePoint::on_halfedge(&m, 0, 0.5);
        let q = SurfacePoint::on_halfedge(&m, 4, 0.5);
        let gs = shortest_geodesics(&m, &p, &q).unwrap();
        assert_eq!(gs.len(), 2);
        for g in &gs {
            assert!((g.length - 1.0).abs() < 1e-9);
        }
        let front = gs.iter().filter(|g| g.curve.segs.iter().all(|s| s.face < 2)).count();
        assert_eq!(front, 1);
    }

    #[test]
    fn generic_square_pair_unique() {
        let m = golden::flat_square();
        let p = SurfacePoint::from_position(&m, 0, &p2(0.8, 0.1));
        let q = SurfacePoint::from_position(&m, 1, &p2(0.2, 0.7));
        assert_eq!(shortest_geodesics(&m, &p, &q).unwrap().len(), 1);
    }

    fn random_point(m: &IntrinsicMesh, f: u32, a: f64, b: f64) -> SurfacePoint {
        let (a, b) = if a + b > 1.0 { (1.0 - a, 1.0 - b) } else { (a, b) };
        SurfacePoint::new(m, f % m.n_faces() as u32, [1.0 - a - b, a, b])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn never_longer_than_oracle(f1 in 0u32..12, a1 in 0.0..1.0f64, b1 in 0.0..1.0f64,
                                    f2 in 0u32..12, a2 in 0.0..1.0f64, b2 in 0.0..1.0f64) {
            for m in [golden::cube(), golden::flat_torus(), golden::pillow(), golden::saddle()] {
                let p = random_point(&m, f1, a1, b1);
                let q = random_point(&m, f2, a2, b2);
                let g = shortest_path(&m, &p, &q).unwrap();
                let o = SteinerOracle::new(&m, 16).distance(&p, &q).unwrap();
                prop_assert!(g.length <= o.value + 1e-9);
                prop_assert!(g.is_certified(1e-7));
            }
        }
    }
}
