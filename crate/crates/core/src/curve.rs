//! Piecewise-linear curves on the surface: one straight segment per face visit.

use crate::geom::{from_barycentric, P2};
use crate::mesh::IntrinsicMesh;
use crate::point::SurfacePoint;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub face: u32,
    pub a: [f64; 3],
    pub b: [f64; 3],
}

impl Segment {
    pub fn points(&self, m: &IntrinsicMesh) -> (P2, P2) {
        let l = m.layout(self.face);
        (from_barycentric(l, &self.a), from_barycentric(l, &self.b))
    }

    pub fn length(&self, m: &IntrinsicMesh) -> f64 {
        let (p, q) = self.points(m);
        (q - p).norm()
    }

    pub fn reversed(&self) -> Segment {
        Segment { face: self.face, a: self.b, b: self.a }
    }

    pub fn at(&self, t: f64) -> [f64; 3] {
        [
            self.a[0] + t * (self.b[0] - self.a[0]),
            self.a[1] + t * (self.b[1] - self.a[1]),
            self.a[2] + t * (self.b[2] - self.a[2]),
        ]
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SurfaceCurve {
    pub segs: Vec<Segment>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CurveError {
    #[error("curve has no segments")]
    Empty,
    #[error("segments {0} and {1} do not meet")]
    Gap(usize, usize),
}

impl SurfaceCurve {
    pub fn new(segs: Vec<Segment>) -> Self {
        SurfaceCurve { segs }
    }

    /// The constant curve at `p`.
    pub fn constant(p: &SurfacePoint) -> Self {
        SurfaceCurve { segs: vec![Segment { face: p.face, a: p.bary, b: p.bary }] }
    }

    pub fn is_empty(&self) -> bool {
        self.segs.is_empty()
    }

    pub fn segment_lengths(&self, m: &IntrinsicMesh) -> Vec<f64> {
        self.segs.iter().map(|s| s.length(m)).collect()
    }

    /// Total length. Segment lengths are summed in sorted order so that a curve
    /// and its reversal give bit-identical results.
    pub fn length(&self, m: &IntrinsicMesh) -> f64 {
        let mut l = self.segment_lengths(m);
        l.sort_by(|a, b| a.partial_cmp(b).unwrap());
        l.iter().sum()
    }

    pub fn reversed(&self) -> Self {
        SurfaceCurve { segs: self.segs.iter().rev().map(|s| s.reversed()).collect() }
    }

    /// Concatenation `self * other`; the caller guarantees the endpoints meet.
    pub fn concat(&self, other: &SurfaceCurve) -> Self {
        let mut segs = self.segs.clone();
        segs.extend(other.segs.iter().copied());
        SurfaceCurve { segs }
    }

    pub fn start(&self, m: &IntrinsicMesh) -> SurfacePoint {
        let s = &self.segs[0];
        SurfacePoint::new(m, s.face, s.a)
    }

    pub fn end(&self, m: &IntrinsicMesh) -> SurfacePoint {
        let s = self.segs.last().unwrap();
        SurfacePoint::new(m, s.face, s.b)
    }

    pub fn is_closed(&self, m: &IntrinsicMesh, tol: f64) -> bool {
        !self.segs.is_empty() && self.start(m).same(m, &self.end(m), tol)
    }

    /// Check that consecutive segments share their junction point.
    pub fn validate(&self, m: &IntrinsicMesh, tol: f64) -> Result<(), CurveError> {
        if self.segs.is_empty() {
            return Err(CurveError::Empty);
        }
        for i in 1..self.segs.len() {
            let p = SurfacePoint::new(m, self.segs[i - 1].face, self.segs[i - 1].b);
            let q = SurfacePoint::new(m, self.segs[i].face, self.segs[i].a);
            if !p.same(m, &q, tol) {
                return Err(CurveError::Gap(i - 1, i));
            }
        }
        Ok(())
    }

    /// Drop segments shorter than `tol`, keeping at least one.
    pub fn compact(&self, m: &IntrinsicMesh, tol: f64) -> Self {
        let keep: Vec<Segment> = self.segs.iter().copied().filter(|s| s.length(m) > tol).collect();
        if keep.is_empty() {
            SurfaceCurve { segs: self.segs.first().copied().into_iter().collect() }
        } else {
            SurfaceCurve { segs: keep }
        }
    }

    /// Point at arclength `s`, clamped to the curve.
    pub fn point_at(&self, m: &IntrinsicMesh, s: f64) -> SurfacePoint {
        let (i, t) = self.locate(m, s);
        let seg = &self.segs[i];
        SurfacePoint::new(m, seg.face, seg.at(t))
    }

    /// Segment index and local parameter of arclength `s`.
    pub fn locate(&self, m: &IntrinsicMesh, s: f64) -> (usize, f64) {
        let mut acc = 0.0;
        for (i, seg) in self.segs.iter().enumerate() {
            let l = seg.length(m);
            if s <= acc + l || i + 1 == self.segs.len() {
                let t = if l > 0.0 { ((s - acc) / l).clamp(0.0, 1.0) } else { 0.0 };
                return (i, t);
            }
            acc += l;
        }
        (0, 0.0)
    }

    /// The part of the curve between arclengths `s0 <= s1`.
    pub fn sub_curve(&self, m: &IntrinsicMesh, s0: f64, s1: f64) -> SurfaceCurve {
        let (i0, t0) = self.locate(m, s0);
        let (i1, t1) = self.locate(m, s1);
        if i0 == i1 {
            let s = &self.segs[i0];
            return SurfaceCurve { segs: vec![Segment { face: s.face, a: s.at(t0), b: s.at(t1) }] };
        }
        let mut segs = Vec::with_capacity(i1 - i0 + 1);
        let s = &self.segs[i0];
        segs.push(Segment { face: s.face, a: s.at(t0), b: s.b });
        segs.extend_from_slice(&self.segs[i0 + 1..i1]);
        let s = &self.segs[i1];
        segs.push(Segment { face: s.face, a: s.a, b: s.at(t1) });
        SurfaceCurve { segs }
    }

    /// Arclength parameters of points spaced at most `spacing` apart, endpoints included.
    pub fn sample_params(&self, m: &IntrinsicMesh, spacing: f64) -> Vec<f64> {
        let l = self.length(m);
        let n = ((l / spacing).ceil() as usize).max(1);
        (0..=n).map(|k| l * k as f64 / n as f64).collect()
    }

    /// Cumulative arclength at every segment junction, starting with 0.
    pub fn junction_params(&self, m: &IntrinsicMesh) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.segs.len() + 1);
        let mut acc = 0.0;
        out.push(0.0);
        for s in &self.segs {
            acc += s.length(m);
            out.push(acc);
        }
        out
    }
}
