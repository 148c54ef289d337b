//! Piecewise-flat surfaces with certified geodesics, regions and boundary convexity.

pub mod chart;
pub mod convexity;
pub mod curve;
pub mod diameter;
pub mod format;
pub mod geodesic;
pub mod geom;
pub mod mesh;
pub mod overlay;
pub mod par;
pub mod point;
pub mod region;
pub mod trace;
pub mod transit;
pub mod winding;

pub use curve::{Segment, SurfaceCurve};
pub use mesh::{IntrinsicMesh, MeshError};
pub use point::{Location, SurfacePoint};

use serde::{Deserialize, Serialize};

/// Numeric tolerances, all derived from the mesh unless overridden.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub len: f64,
    pub area: f64,
    pub bary: f64,
    pub angle: f64,
}

impl Tolerances {
    pub fn for_mesh(m: &IntrinsicMesh) -> Self {
        Tolerances { len: 1e-9 * m.scale(), area: 1e-8 * m.area(), bary: 1e-12, angle: 1e-7 }
    }

    /// The same tolerances loosened by `k` (the verifier uses `k = 10`).
    pub fn scaled(&self, k: f64) -> Self {
        Tolerances { len: self.len * k, area: self.area * k, bary: self.bary * k, angle: self.angle * k }
    }
}
