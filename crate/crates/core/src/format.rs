//! The JSON result file shared by the pipeline, the verifier and the CLI.

use crate::chart::Chart;
use crate::convexity::BoundaryConvexCertificate;
use crate::curve::SurfaceCurve;
use crate::mesh::IntrinsicMesh;
use crate::Tolerances;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT: &str = "geotri-result/1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed result file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported format tag {0:?}")]
    Tag(String),
}

/// Run parameters. Unset tolerances and resolutions are derived from the mesh.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub epsilon: f64,
    pub seed: u64,
    pub tol_len: Option<f64>,
    pub tol_area: Option<f64>,
    pub tol_angle: Option<f64>,
    pub h_net: Option<f64>,
    pub h_arc: Option<f64>,
    /// Keep the regions produced by every stage.
    pub snapshots: bool,
}

impl RunConfig {
    pub fn new(epsilon: f64) -> Self {
        RunConfig { epsilon, seed: 0, tol_len: None, tol_area: None, tol_angle: None, h_net: None, h_arc: None, snapshots: false }
    }

    pub fn validate(&self) -> Result<(), String> {
        let pos = |name: &str, v: Option<f64>| match v {
            Some(x) if !(x > 0.0 && x.is_finite()) => Err(format!("{name} must be positive, got {x}")),
            _ => Ok(()),
        };
        pos("epsilon", Some(self.epsilon))?;
        pos("tol-len", self.tol_len)?;
        pos("tol-area", self.tol_area)?;
        pos("tol-angle", self.tol_angle)?;
        pos("h-net", self.h_net)?;
        pos("h-arc", self.h_arc)
    }

    pub fn tolerances(&self, m: &IntrinsicMesh) -> Tolerances {
        let d = Tolerances::for_mesh(m);
        Tolerances {
            len: self.tol_len.unwrap_or(d.len),
            area: self.tol_area.unwrap_or(d.area),
            bary: d.bary,
            angle: self.tol_angle.unwrap_or(d.angle),
        }
    }

    /// Net spacing for diameter bounds, a fiftieth of `epsilon` by default.
    pub fn h_net(&self) -> f64 {
        self.h_net.unwrap_or(self.epsilon / 50.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleRecord {
    pub id: usize,
    /// Stage that produced the triangle.
    pub stage: String,
    /// Sides in counter-clockwise order, side `i` starting at corner `i`.
    pub sides: Vec<SurfaceCurve>,
    pub side_lengths: Vec<f64>,
    /// Smallest triangle-inequality margin.
    pub slack: f64,
    /// Upper bound on the diameter.
    pub diameter: f64,
    /// The ball the certificate refers to, when there is one.
    pub chart: Option<Chart>,
    pub certificate: Option<BoundaryConvexCertificate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageStats {
    pub stage: String,
    pub regions: usize,
    pub area: f64,
    pub seconds: f64,
}

/// A stage's output kept for inspection: boundaries only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub stage: String,
    pub boundaries: Vec<SurfaceCurve>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub format: String,
    pub mesh_hash: String,
    pub config: RunConfig,
    /// Lower bound on the surface diameter used by the certificates.
    pub surface_diameter: f64,
    pub triangles: Vec<TriangleRecord>,
    pub stages: Vec<StageStats>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub snapshots: Vec<Snapshot>,
}

impl ResultFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("result file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        let r: ResultFile = serde_json::from_str(text)?;
        if r.format != FORMAT {
            return Err(FormatError::Tag(r.format));
        }
        Ok(r)
    }

    pub fn total_side_length(&self) -> f64 {
        self.triangles.iter().flat_map(|t| t.side_lengths.iter()).sum()
    }
}
