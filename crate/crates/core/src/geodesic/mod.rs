//! Geodesics: straightening in unfolded face strips, exact window enumeration,
//! Steiner-graph searches and the intersection bookkeeping built on them.

pub mod enclosing;
pub mod extremal;
pub mod homotopic;
pub mod oracle;
pub mod path;
pub mod shortest;
pub mod sleeve;
pub mod steiner;
pub mod superfluous;
pub mod windows;

pub use path::{certify, Certificate, GeodesicPath, Joint};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeodesicError {
    #[error("straightening did not converge within {0} iterations")]
    NotConverged(usize),
    #[error("geodesic enumeration exceeded its crossing cap")]
    EnumerationCapExceeded,
    #[error("curve is not a valid surface curve: {0}")]
    InvalidCurve(String),
    #[error("region is not a disk")]
    NotADisk,
    #[error("region is not contained in the ambient disk")]
    NotContained,
    #[error("superfluous-intersection removal is impossible for a bigon with a vertex endpoint")]
    BigonVertexCase,
    #[error("no path between the points")]
    Unreachable,
}
