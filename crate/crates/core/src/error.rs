//! Error type shared by all solvers.

use thiserror::Error;

use crate::linalg::Corner;

/// Errors reported by geometry operations, model construction, and parsers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Attempted to normalize a vector with norm below the degeneracy threshold.
    #[error("cannot normalize near-zero vector (norm {norm:.3e})")]
    DegenerateVector { norm: f64 },

    /// Two quad corners coincide within the degeneracy threshold.
    #[error("invalid quad: corners {first} and {second} coincide")]
    CoincidentCorners { first: Corner, second: Corner },

    /// A quad corner has a non-finite component.
    #[error("invalid quad: corner {corner} is not finite")]
    NonFiniteCorner { corner: Corner },

    /// A 3D quad corner is the zero vector.
    #[error("invalid quad: corner {corner} is the zero vector")]
    ZeroCorner { corner: Corner },

    /// The quad admits no well-defined vanishing-point frame.
    #[error("degenerate quad: {reason}")]
    DegenerateQuad { reason: &'static str },

    /// A ray is parallel to the plane it should intersect.
    #[error("ray is parallel to the target plane")]
    ParallelRay,

    /// A quad corner's ray grazes the marker plane during 3D rectification.
    #[error("ray through corner {corner} grazes the marker plane")]
    GrazingPlane { corner: Corner },

    /// A side length needed as a scale reference is zero.
    #[error("degenerate side: zero length where a scale reference is required")]
    DegenerateSide,

    /// The rectification denominator vanishes: the point lies on the horizon line.
    #[error("point lies on the rectified horizon (zero denominator)")]
    HorizonPoint,

    /// Opposite rectified corners span a zero width or height.
    #[error("degenerate span between opposite rectified corners")]
    DegenerateSpan,

    /// Axis points along the optical axis and has no image direction.
    #[error("axis has no image direction")]
    InvalidAxis,

    /// The two points defining a line coincide.
    #[error("coincident points do not define a line")]
    DegenerateLine,

    /// Texture coordinate outside the sampled grid.
    #[error("texture coordinate ({s}, {t}) outside [0,1]x[0,1]")]
    OutOfRange { s: f64, t: f64 },

    /// The direction cannot be projected by this camera model.
    #[error("direction is outside the camera's coverage")]
    NotInView,

    /// Projection through a sampled vector map is not supported.
    #[error("projection through a sampled vector map is not supported")]
    UnsupportedModel,

    /// Camera model parameters violate the model's constraints.
    #[error("invalid camera model: {0}")]
    InvalidModel(String),

    /// Malformed vector-map file.
    #[error("vector map: {0}")]
    VectorMapFormat(String),

    /// Marker dimensions violate the marker contract.
    #[error("invalid marker: {0}")]
    InvalidMarker(String),

    /// Scene generation could not place a fully visible marker.
    #[error("scene generation exhausted {attempts} attempts without a visible marker")]
    InfeasibleConfig { attempts: u32 },
}

impl Error {
    /// True when the error describes a degenerate geometric configuration,
    /// as opposed to malformed input or an unsupported request.
    pub fn is_degeneracy(&self) -> bool {
        matches!(
            self,
            Error::DegenerateVector { .. }
                | Error::DegenerateQuad { .. }
                | Error::ParallelRay
                | Error::GrazingPlane { .. }
                | Error::DegenerateSide
                | Error::HorizonPoint
                | Error::DegenerateSpan
                | Error::InvalidAxis
                | Error::DegenerateLine
                | Error::NotInView
        )
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
