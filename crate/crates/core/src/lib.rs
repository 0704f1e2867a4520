//! Closed-form recovery of the 3D pose, metric position, and camera
//! parameters of a rectangular planar marker from four observed corner
//! points, using visual-sphere vanishing points.
//!
//! Everything is iteration-free algebra: cross products of incident vectors
//! give the pose frame, ray-plane intersection rebuilds metric geometry,
//! and the same construction on z = 1 lifted image points yields
//! lens-agnostic 2D rectification and focal-length estimation. Because each
//! image point is treated as a 3D direction, the solvers keep working past
//! the 180-degree limit of rectilinear projection.
//!
//! The geometry modules are generic over the scalar via [`scalar::Real`]
//! (`f32` or `f64`); the aliases at the crate root pin the `f64`
//! instantiation used by the oracle, the CLI, and the accuracy contracts.

pub mod camera;
pub mod error;
pub mod focal;
pub mod linalg;
pub mod oracle;
pub mod pose;
pub mod reconstruct;
pub mod rectify2d;
pub mod scalar;

pub use error::{Error, Result};
pub use linalg::Corner;
pub use scalar::Real;

pub type Vec2 = linalg::Vec2<f64>;
pub type Vec3 = linalg::Vec3<f64>;
pub type UnitVec3 = linalg::UnitVec3<f64>;
pub type Quad2 = linalg::Quad2<f64>;
pub type Quad3 = linalg::Quad3<f64>;
pub type TexCoord = camera::TexCoord<f64>;
pub type CameraModel = camera::CameraModel<f64>;
pub type Rectilinear = camera::Rectilinear<f64>;
pub type EquidistantFisheye = camera::EquidistantFisheye<f64>;
pub type VectorMapGrid = camera::VectorMapGrid<f64>;
pub type PoseMatrix = pose::PoseMatrix<f64>;
pub type MarkerSpec = reconstruct::MarkerSpec<f64>;
pub type ReconstructedScene = reconstruct::ReconstructedScene<f64>;
pub type RectifyMatrix = rectify2d::RectifyMatrix<f64>;
pub type VanishingPoint = focal::VanishingPoint<f64>;
pub type FocalEstimate = focal::FocalEstimate<f64>;
pub type LineIntersection = focal::LineIntersection<f64>;
