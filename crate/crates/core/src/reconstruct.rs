//! Metric reconstruction: extends incident rays to the marker plane, scales
//! the result to the marker's known dimensions, and recovers the camera
//! position in the marker frame.
//!
//! The marker frame has its origin at corner D (bottom-left), x along the
//! D-to-C bottom side, y along D-to-A, and z out of the marker face.

use crate::error::{Error, Result};
use crate::linalg::{Corner, DEGENERACY_EPS, Quad3, Vec3};
use crate::pose::PoseMatrix;
use crate::scalar::{Real, lit};

/// Physical dimensions of the fiducial marker: the four side lengths
/// |AB|, |BC|, |CD|, |DA| and the width-over-height aspect ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkerSpec<T> {
    pub side_a: T,
    pub side_b: T,
    pub side_c: T,
    pub side_d: T,
    pub aspect: T,
}

impl<T: Real> MarkerSpec<T> {
    pub fn new(side_a: T, side_b: T, side_c: T, side_d: T, aspect: T) -> Result<Self> {
        for (name, v) in [
            ("side a", side_a),
            ("side b", side_b),
            ("side c", side_c),
            ("side d", side_d),
            ("aspect", aspect),
        ] {
            if !(v.is_finite() && v > T::zero()) {
                return Err(Error::InvalidMarker(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(MarkerSpec {
            side_a,
            side_b,
            side_c,
            side_d,
            aspect,
        })
    }

    /// Rectangle of the given width (sides AB, CD) and height (BC, DA).
    pub fn rectangle(width: T, height: T) -> Result<Self> {
        Self::new(width, height, width, height, width / height)
    }
}

/// Which observed side sets the metric scale.
///
/// `ByWidth` measures the CD side, `ByHeight` the DA side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleMode {
    BySideA,
    BySideB,
    BySideC,
    BySideD,
    ByWidth,
    ByHeight,
}

/// Output of the full metric pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconstructedScene<T> {
    /// Marker corners in metric camera-frame coordinates.
    pub points: Quad3<T>,
    /// Scalar that took the rectified projection to metric units.
    pub scale_u: T,
    /// Camera origin expressed in the marker frame.
    pub camera_in_marker: Vec3<T>,
}

/// Extends `v` to the plane through `plane_pt` with the given normal:
/// `(plane_pt . n / v . n) * v`. Sign and length of the normal cancel.
pub fn intersect_ray_plane<T: Real>(
    v: Vec3<T>,
    normal: Vec3<T>,
    plane_pt: Vec3<T>,
) -> Result<Vec3<T>> {
    let denom = v.dot(normal);
    if denom.abs() <= lit::<T>(DEGENERACY_EPS) * v.norm() * normal.norm() {
        return Err(Error::ParallelRay);
    }
    Ok(v * (plane_pt.dot(normal) / denom))
}

/// Extends every corner ray to the plane spanned by the figure (normal from
/// the pose, anchor at the reference corner). The reference corner is
/// returned unchanged.
pub fn rectify3d<T: Real>(
    quad: &Quad3<T>,
    pose: &PoseMatrix<T>,
    reference: Corner,
) -> Result<Quad3<T>> {
    let normal = pose.z_axis.as_vec3();
    let anchor = quad.corner(reference);
    if anchor.dot(normal).abs() <= lit::<T>(DEGENERACY_EPS) * anchor.norm() {
        return Err(Error::GrazingPlane { corner: reference });
    }
    let mut out = *quad;
    for corner in Corner::ALL {
        if corner == reference {
            continue;
        }
        let extended = intersect_ray_plane(quad.corner(corner), normal, anchor)
            .map_err(|_| Error::GrazingPlane { corner })?;
        match corner {
            Corner::A => out.a = extended,
            Corner::B => out.b = extended,
            Corner::C => out.c = extended,
            Corner::D => out.d = extended,
        }
    }
    Ok(out)
}

/// Scales a rectified quad so the chosen side matches the marker dimension.
/// Returns the scaled quad and the scalar `u` that was applied.
pub fn scale_to_marker<T: Real>(
    quad: &Quad3<T>,
    marker: &MarkerSpec<T>,
    mode: ScaleMode,
) -> Result<(Quad3<T>, T)> {
    let (length, observed) = match mode {
        ScaleMode::BySideA => (marker.side_a, (quad.b - quad.a).norm()),
        ScaleMode::BySideB => (marker.side_b, (quad.c - quad.b).norm()),
        ScaleMode::BySideC | ScaleMode::ByWidth => (marker.side_c, (quad.d - quad.c).norm()),
        ScaleMode::BySideD | ScaleMode::ByHeight => (marker.side_d, (quad.a - quad.d).norm()),
    };
    if observed <= lit(DEGENERACY_EPS) {
        return Err(Error::DegenerateSide);
    }
    let u = length / observed;
    Ok((quad.map(|v| v * u), u))
}

/// Camera origin in the marker frame, given the marker origin (corner D) in
/// camera coordinates: the negated dot products against the pose basis.
pub fn camera_position<T: Real>(pose: &PoseMatrix<T>, marker_origin_cam: Vec3<T>) -> Vec3<T> {
    -Vec3::new(
        marker_origin_cam.dot(pose.x_axis.as_vec3()),
        marker_origin_cam.dot(pose.y_axis.as_vec3()),
        marker_origin_cam.dot(pose.z_axis.as_vec3()),
    )
}

/// Full pipeline from incident vectors to a metric scene.
pub fn reconstruct_scene<T: Real>(
    incidents: &Quad3<T>,
    marker: &MarkerSpec<T>,
    pose: &PoseMatrix<T>,
    reference: Corner,
    mode: ScaleMode,
) -> Result<ReconstructedScene<T>> {
    let rectified = rectify3d(incidents, pose, reference)?;
    let (points, scale_u) = scale_to_marker(&rectified, marker, mode)?;
    let camera_in_marker = camera_position(pose, points.d);
    Ok(ReconstructedScene {
        points,
        scale_u,
        camera_in_marker,
    })
}
