//! Pose matrix of a projected rectangle or parallelogram from four incident
//! vectors, via spherical vanishing points.
//!
//! The x axis aims at the vanishing point of the AB/CD side pair, the y axis
//! at the AD/CB pair, and the z axis is their cross product: the figure's
//! plane normal. For a rectangle the x and y axes come out perpendicular;
//! for a parallelogram their angle equals the figure's corner angle.

use crate::error::{Error, Result};
use crate::linalg::{DEGENERACY_EPS, Quad3, UnitVec3, Vec3};
use crate::scalar::{Real, lit};

/// Orientation frame of the projected figure in camera coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseMatrix<T> {
    pub x_axis: UnitVec3<T>,
    pub y_axis: UnitVec3<T>,
    pub z_axis: UnitVec3<T>,
}

/// Estimates the pose of the figure behind four incident vectors.
///
/// Inputs are accepted unnormalized; the result is invariant under positive
/// per-corner rescaling. The quad must not contain parallel incident pairs.
pub fn pose_from_incidents<T: Real>(quad: &Quad3<T>) -> Result<PoseMatrix<T>> {
    let eps = lit::<T>(DEGENERACY_EPS);
    let corners = quad.corners();
    for (i, &u) in corners.iter().enumerate() {
        for &v in &corners[i + 1..] {
            if u.cross(v).norm() <= eps * u.norm() * v.norm() {
                return Err(Error::DegenerateQuad {
                    reason: "two incident vectors are parallel",
                });
            }
        }
    }

    let x_raw = quad.a.cross(quad.b).cross(quad.c.cross(quad.d));
    let y_raw = quad.a.cross(quad.d).cross(quad.c.cross(quad.b));
    let degenerate = |_| Error::DegenerateQuad {
        reason: "vanishing directions are not defined",
    };
    let x_axis = x_raw.normalize().map_err(degenerate)?;
    let y_axis = y_raw.normalize().map_err(degenerate)?;
    if x_axis.cross(y_axis.as_vec3()).norm() <= eps {
        return Err(Error::DegenerateQuad {
            reason: "collinear corner configuration",
        });
    }
    let z_axis = x_axis
        .cross(y_axis.as_vec3())
        .normalize()
        .map_err(degenerate)?;

    Ok(canonicalize(
        PoseMatrix {
            x_axis,
            y_axis,
            z_axis,
        },
        quad,
    ))
}

/// Resolves the sign ambiguity of the cross-product frame.
///
/// The x axis is flipped to point along the A-to-B side direction, then the
/// y axis is flipped so the recomputed z axis lands in the hemisphere of the
/// quad's mean incident direction. Sign tests run on normalized corners, so
/// the result is invariant under positive per-corner rescaling. Idempotent.
pub fn canonicalize<T: Real>(p: PoseMatrix<T>, quad: &Quad3<T>) -> PoseMatrix<T> {
    let unit = |v: Vec3<T>| v / v.norm();
    let an = unit(quad.a);
    let bn = unit(quad.b);
    let cn = unit(quad.c);
    let dn = unit(quad.d);

    let mut x_axis = p.x_axis;
    let mut y_axis = p.y_axis;

    let mut along_side = x_axis.dot(bn - an);
    if along_side == T::zero() {
        along_side = x_axis.dot(cn - dn);
    }
    if along_side < T::zero() {
        x_axis = -x_axis;
    }
    if x_axis.cross(y_axis.as_vec3()).dot(an + bn + cn + dn) < T::zero() {
        y_axis = -y_axis;
    }
    let z_axis = x_axis
        .cross(y_axis.as_vec3())
        .normalize()
        .expect("pose axes are not parallel");
    PoseMatrix {
        x_axis,
        y_axis,
        z_axis,
    }
}

/// Angle between the x and y axes: the corner angle of the projected figure
/// (up to the supplement chosen by canonicalization).
pub fn side_angle<T: Real>(p: &PoseMatrix<T>) -> T {
    let dot = p.x_axis.dot(p.y_axis.as_vec3());
    dot.max(-T::one()).min(T::one()).acos()
}
