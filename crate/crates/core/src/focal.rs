//! Focal length from the two vanishing points of a rectified quad, plus the
//! generic 2D line-line intersection that falls out of the same algebra.
//!
//! For a rectangle seen in perspective the two vanishing points satisfy
//! `Vx . Vy = -f^2` when image coordinates are centered on the principal
//! point, so the focal length is `sqrt(|Vx . Vy|)`. A positive dot product
//! admits no real focal length and is surfaced through the `consistent`
//! flag rather than hidden by the absolute value.

use crate::error::{Error, Result};
use crate::linalg::{DEGENERACY_EPS, Quad2, UnitVec3, Vec2};
use crate::rectify2d::{RectifyMatrix, lift_point};
use crate::scalar::{Real, lit};

/// Unit-axis z components at or below this threshold mean the corresponding
/// image lines are parallel: the vanishing point sits at infinity.
pub const AXIS_Z_EPS: f64 = 1e-9;

/// Where an axis direction meets the picture plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VanishingPoint<T> {
    /// Finite vanishing point in centered picture coordinates.
    Finite(Vec2<T>),
    /// Parallel image lines: only a direction remains (unit norm).
    AtInfinity(Vec2<T>),
}

/// Focal length estimate with its sign-consistency diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocalEstimate<T> {
    /// Estimated focal length; 0 is the sentinel for "no estimate" (some
    /// vanishing point at infinity).
    pub focal: T,
    /// True when `Vx . Vy <= 0`, the sign a real focal length requires.
    pub consistent: bool,
}

/// Result of intersecting two 2D lines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LineIntersection<T> {
    Point(Vec2<T>),
    Parallel,
}

/// Vanishing point of an axis direction on the z = 1 picture plane.
pub fn vanishing_point<T: Real>(axis: UnitVec3<T>) -> Result<VanishingPoint<T>> {
    let planar = axis.xy();
    let planar_norm = planar.norm();
    let eps = lit::<T>(AXIS_Z_EPS);
    if planar_norm <= eps {
        // Axis along the optical axis: no image direction.
        return Err(Error::InvalidAxis);
    }
    if axis.z.abs() > eps {
        Ok(VanishingPoint::Finite(planar / axis.z))
    } else {
        Ok(VanishingPoint::AtInfinity(planar / planar_norm))
    }
}

/// Focal length from a rectification matrix:
/// `sqrt(|x.xy . y.xy / (x.z * y.z)|)`.
///
/// When either axis has a near-zero z component the image lines are parallel
/// and the sentinel estimate `{focal: 0, consistent: false}` is returned.
pub fn estimate_focal<T: Real>(m: &RectifyMatrix<T>) -> FocalEstimate<T> {
    let x = m.x_axis.as_vec3();
    let y = m.y_axis.as_vec3();
    let eps = lit::<T>(AXIS_Z_EPS);
    if x.z.abs() <= eps || y.z.abs() <= eps {
        return FocalEstimate {
            focal: T::zero(),
            consistent: false,
        };
    }
    let ratio = x.xy().dot(y.xy()) / (x.z * y.z);
    FocalEstimate {
        focal: ratio.abs().sqrt(),
        consistent: ratio <= T::zero(),
    }
}

/// Focal length straight from a visible quad, without normalizing the
/// intermediate cross products. Agrees with
/// `estimate_focal(rectification_matrix(q))` — the ratio cancels the norms.
pub fn estimate_focal_from_quad<T: Real>(q: &Quad2<T>) -> Result<FocalEstimate<T>> {
    let a = lift_point(q.a);
    let b = lift_point(q.b);
    let c = lift_point(q.c);
    let d = lift_point(q.d);
    let n_ab = a.cross(b);
    let n_cd = c.cross(d);
    let n_ad = a.cross(d);
    let n_cb = c.cross(b);
    let x = n_ab.cross(n_cd);
    let y = n_ad.cross(n_cb);

    let eps = lit::<T>(DEGENERACY_EPS);
    if x.norm() <= eps * n_ab.norm() * n_cd.norm() || y.norm() <= eps * n_ad.norm() * n_cb.norm() {
        return Err(Error::DegenerateQuad {
            reason: "collinear corners leave a vanishing direction undefined",
        });
    }

    let zeps = lit::<T>(AXIS_Z_EPS);
    if x.z.abs() <= zeps * x.norm() || y.z.abs() <= zeps * y.norm() {
        return Ok(FocalEstimate {
            focal: T::zero(),
            consistent: false,
        });
    }
    let ratio = x.xy().dot(y.xy()) / (x.z * y.z);
    Ok(FocalEstimate {
        focal: ratio.abs().sqrt(),
        consistent: ratio <= T::zero(),
    })
}

/// Intersection of lines AB and CD: lift to z = 1, cross the line normals,
/// and read the result off the z = 1 plane. A vanishing z component means
/// the lines are parallel.
pub fn intersect_lines<T: Real>(
    a: Vec2<T>,
    b: Vec2<T>,
    c: Vec2<T>,
    d: Vec2<T>,
) -> Result<LineIntersection<T>> {
    let eps = lit::<T>(DEGENERACY_EPS);
    if (a - b).norm() <= eps || (c - d).norm() <= eps {
        return Err(Error::DegenerateLine);
    }
    let n1 = lift_point(a).cross(lift_point(b));
    let n2 = lift_point(c).cross(lift_point(d));
    let x = n1.cross(n2);
    if x.z.abs() > eps {
        Ok(LineIntersection::Point(x.xy() / x.z))
    } else {
        Ok(LineIntersection::Parallel)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Vec3;
    use crate::rectify2d::rectification_matrix;

    #[test]
    fn vanishing_point_finite() {
        let axis = Vec3::new(0.6, 0.0, 0.8).normalize().unwrap();
        match vanishing_point(axis).unwrap() {
            VanishingPoint::Finite(p) => {
                assert!((p - Vec2::new(0.75, 0.0)).norm() < 1e-15);
            }
            other => panic!("expected finite vanishing point, got {other:?}"),
        }
    }

    #[test]
    fn vanishing_point_at_infinity() {
        let axis = Vec3::new(1.0, 0.0, 0.0).normalize().unwrap();
        match vanishing_point(axis).unwrap() {
            VanishingPoint::AtInfinity(dir) => {
                assert!((dir - Vec2::new(1.0, 0.0)).norm() < 1e-15);
            }
            other => panic!("expected vanishing point at infinity, got {other:?}"),
        }
    }

    #[test]
    fn vanishing_point_rejects_optical_axis() {
        let axis = Vec3::new(0.0, 0.0, 1.0).normalize().unwrap();
        assert_eq!(vanishing_point(axis), Err(Error::InvalidAxis));
    }

    fn frontal_square() -> Quad2<f64> {
        Quad2::new(
            Vec2::new(-1.0, 1.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(1.0, -1.0),
            Vec2::new(-1.0, -1.0),
        )
        .unwrap()
    }

    #[test]
    fn frontal_square_yields_sentinel() {
        let m = rectification_matrix(&frontal_square()).unwrap();
        let est = estimate_focal(&m);
        assert_eq!(est.focal, 0.0);
        assert!(!est.consistent);

        let est = estimate_focal_from_quad(&frontal_square()).unwrap();
        assert_eq!(est.focal, 0.0);
        assert!(!est.consistent);
    }

    #[test]
    fn pinhole_two_axis_tilt_recovers_focal() {
        // Independent pinhole projection of a unit square rotated 30 degrees
        // about the vertical axis, then 20 degrees about the horizontal one.
        let f = 1.5;
        let (sy, cy) = 30.0f64.to_radians().sin_cos();
        let (sx, cx) = 20.0f64.to_radians().sin_cos();
        let rotate = |v: Vec3<f64>| {
            let v = Vec3::new(cy * v.x + sy * v.z, v.y, -sy * v.x + cy * v.z);
            Vec3::new(v.x, cx * v.y - sx * v.z, sx * v.y + cx * v.z)
        };
        let corners = [
            Vec3::new(-0.5, 0.5, 0.0),
            Vec3::new(0.5, 0.5, 0.0),
            Vec3::new(0.5, -0.5, 0.0),
            Vec3::new(-0.5, -0.5, 0.0),
        ];
        let project = |v: Vec3<f64>| {
            let p = rotate(v) + Vec3::new(0.0, 0.0, 4.0);
            Vec2::new(f * p.x / p.z, f * p.y / p.z)
        };
        let q = Quad2::new(
            project(corners[0]),
            project(corners[1]),
            project(corners[2]),
            project(corners[3]),
        )
        .unwrap();
        let est = estimate_focal_from_quad(&q).unwrap();
        assert!(est.consistent);
        assert!((est.focal - f).abs() < 1e-9, "focal = {}", est.focal);

        // Same value through the normalized-matrix route, within 1e-12.
        let via_matrix = estimate_focal(&rectification_matrix(&q).unwrap());
        assert!((est.focal - via_matrix.focal).abs() < 1e-12);
        assert_eq!(est.consistent, via_matrix.consistent);
    }

    #[test]
    fn single_axis_tilt_yields_sentinel() {
        // Rotation about the horizontal axis only: horizontal sides stay
        // parallel in the image.
        let f = 1.5;
        let (sx, cx) = 25.0f64.to_radians().sin_cos();
        let project = |v: Vec3<f64>| {
            let r = Vec3::new(v.x, cx * v.y - sx * v.z, sx * v.y + cx * v.z);
            let p = r + Vec3::new(0.0, 0.0, 4.0);
            Vec2::new(f * p.x / p.z, f * p.y / p.z)
        };
        let q = Quad2::new(
            project(Vec3::new(-0.5, 0.5, 0.0)),
            project(Vec3::new(0.5, 0.5, 0.0)),
            project(Vec3::new(0.5, -0.5, 0.0)),
            project(Vec3::new(-0.5, -0.5, 0.0)),
        )
        .unwrap();
        let est = estimate_focal_from_quad(&q).unwrap();
        assert_eq!(est.focal, 0.0);
        assert!(!est.consistent);
    }

    #[test]
    fn estimate_is_invariant_under_row_negation() {
        let q = Quad2::<f64>::new(
            Vec2::new(-0.4, 0.6),
            Vec2::new(0.6, 0.5),
            Vec2::new(0.5, -0.6),
            Vec2::new(-0.6, -0.4),
        )
        .unwrap();
        let m = rectification_matrix(&q).unwrap();
        let base = estimate_focal(&m);
        let negated = RectifyMatrix {
            x_axis: -m.x_axis,
            y_axis: -m.y_axis,
            z_axis: -m.z_axis,
        };
        let flipped = estimate_focal(&negated);
        assert!((base.focal - flipped.focal).abs() < 1e-15);
        assert_eq!(base.consistent, flipped.consistent);
    }

    #[test]
    fn intersect_unit_square_diagonals() {
        let hit = intersect_lines(
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(1.0, 0.0),
        )
        .unwrap();
        assert_eq!(hit, LineIntersection::Point(Vec2::new(0.5, 0.5)));
    }

    #[test]
    fn intersect_hand_evaluated() {
        // Cross-of-crosses gives (-1, 0, 1); check: y = 1 + x crosses y = 0
        // at x = -1.
        let hit = intersect_lines(
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(1.0, 2.0),
        )
        .unwrap();
        assert_eq!(hit, LineIntersection::Point(Vec2::new(-1.0, 0.0)));
    }

    #[test]
    fn intersect_parallel_horizontals() {
        let hit = intersect_lines(
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(1.0, 1.0),
        )
        .unwrap();
        assert_eq!(hit, LineIntersection::Parallel);
    }

    #[test]
    fn intersect_rejects_coincident_points() {
        let p = Vec2::new(0.3, 0.3);
        assert_eq!(
            intersect_lines(p, p, Vec2::new(0.0, 1.0), Vec2::new(1.0, 1.0)),
            Err(Error::DegenerateLine)
        );
    }

    #[test]
    fn intersect_is_symmetric() {
        let (a, b) = (Vec2::new(-2.0, 1.0), Vec2::new(3.0, 0.5));
        let (c, d) = (Vec2::new(0.0, -4.0), Vec2::new(1.0, 5.0));
        let p1 = intersect_lines(a, b, c, d).unwrap();
        let p2 = intersect_lines(c, d, a, b).unwrap();
        let p3 = intersect_lines(b, a, c, d).unwrap();
        let (LineIntersection::Point(p1), LineIntersection::Point(p2), LineIntersection::Point(p3)) =
            (p1, p2, p3)
        else {
            panic!("expected finite intersections");
        };
        assert!((p1 - p2).norm() < 1e-12);
        assert!((p1 - p3).norm() < 1e-12);
    }
}
