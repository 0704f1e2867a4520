//! Lens-agnostic 2D rectification: lifts corners to the z = 1 plane, builds
//! a pose-like rectification matrix from the lifted vanishing directions,
//! and applies the projective rectification.
//!
//! The rectification matrix does not represent orientation. Its output is
//! projectively correct for any lens; lengths and angles are metrically
//! exact when the input coordinates are expressed in units of the true
//! focal length (see [`crate::focal`] for recovering that length).

use crate::error::{Error, Result};
use crate::linalg::{DEGENERACY_EPS, Quad2, Quad3, UnitVec3, Vec2, Vec3};
use crate::scalar::{Real, lit};

/// Pose-like frame built from a 2D quad lifted to z = 1. Note the z axis is
/// `normalize(y x x)`, the reverse of the pose-matrix order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectifyMatrix<T> {
    pub x_axis: UnitVec3<T>,
    pub y_axis: UnitVec3<T>,
    pub z_axis: UnitVec3<T>,
}

/// Which way [`rectify_point`] maps.
///
/// `Forward` applies the matrix rows (quad corners to rectified screen
/// coordinates); `Inverse` applies the transpose (rectified coordinates back
/// toward the quad, the texture-warp direction).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RectifyDirection {
    Forward,
    Inverse,
}

/// Lifts a 2D point onto the z = 1 plane.
pub fn lift_point<T: Real>(p: Vec2<T>) -> Vec3<T> {
    Vec3::new(p.x, p.y, T::one())
}

/// Lifts all four corners onto the z = 1 plane.
pub fn lift_to_unit_plane<T: Real>(q: &Quad2<T>) -> Quad3<T> {
    Quad3 {
        a: lift_point(q.a),
        b: lift_point(q.b),
        c: lift_point(q.c),
        d: lift_point(q.d),
    }
}

/// Builds the rectification matrix of a quad from its lifted vanishing
/// directions.
pub fn rectification_matrix<T: Real>(q: &Quad2<T>) -> Result<RectifyMatrix<T>> {
    let lifted = lift_to_unit_plane(q);
    let n_ab = lifted.a.cross(lifted.b);
    let n_cd = lifted.c.cross(lifted.d);
    let n_ad = lifted.a.cross(lifted.d);
    let n_cb = lifted.c.cross(lifted.b);

    let eps = lit::<T>(DEGENERACY_EPS);
    let x_raw = n_ab.cross(n_cd);
    let y_raw = n_ad.cross(n_cb);
    if x_raw.norm() <= eps * n_ab.norm() * n_cd.norm()
        || y_raw.norm() <= eps * n_ad.norm() * n_cb.norm()
    {
        return Err(Error::DegenerateQuad {
            reason: "collinear corners leave a vanishing direction undefined",
        });
    }
    let degenerate = |_| Error::DegenerateQuad {
        reason: "vanishing directions are not defined",
    };
    let x_axis = x_raw.normalize().map_err(degenerate)?;
    let y_axis = y_raw.normalize().map_err(degenerate)?;
    let z_axis = y_axis
        .cross(x_axis.as_vec3())
        .normalize()
        .map_err(|_| Error::DegenerateQuad {
            reason: "vanishing directions are parallel",
        })?;
    Ok(RectifyMatrix {
        x_axis,
        y_axis,
        z_axis,
    })
}

/// Applies the projective rectification to one point.
pub fn rectify_point<T: Real>(
    p: Vec2<T>,
    m: &RectifyMatrix<T>,
    direction: RectifyDirection,
) -> Result<Vec2<T>> {
    let q = lift_point(p);
    let (rx, ry, rz) = match direction {
        RectifyDirection::Forward => (m.x_axis.as_vec3(), m.y_axis.as_vec3(), m.z_axis.as_vec3()),
        RectifyDirection::Inverse => (
            Vec3::new(m.x_axis.x, m.y_axis.x, m.z_axis.x),
            Vec3::new(m.x_axis.y, m.y_axis.y, m.z_axis.y),
            Vec3::new(m.x_axis.z, m.y_axis.z, m.z_axis.z),
        ),
    };
    let denom = q.dot(rz);
    if denom.abs() <= lit(DEGENERACY_EPS) {
        return Err(Error::HorizonPoint);
    }
    Ok(Vec2::new(q.dot(rx) / denom, q.dot(ry) / denom))
}

/// Rectifies all four corners. The output is a plain corner container; the
/// `Quad2` ordering contract is inherited from the input.
pub fn rectify_quad<T: Real>(
    q: &Quad2<T>,
    m: &RectifyMatrix<T>,
    direction: RectifyDirection,
) -> Result<Quad2<T>> {
    Ok(Quad2 {
        a: rectify_point(q.a, m, direction)?,
        b: rectify_point(q.b, m, direction)?,
        c: rectify_point(q.c, m, direction)?,
        d: rectify_point(q.d, m, direction)?,
    })
}

/// Scale factor for the x axis that restores the marker's aspect ratio after
/// rectification: `aspect * |A'' - D''| / |C'' - D''|`.
pub fn aspect_correction_factor<T: Real>(
    m: &RectifyMatrix<T>,
    q: &Quad2<T>,
    marker_aspect: T,
) -> Result<T> {
    let ra = rectify_point(q.a, m, RectifyDirection::Forward)?;
    let rc = rectify_point(q.c, m, RectifyDirection::Forward)?;
    let rd = rectify_point(q.d, m, RectifyDirection::Forward)?;
    let height = (ra - rd).norm();
    let width = (rc - rd).norm();
    let eps = lit(DEGENERACY_EPS);
    if height <= eps || width <= eps {
        return Err(Error::DegenerateSide);
    }
    Ok(marker_aspect * height / width)
}

/// Maps a rectified point into the unit square spanned by the rectified
/// corners: componentwise `(p - D'') / (B'' - D'')`, so D'' lands on (0,0)
/// and B'' on (1,1).
pub fn normalize_to_unit<T: Real>(p: Vec2<T>, rectified: &Quad2<T>) -> Result<Vec2<T>> {
    let span = rectified.b - rectified.d;
    let eps = lit::<T>(DEGENERACY_EPS);
    if span.x.abs() <= eps || span.y.abs() <= eps {
        return Err(Error::DegenerateSpan);
    }
    let rel = p - rectified.d;
    Ok(Vec2::new(rel.x / span.x, rel.y / span.y))
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn lift_pins_z_to_one() {
        assert_eq!(lift_point(Vec2::new(0.0, 0.0)), Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(lift_point(Vec2::new(-1.0, 1.0)), Vec3::new(-1.0, 1.0, 1.0));
        let lifted = lift_to_unit_plane(&frontal_square());
        for v in lifted.corners() {
            assert_eq!(v.z, 1.0);
        }
    }

    #[test]
    fn frontal_square_matrix_hand_values() {
        // Hand cross-product evaluation before any sign policy.
        let m = rectification_matrix(&frontal_square()).unwrap();
        assert_eq!(m.x_axis.as_vec3(), Vec3::new(-1.0, 0.0, 0.0));
        assert_eq!(m.y_axis.as_vec3(), Vec3::new(0.0, -1.0, 0.0));
        assert_eq!(m.z_axis.as_vec3(), Vec3::new(0.0, 0.0, -1.0));
    }

    #[test]
    fn matrix_is_scale_invariant() {
        let q = frontal_square();
        let scaled = q.map(|p| p * 3.7);
        let m1 = rectification_matrix(&q).unwrap();
        let m2 = rectification_matrix(&Quad2::new(scaled.a, scaled.b, scaled.c, scaled.d).unwrap())
            .unwrap();
        assert!((m1.x_axis.as_vec3() - m2.x_axis.as_vec3()).norm() < 1e-12);
        assert!((m1.y_axis.as_vec3() - m2.y_axis.as_vec3()).norm() < 1e-12);
        assert!((m1.z_axis.as_vec3() - m2.z_axis.as_vec3()).norm() < 1e-12);
    }

    #[test]
    fn keystone_x_axis_is_horizontal() {
        // Horizontal sides of a symmetric keystone converge only vertically.
        let q = Quad2::<f64>::new(
            Vec2::new(-0.5, 0.5),
            Vec2::new(0.5, 0.5),
            Vec2::new(1.0, -0.5),
            Vec2::new(-1.0, -0.5),
        )
        .unwrap();
        let m = rectification_matrix(&q).unwrap();
        assert!(m.x_axis.y.abs() < 1e-15);
        assert!(m.x_axis.z.abs() < 1e-15);
        assert!((m.x_axis.x.abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn frontal_square_rectifies_to_itself() {
        let q = frontal_square();
        let m = rectification_matrix(&q).unwrap();
        let p = rectify_point(Vec2::new(-1.0, 1.0), &m, RectifyDirection::Forward).unwrap();
        assert!((p - Vec2::new(-1.0, 1.0)).norm() < 1e-15);
        let center = rectify_point(Vec2::new(0.0, 0.0), &m, RectifyDirection::Forward).unwrap();
        assert!(center.norm() < 1e-15);
    }

    #[test]
    fn frontal_rectangle_is_a_fixed_point() {
        let q = Quad2::<f64>::new(
            Vec2::new(-1.0, 0.5),
            Vec2::new(1.0, 0.5),
            Vec2::new(1.0, -0.5),
            Vec2::new(-1.0, -0.5),
        )
        .unwrap();
        let m = rectification_matrix(&q).unwrap();
        let r = rectify_quad(&q, &m, RectifyDirection::Forward).unwrap();
        for (got, want) in r.corners().iter().zip(q.corners()) {
            assert!((*got - want).norm() < 1e-12);
        }
    }

    #[test]
    fn keystone_rectifies_to_right_angles() {
        let q = Quad2::<f64>::new(
            Vec2::new(-0.5, 0.5),
            Vec2::new(0.5, 0.5),
            Vec2::new(1.0, -0.5),
            Vec2::new(-1.0, -0.5),
        )
        .unwrap();
        let m = rectification_matrix(&q).unwrap();
        let r = rectify_quad(&q, &m, RectifyDirection::Forward).unwrap();
        let corners = [r.a, r.b, r.c, r.d];
        for i in 0..4 {
            let prev = corners[(i + 3) % 4] - corners[i];
            let next = corners[(i + 1) % 4] - corners[i];
            let angle = (prev.dot(next) / (prev.norm() * next.norm()))
                .clamp(-1.0, 1.0)
                .acos();
            assert!((angle - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
        }

        // Unit-square normalization anchors the corners: D at (0,0), B at
        // (1,1), A in the (0,1) corner.
        for (corner, want) in [
            (r.a, Vec2::new(0.0, 1.0)),
            (r.b, Vec2::new(1.0, 1.0)),
            (r.c, Vec2::new(1.0, 0.0)),
            (r.d, Vec2::new(0.0, 0.0)),
        ] {
            let unit = normalize_to_unit(corner, &r).unwrap();
            assert!((unit - want).norm() < 1e-9);
            assert!((-1e-9..=1.0 + 1e-9).contains(&unit.x));
            assert!((-1e-9..=1.0 + 1e-9).contains(&unit.y));
        }
    }

    #[test]
    fn aspect_factor_frontal_square() {
        let q = frontal_square();
        let m = rectification_matrix(&q).unwrap();
        let factor = aspect_correction_factor(&m, &q, 2.0).unwrap();
        assert!((factor - 2.0).abs() < 1e-12);
    }

    #[test]
    fn aspect_factor_frontal_two_by_one() {
        // |A-D| = 1, |C-D| = 2: factor = 2 * (1/2) = 1, already correct.
        let q = Quad2::<f64>::new(
            Vec2::new(-1.0, 0.5),
            Vec2::new(1.0, 0.5),
            Vec2::new(1.0, -0.5),
            Vec2::new(-1.0, -0.5),
        )
        .unwrap();
        let m = rectification_matrix(&q).unwrap();
        let factor = aspect_correction_factor(&m, &q, 2.0).unwrap();
        assert!((factor - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normalize_to_unit_midpoint_and_anchors() {
        let rectified = Quad2 {
            a: Vec2::new(-1.0, 1.0),
            b: Vec2::new(1.0, 1.0),
            c: Vec2::new(1.0, -1.0),
            d: Vec2::new(-1.0, -1.0),
        };
        let mid = normalize_to_unit(Vec2::new(0.0, 0.0), &rectified).unwrap();
        assert_eq!(mid, Vec2::new(0.5, 0.5));
        assert_eq!(
            normalize_to_unit(rectified.d, &rectified).unwrap(),
            Vec2::new(0.0, 0.0)
        );
        assert_eq!(
            normalize_to_unit(rectified.b, &rectified).unwrap(),
            Vec2::new(1.0, 1.0)
        );
    }

    #[test]
    fn normalize_to_unit_rejects_flat_span() {
        let rectified = Quad2 {
            a: Vec2::new(-1.0, 1.0),
            b: Vec2::new(1.0, 1.0),
            c: Vec2::new(1.0, 1.0 - 1e-15),
            d: Vec2::new(-1.0, 1.0),
        };
        assert_eq!(
            normalize_to_unit(Vec2::new(0.0, 0.0), &rectified),
            Err(Error::DegenerateSpan)
        );
    }

    #[test]
    fn collinear_corners_are_degenerate() {
        let q = Quad2 {
            a: Vec2::new(-0.3, -0.3),
            b: Vec2::new(0.0, 0.0),
            c: Vec2::new(0.3, 0.3),
            d: Vec2::new(0.6, 0.6),
        };
        assert!(matches!(
            rectification_matrix(&q),
            Err(Error::DegenerateQuad { .. })
        ));
    }

    #[test]
    fn global_row_negation_cancels_in_rectification() {
        let q = Quad2::<f64>::new(
            Vec2::new(-0.4, 0.6),
            Vec2::new(0.6, 0.5),
            Vec2::new(0.5, -0.6),
            Vec2::new(-0.6, -0.4),
        )
        .unwrap();
        let m = rectification_matrix(&q).unwrap();
        let negated = RectifyMatrix {
            x_axis: -m.x_axis,
            y_axis: -m.y_axis,
            z_axis: -m.z_axis,
        };
        for p in q.corners() {
            let r1 = rectify_point(p, &m, RectifyDirection::Forward).unwrap();
            let r2 = rectify_point(p, &negated, RectifyDirection::Forward).unwrap();
            assert!((r1 - r2).norm() < 1e-15);
        }
    }
}
