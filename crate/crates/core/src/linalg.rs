//! Exact-algebra primitives shared by every solver: 2D/3D vectors, quad
//! containers, and the visual-sphere coplanarity test.

use std::fmt;
use std::ops::{Add, Deref, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{Real, lit};

/// Norm threshold below which a vector or separation is treated as degenerate.
///
/// Far above `f64` rounding, far below any meaningful geometry.
pub const DEGENERACY_EPS: f64 = 1e-12;

/// 2D point or vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Vec2<T> {
    pub fn new(x: T, y: T) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    pub fn norm_squared(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        self.norm_squared().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl<T: Real> Add for Vec2<T> {
    type Output = Self;
    fn add(self, other: Self) -> Self {
        Vec2::new(self.x + other.x, self.y + other.y)
    }
}

impl<T: Real> Sub for Vec2<T> {
    type Output = Self;
    fn sub(self, other: Self) -> Self {
        Vec2::new(self.x - other.x, self.y - other.y)
    }
}

impl<T: Real> Neg for Vec2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Vec2::new(-self.x, -self.y)
    }
}

impl<T: Real> Mul<T> for Vec2<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl<T: Real> Div<T> for Vec2<T> {
    type Output = Self;
    fn div(self, s: T) -> Self {
        Vec2::new(self.x / s, self.y / s)
    }
}

/// 3D point, direction, or incident vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Right-handed cross product.
    pub fn cross(self, other: Self) -> Self {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm_squared(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        self.norm_squared().sqrt()
    }

    /// The planar (x, y) part, as used by vanishing-point formulas.
    pub fn xy(self) -> Vec2<T> {
        Vec2::new(self.x, self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Scales to unit norm. Inputs with norm at or below [`DEGENERACY_EPS`]
    /// are rejected.
    pub fn normalize(self) -> Result<UnitVec3<T>> {
        let norm = self.norm();
        if !norm.is_finite() || norm <= lit(DEGENERACY_EPS) {
            return Err(Error::DegenerateVector {
                norm: norm.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(UnitVec3(self / norm))
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Self;
    fn add(self, other: Self) -> Self {
        Vec3::new(self.x + other.x, self.y + other.y, self.z + other.z)
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Self;
    fn sub(self, other: Self) -> Self {
        Vec3::new(self.x - other.x, self.y - other.y, self.z - other.z)
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Real> Mul<T> for Vec3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl<T: Real> Div<T> for Vec3<T> {
    type Output = Self;
    fn div(self, s: T) -> Self {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

/// A [`Vec3`] with unit Euclidean norm, guaranteed by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVec3<T>(Vec3<T>);

impl<T: Real> UnitVec3<T> {
    /// Wraps a vector the caller guarantees to be unit norm.
    pub fn new_unchecked(v: Vec3<T>) -> Self {
        debug_assert!((v.norm() - T::one()).abs() < lit(1e-9));
        UnitVec3(v)
    }

    pub fn as_vec3(self) -> Vec3<T> {
        self.0
    }
}

impl<T> Deref for UnitVec3<T> {
    type Target = Vec3<T>;
    fn deref(&self) -> &Vec3<T> {
        &self.0
    }
}

impl<T: Real> Neg for UnitVec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        UnitVec3(-self.0)
    }
}

impl<T> From<UnitVec3<T>> for Vec3<T> {
    fn from(u: UnitVec3<T>) -> Self {
        u.0
    }
}

/// Scalar triple product `a x b . c`.
pub fn scalar_triple<T: Real>(a: Vec3<T>, b: Vec3<T>, c: Vec3<T>) -> T {
    a.cross(b).dot(c)
}

/// True when three visual-sphere directions lie on one great circle, i.e.
/// their image points are collinear: `|a x b . c| <= tol`.
pub fn coplanar_on_sphere<T: Real>(a: UnitVec3<T>, b: UnitVec3<T>, c: UnitVec3<T>, tol: T) -> bool {
    scalar_triple(a.as_vec3(), b.as_vec3(), c.as_vec3()).abs() <= tol
}

/// Names the four quad corners, clockwise from top-left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Corner {
    A,
    B,
    C,
    D,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::A, Corner::B, Corner::C, Corner::D];
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Corner::A => "A",
            Corner::B => "B",
            Corner::C => "C",
            Corner::D => "D",
        };
        f.write_str(name)
    }
}

/// Four ordered 2D corner points, clockwise from top-left (A top-left,
/// B top-right, C bottom-right, D bottom-left), in principal-point-centered
/// coordinates. The ordering is an input contract and is not auto-detected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad2<T> {
    pub a: Vec2<T>,
    pub b: Vec2<T>,
    pub c: Vec2<T>,
    pub d: Vec2<T>,
}

impl<T: Real> Quad2<T> {
    /// Validates finiteness and pairwise corner separation. Struct literals
    /// are for values already known to satisfy the contract.
    pub fn new(a: Vec2<T>, b: Vec2<T>, c: Vec2<T>, d: Vec2<T>) -> Result<Self> {
        let quad = Quad2 { a, b, c, d };
        for corner in Corner::ALL {
            if !quad.corner(corner).is_finite() {
                return Err(Error::NonFiniteCorner { corner });
            }
        }
        let eps = lit(DEGENERACY_EPS);
        for (i, &first) in Corner::ALL.iter().enumerate() {
            for &second in &Corner::ALL[i + 1..] {
                if (quad.corner(first) - quad.corner(second)).norm() <= eps {
                    return Err(Error::CoincidentCorners { first, second });
                }
            }
        }
        Ok(quad)
    }

    pub fn corner(&self, corner: Corner) -> Vec2<T> {
        match corner {
            Corner::A => self.a,
            Corner::B => self.b,
            Corner::C => self.c,
            Corner::D => self.d,
        }
    }

    pub fn corners(&self) -> [Vec2<T>; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn map(&self, mut f: impl FnMut(Vec2<T>) -> Vec2<T>) -> Self {
        Quad2 {
            a: f(self.a),
            b: f(self.b),
            c: f(self.c),
            d: f(self.d),
        }
    }
}

/// Four ordered 3D vectors under the same corner contract as [`Quad2`]:
/// either incident directions on the visual sphere or reconstructed points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad3<T> {
    pub a: Vec3<T>,
    pub b: Vec3<T>,
    pub c: Vec3<T>,
    pub d: Vec3<T>,
}

impl<T: Real> Quad3<T> {
    /// Validates finiteness and that no corner is the zero vector.
    pub fn new(a: Vec3<T>, b: Vec3<T>, c: Vec3<T>, d: Vec3<T>) -> Result<Self> {
        let quad = Quad3 { a, b, c, d };
        let eps = lit(DEGENERACY_EPS);
        for corner in Corner::ALL {
            let v = quad.corner(corner);
            if !v.is_finite() {
                return Err(Error::NonFiniteCorner { corner });
            }
            if v.norm() <= eps {
                return Err(Error::ZeroCorner { corner });
            }
        }
        Ok(quad)
    }

    pub fn corner(&self, corner: Corner) -> Vec3<T> {
        match corner {
            Corner::A => self.a,
            Corner::B => self.b,
            Corner::C => self.c,
            Corner::D => self.d,
        }
    }

    pub fn corners(&self) -> [Vec3<T>; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn map(&self, mut f: impl FnMut(Vec3<T>) -> Vec3<T>) -> Self {
        Quad3 {
            a: f(self.a),
            b: f(self.b),
            c: f(self.c),
            d: f(self.d),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_basis_vectors() {
        let e1 = Vec3::new(1.0, 0.0, 0.0);
        let e2 = Vec3::new(0.0, 1.0, 0.0);
        assert_eq!(e1.cross(e2), Vec3::new(0.0, 0.0, 1.0));
    }

    #[test]
    fn cross_parallel_is_zero() {
        let v = Vec3::new(2.0, 0.0, 0.0);
        assert_eq!(v.cross(v), Vec3::new(0.0, 0.0, 0.0));
    }

    #[test]
    fn cross_hand_evaluated() {
        let u = Vec3::new(0.0, 0.0, 1.0);
        let v = Vec3::new(1.0, 1.0, 1.0);
        assert_eq!(u.cross(v), Vec3::new(-1.0, 1.0, 0.0));
    }

    #[test]
    fn normalize_axis() {
        let u = Vec3::new(0.0, 0.0, 2.0).normalize().unwrap();
        assert_eq!(u.as_vec3(), Vec3::new(0.0, 0.0, 1.0));
    }

    #[test]
    fn normalize_345_triangle() {
        let u = Vec3::<f64>::new(3.0, 4.0, 0.0).normalize().unwrap();
        assert!((u.x - 0.6).abs() < 1e-15);
        assert!((u.y - 0.8).abs() < 1e-15);
        assert_eq!(u.z, 0.0);
    }

    #[test]
    fn normalize_rejects_near_zero() {
        let err = Vec3::new(1e-15, 0.0, 0.0).normalize().unwrap_err();
        assert!(matches!(err, Error::DegenerateVector { .. }));
    }

    #[test]
    fn coplanar_great_circle() {
        let a = Vec3::new(1.0, 0.0, 0.0).normalize().unwrap();
        let b = Vec3::new(0.0, 1.0, 0.0).normalize().unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = Vec3::new(h, h, 0.0).normalize().unwrap();
        assert!(coplanar_on_sphere(a, b, c, 1e-12));
    }

    #[test]
    fn coplanar_rejects_orthonormal_frame() {
        let a = Vec3::new(1.0, 0.0, 0.0).normalize().unwrap();
        let b = Vec3::new(0.0, 1.0, 0.0).normalize().unwrap();
        let c = Vec3::new(0.0, 0.0, 1.0).normalize().unwrap();
        assert!(!coplanar_on_sphere(a, b, c, 1e-12));
        assert_eq!(scalar_triple(a.as_vec3(), b.as_vec3(), c.as_vec3()), 1.0);
    }

    #[test]
    fn coplanar_midpoint_of_random_pairs() {
        // a, b and normalize(a + b) always share a great circle.
        let mut state = 0x12345678u64;
        let mut next = move || {
            // xorshift64, plenty for test fodder
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..1000 {
            let a = Vec3::new(next(), next(), next());
            let b = Vec3::new(next(), next(), next());
            let (Ok(ua), Ok(ub)) = (a.normalize(), b.normalize()) else {
                continue;
            };
            let Ok(mid) = (ua.as_vec3() + ub.as_vec3()).normalize() else {
                continue;
            };
            assert!(coplanar_on_sphere(ua, ub, mid, 1e-12));
        }
    }

    #[test]
    fn quad2_rejects_coincident_corners() {
        let p = Vec2::new(0.0, 0.0);
        let err = Quad2::new(p, p, Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)).unwrap_err();
        assert_eq!(
            err,
            Error::CoincidentCorners {
                first: Corner::A,
                second: Corner::B
            }
        );
    }

    #[test]
    fn quad3_rejects_zero_corner() {
        let err = Quad3::new(
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
        )
        .unwrap_err();
        assert_eq!(err, Error::ZeroCorner { corner: Corner::C });
    }

    #[test]
    fn quad2_rejects_non_finite() {
        let err = Quad2::new(
            Vec2::new(f64::NAN, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        )
        .unwrap_err();
        assert_eq!(err, Error::NonFiniteCorner { corner: Corner::A });
    }

    #[test]
    fn works_in_f32() {
        let u = Vec3::<f32>::new(3.0, 4.0, 0.0).normalize().unwrap();
        assert!((u.norm() - 1.0).abs() < 1e-6);
    }
}
