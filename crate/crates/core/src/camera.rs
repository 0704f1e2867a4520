//! Camera models: picture-plane coordinates to 3D incident vectors and back.
//!
//! Texture coordinates live in `[0,1]^2` with `t = 0` at the bottom edge and
//! `t = 1` at the top. Centered picture coordinates put the origin at the
//! principal point, y up, with the vertical half-extent equal to 1 and the
//! horizontal half-extent equal to the picture aspect ratio.

use crate::error::{Error, Result};
use crate::linalg::{UnitVec3, Vec2, Vec3};
use crate::scalar::{Real, lit};

/// Which picture axis the angle of view is measured along.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AovAxis {
    Horizontal,
    Diagonal,
    Vertical,
}

/// Texture coordinate. Values outside `[0,1]` are permitted for rectilinear
/// extrapolation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TexCoord<T> {
    pub s: T,
    pub t: T,
}

impl<T: Real> TexCoord<T> {
    pub fn new(s: T, t: T) -> Self {
        TexCoord { s, t }
    }

    /// Centered picture coordinates for a picture with the given aspect:
    /// `x = aspect * (2s - 1)`, `y = 2t - 1`.
    pub fn to_centered(self, aspect: T) -> Vec2<T> {
        let two = lit::<T>(2.0);
        Vec2::new(aspect * (two * self.s - T::one()), two * self.t - T::one())
    }

    /// Inverse of [`TexCoord::to_centered`].
    pub fn from_centered(p: Vec2<T>, aspect: T) -> Self {
        let half = lit::<T>(0.5);
        TexCoord::new((p.x / aspect + T::one()) * half, (p.y + T::one()) * half)
    }
}

/// Rectilinear (pinhole) view described by an angle of view and aspect ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectilinear<T> {
    aov_deg: T,
    axis: AovAxis,
    aspect: T,
}

impl<T: Real> Rectilinear<T> {
    /// Requires `0 < aov < 180` degrees and a positive aspect ratio.
    pub fn new(aov_deg: T, axis: AovAxis, aspect: T) -> Result<Self> {
        if !(aov_deg.is_finite() && aov_deg > T::zero() && aov_deg < lit(180.0)) {
            return Err(Error::InvalidModel(format!(
                "rectilinear angle of view must lie in (0, 180) degrees, got {aov_deg}"
            )));
        }
        if !(aspect.is_finite() && aspect > T::zero()) {
            return Err(Error::InvalidModel(format!(
                "aspect ratio must be positive, got {aspect}"
            )));
        }
        Ok(Rectilinear {
            aov_deg,
            axis,
            aspect,
        })
    }

    pub fn aov_degrees(&self) -> T {
        self.aov_deg
    }

    pub fn axis(&self) -> AovAxis {
        self.axis
    }

    pub fn aspect(&self) -> T {
        self.aspect
    }

    fn half_aov_cot(&self) -> T {
        let half_rad = self.aov_deg.to_radians() * lit(0.5);
        half_rad.tan().recip()
    }

    /// Incident vector for a texture coordinate. The z component is always
    /// `cot(aov/2)`, independent of the coordinate.
    pub fn incident(&self, f: TexCoord<T>) -> Vec3<T> {
        let two = lit::<T>(2.0);
        let x = two * f.s - T::one();
        let y = two * f.t - T::one();
        let z = self.half_aov_cot();
        let a = self.aspect;
        match self.axis {
            AovAxis::Horizontal => Vec3::new(x, y / a, z),
            AovAxis::Diagonal => {
                let diag = (a * a + T::one()).sqrt();
                Vec3::new(a * x / diag, y / diag, z)
            }
            AovAxis::Vertical => Vec3::new(a * x, y, z),
        }
    }

    /// Texture coordinate whose incident vector points along `dir`.
    /// Directions with `z <= 0` (or grazing the picture plane) are not in view.
    pub fn project(&self, dir: Vec3<T>) -> Result<TexCoord<T>> {
        if !dir.is_finite() || dir.z <= lit::<T>(DIR_GRAZE_EPS) * dir.norm() {
            return Err(Error::NotInView);
        }
        let k = self.half_aov_cot() / dir.z;
        let x = dir.x * k;
        let y = dir.y * k;
        let a = self.aspect;
        let (u, v) = match self.axis {
            AovAxis::Horizontal => (x, y * a),
            AovAxis::Diagonal => {
                let diag = (a * a + T::one()).sqrt();
                (x * diag / a, y * diag)
            }
            AovAxis::Vertical => (x / a, y),
        };
        let half = lit::<T>(0.5);
        Ok(TexCoord::new((u + T::one()) * half, (v + T::one()) * half))
    }

    /// Focal length expressed in centered picture coordinates: the distance
    /// of the picture plane when the vertical half-extent is 1.
    pub fn focal_equivalent(&self) -> T {
        let z = self.half_aov_cot();
        let a = self.aspect;
        match self.axis {
            AovAxis::Horizontal => a * z,
            AovAxis::Diagonal => (a * a + T::one()).sqrt() * z,
            AovAxis::Vertical => z,
        }
    }
}

/// Rays this close to the picture plane (relative to their norm) are treated
/// as not in view; projecting them would overflow the picture coordinates.
const DIR_GRAZE_EPS: f64 = 1e-12;

/// Equidistant fisheye: picture radius proportional to the ray's angle from
/// the optical axis, anchored so the diagonal corner sits at `aov/2`.
/// Supports angles of view beyond 180 degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquidistantFisheye<T> {
    aov_deg: T,
    aspect: T,
}

impl<T: Real> EquidistantFisheye<T> {
    /// Requires `0 < aov < 360` degrees and a positive aspect ratio.
    pub fn new(aov_deg: T, aspect: T) -> Result<Self> {
        if !(aov_deg.is_finite() && aov_deg > T::zero() && aov_deg < lit(360.0)) {
            return Err(Error::InvalidModel(format!(
                "fisheye angle of view must lie in (0, 360) degrees, got {aov_deg}"
            )));
        }
        if !(aspect.is_finite() && aspect > T::zero()) {
            return Err(Error::InvalidModel(format!(
                "aspect ratio must be positive, got {aspect}"
            )));
        }
        Ok(EquidistantFisheye { aov_deg, aspect })
    }

    pub fn aov_degrees(&self) -> T {
        self.aov_deg
    }

    pub fn aspect(&self) -> T {
        self.aspect
    }

    fn half_aov_rad(&self) -> T {
        self.aov_deg.to_radians() * lit(0.5)
    }

    /// Unit incident vector for a texture coordinate.
    pub fn incident(&self, f: TexCoord<T>) -> UnitVec3<T> {
        let a = self.aspect;
        let diag = (a * a + T::one()).sqrt();
        let two = lit::<T>(2.0);
        let u = a * (two * f.s - T::one()) / diag;
        let v = (two * f.t - T::one()) / diag;
        let radius = (u * u + v * v).sqrt();
        let theta = radius * self.half_aov_rad();
        let phi = v.atan2(u);
        let (sin_t, cos_t) = theta.sin_cos();
        UnitVec3::new_unchecked(Vec3::new(sin_t * phi.cos(), sin_t * phi.sin(), cos_t))
    }

    /// Texture coordinate whose incident vector points along `dir`. The angle
    /// between `dir` and the optical axis must stay below `aov/2`.
    pub fn project(&self, dir: Vec3<T>) -> Result<TexCoord<T>> {
        if !dir.is_finite() || dir.norm() <= lit(DIR_GRAZE_EPS) {
            return Err(Error::NotInView);
        }
        let planar = dir.xy().norm();
        let theta = planar.atan2(dir.z);
        let half = self.half_aov_rad();
        if theta >= half {
            return Err(Error::NotInView);
        }
        let radius = theta / half;
        let phi = dir.y.atan2(dir.x);
        let u = radius * phi.cos();
        let v = radius * phi.sin();
        let a = self.aspect;
        let diag = (a * a + T::one()).sqrt();
        let h = lit::<T>(0.5);
        Ok(TexCoord::new(
            (u * diag / a + T::one()) * h,
            (v * diag + T::one()) * h,
        ))
    }
}

/// Interpolation mode for sampled vector maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    Nearest,
    Bilinear,
}

/// A sampled grid of incident vectors, row-major from the top-left cell.
/// Cell values are stored as signed reals and are not renormalized on
/// sampling: pose estimation is length-invariant and renormalizing would
/// hide producer errors.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorMapGrid<T> {
    width: usize,
    height: usize,
    sampling: Sampling,
    cells: Vec<Vec3<T>>,
}

impl<T: Real> VectorMapGrid<T> {
    pub fn new(
        width: usize,
        height: usize,
        sampling: Sampling,
        cells: Vec<Vec3<T>>,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::VectorMapFormat(format!(
                "grid must be at least 1x1, got {width}x{height}"
            )));
        }
        if cells.len() != width * height {
            return Err(Error::VectorMapFormat(format!(
                "expected {} cells for a {width}x{height} grid, got {}",
                width * height,
                cells.len()
            )));
        }
        if let Some(i) = cells.iter().position(|c| !c.is_finite()) {
            return Err(Error::VectorMapFormat(format!("cell {i} is not finite")));
        }
        Ok(VectorMapGrid {
            width,
            height,
            sampling,
            cells,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn sampling(&self) -> Sampling {
        self.sampling
    }

    pub fn aspect(&self) -> T {
        lit::<T>(self.width as f64) / lit::<T>(self.height as f64)
    }

    /// Parses the text vector-map format:
    ///
    /// ```text
    /// VMAP1 <width> <height> <nearest|bilinear>
    /// <x> <y> <z>        (width*height lines, row-major from top-left)
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::VectorMapFormat("empty file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "VMAP1" {
            return Err(Error::VectorMapFormat(
                "header must be `VMAP1 <width> <height> <nearest|bilinear>`".into(),
            ));
        }
        let width: usize = fields[1]
            .parse()
            .map_err(|_| Error::VectorMapFormat(format!("bad width {:?}", fields[1])))?;
        let height: usize = fields[2]
            .parse()
            .map_err(|_| Error::VectorMapFormat(format!("bad height {:?}", fields[2])))?;
        let sampling = match fields[3] {
            "nearest" => Sampling::Nearest,
            "bilinear" => Sampling::Bilinear,
            other => {
                return Err(Error::VectorMapFormat(format!(
                    "unknown sampling {other:?}"
                )));
            }
        };
        let mut cells = Vec::with_capacity(width * height);
        for (i, line) in lines.enumerate() {
            let comps: Vec<&str> = line.split_whitespace().collect();
            if comps.len() != 3 {
                return Err(Error::VectorMapFormat(format!(
                    "line {} has {} fields, expected 3",
                    i + 2,
                    comps.len()
                )));
            }
            let mut v = [0.0f64; 3];
            for (slot, comp) in v.iter_mut().zip(&comps) {
                *slot = comp.parse().map_err(|_| {
                    Error::VectorMapFormat(format!("bad number {comp:?} on line {}", i + 2))
                })?;
            }
            cells.push(Vec3::new(lit(v[0]), lit(v[1]), lit(v[2])));
        }
        Self::new(width, height, sampling, cells)
    }

    fn cell(&self, col: usize, row: usize) -> Vec3<T> {
        self.cells[row * self.width + col]
    }

    /// Samples the grid at a texture coordinate inside `[0,1]^2`.
    pub fn sample(&self, f: TexCoord<T>) -> Result<Vec3<T>> {
        let zero = T::zero();
        let one = T::one();
        if !(f.s >= zero && f.s <= one && f.t >= zero && f.t <= one) {
            return Err(Error::OutOfRange {
                s: f.s.to_f64().unwrap_or(f64::NAN),
                t: f.t.to_f64().unwrap_or(f64::NAN),
            });
        }
        let w = lit::<T>(self.width as f64);
        let h = lit::<T>(self.height as f64);
        // Cell (0, 0) is top-left; t runs bottom-up.
        let gx = f.s * w - lit(0.5);
        let gy = (one - f.t) * h - lit(0.5);
        match self.sampling {
            Sampling::Nearest => {
                let col = clamp_index((f.s * w).floor(), self.width);
                let row = clamp_index(((one - f.t) * h).floor(), self.height);
                Ok(self.cell(col, row))
            }
            Sampling::Bilinear => {
                let x = gx.max(zero).min(w - one);
                let y = gy.max(zero).min(h - one);
                let col0 = clamp_index(x.floor(), self.width);
                let row0 = clamp_index(y.floor(), self.height);
                let col1 = (col0 + 1).min(self.width - 1);
                let row1 = (row0 + 1).min(self.height - 1);
                let fx = x - x.floor();
                let fy = y - y.floor();
                let top = self.cell(col0, row0) * (one - fx) + self.cell(col1, row0) * fx;
                let bottom = self.cell(col0, row1) * (one - fx) + self.cell(col1, row1) * fx;
                Ok(top * (one - fy) + bottom * fy)
            }
        }
    }
}

fn clamp_index<T: Real>(v: T, len: usize) -> usize {
    let idx = v.to_f64().unwrap_or(0.0).max(0.0) as usize;
    idx.min(len - 1)
}

/// A camera model translating picture coordinates to incident vectors.
#[derive(Debug, Clone, PartialEq)]
pub enum CameraModel<T> {
    Rectilinear(Rectilinear<T>),
    EquidistantFisheye(EquidistantFisheye<T>),
    VectorMap(VectorMapGrid<T>),
}

impl<T: Real> CameraModel<T> {
    /// Incident vector for a texture coordinate under this model.
    pub fn incident(&self, f: TexCoord<T>) -> Result<Vec3<T>> {
        match self {
            CameraModel::Rectilinear(m) => Ok(m.incident(f)),
            CameraModel::EquidistantFisheye(m) => Ok(m.incident(f).as_vec3()),
            CameraModel::VectorMap(g) => g.sample(f),
        }
    }

    /// Inverse of [`CameraModel::incident`] where the model supports it.
    pub fn project(&self, dir: Vec3<T>) -> Result<TexCoord<T>> {
        match self {
            CameraModel::Rectilinear(m) => m.project(dir),
            CameraModel::EquidistantFisheye(m) => m.project(dir),
            CameraModel::VectorMap(_) => Err(Error::UnsupportedModel),
        }
    }

    /// Picture aspect ratio (width over height).
    pub fn aspect(&self) -> T {
        match self {
            CameraModel::Rectilinear(m) => m.aspect(),
            CameraModel::EquidistantFisheye(m) => m.aspect(),
            CameraModel::VectorMap(g) => g.aspect(),
        }
    }
}
