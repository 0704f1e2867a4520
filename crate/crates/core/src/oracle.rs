//! Synthetic-camera oracle: places a marker with a known rigid transform,
//! projects its corners through a chosen camera model, optionally perturbs
//! the projection, and scores every solver output against ground truth.
//!
//! Everything here is deterministic per seed (ChaCha8 streams), so repeated
//! runs are bitwise identical. This module is `f64` only; the solvers it
//! drives stay generic.

use rand::RngExt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::camera::{AovAxis, CameraModel, EquidistantFisheye, Rectilinear, TexCoord};
use crate::error::{Error, Result};
use crate::linalg::{Corner, Quad2, Quad3, Vec2, Vec3};
use crate::pose::{PoseMatrix, pose_from_incidents};
use crate::reconstruct::{MarkerSpec, ScaleMode, reconstruct_scene};
use crate::rectify2d::{RectifyDirection, rectification_matrix, rectify_quad};

/// Rotation as three orthonormal basis vectors (determinant +1): the marker
/// frame axes expressed in camera coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    pub x: Vec3<f64>,
    pub y: Vec3<f64>,
    pub z: Vec3<f64>,
}

impl Rotation {
    pub fn identity() -> Self {
        Rotation {
            x: Vec3::new(1.0, 0.0, 0.0),
            y: Vec3::new(0.0, 1.0, 0.0),
            z: Vec3::new(0.0, 0.0, 1.0),
        }
    }

    pub fn about_x(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Rotation {
            x: Vec3::new(1.0, 0.0, 0.0),
            y: Vec3::new(0.0, c, s),
            z: Vec3::new(0.0, -s, c),
        }
    }

    pub fn about_y(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Rotation {
            x: Vec3::new(c, 0.0, -s),
            y: Vec3::new(0.0, 1.0, 0.0),
            z: Vec3::new(s, 0.0, c),
        }
    }

    pub fn about_z(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Rotation {
            x: Vec3::new(c, s, 0.0),
            y: Vec3::new(-s, c, 0.0),
            z: Vec3::new(0.0, 0.0, 1.0),
        }
    }

    /// Rodrigues rotation about a (not necessarily unit) axis.
    pub fn from_axis_angle(axis: Vec3<f64>, angle: f64) -> Self {
        let norm = axis.norm();
        if norm < 1e-300 {
            return Rotation::identity();
        }
        let k = axis / norm;
        let rotate = |v: Vec3<f64>| {
            let (s, c) = angle.sin_cos();
            v * c + k.cross(v) * s + k * (k.dot(v) * (1.0 - c))
        };
        Rotation {
            x: rotate(Vec3::new(1.0, 0.0, 0.0)),
            y: rotate(Vec3::new(0.0, 1.0, 0.0)),
            z: rotate(Vec3::new(0.0, 0.0, 1.0)),
        }
    }

    /// `self` applied after `other`.
    pub fn compose(&self, other: &Rotation) -> Rotation {
        Rotation {
            x: self.rotate(other.x),
            y: self.rotate(other.y),
            z: self.rotate(other.z),
        }
    }

    /// Maps marker-frame coordinates into the camera frame.
    pub fn rotate(&self, v: Vec3<f64>) -> Vec3<f64> {
        self.x * v.x + self.y * v.y + self.z * v.z
    }

    /// Maps camera-frame coordinates back into the marker frame.
    pub fn inverse_rotate(&self, v: Vec3<f64>) -> Vec3<f64> {
        Vec3::new(v.dot(self.x), v.dot(self.y), v.dot(self.z))
    }

    pub fn is_special_orthogonal(&self, tol: f64) -> bool {
        let unit = (self.x.norm() - 1.0).abs() < tol
            && (self.y.norm() - 1.0).abs() < tol
            && (self.z.norm() - 1.0).abs() < tol;
        let ortho = self.x.dot(self.y).abs() < tol
            && self.y.dot(self.z).abs() < tol
            && self.z.dot(self.x).abs() < tol;
        let det = self.x.cross(self.y).dot(self.z);
        unit && ortho && (det - 1.0).abs() < tol
    }
}

/// Rotation angle between a recovered pose and the true marker rotation.
///
/// Computed as `atan2(sin, cos)` of the relative rotation rather than
/// `acos((trace-1)/2)`: the arccosine form cannot resolve angles below
/// about 1e-8 in double precision, which would mask exact recoveries.
pub fn pose_angle_error(pose: &PoseMatrix<f64>, truth: &Rotation) -> f64 {
    let p = [
        pose.x_axis.as_vec3(),
        pose.y_axis.as_vec3(),
        pose.z_axis.as_vec3(),
    ];
    let r = [truth.x, truth.y, truth.z];
    let mut m = [[0.0; 3]; 3];
    for (i, pi) in p.iter().enumerate() {
        for (j, rj) in r.iter().enumerate() {
            m[i][j] = pi.dot(*rj);
        }
    }
    let trace = m[0][0] + m[1][1] + m[2][2];
    let cos = (trace - 1.0) / 2.0;
    let sin = 0.5 * Vec3::new(m[2][1] - m[1][2], m[0][2] - m[2][0], m[1][0] - m[0][1]).norm();
    sin.atan2(cos)
}

/// Which camera family a generated scene uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelKind {
    /// Rectilinear camera; `axis: None` samples the angle-of-view axis
    /// uniformly from the three choices per scene.
    Rectilinear {
        axis: Option<AovAxis>,
        aspect: f64,
    },
    EquidistantFisheye {
        aspect: f64,
    },
}

/// Sampling ranges for scene generation. Ranges are inclusive; a degenerate
/// range pins the value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneConfig {
    pub model: ModelKind,
    /// Angle of view range, degrees.
    pub aov_deg: (f64, f64),
    /// Angle between the marker normal and the optical axis, degrees.
    pub tilt_deg: (f64, f64),
    /// Distance from camera to marker center, in units of the longer
    /// marker side.
    pub distance: (f64, f64),
    /// Marker width over height.
    pub marker_aspect: (f64, f64),
    /// Marker corner angle at D, degrees. 90 yields rectangles.
    pub corner_angle_deg: (f64, f64),
    /// Maximum angular offset of the marker center from the optical axis,
    /// degrees per image axis.
    pub lateral_deg: f64,
}

impl Default for SceneConfig {
    fn default() -> Self {
        SceneConfig {
            model: ModelKind::Rectilinear {
                axis: None,
                aspect: 1.0,
            },
            aov_deg: (30.0, 150.0),
            tilt_deg: (0.0, 75.0),
            distance: (2.0, 20.0),
            marker_aspect: (1.0, 1.0),
            corner_angle_deg: (90.0, 90.0),
            lateral_deg: 5.0,
        }
    }
}

/// Ground truth for one synthetic scene.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneTruth {
    pub marker: MarkerSpec<f64>,
    /// Marker corner angle at D, radians.
    pub corner_angle_rad: f64,
    /// Marker axes in camera coordinates.
    pub rotation: Rotation,
    /// Marker origin (corner D) in camera coordinates.
    pub translation: Vec3<f64>,
    pub camera: CameraModel<f64>,
    /// Focal length in centered picture coordinates; rectilinear only.
    pub focal_equivalent: Option<f64>,
}

impl SceneTruth {
    /// Marker corners [A, B, C, D] in the marker frame: origin at D,
    /// x along D-to-C, the DA side at the corner angle.
    pub fn marker_corners(&self) -> [Vec3<f64>; 4] {
        let width = self.marker.side_c;
        let height = self.marker.side_d;
        let (sin_a, cos_a) = self.corner_angle_rad.sin_cos();
        let d = Vec3::new(0.0, 0.0, 0.0);
        let c = Vec3::new(width, 0.0, 0.0);
        let a = Vec3::new(height * cos_a, height * sin_a, 0.0);
        let b = c + a;
        [a, b, c, d]
    }

    /// Marker corners [A, B, C, D] in the camera frame.
    pub fn corners_camera(&self) -> [Vec3<f64>; 4] {
        self.marker_corners()
            .map(|p| self.rotation.rotate(p) + self.translation)
    }

    /// Camera origin expressed in the marker frame.
    pub fn camera_in_marker(&self) -> Vec3<f64> {
        -self.rotation.inverse_rotate(self.translation)
    }

    /// Length of the B-to-D marker diagonal.
    pub fn marker_diagonal(&self) -> f64 {
        let [_, b, _, d] = self.marker_corners();
        (b - d).norm()
    }
}

/// Projected scene: incident directions for every corner and, for rectilinear
/// cameras, the centered picture-plane image of the quad.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub incidents: Quad3<f64>,
    pub image: Option<Quad2<f64>>,
}

const MAX_ATTEMPTS: u32 = 1000;

fn sample_range(rng: &mut ChaCha8Rng, range: (f64, f64)) -> f64 {
    if range.0 == range.1 {
        range.0
    } else {
        rng.random_range(range.0..range.1)
    }
}

/// Generates a deterministic scene for `(seed, config)`: rotation sampled
/// uniformly within the tilt cap, camera parameters from the configured
/// ranges, regenerating (up to 1,000 attempts) until every corner is inside
/// the camera's coverage.
pub fn generate_scene(seed: u64, config: &SceneConfig) -> Result<SceneTruth> {
    for range in [
        config.aov_deg,
        config.tilt_deg,
        config.distance,
        config.marker_aspect,
        config.corner_angle_deg,
    ] {
        if !(range.0.is_finite() && range.1.is_finite() && range.0 <= range.1) {
            return Err(Error::InfeasibleConfig { attempts: 0 });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let aov = sample_range(&mut rng, config.aov_deg);
        let camera = match config.model {
            ModelKind::Rectilinear { axis, aspect } => {
                let axis = axis.unwrap_or_else(|| match rng.random_range(0..3u8) {
                    0 => AovAxis::Horizontal,
                    1 => AovAxis::Diagonal,
                    _ => AovAxis::Vertical,
                });
                CameraModel::Rectilinear(Rectilinear::new(aov, axis, aspect)?)
            }
            ModelKind::EquidistantFisheye { aspect } => {
                CameraModel::EquidistantFisheye(EquidistantFisheye::new(aov, aspect)?)
            }
        };

        let ratio = sample_range(&mut rng, config.marker_aspect);
        let corner_angle = sample_range(&mut rng, config.corner_angle_deg).to_radians();
        let marker = MarkerSpec::new(ratio, 1.0, ratio, 1.0, ratio)?;
        let distance = sample_range(&mut rng, config.distance) * ratio.max(1.0);

        // Marker normal uniform on the spherical cap around the optical axis.
        let (cos_hi, cos_lo) = (
            config.tilt_deg.1.to_radians().cos(),
            config.tilt_deg.0.to_radians().cos(),
        );
        let cos_tilt = if cos_hi == cos_lo {
            cos_lo
        } else {
            rng.random_range(cos_hi..cos_lo)
        };
        let tilt = cos_tilt.clamp(-1.0, 1.0).acos();
        let azimuth = rng.random_range(0.0..std::f64::consts::TAU);
        let spin = rng.random_range(0.0..std::f64::consts::TAU);
        let normal_axis = Vec3::new(-azimuth.sin(), azimuth.cos(), 0.0);
        let rotation =
            Rotation::from_axis_angle(normal_axis, tilt).compose(&Rotation::about_z(spin));

        let lateral = config.lateral_deg.to_radians();
        let ox = if lateral == 0.0 {
            0.0
        } else {
            rng.random_range(-lateral..lateral)
        };
        let oy = if lateral == 0.0 {
            0.0
        } else {
            rng.random_range(-lateral..lateral)
        };
        let view = Rotation::about_y(oy)
            .compose(&Rotation::about_x(ox))
            .rotate(Vec3::new(0.0, 0.0, 1.0));
        let center_cam = view * distance;

        let truth = {
            let mut t = SceneTruth {
                marker,
                corner_angle_rad: corner_angle,
                rotation,
                translation: Vec3::new(0.0, 0.0, 0.0),
                camera: camera.clone(),
                focal_equivalent: match &camera {
                    CameraModel::Rectilinear(m) => Some(m.focal_equivalent()),
                    _ => None,
                },
            };
            let center_m = {
                let [a, _, c, _] = t.marker_corners();
                (a + c) * 0.5
            };
            t.translation = center_cam - rotation.rotate(center_m);
            t
        };

        // Camera must face the marker front, with margin: edge-on scenes
        // have no usable projection.
        if rotation.z.dot(center_cam / distance) < 0.05 {
            continue;
        }
        let visible = truth.corners_camera().iter().all(|&corner| {
            corner.norm() > 1e-9
                && match truth.camera.project(corner) {
                    Ok(f) => (0.0..=1.0).contains(&f.s) && (0.0..=1.0).contains(&f.t),
                    Err(_) => false,
                }
        });
        if visible {
            return Ok(truth);
        }
    }
    Err(Error::InfeasibleConfig {
        attempts: MAX_ATTEMPTS,
    })
}

/// Projects the marker corners: camera-frame positions become unit incident
/// directions, and rectilinear cameras also produce the centered 2D image
/// on the plane z = focal_equivalent.
pub fn project_marker(truth: &SceneTruth) -> Result<Projection> {
    let corners = truth.corners_camera();
    for &corner in &corners {
        truth.camera.project(corner)?;
    }
    let units: Vec<Vec3<f64>> = corners
        .iter()
        .map(|&c| c.normalize().map(|u| u.as_vec3()))
        .collect::<Result<_>>()?;
    let incidents = Quad3::new(units[0], units[1], units[2], units[3])?;
    let image = match (&truth.camera, truth.focal_equivalent) {
        (CameraModel::Rectilinear(_), Some(f_eq)) => {
            let img = corners.map(|c| c.xy() * (f_eq / c.z));
            Some(Quad2::new(img[0], img[1], img[2], img[3])?)
        }
        _ => None,
    };
    Ok(Projection { incidents, image })
}

/// Adds independent zero-mean Gaussian offsets of standard deviation `sigma`
/// to each coordinate, deterministically per seed. Draw order is
/// `a.x, a.y, b.x, b.y, c.x, c.y, d.x, d.y`. `sigma = 0` returns the input
/// exactly.
pub fn perturb(image: &Quad2<f64>, sigma: f64, seed: u64) -> Quad2<f64> {
    assert!(sigma >= 0.0, "sigma must be non-negative");
    if sigma == 0.0 {
        return *image;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma).expect("finite sigma");
    let mut jitter = |p: Vec2<f64>| {
        let dx = normal.sample(&mut rng);
        let dy = normal.sample(&mut rng);
        Vec2::new(p.x + dx, p.y + dy)
    };
    Quad2 {
        a: jitter(image.a),
        b: jitter(image.b),
        c: jitter(image.c),
        d: jitter(image.d),
    }
}

/// Per-scene scores of the full pipeline against ground truth. Fields are
/// absent when the quantity does not exist for the scene (no finite focal,
/// no planar image) or when a solver failed; failures are recorded in
/// `failure` instead of being thrown.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundTripReport {
    /// Rotation angle between recovered and true pose, radians.
    pub pose_angle_error: Option<f64>,
    /// Max corner error over the marker diagonal.
    pub corner_error_rel: Option<f64>,
    /// Camera-position error over the camera distance.
    pub camera_pos_error_rel: Option<f64>,
    /// Relative focal-length error; absent when the estimator returned its
    /// parallel-sides sentinel or the scene has no finite focal.
    pub focal_error_rel: Option<f64>,
    /// Max deviation of the rectified corner angles from a right angle,
    /// radians, measured in true-focal picture units.
    pub rectified_angle_error: Option<f64>,
    /// Human-readable marker for a propagated solver error.
    pub failure: Option<String>,
}

impl RoundTripReport {
    fn empty() -> Self {
        RoundTripReport {
            pose_angle_error: None,
            corner_error_rel: None,
            camera_pos_error_rel: None,
            focal_error_rel: None,
            rectified_angle_error: None,
            failure: None,
        }
    }

    fn failed(err: &Error) -> Self {
        let mut report = Self::empty();
        report.failure = Some(err.to_string());
        report
    }

    /// One CSV line: `seed,sigma,pose_err,corner_err,campos_err,focal_err,rect_angle_err`
    /// with `NA` for absent fields.
    pub fn csv_row(&self, seed: u64, sigma: f64) -> String {
        fn cell(v: Option<f64>) -> String {
            v.map_or_else(|| "NA".to_string(), |x| format!("{x:e}"))
        }
        format!(
            "{seed},{sigma:e},{},{},{},{},{}",
            cell(self.pose_angle_error),
            cell(self.corner_error_rel),
            cell(self.camera_pos_error_rel),
            cell(self.focal_error_rel),
            cell(self.rectified_angle_error),
        )
    }
}

fn perturbed_input(
    truth: &SceneTruth,
    projection: &Projection,
    sigma: f64,
    seed: u64,
) -> Result<(Quad3<f64>, Option<Quad2<f64>>)> {
    match (&truth.camera, &projection.image, truth.focal_equivalent) {
        (CameraModel::Rectilinear(_), Some(image), Some(f_eq)) => {
            let noisy = perturb(image, sigma, seed);
            let lifted = noisy.corners().map(|p| Vec3::new(p.x, p.y, f_eq));
            let incidents = Quad3::new(lifted[0], lifted[1], lifted[2], lifted[3])?;
            Ok((incidents, Some(noisy)))
        }
        _ => {
            // No planar image: perturb in centered picture coordinates and
            // push the noise back through the camera model.
            let aspect = truth.camera.aspect();
            let corners = truth.corners_camera();
            let mut centered = [Vec2::new(0.0, 0.0); 4];
            for (slot, &corner) in centered.iter_mut().zip(&corners) {
                *slot = truth.camera.project(corner)?.to_centered(aspect);
            }
            let picture = Quad2 {
                a: centered[0],
                b: centered[1],
                c: centered[2],
                d: centered[3],
            };
            let noisy = perturb(&picture, sigma, seed);
            let mut incidents = [Vec3::new(0.0, 0.0, 0.0); 4];
            for (slot, p) in incidents.iter_mut().zip(noisy.corners()) {
                *slot = truth.camera.incident(TexCoord::from_centered(p, aspect))?;
            }
            Ok((
                Quad3::new(incidents[0], incidents[1], incidents[2], incidents[3])?,
                None,
            ))
        }
    }
}

/// Runs the full pipeline against one scene and scores every stage.
pub fn roundtrip(truth: &SceneTruth, sigma: f64, seed: u64) -> RoundTripReport {
    let projection = match project_marker(truth) {
        Ok(p) => p,
        Err(e) => return RoundTripReport::failed(&e),
    };
    let (incidents, image) = if sigma > 0.0 {
        match perturbed_input(truth, &projection, sigma, seed) {
            Ok(pair) => pair,
            Err(e) => return RoundTripReport::failed(&e),
        }
    } else {
        (projection.incidents, projection.image)
    };

    let mut report = RoundTripReport::empty();
    let pose = match pose_from_incidents(&incidents) {
        Ok(p) => p,
        Err(e) => return RoundTripReport::failed(&e),
    };
    report.pose_angle_error = Some(pose_angle_error(&pose, &truth.rotation));

    match reconstruct_scene(
        &incidents,
        &truth.marker,
        &pose,
        Corner::C,
        ScaleMode::BySideA,
    ) {
        Ok(recon) => {
            let truth_corners = truth.corners_camera();
            let diagonal = truth.marker_diagonal();
            let worst = recon
                .points
                .corners()
                .iter()
                .zip(&truth_corners)
                .map(|(got, want)| (*got - *want).norm())
                .fold(0.0f64, f64::max);
            report.corner_error_rel = Some(worst / diagonal);

            let truth_pos = truth.camera_in_marker();
            report.camera_pos_error_rel =
                Some((recon.camera_in_marker - truth_pos).norm() / truth_pos.norm());
        }
        Err(e) => {
            report.failure = Some(e.to_string());
            return report;
        }
    }

    if let (Some(img), Some(f_eq)) = (&image, truth.focal_equivalent) {
        if let Ok(matrix) = rectification_matrix(img) {
            let est = crate::focal::estimate_focal(&matrix);
            if est.focal > 0.0 {
                report.focal_error_rel = Some((est.focal - f_eq).abs() / f_eq);
            }
        }
        // Rectified angles are metric only in true-focal picture units.
        let unit_image = img.map(|p| p / f_eq);
        if let Ok(matrix) = rectification_matrix(&unit_image)
            && let Ok(rectified) = rectify_quad(&unit_image, &matrix, RectifyDirection::Forward)
        {
            let corners = rectified.corners();
            let mut worst = 0.0f64;
            for i in 0..4 {
                let prev = corners[(i + 3) % 4] - corners[i];
                let next = corners[(i + 1) % 4] - corners[i];
                let angle = (prev.dot(next) / (prev.norm() * next.norm()))
                    .clamp(-1.0, 1.0)
                    .acos();
                worst = worst.max((angle - std::f64::consts::FRAC_PI_2).abs());
            }
            report.rectified_angle_error = Some(worst);
        }
    }
    report
}
