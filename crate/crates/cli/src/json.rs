//! JSON input schemas and output assembly.

use serde::Deserialize;
use serde_json::{Value, json};

use quadpose::camera::AovAxis;
use quadpose::linalg::Quad2 as GenQuad2;
use quadpose::pose::PoseMatrix as GenPose;
use quadpose::rectify2d::RectifyMatrix as GenRectify;
use quadpose::{Vec2, Vec3};

#[derive(Debug, Deserialize)]
pub struct QuadIn {
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub c: [f64; 2],
    pub d: [f64; 2],
}

impl QuadIn {
    pub fn corners(&self) -> [Vec2; 4] {
        [self.a, self.b, self.c, self.d].map(|[x, y]| Vec2::new(x, y))
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisIn {
    Horizontal,
    Diagonal,
    Vertical,
}

impl From<AxisIn> for AovAxis {
    fn from(axis: AxisIn) -> Self {
        match axis {
            AxisIn::Horizontal => AovAxis::Horizontal,
            AxisIn::Diagonal => AovAxis::Diagonal,
            AxisIn::Vertical => AovAxis::Vertical,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum CameraIn {
    Rectilinear {
        aov_deg: f64,
        axis: AxisIn,
        aspect: f64,
    },
    Fisheye {
        aov_deg: f64,
        aspect: f64,
    },
    Vmap {
        path: String,
    },
}

#[derive(Debug, Deserialize)]
pub struct PoseInput {
    pub quad: QuadIn,
    pub camera: CameraIn,
}

#[derive(Debug, Deserialize)]
pub struct QuadInput {
    pub quad: QuadIn,
}

#[derive(Debug, Deserialize)]
pub struct MarkerIn {
    pub sides: [f64; 4],
    pub aspect: f64,
}

/// Camera template for `simulate`: the angle of view is sampled from the
/// default range unless pinned here.
#[derive(Debug, Deserialize)]
pub struct SimModelIn {
    pub model: String,
    #[serde(default)]
    pub aov_deg: Option<f64>,
    #[serde(default)]
    pub axis: Option<AxisIn>,
    #[serde(default)]
    pub aspect: Option<f64>,
}

pub fn vec2_json(v: Vec2) -> Value {
    json!([v.x, v.y])
}

pub fn vec3_json(v: Vec3) -> Value {
    json!([v.x, v.y, v.z])
}

pub fn pose_json(p: &GenPose<f64>) -> Value {
    json!({
        "x": vec3_json(p.x_axis.as_vec3()),
        "y": vec3_json(p.y_axis.as_vec3()),
        "z": vec3_json(p.z_axis.as_vec3()),
    })
}

pub fn matrix_json(m: &GenRectify<f64>) -> Value {
    json!({
        "x": vec3_json(m.x_axis.as_vec3()),
        "y": vec3_json(m.y_axis.as_vec3()),
        "z": vec3_json(m.z_axis.as_vec3()),
    })
}

pub fn quad2_json(q: &GenQuad2<f64>) -> Value {
    json!({
        "a": vec2_json(q.a),
        "b": vec2_json(q.b),
        "c": vec2_json(q.c),
        "d": vec2_json(q.d),
    })
}
