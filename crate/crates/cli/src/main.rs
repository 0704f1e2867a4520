//! Command-line surface: JSON in/out for each solver, pixel-to-centered
//! conversion, vector-map loading, and the simulation batch runner.
//!
//! Exit codes: 0 success, 2 input validation failure, 3 geometric
//! degeneracy, 1 internal error.

mod convert;
mod json;

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Value, json};

use convert::ImageFrame;
use json::{
    CameraIn, MarkerIn, PoseInput, QuadIn, QuadInput, SimModelIn, matrix_json, pose_json,
    quad2_json, vec2_json, vec3_json,
};
use quadpose::focal::{estimate_focal, estimate_focal_from_quad, vanishing_point};
use quadpose::linalg::DEGENERACY_EPS;
use quadpose::oracle::{ModelKind, SceneConfig, generate_scene, roundtrip};
use quadpose::pose::pose_from_incidents;
use quadpose::reconstruct::{ScaleMode, reconstruct_scene};
use quadpose::rectify2d::{
    RectifyDirection, aspect_correction_factor, normalize_to_unit, rectification_matrix,
    rectify_point, rectify_quad,
};
use quadpose::{
    CameraModel, Corner, EquidistantFisheye, LineIntersection, MarkerSpec, Quad2, Quad3,
    Rectilinear, TexCoord, VanishingPoint, Vec2, Vec3, VectorMapGrid,
};

/// Mixed into the scene seed to derive the per-scene noise stream.
const NOISE_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Parser)]
#[command(
    name = "quadpose",
    version,
    about = "Closed-form pose, metric reconstruction, perspective rectification, \
             and focal estimation for rectangular markers"
)]
struct Cli {
    /// Treat all 2D point inputs as pixel coordinates in a WxH image
    /// (origin top-left, y down) and convert them to centered coordinates.
    #[arg(long, global = true, value_name = "WxH")]
    pixels: Option<String>,

    /// Pretty-print the JSON output.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Forward,
    Inverse,
}

#[derive(Subcommand)]
enum Command {
    /// Recover the marker pose from four corners seen through a camera model.
    Pose {
        /// Input JSON file, or `-` for stdin.
        #[arg(long, value_name = "FILE|-")]
        input: String,
    },
    /// Recover pose, metric corner positions, camera position, and scale.
    Reconstruct {
        #[arg(long, value_name = "FILE|-")]
        input: String,
        /// Marker dimensions: {"sides":[a,b,c,d],"aspect":r}.
        #[arg(long, value_name = "JSON")]
        marker: String,
    },
    /// Rectify the quad (and optional extra points) with no lens information.
    Rectify {
        #[arg(long, value_name = "FILE|-")]
        input: String,
        /// Apply the aspect correction for a marker with this width/height ratio.
        #[arg(long, value_name = "R")]
        marker_aspect: Option<f64>,
        /// Map rectified corners (and forward points) into the unit square.
        #[arg(long)]
        normalize: bool,
        /// Mapping direction for --points; corners always map forward.
        #[arg(long, value_enum, default_value_t = DirectionArg::Forward)]
        direction: DirectionArg,
        /// Extra points to map: [[x,y],...].
        #[arg(long, value_name = "JSON")]
        points: Option<String>,
    },
    /// Estimate the focal length from the quad's vanishing points.
    Focal {
        #[arg(long, value_name = "FILE|-")]
        input: String,
    },
    /// Intersect line AB with line CD.
    Intersect {
        #[arg(long, value_name = "X,Y")]
        a: String,
        #[arg(long, value_name = "X,Y")]
        b: String,
        #[arg(long, value_name = "X,Y")]
        c: String,
        #[arg(long, value_name = "X,Y")]
        d: String,
    },
    /// Run synthetic round-trip scenes and write one CSV row per scene.
    Simulate {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        scenes: u64,
        /// Gaussian corner noise in centered coordinate units.
        #[arg(long, default_value_t = 0.0)]
        sigma: f64,
        /// Camera template, e.g. {"model":"rectilinear","axis":"vertical","aspect":1.0}.
        /// Omitting aov_deg samples it from the default range.
        #[arg(long, value_name = "JSON")]
        model: String,
        /// Output CSV path.
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
}

enum CliError {
    Usage(String),
    Degenerate(String),
    Internal(String),
}

impl From<quadpose::Error> for CliError {
    fn from(err: quadpose::Error) -> Self {
        if err.is_degeneracy() {
            CliError::Degenerate(err.to_string())
        } else {
            CliError::Usage(err.to_string())
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::Usage(format!("invalid JSON: {err}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let frame = match cli.pixels.as_deref().map(ImageFrame::parse).transpose() {
        Ok(frame) => frame,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match run(cli.command, frame) {
        Ok(value) => {
            let rendered = if cli.pretty {
                serde_json::to_string_pretty(&value)
            } else {
                serde_json::to_string(&value)
            };
            match rendered {
                Ok(text) => {
                    println!("{text}");
                    ExitCode::SUCCESS
                }
                Err(err) => {
                    eprintln!("error: {err}");
                    ExitCode::from(1)
                }
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Degenerate(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))
    }
}

fn quad_from(input: &QuadIn, frame: Option<ImageFrame>) -> Result<Quad2, CliError> {
    let [a, b, c, d] = input
        .corners()
        .map(|p| frame.map_or(p, |f| f.center_coords(p)));
    Ok(Quad2::new(a, b, c, d)?)
}

fn build_camera(input: CameraIn) -> Result<CameraModel, CliError> {
    Ok(match input {
        CameraIn::Rectilinear {
            aov_deg,
            axis,
            aspect,
        } => CameraModel::Rectilinear(Rectilinear::new(aov_deg, axis.into(), aspect)?),
        CameraIn::Fisheye { aov_deg, aspect } => {
            CameraModel::EquidistantFisheye(EquidistantFisheye::new(aov_deg, aspect)?)
        }
        CameraIn::Vmap { path } => {
            let text = fs::read_to_string(&path)
                .map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
            CameraModel::VectorMap(VectorMapGrid::parse(&text)?)
        }
    })
}

/// Centered corners to incident vectors through the camera model.
fn incidents_from(camera: &CameraModel, quad: &Quad2) -> Result<Quad3, CliError> {
    let aspect = camera.aspect();
    let corners = quad.corners();
    let mut incidents = [Vec3::new(0.0, 0.0, 0.0); 4];
    for (slot, &p) in incidents.iter_mut().zip(&corners) {
        *slot = camera.incident(TexCoord::from_centered(p, aspect))?;
    }
    Ok(Quad3::new(
        incidents[0],
        incidents[1],
        incidents[2],
        incidents[3],
    )?)
}

fn parse_point_arg(text: &str, frame: Option<ImageFrame>) -> Result<Vec2, CliError> {
    let (x, y) = text
        .split_once(',')
        .ok_or_else(|| CliError::Usage(format!("expected x,y, got {text:?}")))?;
    let x: f64 = x
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad coordinate {x:?}")))?;
    let y: f64 = y
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad coordinate {y:?}")))?;
    let p = Vec2::new(x, y);
    if !p.is_finite() {
        return Err(CliError::Usage(format!("non-finite point {text:?}")));
    }
    Ok(frame.map_or(p, |f| f.center_coords(p)))
}

fn run(command: Command, frame: Option<ImageFrame>) -> Result<Value, CliError> {
    match command {
        Command::Pose { input } => {
            let parsed: PoseInput = serde_json::from_str(&read_input(&input)?)?;
            let quad = quad_from(&parsed.quad, frame)?;
            let camera = build_camera(parsed.camera)?;
            let incidents = incidents_from(&camera, &quad)?;
            let pose = pose_from_incidents(&incidents)?;
            Ok(json!({ "pose": pose_json(&pose) }))
        }

        Command::Reconstruct { input, marker } => {
            let parsed: PoseInput = serde_json::from_str(&read_input(&input)?)?;
            let marker: MarkerIn = serde_json::from_str(&marker)?;
            let spec = MarkerSpec::new(
                marker.sides[0],
                marker.sides[1],
                marker.sides[2],
                marker.sides[3],
                marker.aspect,
            )?;
            let quad = quad_from(&parsed.quad, frame)?;
            let camera = build_camera(parsed.camera)?;
            let incidents = incidents_from(&camera, &quad)?;
            let pose = pose_from_incidents(&incidents)?;
            let scene = reconstruct_scene(&incidents, &spec, &pose, Corner::C, ScaleMode::BySideA)?;
            Ok(json!({
                "pose": pose_json(&pose),
                "corners": {
                    "a": vec3_json(scene.points.a),
                    "b": vec3_json(scene.points.b),
                    "c": vec3_json(scene.points.c),
                    "d": vec3_json(scene.points.d),
                },
                "camera_position": vec3_json(scene.camera_in_marker),
                "scale": scene.scale_u,
            }))
        }

        Command::Rectify {
            input,
            marker_aspect,
            normalize,
            direction,
            points,
        } => {
            let parsed: QuadInput = serde_json::from_str(&read_input(&input)?)?;
            let quad = quad_from(&parsed.quad, frame)?;
            let matrix = rectification_matrix(&quad)?;
            let rectified = rectify_quad(&quad, &matrix, RectifyDirection::Forward)?;
            let factor = marker_aspect
                .map(|r| aspect_correction_factor(&matrix, &quad, r))
                .transpose()?;
            let corrected = match factor {
                Some(k) => rectified.map(|p| Vec2::new(k * p.x, p.y)),
                None => rectified,
            };
            let out_corners = if normalize {
                let mapped = corrected
                    .corners()
                    .map(|p| normalize_to_unit(p, &corrected));
                let mut resolved = [Vec2::new(0.0, 0.0); 4];
                for (slot, value) in resolved.iter_mut().zip(mapped) {
                    *slot = value?;
                }
                Quad2 {
                    a: resolved[0],
                    b: resolved[1],
                    c: resolved[2],
                    d: resolved[3],
                }
            } else {
                corrected
            };

            let est = estimate_focal(&matrix);
            let mut output = json!({
                "matrix": matrix_json(&matrix),
                "corners": quad2_json(&out_corners),
                "focal": est.focal,
                "consistent": est.consistent,
            });
            if let Some(k) = factor {
                output["aspect_factor"] = json!(k);
            }
            if let Some(points) = points {
                let raw: Vec<[f64; 2]> = serde_json::from_str(&points)?;
                let dir = match direction {
                    DirectionArg::Forward => RectifyDirection::Forward,
                    DirectionArg::Inverse => RectifyDirection::Inverse,
                };
                let mut mapped = Vec::with_capacity(raw.len());
                for [x, y] in raw {
                    let p = Vec2::new(x, y);
                    if !p.is_finite() {
                        return Err(CliError::Usage("non-finite point".into()));
                    }
                    let p = frame.map_or(p, |f| f.center_coords(p));
                    let mut r = rectify_point(p, &matrix, dir)?;
                    if matches!(direction, DirectionArg::Forward) {
                        if let Some(k) = factor {
                            r.x *= k;
                        }
                        if normalize {
                            r = normalize_to_unit(r, &corrected)?;
                        }
                    }
                    mapped.push(vec2_json(r));
                }
                output["points"] = Value::Array(mapped);
            }
            Ok(output)
        }

        Command::Focal { input } => {
            let parsed: QuadInput = serde_json::from_str(&read_input(&input)?)?;
            let quad = quad_from(&parsed.quad, frame)?;
            let est = estimate_focal_from_quad(&quad)?;
            let matrix = rectification_matrix(&quad)?;
            let vp_json = |axis| match vanishing_point(axis) {
                Ok(VanishingPoint::Finite(p)) => vec2_json(p),
                _ => Value::Null,
            };
            Ok(json!({
                "focal": est.focal,
                "consistent": est.consistent,
                "vanishing_x": vp_json(matrix.x_axis),
                "vanishing_y": vp_json(matrix.y_axis),
            }))
        }

        Command::Intersect { a, b, c, d } => {
            let a = parse_point_arg(&a, frame)?;
            let b = parse_point_arg(&b, frame)?;
            let c = parse_point_arg(&c, frame)?;
            let d = parse_point_arg(&d, frame)?;
            match quadpose::focal::intersect_lines(a, b, c, d)? {
                LineIntersection::Point(p) => Ok(json!({ "point": vec2_json(p) })),
                LineIntersection::Parallel => Ok(json!({ "parallel": true })),
            }
        }

        Command::Simulate {
            seed,
            scenes,
            sigma,
            model,
            out,
        } => {
            if !(sigma.is_finite() && sigma >= 0.0) {
                return Err(CliError::Usage(format!("sigma must be >= 0, got {sigma}")));
            }
            let template: SimModelIn = serde_json::from_str(&model)?;
            let aspect = template.aspect.unwrap_or(1.0);
            if !(aspect.is_finite() && aspect > DEGENERACY_EPS) {
                return Err(CliError::Usage(format!("bad aspect {aspect}")));
            }
            let kind = match template.model.as_str() {
                "rectilinear" => ModelKind::Rectilinear {
                    axis: template.axis.map(Into::into),
                    aspect,
                },
                "fisheye" => ModelKind::EquidistantFisheye { aspect },
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown model {other:?}; expected rectilinear or fisheye"
                    )));
                }
            };
            let mut config = SceneConfig {
                model: kind,
                ..SceneConfig::default()
            };
            if let Some(aov) = template.aov_deg {
                config.aov_deg = (aov, aov);
            }
            let mut csv = String::new();
            for i in 0..scenes {
                let scene_seed = seed.wrapping_add(i);
                let truth = generate_scene(scene_seed, &config)?;
                let report = roundtrip(&truth, sigma, scene_seed ^ NOISE_SALT);
                csv.push_str(&report.csv_row(scene_seed, sigma));
                csv.push('\n');
            }
            fs::write(&out, csv)
                .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", out.display())))?;
            Ok(json!({ "scenes": scenes, "out": out.display().to_string() }))
        }
    }
}
