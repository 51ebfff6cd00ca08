//! File-driven command-line entry point.
//!
//! Every command reads JSON inputs, runs one analysis, and emits a versioned
//! JSON report (stdout or `--out-json`) plus an optional SVG overlay.
//! Outputs are deterministic functions of the inputs and the seed.

use clap::{Parser, Subcommand};
use serde::Serialize;
use std::path::{Path, PathBuf};

use crate::analysis::{
    log_on_set, validate_derivative, winding_number_detailed, AnalyticFn, LogResult,
};
use crate::error::Error;
use crate::geometry::{rasterize, GridSet, SceneFile};
use crate::report::Report;
use crate::svg::SvgScene;
use crate::tolerances::Tolerances;
use crate::topology::{
    circle_arcs, components, enclosing_curve, filling, is_arakelian, PolyPath, RegionInfo,
};
use crate::witness::{witness_step1, witness_step2};
use crate::Result;

#[derive(Parser, Debug)]
#[command(
    name = "arakelian",
    version,
    about = "Hole analysis of closed planar sets: classification, logarithm branches, winding obstructions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for randomized probe points in validation reports.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Override the zero-tolerance scale factor (also: ARAKELIAN_TOL_ZERO).
    #[arg(long, global = true)]
    pub tol_zero: Option<f64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out_json: Option<PathBuf>,
    /// Write an SVG rendering here.
    #[arg(long, global = true)]
    pub out_svg: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify the scene set as arakelian / notArakelian / inconclusive.
    Analyze {
        #[arg(long)]
        scene: PathBuf,
        /// Largest enlargement-disk radius to test.
        #[arg(long, default_value_t = 1)]
        n_max: u32,
    },
    /// List the holes (bounded complement components) of the scene set.
    Holes {
        #[arg(long)]
        scene: PathBuf,
    },
    /// Fill a bounded complement component.
    Fill {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        label: i32,
    },
    /// Extract a closed curve enclosing a hole's representative.
    Curve {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        label: i32,
        #[arg(long)]
        epsilon: f64,
    },
    /// Winding number of a function along a closed path.
    Winding {
        #[arg(long)]
        function: PathBuf,
        /// JSON path file: {"points": [{"re", "im"}, ...], "closed": true}.
        #[arg(long)]
        path: PathBuf,
    },
    /// Construct a logarithm branch of a function over the scene set.
    Log {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        function: PathBuf,
    },
    /// Witness for a set with a hole.
    Witness1 {
        #[arg(long)]
        scene: PathBuf,
        /// Hole label; defaults to the first hole.
        #[arg(long)]
        label: Option<i32>,
    },
    /// Witness for a hole-free set whose disk enlargement grows
    /// margin-reaching holes.
    Witness2 {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        n0: u32,
        /// Circle samples per unit arc length; 0 picks 2/h.
        #[arg(long, default_value_t = 0)]
        samples_per_unit: u32,
    },
    /// Render the scene (and optional circle overlay) to SVG.
    Render {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        n0: Option<u32>,
    },
}

pub struct RunOutput {
    pub json: String,
    pub svg: Option<String>,
}

fn load_scene(path: &Path) -> Result<(SceneFile, GridSet)> {
    let text = std::fs::read_to_string(path)?;
    let file: SceneFile = serde_json::from_str(&text)?;
    file.window.validate()?;
    file.scene().validate()?;
    let set = rasterize(&file.scene(), file.window)?;
    Ok((file, set))
}

fn load_function(path: &Path) -> Result<AnalyticFn> {
    let text = std::fs::read_to_string(path)?;
    let f: AnalyticFn = serde_json::from_str(&text)?;
    f.validate()?;
    Ok(f)
}

fn load_path(path: &Path) -> Result<PolyPath> {
    let text = std::fs::read_to_string(path)?;
    let p: PolyPath = serde_json::from_str(&text)?;
    PolyPath::new(p.points, p.closed)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct HolesPayload {
    holes: Vec<RegionInfo>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct FillPayload {
    label: i32,
    cell_count: usize,
    complement_components: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CurvePayload {
    label: i32,
    epsilon: f64,
    vertex_count: usize,
    gamma: PolyPath,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct WindingPayload {
    winding: i64,
    pre_rounding_estimate: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct DerivativeCheck {
    probes: usize,
    max_relative_error: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
#[serde(tag = "outcome")]
enum LogPayload {
    #[serde(rename_all = "camelCase")]
    LogGrid {
        cells: usize,
        components: usize,
        max_residual: f64,
        max_adjacent_jump: f64,
        derivative_check: DerivativeCheck,
    },
    #[serde(rename_all = "camelCase")]
    Obstruction {
        obstruction: crate::analysis::Obstruction,
        derivative_check: DerivativeCheck,
    },
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct RenderPayload {
    cells: usize,
    rendered: bool,
}

/// Execute one command; pure apart from reading the input files.
pub fn run(cli: &Cli) -> Result<RunOutput> {
    let mut tols = Tolerances::from_env();
    if let Some(t) = cli.tol_zero {
        if !t.is_finite() || t <= 0.0 {
            return Err(Error::Schema("tol-zero must be positive".into()));
        }
        tols.tol_zero_factor = t;
    }
    let seed = cli.seed;

    match &cli.command {
        Command::Analyze { scene, n_max } => {
            let (_, set) = load_scene(scene)?;
            let report = is_arakelian(&set, *n_max)?;
            let labeling = components(&set);
            let svg = SvgScene {
                set: Some(&set),
                labeling: Some(&labeling),
                markers: report.holes.iter().map(|h| h.representative).collect(),
                ..Default::default()
            }
            .render();
            finish("analyze", seed, scene, report, Some(svg))
        }
        Command::Holes { scene } => {
            let (_, set) = load_scene(scene)?;
            let labeling = components(&set);
            let holes: Vec<RegionInfo> = labeling
                .regions
                .iter()
                .filter(|r| r.is_hole())
                .cloned()
                .collect();
            let svg = SvgScene {
                set: Some(&set),
                labeling: Some(&labeling),
                markers: holes.iter().map(|h| h.representative).collect(),
                ..Default::default()
            }
            .render();
            finish("holes", seed, scene, HolesPayload { holes }, Some(svg))
        }
        Command::Fill { scene, label } => {
            let (_, set) = load_scene(scene)?;
            let labeling = components(&set);
            let v = filling(&labeling, *label)?;
            let comp = components(&v);
            let svg = SvgScene {
                set: Some(&v),
                ..Default::default()
            }
            .render();
            finish(
                "fill",
                seed,
                scene,
                FillPayload {
                    label: *label,
                    cell_count: v.marked_count(),
                    complement_components: comp.regions.len(),
                },
                Some(svg),
            )
        }
        Command::Curve {
            scene,
            label,
            epsilon,
        } => {
            let (_, set) = load_scene(scene)?;
            let labeling = components(&set);
            let region = labeling
                .region(*label)
                .ok_or_else(|| Error::Domain(format!("no component with label {label}")))?
                .clone();
            if !region.is_hole() {
                return Err(Error::Domain(format!("component {label} is not a hole")));
            }
            let v = filling(&labeling, *label)?;
            let gamma = enclosing_curve(&v, region.representative, *epsilon)?;
            let svg = SvgScene {
                set: Some(&set),
                curve: Some(&gamma),
                markers: vec![region.representative],
                ..Default::default()
            }
            .render();
            finish(
                "curve",
                seed,
                scene,
                CurvePayload {
                    label: *label,
                    epsilon: *epsilon,
                    vertex_count: gamma.points.len(),
                    gamma,
                },
                Some(svg),
            )
        }
        Command::Winding { function, path } => {
            let f = load_function(function)?;
            let gamma = load_path(path)?;
            let (winding, raw) = winding_number_detailed(&f, &gamma, &tols)?;
            let report = Report::new(
                "winding",
                seed,
                None,
                WindingPayload {
                    winding,
                    pre_rounding_estimate: raw,
                },
            )?;
            Ok(RunOutput {
                json: report.to_json()?,
                svg: None,
            })
        }
        Command::Log { scene, function } => {
            let (file, set) = load_scene(scene)?;
            let f = load_function(function)?;
            let half = file
                .window
                .xmax
                .abs()
                .max(file.window.xmin.abs())
                .max(file.window.ymax.abs())
                .max(file.window.ymin.abs());
            let fd = validate_derivative(&f, half, seed, 20)?;
            let check = DerivativeCheck {
                probes: 20,
                max_relative_error: fd,
            };
            let (payload, svg) = match log_on_set(&f, &set, &tols)? {
                LogResult::Grid(grid) => {
                    let svg = SvgScene {
                        set: Some(&set),
                        ..Default::default()
                    }
                    .render();
                    (
                        LogPayload::LogGrid {
                            cells: set.marked_count(),
                            components: grid.roots.len(),
                            max_residual: grid.max_residual,
                            max_adjacent_jump: grid.max_adjacent_jump,
                            derivative_check: check,
                        },
                        svg,
                    )
                }
                LogResult::Obstruction(ob) => {
                    let svg = SvgScene {
                        set: Some(&set),
                        curve: Some(&ob.cycle),
                        ..Default::default()
                    }
                    .render();
                    (
                        LogPayload::Obstruction {
                            obstruction: ob,
                            derivative_check: check,
                        },
                        svg,
                    )
                }
            };
            finish("log", seed, scene, payload, Some(svg))
        }
        Command::Witness1 { scene, label } => {
            let (_, set) = load_scene(scene)?;
            let report = witness_step1(&set, *label, &tols)?;
            let svg = SvgScene {
                set: Some(&set),
                curve: Some(&report.gamma),
                markers: report.zeta.into_iter().collect(),
                ..Default::default()
            }
            .render();
            finish("witness1", seed, scene, report, Some(svg))
        }
        Command::Witness2 {
            scene,
            n0,
            samples_per_unit,
        } => {
            let (file, set) = load_scene(scene)?;
            let spu = if *samples_per_unit == 0 {
                (2.0 / file.window.h).ceil() as u32
            } else {
                *samples_per_unit
            };
            let report = witness_step2(&set, *n0, spu, &tols)?;
            let svg = SvgScene {
                set: Some(&set),
                curve: Some(&report.gamma),
                arcs: report.arcs.as_ref(),
                circle: Some(*n0 as f64),
                markers: report.zetas.clone(),
                ..Default::default()
            }
            .render();
            finish("witness2", seed, scene, report, Some(svg))
        }
        Command::Render { scene, n0 } => {
            let (_, set) = load_scene(scene)?;
            let labeling = components(&set);
            let arcs = match n0 {
                Some(r) => {
                    let disk = rasterize(
                        &crate::geometry::Scene::default().union(
                            crate::geometry::ShapeKind::Disk {
                                cx: 0.0,
                                cy: 0.0,
                                r: *r as f64,
                            },
                        ),
                        set.window,
                    )?;
                    let enlarged = set.union_with(&disk)?;
                    let labeling2 = components(&enlarged);
                    let spu = (2.0 / set.window.h).ceil() as u32;
                    Some(circle_arcs(&set, &labeling2, *r, spu)?)
                }
                None => None,
            };
            let svg = SvgScene {
                set: Some(&set),
                labeling: Some(&labeling),
                arcs: arcs.as_ref(),
                circle: n0.map(|r| r as f64),
                ..Default::default()
            }
            .render();
            finish(
                "render",
                seed,
                scene,
                RenderPayload {
                    cells: set.marked_count(),
                    rendered: true,
                },
                Some(svg),
            )
        }
    }
}

fn finish(
    command: &str,
    seed: u64,
    scene: &Path,
    payload: impl Serialize,
    svg: Option<String>,
) -> Result<RunOutput> {
    let report = Report::new(
        command,
        seed,
        Some(scene.file_name().unwrap_or_default().to_string_lossy().into_owned()),
        payload,
    )?;
    Ok(RunOutput {
        json: report.to_json()?,
        svg,
    })
}
