//! Bundled scene corpus with recorded expected verdicts.
//!
//! The pocket scenes are the engineered failure cases for the second hole
//! condition: each pocket chamber is connected to the ambient region only
//! through its own thin corridor running through the unit disk, so adding
//! the disk severs every corridor at once and the resulting holes sit at
//! increasing radii. In the full windows the farthest chamber reaches the
//! window margin (a window-scale certificate of unbounded hole growth); the
//! shrunk variants cut that chamber off, leaving growth visible but
//! unbounded-ness uncertifiable — the engineered inconclusive cases.

use crate::geometry::{Scene, SceneFile, ShapeKind, Window};
use crate::topology::Verdict;

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub window: Window,
    pub scene: Scene,
    /// Largest disk radius for the classifier.
    pub n_max: u32,
    /// Witness radius for the step-2 scenes.
    pub n0: Option<u32>,
    pub expected: Verdict,
    pub reason_code: &'static str,
    pub has_holes: bool,
}

impl CorpusEntry {
    pub fn scene_file(&self) -> SceneFile {
        SceneFile {
            window: self.window,
            shapes: self.scene.shapes.clone(),
        }
    }
}

fn window(half: f64, cells: u32) -> Window {
    let h = 2.0 * half / cells as f64;
    Window::new(-half, half, -half, half, h).expect("corpus window")
}

fn rect(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> ShapeKind {
    ShapeKind::Rect {
        xmin,
        xmax,
        ymin,
        ymax,
    }
}

/// One pocket: a chamber ring whose only opening continues as a corridor of
/// parallel walls running left through the unit disk.
struct PocketSpec {
    corridor_y: f64,
    corridor_halfwidth: f64,
    /// Chamber outer extents: x0, x1, y0, y1.
    chamber: [f64; 4],
    /// Gap in the lower corridor wall. Stacked corridors leave a sealed slit
    /// between one corridor's upper wall and the next one's lower wall; the
    /// notch merges that slit into this corridor's pocket, so every pocket
    /// keeps its representative deep inside its chamber. Must lie outside
    /// the disk and its glue collar.
    notch: Option<(f64, f64)>,
}

fn pocket_scene(wall: f64, corridor_x_left: f64, pockets: &[PocketSpec]) -> Scene {
    let mut scene = Scene::default();
    for p in pockets {
        let [x0, x1, y0, y1] = p.chamber;
        let lo = p.corridor_y - p.corridor_halfwidth;
        let hi = p.corridor_y + p.corridor_halfwidth;
        // Corridor walls up to the chamber's left wall.
        scene = scene.union(rect(corridor_x_left, x0 + wall, hi, hi + wall));
        match p.notch {
            None => {
                scene = scene.union(rect(corridor_x_left, x0 + wall, lo - wall, lo));
            }
            Some((nx0, nx1)) => {
                scene = scene
                    .union(rect(corridor_x_left, nx0, lo - wall, lo))
                    .union(rect(nx1, x0 + wall, lo - wall, lo));
            }
        }
        // Chamber ring with the corridor opening in its left wall.
        scene = scene
            .union(rect(x0, x1, y1 - wall, y1)) // top
            .union(rect(x0, x1, y0, y0 + wall)) // bottom
            .union(rect(x1 - wall, x1, y0, y1)) // right
            .union(rect(x0, x0 + wall, hi, y1)) // left, above the opening
            .union(rect(x0, x0 + wall, y0, lo)); // left, below the opening
    }
    scene
}

fn channel_comb_scene() -> Scene {
    pocket_scene(
        0.1,
        -2.0,
        &[
            PocketSpec {
                corridor_y: -0.6,
                corridor_halfwidth: 0.13,
                chamber: [1.9, 2.9, -1.1, -0.1],
                notch: None,
            },
            PocketSpec {
                corridor_y: 0.0,
                corridor_halfwidth: 0.10,
                chamber: [3.3, 4.3, -0.5, 0.5],
                notch: Some((1.5, 1.8)),
            },
            PocketSpec {
                corridor_y: 0.6,
                corridor_halfwidth: 0.07,
                chamber: [4.5, 6.02, 0.1, 1.1],
                notch: Some((1.5, 1.8)),
            },
        ],
    )
}

fn three_pockets_scene() -> Scene {
    pocket_scene(
        0.12,
        -2.0,
        &[
            PocketSpec {
                corridor_y: -0.7,
                corridor_halfwidth: 0.15,
                chamber: [1.55, 2.45, -1.16, -0.24],
                notch: None,
            },
            PocketSpec {
                corridor_y: 0.0,
                corridor_halfwidth: 0.12,
                chamber: [3.5, 4.5, -0.5, 0.5],
                notch: Some((1.3, 1.5)),
            },
            PocketSpec {
                corridor_y: 0.7,
                corridor_halfwidth: 0.09,
                chamber: [7.4, 9.68, 0.2, 1.2],
                notch: Some((1.3, 1.5)),
            },
        ],
    )
}

fn mini_pockets_scene() -> Scene {
    pocket_scene(
        0.1,
        -1.6,
        &[
            PocketSpec {
                corridor_y: -0.4,
                corridor_halfwidth: 0.11,
                chamber: [1.3, 2.1, -0.8, 0.0],
                notch: None,
            },
            PocketSpec {
                corridor_y: 0.4,
                corridor_halfwidth: 0.08,
                chamber: [2.2, 3.02, 0.0, 0.8],
                notch: None,
            },
        ],
    )
}

fn comb_with_gaps_scene() -> Scene {
    let mut scene = Scene::default().union(rect(-5.0, 5.0, -0.15, 0.15));
    for k in [-4.0f64, -2.0, 0.0, 2.0, 4.0] {
        scene = scene.union(rect(k - 0.08, k + 0.08, 0.15, 5.0));
    }
    scene
}

/// The bundled corpus. Expected verdicts are ground truth for the
/// classifier tests; the reason codes name which rule decides each scene.
pub fn corpus() -> Vec<CorpusEntry> {
    vec![
        CorpusEntry {
            name: "half-plane",
            window: window(2.0, 128),
            scene: Scene::default().union(ShapeKind::HalfPlane {
                nx: 0.0,
                ny: 1.0,
                offset: 0.0,
            }),
            n_max: 1,
            n0: None,
            expected: Verdict::Arakelian,
            reason_code: "conditionsHold",
            has_holes: false,
        },
        CorpusEntry {
            name: "strip",
            window: window(3.0, 256),
            scene: Scene::default().union(rect(-3.5, 3.5, -0.75, 0.75)),
            n_max: 2,
            n0: None,
            expected: Verdict::Arakelian,
            reason_code: "conditionsHold",
            has_holes: false,
        },
        CorpusEntry {
            name: "thick-circle",
            window: window(2.0, 256),
            scene: Scene::default().union(ShapeKind::Circle {
                cx: 0.0,
                cy: 0.0,
                r: 1.0,
                thickness: 0.2,
            }),
            n_max: 1,
            n0: None,
            expected: Verdict::NotArakelian,
            reason_code: "condition1Hole",
            has_holes: true,
        },
        CorpusEntry {
            name: "thick-annulus-boundary",
            window: window(3.0, 256),
            scene: Scene::default()
                .union(ShapeKind::Circle {
                    cx: 0.0,
                    cy: 0.0,
                    r: 1.0,
                    thickness: 0.2,
                })
                .union(ShapeKind::Circle {
                    cx: 0.0,
                    cy: 0.0,
                    r: 2.0,
                    thickness: 0.2,
                }),
            n_max: 1,
            n0: None,
            expected: Verdict::NotArakelian,
            reason_code: "condition1Hole",
            has_holes: true,
        },
        CorpusEntry {
            name: "two-circle",
            window: window(3.0, 256),
            scene: Scene::default()
                .union(ShapeKind::Circle {
                    cx: -1.2,
                    cy: 0.0,
                    r: 0.7,
                    thickness: 0.2,
                })
                .union(ShapeKind::Circle {
                    cx: 1.2,
                    cy: 0.0,
                    r: 0.7,
                    thickness: 0.2,
                }),
            n_max: 1,
            n0: None,
            expected: Verdict::NotArakelian,
            reason_code: "condition1Hole",
            has_holes: true,
        },
        CorpusEntry {
            name: "comb-with-gaps",
            window: window(6.0, 256),
            scene: comb_with_gaps_scene(),
            n_max: 4,
            n0: None,
            expected: Verdict::Arakelian,
            reason_code: "conditionsHold",
            has_holes: false,
        },
        CorpusEntry {
            name: "channel-comb",
            window: window(6.0, 512),
            scene: channel_comb_scene(),
            n_max: 1,
            n0: Some(1),
            expected: Verdict::NotArakelian,
            reason_code: "condition2MarginReach",
            has_holes: false,
        },
        CorpusEntry {
            name: "channel-comb-shrunk",
            window: window(4.4, 256),
            scene: channel_comb_scene(),
            n_max: 1,
            n0: Some(1),
            expected: Verdict::InconclusiveInWindow,
            reason_code: "holeUnionGrowth",
            has_holes: false,
        },
        CorpusEntry {
            name: "three-pockets",
            window: window(9.6, 512),
            scene: three_pockets_scene(),
            n_max: 1,
            n0: Some(1),
            expected: Verdict::NotArakelian,
            reason_code: "condition2MarginReach",
            has_holes: false,
        },
        CorpusEntry {
            name: "three-pockets-shrunk",
            window: window(6.0, 256),
            scene: three_pockets_scene(),
            n_max: 1,
            n0: Some(1),
            expected: Verdict::InconclusiveInWindow,
            reason_code: "holeUnionGrowth",
            has_holes: false,
        },
        CorpusEntry {
            name: "mini-pockets",
            window: window(3.0, 192),
            scene: mini_pockets_scene(),
            n_max: 1,
            n0: Some(1),
            expected: Verdict::NotArakelian,
            reason_code: "condition2MarginReach",
            has_holes: false,
        },
        CorpusEntry {
            name: "solid-disk",
            window: window(2.5, 128),
            scene: Scene::default().union(ShapeKind::Disk {
                cx: 0.0,
                cy: 0.0,
                r: 1.3,
            }),
            n_max: 1,
            n0: None,
            expected: Verdict::Arakelian,
            reason_code: "conditionsHold",
            has_holes: false,
        },
        CorpusEntry {
            name: "two-blobs",
            window: window(3.0, 128),
            scene: Scene::default()
                .union(ShapeKind::Disk {
                    cx: -1.5,
                    cy: 0.8,
                    r: 0.6,
                })
                .union(rect(0.8, 2.0, -1.5, -0.3)),
            n_max: 1,
            n0: None,
            expected: Verdict::Arakelian,
            reason_code: "conditionsHold",
            has_holes: false,
        },
    ]
}

pub fn by_name(name: &str) -> Option<CorpusEntry> {
    corpus().into_iter().find(|e| e.name == name)
}
