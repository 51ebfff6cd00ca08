//! Window-relative Arakelian classification.
//!
//! A closed set qualifies when it has no holes and the union of holes of the
//! set enlarged by any closed origin-centered disk stays bounded. On a finite
//! grid "bounded" can only mean "not touching the window border", so the
//! verdict is a tri-state:
//!
//! * `NotArakelian` — a hole of the set exists, or some enlargement produces
//!   holes reaching the window margin ring (window-scale unbounded growth);
//! * `Arakelian` — no holes, and every enlargement's holes cling to the
//!   enlarging disk (max modulus at most n + slack) away from the margin;
//! * `InconclusiveInWindow` — enlargement holes grow well past the disk but
//!   stop short of the margin: growth is observed, unboundedness is not
//!   certifiable at this window size.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geometry::{rasterize, GridSet, Scene, ShapeKind};
use crate::tolerances::{GROWTH_SLACK, MARGIN_CELLS};
use crate::Result;

use super::{components, RegionInfo};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Verdict {
    Arakelian,
    NotArakelian,
    InconclusiveInWindow,
}

/// Hole data for one disk radius n.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PerRadius {
    pub n: u32,
    /// Largest modulus over all hole cells of the enlarged set (0 if none).
    pub hole_union_max_modulus: f64,
    pub any_hole_touches_margin: bool,
    pub hole_count: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ArakelianReport {
    pub holes: Vec<RegionInfo>,
    pub condition1: bool,
    pub per_radius: Vec<PerRadius>,
    pub condition2: bool,
    pub verdict: Verdict,
    pub reason: String,
    pub window_caveat: String,
}

/// Classify a grid set. `n_max` bounds the disk radii tried for the second
/// condition; the disk of radius `n_max` must fit inside the window with a
/// free margin ring of `MARGIN_CELLS` cells.
pub fn is_arakelian(set: &GridSet, n_max: u32) -> Result<ArakelianReport> {
    if n_max < 1 {
        return Err(Error::Schema("nMax must be at least 1".into()));
    }
    let w = set.window;
    let margin = MARGIN_CELLS as f64 * w.h;
    let reach = (-w.xmin).min(w.xmax).min(-w.ymin).min(w.ymax);
    if n_max as f64 + margin > reach {
        return Err(Error::Schema(format!(
            "disk of radius {n_max} does not fit in the window with a {MARGIN_CELLS}-cell margin ring"
        )));
    }

    let labeling = components(set);
    let holes: Vec<RegionInfo> = labeling
        .regions
        .iter()
        .filter(|r| r.is_hole())
        .cloned()
        .collect();
    let condition1 = holes.is_empty();

    let mut per_radius = Vec::new();
    let mut margin_hit: Option<u32> = None;
    let mut growth_hit: Option<u32> = None;
    for n in 1..=n_max {
        let disk = rasterize(
            &Scene::default().union(ShapeKind::Disk {
                cx: 0.0,
                cy: 0.0,
                r: n as f64,
            }),
            w,
        )?;
        let enlarged = set.union_with(&disk)?;
        let labeling_n = components(&enlarged);
        let mut max_mod = 0.0f64;
        let mut touches = false;
        let mut count = 0usize;
        for r in labeling_n.regions.iter().filter(|r| r.is_hole()) {
            count += 1;
            max_mod = max_mod.max(r.max_modulus);
            touches |= r.touches_margin;
        }
        if touches && margin_hit.is_none() {
            margin_hit = Some(n);
        }
        if count > 0 && max_mod > n as f64 + GROWTH_SLACK + 1e-9 && growth_hit.is_none() {
            growth_hit = Some(n);
        }
        per_radius.push(PerRadius {
            n,
            hole_union_max_modulus: max_mod,
            any_hole_touches_margin: touches,
            hole_count: count,
        });
    }
    let condition2 = margin_hit.is_none();

    let (verdict, reason) = if !condition1 {
        (
            Verdict::NotArakelian,
            format!("condition 1 fails: the set has {} hole(s)", holes.len()),
        )
    } else if let Some(n) = margin_hit {
        (
            Verdict::NotArakelian,
            format!(
                "condition 2 fails at n = {n}: holes of the enlarged set reach the window margin"
            ),
        )
    } else if let Some(n) = growth_hit {
        (
            Verdict::InconclusiveInWindow,
            format!(
                "holes of the set enlarged by the radius-{n} disk extend past modulus {} without reaching the margin; growth beyond the window is unknowable",
                n as f64 + GROWTH_SLACK
            ),
        )
    } else {
        (
            Verdict::Arakelian,
            "no holes; all enlargement holes stay near their disk".into(),
        )
    };

    Ok(ArakelianReport {
        holes,
        condition1,
        per_radius,
        condition2,
        verdict,
        reason,
        window_caveat: format!(
            "verdict relative to window [{}, {}] x [{}, {}] at h = {}; a region counts as bounded iff it avoids the window border",
            w.xmin, w.xmax, w.ymin, w.ymax, w.h
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Window;

    fn window(half: f64, h: f64) -> Window {
        Window::new(-half, half, -half, half, h).unwrap()
    }

    #[test]
    fn half_plane_is_arakelian() {
        let scene = Scene::default().union(ShapeKind::HalfPlane {
            nx: 0.0,
            ny: 1.0,
            offset: 0.0,
        });
        let set = rasterize(&scene, window(2.0, 0.025)).unwrap();
        let report = is_arakelian(&set, 1).unwrap();
        assert_eq!(report.verdict, Verdict::Arakelian);
        assert!(report.condition1 && report.condition2);
    }

    #[test]
    fn thick_circle_fails_condition_one() {
        let scene = Scene::default().union(ShapeKind::Circle {
            cx: 0.0,
            cy: 0.0,
            r: 1.3,
            thickness: 0.2,
        });
        let set = rasterize(&scene, window(2.0, 0.02)).unwrap();
        let report = is_arakelian(&set, 1).unwrap();
        assert_eq!(report.verdict, Verdict::NotArakelian);
        assert!(!report.condition1);
        assert_eq!(report.holes.len(), 1);
    }

    #[test]
    fn verdict_arakelian_implies_both_conditions() {
        let scene = Scene::default().union(ShapeKind::Disk {
            cx: 0.0,
            cy: 0.0,
            r: 1.2,
        });
        let set = rasterize(&scene, window(2.0, 0.025)).unwrap();
        let report = is_arakelian(&set, 1).unwrap();
        if report.verdict == Verdict::Arakelian {
            assert!(report.condition1 && report.condition2);
        }
        // Definitional consistency: condition1 false iff holes nonempty.
        assert_eq!(report.condition1, report.holes.is_empty());
    }

    #[test]
    fn channel_comb_fails_condition_two_with_brute_force_evidence() {
        let entry = crate::scenes::by_name("channel-comb").unwrap();
        let set = rasterize(&entry.scene, entry.window).unwrap();
        let report = is_arakelian(&set, 1).unwrap();
        assert_eq!(report.verdict, Verdict::NotArakelian);
        assert!(report.condition1, "the comb itself has no holes");
        assert!(!report.condition2);

        // Independent oracle: flood-fill the complement of the enlarged set
        // and verify some hole reaches the margin ring.
        let disk = rasterize(
            &Scene::default().union(ShapeKind::Disk {
                cx: 0.0,
                cy: 0.0,
                r: 1.0,
            }),
            entry.window,
        )
        .unwrap();
        let enlarged = set.union_with(&disk).unwrap();
        let (nx, ny) = (enlarged.nx(), enlarged.ny());
        let mut seen = vec![false; nx * ny];
        let mut margin_reached = false;
        for j0 in 0..ny {
            for i0 in 0..nx {
                if enlarged.at(i0, j0) || seen[j0 * nx + i0] {
                    continue;
                }
                let mut stack = vec![(i0, j0)];
                let mut cells = Vec::new();
                let mut touches_border = false;
                let mut touches_margin = false;
                seen[j0 * nx + i0] = true;
                while let Some((i, j)) = stack.pop() {
                    if i == 0 || j == 0 || i == nx - 1 || j == ny - 1 {
                        touches_border = true;
                    }
                    if i < 4 || j < 4 || i >= nx - 4 || j >= ny - 4 {
                        touches_margin = true;
                    }
                    cells.push((i, j));
                    let nb = [
                        (i.wrapping_sub(1), j),
                        (i + 1, j),
                        (i, j.wrapping_sub(1)),
                        (i, j + 1),
                    ];
                    for (ii, jj) in nb {
                        if ii < nx && jj < ny && !enlarged.at(ii, jj) && !seen[jj * nx + ii] {
                            seen[jj * nx + ii] = true;
                            stack.push((ii, jj));
                        }
                    }
                }
                if !touches_border && touches_margin {
                    margin_reached = true;
                }
            }
        }
        assert!(margin_reached, "brute-force labeling finds no margin-reaching hole");
    }

    #[test]
    fn oversized_disk_is_a_configuration_error() {
        let scene = Scene::default();
        let set = rasterize(&scene, window(2.0, 0.1)).unwrap();
        assert!(matches!(is_arakelian(&set, 2), Err(Error::Schema(_))));
    }
}
