//! Connected components, holes, fillings, and enclosing curves.
//!
//! Connectivity follows the mixed convention of digital topology: the set is
//! 8-connected, its complement 4-connected. This is what makes an 8-connected
//! closed loop of set cells separate the grid into exactly two complement
//! regions, with no leaking through diagonal gaps and no phantom components.

mod arakelian;
mod arcs;
mod curve;

pub use arakelian::{is_arakelian, ArakelianReport, PerRadius, Verdict};
pub use arcs::{circle_arcs, Arc, ArcSet};
pub use curve::{enclosing_curve, polyline_area, winding_around, PolyPath};

use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

use crate::error::Error;
use crate::geometry::{distance_transform, GridSet, Point, Window};
use crate::tolerances::MARGIN_CELLS;
use crate::Result;

/// Summary of one connected component of the complement.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RegionInfo {
    pub label: i32,
    pub cell_count: usize,
    /// Bounding box of cell centers, `[xmin, xmax, ymin, ymax]`.
    pub bounding_box: [f64; 4],
    /// True iff some cell of the region lies on the window border; such a
    /// region is treated as unbounded (window-relative).
    pub touches_border: bool,
    /// True iff some cell lies within the margin ring of the window.
    pub touches_margin: bool,
    /// Cell center maximizing the distance to the set, ties broken
    /// lexicographically by (row, column).
    pub representative: Point,
    /// Distance from the representative to the nearest set cell center.
    pub clearance: f64,
    /// Largest modulus over the region's cell centers.
    pub max_modulus: f64,
}

impl RegionInfo {
    pub fn is_hole(&self) -> bool {
        !self.touches_border
    }
}

/// Labeling of the complement of a grid set: 4-connected components of the
/// unmarked cells, labels assigned in raster-scan order of each component's
/// first cell. Set cells carry label -1.
#[derive(Debug, Clone)]
pub struct RegionLabeling {
    pub window: Window,
    nx: usize,
    ny: usize,
    pub labels: Vec<i32>,
    pub regions: Vec<RegionInfo>,
}

impl RegionLabeling {
    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn label_at(&self, i: usize, j: usize) -> i32 {
        self.labels[j * self.nx + i]
    }

    pub fn region(&self, label: i32) -> Option<&RegionInfo> {
        self.regions.get(label as usize)
    }

    /// Mask of the cells carrying the given label.
    pub fn region_mask(&self, label: i32) -> Result<GridSet> {
        if self.region(label).is_none() {
            return Err(Error::Domain(format!("no component with label {label}")));
        }
        let mut set = GridSet::empty(self.window)?;
        for (idx, &l) in self.labels.iter().enumerate() {
            if l == label {
                set.mask[idx] = true;
            }
        }
        Ok(set)
    }
}

fn in_margin(i: usize, j: usize, nx: usize, ny: usize) -> bool {
    i < MARGIN_CELLS || j < MARGIN_CELLS || i >= nx - MARGIN_CELLS || j >= ny - MARGIN_CELLS
}

/// Label the 4-connected components of the complement of `set`.
pub fn components(set: &GridSet) -> RegionLabeling {
    let (nx, ny) = (set.nx(), set.ny());
    let mut labels = vec![-1i32; nx * ny];
    let mut regions: Vec<RegionInfo> = Vec::new();
    // Distance from complement cells to the nearest set cell; drives the
    // representative choice.
    let dist = distance_transform(&set.inverted());

    let mut queue = VecDeque::new();
    for j0 in 0..ny {
        for i0 in 0..nx {
            let start = j0 * nx + i0;
            if set.mask[start] || labels[start] >= 0 {
                continue;
            }
            let label = regions.len() as i32;
            labels[start] = label;
            queue.push_back((i0, j0));

            let mut cell_count = 0usize;
            let mut bbox = [usize::MAX, 0, usize::MAX, 0];
            let mut touches_border = false;
            let mut touches_margin = false;
            let mut max_modulus = 0.0f64;
            let mut rep = (i0, j0);
            let mut rep_dist = -1.0f64;

            while let Some((i, j)) = queue.pop_front() {
                cell_count += 1;
                bbox[0] = bbox[0].min(i);
                bbox[1] = bbox[1].max(i);
                bbox[2] = bbox[2].min(j);
                bbox[3] = bbox[3].max(j);
                if i == 0 || j == 0 || i == nx - 1 || j == ny - 1 {
                    touches_border = true;
                }
                if in_margin(i, j, nx, ny) {
                    touches_margin = true;
                }
                max_modulus = max_modulus.max(set.center(i, j).norm());
                let d = dist.at(i, j);
                // Strict improvement keeps the first raster-order maximizer.
                if d > rep_dist {
                    rep_dist = d;
                    rep = (i, j);
                }

                let neighbors = [
                    (i.wrapping_sub(1), j),
                    (i + 1, j),
                    (i, j.wrapping_sub(1)),
                    (i, j + 1),
                ];
                for (ii, jj) in neighbors {
                    if ii < nx && jj < ny {
                        let idx = jj * nx + ii;
                        if !set.mask[idx] && labels[idx] < 0 {
                            labels[idx] = label;
                            queue.push_back((ii, jj));
                        }
                    }
                }
            }

            let c0 = set.center(bbox[0], bbox[2]);
            let c1 = set.center(bbox[1], bbox[3]);
            regions.push(RegionInfo {
                label,
                cell_count,
                bounding_box: [c0.re, c1.re, c0.im, c1.im],
                touches_border,
                touches_margin,
                representative: set.center(rep.0, rep.1),
                clearance: rep_dist,
                max_modulus,
            });
        }
    }

    RegionLabeling {
        window: set.window,
        nx,
        ny,
        labels,
        regions,
    }
}

/// The holes of a set: bounded components of its complement.
pub fn holes(set: &GridSet) -> Vec<RegionInfo> {
    components(set)
        .regions
        .into_iter()
        .filter(|r| r.is_hole())
        .collect()
}

/// Label the 8-connected components of the marked cells themselves.
/// Returns per-cell labels (-1 on unmarked cells) and the component count.
pub fn set_components(set: &GridSet) -> (Vec<i32>, usize) {
    let (nx, ny) = (set.nx(), set.ny());
    let mut labels = vec![-1i32; nx * ny];
    let mut count = 0usize;
    let mut queue = VecDeque::new();
    for j0 in 0..ny {
        for i0 in 0..nx {
            let start = j0 * nx + i0;
            if !set.mask[start] || labels[start] >= 0 {
                continue;
            }
            let label = count as i32;
            count += 1;
            labels[start] = label;
            queue.push_back((i0, j0));
            while let Some((i, j)) = queue.pop_front() {
                for dj in -1i64..=1 {
                    for di in -1i64..=1 {
                        if di == 0 && dj == 0 {
                            continue;
                        }
                        let ii = i as i64 + di;
                        let jj = j as i64 + dj;
                        if ii < 0 || jj < 0 || ii >= nx as i64 || jj >= ny as i64 {
                            continue;
                        }
                        let idx = jj as usize * nx + ii as usize;
                        if set.mask[idx] && labels[idx] < 0 {
                            labels[idx] = label;
                            queue.push_back((ii as usize, jj as usize));
                        }
                    }
                }
            }
        }
    }
    (labels, count)
}

/// Fill a bounded complement component: the region united with every
/// bounded 8-connected component of its own complement. The result is a
/// connected set whose complement within the window is a single region
/// touching the border, and whose boundary cells are boundary cells of the
/// input region.
pub fn filling(labeling: &RegionLabeling, label: i32) -> Result<GridSet> {
    let region = labeling
        .region(label)
        .ok_or_else(|| Error::Domain(format!("no component with label {label}")))?;
    if region.touches_border {
        return Err(Error::Domain(format!(
            "component {label} touches the window border; filling needs a bounded component"
        )));
    }
    let u = labeling.region_mask(label)?;
    let complement = u.inverted();
    let (comp_labels, comp_count) = set_components(&complement);
    let (nx, ny) = (u.nx(), u.ny());
    let mut bounded = vec![true; comp_count];
    for j in 0..ny {
        for i in 0..nx {
            if i == 0 || j == 0 || i == nx - 1 || j == ny - 1 {
                let l = comp_labels[j * nx + i];
                if l >= 0 {
                    bounded[l as usize] = false;
                }
            }
        }
    }
    let mut v = u;
    for (idx, &l) in comp_labels.iter().enumerate() {
        if l >= 0 && bounded[l as usize] {
            v.mask[idx] = true;
        }
    }
    Ok(v)
}

/// Boundary cells of a mask: marked cells with an unmarked 8-neighbor.
pub fn boundary_cells(set: &GridSet) -> Vec<(usize, usize)> {
    let (nx, ny) = (set.nx(), set.ny());
    let mut out = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            if !set.at(i, j) {
                continue;
            }
            let mut on_boundary = false;
            'scan: for dj in -1i64..=1 {
                for di in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let ii = i as i64 + di;
                    let jj = j as i64 + dj;
                    if ii < 0 || jj < 0 || ii >= nx as i64 || jj >= ny as i64 {
                        continue;
                    }
                    if !set.at(ii as usize, jj as usize) {
                        on_boundary = true;
                        break 'scan;
                    }
                }
            }
            if on_boundary {
                out.push((i, j));
            }
        }
    }
    out
}
