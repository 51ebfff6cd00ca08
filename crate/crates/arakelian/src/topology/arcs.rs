//! Traces of hole boundaries on an origin-centered circle.
//!
//! After enlarging a set by the closed disk of radius `n0`, each hole of the
//! enlarged set may touch the circle of radius `n0` along arcs not covered
//! by the original set. These arcs, grouped by the adjacent hole, drive the
//! small-arc selection of the witness construction; their total measure can
//! never exceed the circle length.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::TAU;

use crate::error::Error;
use crate::geometry::{GridSet, Point};
use crate::Result;

use super::RegionLabeling;

/// One maximal run of circle samples adjacent to a single complement region.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Arc {
    pub theta_start: f64,
    pub theta_end: f64,
    /// Label in the enlarged set's complement labeling.
    pub label: i32,
    /// Whether the adjacent region is a hole (window-bounded).
    pub bounded: bool,
    /// Arc length on the circle, `n0 * (theta_end - theta_start)`.
    pub measure: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ArcSet {
    pub n0: u32,
    pub delta_theta: f64,
    pub arcs: Vec<Arc>,
    /// Per-hole total measures (bounded labels only), sorted by label.
    pub hole_measures: Vec<(i32, f64)>,
    pub total_measure: f64,
}

impl ArcSet {
    pub fn measure_for(&self, label: i32) -> f64 {
        self.hole_measures
            .iter()
            .find(|(l, _)| *l == label)
            .map(|(_, m)| *m)
            .unwrap_or(0.0)
    }
}

/// Sample the circle of radius `n0` and group the samples lying outside
/// `set` by the complement component of the enlarged set found just outside
/// the circle. `labeling` must be the labeling of `set` united with the
/// closed disk of radius `n0`.
pub fn circle_arcs(
    set: &GridSet,
    labeling: &RegionLabeling,
    n0: u32,
    samples_per_unit: u32,
) -> Result<ArcSet> {
    let w = set.window;
    if labeling.window != w {
        return Err(Error::Domain("labeling window differs from set window".into()));
    }
    if n0 < 1 {
        return Err(Error::Schema("n0 must be at least 1".into()));
    }
    let radius = n0 as f64;
    let reach = (-w.xmin).min(w.xmax).min(-w.ymin).min(w.ymax);
    if radius + 4.0 * w.h > reach {
        return Err(Error::Schema(format!(
            "circle of radius {n0} does not fit inside the window with probe room"
        )));
    }
    if samples_per_unit == 0 {
        return Err(Error::Schema("samplesPerUnit must be positive".into()));
    }
    // Arc-length step 1 / samplesPerUnit must resolve single cells.
    if 1.0 / samples_per_unit as f64 > w.h {
        return Err(Error::Resolution(format!(
            "circle sampling step {} exceeds the cell size {}; increase samplesPerUnit",
            1.0 / samples_per_unit as f64,
            w.h
        )));
    }

    let num = (TAU * radius * samples_per_unit as f64).ceil() as usize;
    let dtheta = TAU / num as f64;

    // Per-sample component label just outside the circle, None when the
    // sample lies in the set or no complement cell is found nearby. The
    // sample's own cell already carries the right label whenever its center
    // falls outside the closed disk; the outward ray probe handles samples
    // whose cell straddles the disk edge.
    let mut sample_labels: Vec<Option<i32>> = Vec::with_capacity(num);
    for k in 0..num {
        let theta = k as f64 * dtheta;
        let (c, s) = (theta.cos(), theta.sin());
        let p = Point::new(radius * c, radius * s);
        if set.contains_point(p) {
            sample_labels.push(None);
            continue;
        }
        let mut found = None;
        if let Some((i, j)) = w.cell_of(p) {
            let l = labeling.label_at(i, j);
            if l >= 0 {
                found = Some(l);
            }
        }
        if found.is_none() {
            for step in 1..=6 {
                let rr = radius + 0.5 * w.h * step as f64;
                let q = Point::new(rr * c, rr * s);
                if let Some((i, j)) = w.cell_of(q) {
                    let l = labeling.label_at(i, j);
                    if l >= 0 {
                        found = Some(l);
                        break;
                    }
                }
            }
        }
        sample_labels.push(found);
    }

    // Maximal runs of equal labels; each sample owns a dtheta bin centered
    // on it, so run measures partition a subset of the circle exactly.
    let mut runs: Vec<(usize, usize, i32)> = Vec::new(); // (start, len, label)
    let mut k = 0usize;
    while k < num {
        match sample_labels[k] {
            None => k += 1,
            Some(l) => {
                let start = k;
                let mut len = 0usize;
                while k < num && sample_labels[k] == Some(l) {
                    len += 1;
                    k += 1;
                }
                runs.push((start, len, l));
            }
        }
    }
    // Wrap-around: merge the last run into the first when they abut at
    // theta = 0 with the same label.
    if runs.len() >= 2 {
        let first = runs[0];
        let last = *runs.last().unwrap();
        if first.0 == 0 && last.0 + last.1 == num && first.2 == last.2 {
            runs[0] = (last.0, last.1 + first.1, first.2);
            runs.pop();
        }
    }

    let mut arcs = Vec::new();
    let mut per_hole: BTreeMap<i32, f64> = BTreeMap::new();
    let mut total = 0.0;
    for (start, len, label) in runs {
        let bounded = labeling
            .region(label)
            .map(|r| r.is_hole())
            .unwrap_or(false);
        let theta_start = start as f64 * dtheta - 0.5 * dtheta;
        let theta_end = theta_start + len as f64 * dtheta;
        let measure = radius * len as f64 * dtheta;
        total += measure;
        if bounded {
            *per_hole.entry(label).or_insert(0.0) += measure;
        }
        arcs.push(Arc {
            theta_start,
            theta_end,
            label,
            bounded,
            measure,
        });
    }

    Ok(ArcSet {
        n0,
        delta_theta: dtheta,
        arcs,
        hole_measures: per_hole.into_iter().collect(),
        total_measure: total,
    })
}
