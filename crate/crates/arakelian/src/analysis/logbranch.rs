//! Continuous logarithm branches along paths and over grid sets.
//!
//! On a path, the branch is fixed at a basepoint and continued by adaptive
//! phase accumulation. On a grid set, phases are unwrapped along a spanning
//! forest of the 8-connected cells and every remaining adjacency is checked
//! for consistency: a mismatch of a nonzero multiple of 2*pi on some closing
//! edge is returned as an [`Obstruction`] carrying the offending cycle — the
//! discrete form of "no logarithm exists iff some cycle has nonzero winding".

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::f64::consts::TAU;

use crate::error::Error;
use crate::geometry::{GridSet, Point};
use crate::tolerances::{Tolerances, PHASE_STEP_MAX};
use crate::topology::{components, winding_around, PolyPath};
use crate::Result;

use super::winding::Refiner;
use super::AnalyticFn;

/// One sample of a logarithm branch along a path.
#[derive(Debug, Clone, Copy)]
pub struct PathSample {
    pub z: Complex64,
    pub g: Complex64,
}

/// Logarithm branch along a (refined) path.
#[derive(Debug, Clone)]
pub struct LogPath {
    /// Refined polyline; for closed inputs the first point reappears at the
    /// end so the branch defect is visible in the samples.
    pub path: PolyPath,
    pub samples: Vec<PathSample>,
    pub max_residual: f64,
    /// Total accumulated phase from the first to the last sample.
    pub total_phase: f64,
    /// For closed inputs, `(g_end - g_start) / (2 pi i)` rounded.
    pub branch_defect: Option<i64>,
}

/// Logarithm branch over a grid set.
#[derive(Debug, Clone)]
pub struct LogGrid {
    pub domain: GridSet,
    values: Vec<Complex64>,
    pub max_residual: f64,
    /// Largest imaginary difference across adjacent domain cells.
    pub max_adjacent_jump: f64,
    /// BFS roots of the spanning forest, one per 8-connected component.
    pub roots: Vec<(usize, usize)>,
}

impl LogGrid {
    pub fn value_at(&self, i: usize, j: usize) -> Option<Complex64> {
        if self.domain.at(i, j) {
            Some(self.values[j * self.domain.nx() + i])
        } else {
            None
        }
    }

    pub(crate) fn from_values(
        domain: GridSet,
        values: Vec<Complex64>,
        max_residual: f64,
        roots: Vec<(usize, usize)>,
    ) -> LogGrid {
        let max_adjacent_jump = adjacent_jump(&domain, &values);
        LogGrid {
            domain,
            values,
            max_residual,
            max_adjacent_jump,
            roots,
        }
    }

    /// Count adjacent domain-cell pairs whose imaginary parts differ by at
    /// least the phase-step bound: branch seams of a piecewise-defined grid.
    pub fn seam_count(&self) -> usize {
        let (nx, ny) = (self.domain.nx(), self.domain.ny());
        let mut seams = 0;
        for j in 0..ny {
            for i in 0..nx {
                if !self.domain.at(i, j) {
                    continue;
                }
                let g = self.values[j * nx + i];
                for (di, dj) in FORWARD_OFFSETS {
                    let ii = i as i64 + di;
                    let jj = j as i64 + dj;
                    if ii < 0 || jj < 0 || ii >= nx as i64 || jj >= ny as i64 {
                        continue;
                    }
                    let (ii, jj) = (ii as usize, jj as usize);
                    if !self.domain.at(ii, jj) {
                        continue;
                    }
                    if (self.values[jj * nx + ii].im - g.im).abs() >= PHASE_STEP_MAX {
                        seams += 1;
                    }
                }
            }
        }
        seams
    }
}

fn adjacent_jump(domain: &GridSet, values: &[Complex64]) -> f64 {
    let (nx, ny) = (domain.nx(), domain.ny());
    let mut max_jump = 0.0f64;
    for j in 0..ny {
        for i in 0..nx {
            if !domain.at(i, j) {
                continue;
            }
            let g = values[j * nx + i];
            for (di, dj) in FORWARD_OFFSETS {
                let ii = i as i64 + di;
                let jj = j as i64 + dj;
                if ii < 0 || jj < 0 || ii >= nx as i64 || jj >= ny as i64 {
                    continue;
                }
                let (ii, jj) = (ii as usize, jj as usize);
                if domain.at(ii, jj) {
                    max_jump = max_jump.max((values[jj * nx + ii].im - g.im).abs());
                }
            }
        }
    }
    max_jump
}

/// A cycle of domain cells on which the phase fails to close up.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Obstruction {
    pub cycle: PolyPath,
    pub winding: i64,
    /// Label of the complement hole enclosed by the cycle, -1 if none of the
    /// hole representatives lies inside it.
    pub hole_label: i32,
}

/// Outcome of a logarithm construction over a set.
#[derive(Debug, Clone)]
pub enum LogResult {
    Grid(LogGrid),
    Obstruction(Obstruction),
}

impl LogResult {
    pub fn grid(self) -> Option<LogGrid> {
        match self {
            LogResult::Grid(g) => Some(g),
            LogResult::Obstruction(_) => None,
        }
    }

    pub fn obstruction(self) -> Option<Obstruction> {
        match self {
            LogResult::Grid(_) => None,
            LogResult::Obstruction(o) => Some(o),
        }
    }
}

/// Continuous logarithm branch of `f` along a path.
///
/// The branch starts at `basepoint` (or the principal logarithm of the first
/// value) and each subsequent imaginary part stays within the phase-step
/// bound of its predecessor after adaptive refinement.
pub fn log_on_path(
    f: &AnalyticFn,
    path: &PolyPath,
    basepoint: Option<Complex64>,
    tols: &Tolerances,
) -> Result<LogPath> {
    let mut refiner = Refiner::new(f, tols, None);
    let verts: Vec<Complex64> = path.points.iter().map(|p| p.to_c()).collect();
    let f0 = refiner.eval_checked(verts[0])?;
    let g0 = basepoint.unwrap_or_else(|| Complex64::new(f0.value.norm().ln(), f0.value.arg()));
    let base_residual = (g0.exp() - f0.value).norm() / f0.value.norm();
    if base_residual > tols.residual {
        return Err(Error::Domain(format!(
            "basepoint is not a logarithm of f at the path start (residual {base_residual})"
        )));
    }
    // A caller-supplied basepoint may carry a real offset; preserve it.
    let re_offset = g0.re - f0.value.norm().ln();

    let mut samples = vec![PathSample { z: verts[0], g: g0 }];
    let mut pts = vec![path.points[0]];
    let mut phi = g0.im;
    let mut max_residual = base_residual;

    let n = verts.len();
    let last = if path.closed { n } else { n - 1 };
    let mut fa = f0;
    for k in 0..last {
        let a = verts[k];
        let b = verts[(k + 1) % n];
        let fb = refiner.eval_checked(b)?;
        refiner.segment(a, &fa, b, &fb, 0, &mut |z, vd, dphi| {
            phi += dphi;
            let g = Complex64::new(vd.value.norm().ln() + re_offset, phi);
            let residual = (g.exp() - vd.value).norm() / vd.value.norm();
            if residual > max_residual {
                max_residual = residual;
            }
            samples.push(PathSample { z, g });
            pts.push(Point::from_c(z));
        })?;
        fa = fb;
    }

    let total_phase = phi - g0.im;
    let branch_defect = if path.closed {
        Some((total_phase / TAU).round() as i64)
    } else {
        None
    };
    if max_residual > tols.residual {
        return Err(Error::NonConvergence(format!(
            "log residual {max_residual} exceeds tolerance along the path"
        )));
    }
    Ok(LogPath {
        path: PolyPath::new(pts, false)?,
        samples,
        max_residual,
        total_phase,
        branch_defect,
    })
}

/// 8-neighborhood offsets that enumerate each unordered cell pair once when
/// scanned in raster order.
const FORWARD_OFFSETS: [(i64, i64); 4] = [(1, 0), (-1, 1), (0, 1), (1, 1)];

/// All 8 neighbor offsets, in the deterministic BFS order.
const ALL_OFFSETS: [(i64, i64); 8] = [
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (1, -1),
    (-1, 1),
    (-1, -1),
];

/// Logarithm branch of `f` over the marked cells of `set`, with the
/// principal branch at each component's first cell.
pub fn log_on_set(f: &AnalyticFn, set: &GridSet, tols: &Tolerances) -> Result<LogResult> {
    log_on_set_with(f, set, None, tols)
}

/// As [`log_on_set`], but the first component's basepoint value can be
/// prescribed; it must be a logarithm of `f` there.
pub fn log_on_set_with(
    f: &AnalyticFn,
    set: &GridSet,
    basepoint: Option<Complex64>,
    tols: &Tolerances,
) -> Result<LogResult> {
    let (nx, ny) = (set.nx(), set.ny());
    let total = nx * ny;

    // Evaluate once per marked cell; everything downstream reads the cache.
    let mut values = vec![Complex64::new(0.0, 0.0); total];
    let mut rates = vec![0.0f64; total];
    for (i, j) in set.iter_marked() {
        let z = set.center(i, j).to_c();
        let vd = f.eval(z)?;
        if vd.value.norm() <= tols.tol_zero_at(z) {
            return Err(Error::ZeroOnContour(format!(
                "|f| = {} below the zero tolerance at cell center {} + {}i",
                vd.value.norm(),
                z.re,
                z.im
            )));
        }
        let idx = j * nx + i;
        values[idx] = vd.value;
        rates[idx] = (vd.deriv / vd.value).norm();
    }

    let mut phases = vec![0.0f64; total];
    let mut parent = vec![-1i64; total];
    let mut depth = vec![0u32; total];
    let mut visited = vec![false; total];
    let mut roots = Vec::new();

    // Phase change along the straight edge between two adjacent cells:
    // direct principal argument when safely below the step bound, adaptive
    // continuation otherwise.
    let h = set.window.h;
    let edge_phase = |set: &GridSet,
                      values: &[Complex64],
                      rates: &[f64],
                      ui: usize,
                      uj: usize,
                      vi: usize,
                      vj: usize|
     -> Result<f64> {
        let (uidx, vidx) = (uj * nx + ui, vj * nx + vi);
        let dphi = (values[vidx] / values[uidx]).arg();
        let za = set.center(ui, uj).to_c();
        let zb = set.center(vi, vj).to_c();
        let len = (zb - za).norm();
        let rate_bound = 0.5 * (rates[uidx] + rates[vidx]) * len;
        if dphi.abs() < PHASE_STEP_MAX && rate_bound < PHASE_STEP_MAX {
            Ok(dphi)
        } else {
            super::winding::continuous_phase_change(f, za, zb, tols)
        }
    };
    let _ = h;

    let mut queue = VecDeque::new();
    for j0 in 0..ny {
        for i0 in 0..nx {
            let start = j0 * nx + i0;
            if !set.mask[start] || visited[start] {
                continue;
            }
            let z0 = set.center(i0, j0).to_c();
            let v0 = values[start];
            let g0 = if roots.is_empty() {
                match basepoint {
                    Some(g) => {
                        let residual = (g.exp() - v0).norm() / v0.norm();
                        if residual > tols.residual {
                            return Err(Error::Domain(format!(
                                "basepoint is not a logarithm of f at the first component root (residual {residual})"
                            )));
                        }
                        g
                    }
                    None => Complex64::new(v0.norm().ln(), v0.arg()),
                }
            } else {
                Complex64::new(v0.norm().ln(), v0.arg())
            };
            let _ = z0;
            phases[start] = g0.im;
            visited[start] = true;
            roots.push((i0, j0));
            queue.push_back((i0, j0));
            while let Some((i, j)) = queue.pop_front() {
                let uidx = j * nx + i;
                for (di, dj) in ALL_OFFSETS {
                    let ii = i as i64 + di;
                    let jj = j as i64 + dj;
                    if ii < 0 || jj < 0 || ii >= nx as i64 || jj >= ny as i64 {
                        continue;
                    }
                    let (ii, jj) = (ii as usize, jj as usize);
                    let vidx = jj * nx + ii;
                    if !set.mask[vidx] || visited[vidx] {
                        continue;
                    }
                    let dphi = edge_phase(set, &values, &rates, i, j, ii, jj)?;
                    phases[vidx] = phases[uidx] + dphi;
                    parent[vidx] = uidx as i64;
                    depth[vidx] = depth[uidx] + 1;
                    visited[vidx] = true;
                    queue.push_back((ii, jj));
                }
            }
        }
    }

    // Consistency of every non-tree adjacency, in raster-scan order; the
    // first inconsistent edge yields the obstruction cycle.
    for j in 0..ny {
        for i in 0..nx {
            let uidx = j * nx + i;
            if !set.mask[uidx] {
                continue;
            }
            for (di, dj) in FORWARD_OFFSETS {
                let ii = i as i64 + di;
                let jj = j as i64 + dj;
                if ii < 0 || jj < 0 || ii >= nx as i64 || jj >= ny as i64 {
                    continue;
                }
                let (ii, jj) = (ii as usize, jj as usize);
                let vidx = jj * nx + ii;
                if !set.mask[vidx] {
                    continue;
                }
                if parent[vidx] == uidx as i64 || parent[uidx] == vidx as i64 {
                    continue;
                }
                let dphi = edge_phase(set, &values, &rates, i, j, ii, jj)?;
                let mismatch = phases[vidx] - phases[uidx] - dphi;
                let k = (mismatch / TAU).round() as i64;
                if (mismatch - k as f64 * TAU).abs() > tols.glue {
                    return Err(Error::NonConvergence(format!(
                        "phase bookkeeping error {mismatch} on edge ({i},{j})-({ii},{jj})"
                    )));
                }
                if k != 0 {
                    let cycle = tree_cycle(set, &parent, &depth, uidx, vidx)?;
                    // Orient the cycle so the reported winding is positive.
                    let (cycle, k) = if k < 0 { (cycle.reversed(), -k) } else { (cycle, k) };
                    let hole_label = enclosed_hole_label(set, &cycle);
                    return Ok(LogResult::Obstruction(Obstruction {
                        cycle,
                        winding: k,
                        hole_label,
                    }));
                }
            }
        }
    }

    // Assemble g = ln|f| + i phase and verify the exponential identity.
    let mut out = vec![Complex64::new(0.0, 0.0); total];
    let mut max_residual = 0.0f64;
    for (i, j) in set.iter_marked() {
        let idx = j * nx + i;
        let g = Complex64::new(values[idx].norm().ln(), phases[idx]);
        let residual = (g.exp() - values[idx]).norm() / values[idx].norm();
        if residual > max_residual {
            max_residual = residual;
        }
        out[idx] = g;
    }
    if max_residual > tols.residual {
        return Err(Error::NonConvergence(format!(
            "log residual {max_residual} exceeds tolerance on the set"
        )));
    }
    Ok(LogResult::Grid(LogGrid::from_values(
        set.clone(),
        out,
        max_residual,
        roots,
    )))
}

/// Closed cycle of cell centers: the tree path from `u` to `v` plus the
/// direct closing edge back to `u`.
fn tree_cycle(set: &GridSet, parent: &[i64], depth: &[u32], u: usize, v: usize) -> Result<PolyPath> {
    let nx = set.nx();
    let mut a = u;
    let mut b = v;
    let mut chain_a = vec![a];
    let mut chain_b = vec![b];
    while depth[a] > depth[b] {
        a = parent[a] as usize;
        chain_a.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b] as usize;
        chain_b.push(b);
    }
    while a != b {
        if parent[a] < 0 || parent[b] < 0 {
            return Err(Error::Construction(
                "inconsistent adjacency spans two forest components".into(),
            ));
        }
        a = parent[a] as usize;
        b = parent[b] as usize;
        chain_a.push(a);
        chain_b.push(b);
    }
    // chain_a ends at the common ancestor; append chain_b reversed, without
    // repeating the ancestor.
    let mut cells = chain_a;
    for &c in chain_b.iter().rev().skip(1) {
        cells.push(c);
    }
    let points = cells
        .iter()
        .map(|&idx| set.center(idx % nx, idx / nx))
        .collect();
    PolyPath::new(points, true)
}

fn enclosed_hole_label(set: &GridSet, cycle: &PolyPath) -> i32 {
    let labeling = components(set);
    for region in labeling.regions.iter().filter(|r| r.is_hole()) {
        if winding_around(&cycle.points, region.representative) != 0 {
            return region.label;
        }
    }
    -1
}

/// Exhaustive small-cycle check: the winding of `f` vanishes on every unit
/// square of four pairwise-adjacent marked cells. Intended for modest grids.
pub fn plaquette_windings_all_zero(f: &AnalyticFn, set: &GridSet, tols: &Tolerances) -> Result<bool> {
    let (nx, ny) = (set.nx(), set.ny());
    for j in 0..ny.saturating_sub(1) {
        for i in 0..nx.saturating_sub(1) {
            if !(set.at(i, j) && set.at(i + 1, j) && set.at(i + 1, j + 1) && set.at(i, j + 1)) {
                continue;
            }
            let corners = [
                set.center(i, j).to_c(),
                set.center(i + 1, j).to_c(),
                set.center(i + 1, j + 1).to_c(),
                set.center(i, j + 1).to_c(),
            ];
            let mut phase = 0.0;
            for k in 0..4 {
                phase +=
                    super::winding::continuous_phase_change(f, corners[k], corners[(k + 1) % 4], tols)?;
            }
            if (phase / TAU).round() as i64 != 0 || phase.abs() > 1e-6 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
