//! End-to-end counterexample construction for sets failing the hole
//! conditions.
//!
//! Step 1 handles a set with a hole directly: for `f(z) = z - zeta` with
//! `zeta` inside the hole, any logarithm of `f` on the set would extend
//! across a collar of the hole boundary, yet the winding of `f` along a
//! curve enclosing `zeta` there is 1, not 0.
//!
//! Step 2 handles a hole-free set whose enlargement by a closed disk creates
//! holes growing to the window margin: a function vanishing at one point per
//! enlargement hole is built from elementary factors, its logarithm on the
//! set is extended across a collar of the set's trace on the enlargement
//! circle, and the smallest-arc hole yields the enclosing curve on which the
//! winding is again nonzero.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::analysis::{
    continuous_phase_change, log_on_path, log_on_set, weierstrass_build, winding_number,
    AnalyticFn, LogGrid, LogResult,
};
use crate::error::Error;
use crate::geometry::{
    dilate, distance_transform, nearest_marked_within, rasterize, GridSet, Point, Scene, ShapeKind,
};
use crate::tolerances::{Tolerances, ARC_RATIO, MIN_CLEARANCE_CELLS};
use crate::topology::{
    circle_arcs, components, enclosing_curve, filling, set_components, ArcSet, PolyPath,
    RegionInfo, RegionLabeling,
};
use crate::Result;

/// Arc data for the selected hole in a step-2 witness.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChosenHole {
    pub label: i32,
    /// Measure of the hole's trace on the enlargement circle.
    pub measure: f64,
    /// The target bound `delta / 10^3`.
    pub small_arc_target: f64,
    /// Whether the measure met the target; when it does not (typical at desk
    /// resolution), the winding contradiction is still certified directly.
    pub small_arc_bound_met: bool,
    /// Whether the hole's entire boundary ring lies in set + collar.
    pub ring_covered: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ObstructionSummary {
    pub winding: i64,
    pub hole_label: i32,
    pub cycle_points: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GlueSummary {
    /// Exponential-identity residual of the glued grid.
    pub max_residual: f64,
    /// Adjacent pairs with phase jumps at or above the step bound: branch
    /// seams of the piecewise branch, nonzero exactly when the glued domain
    /// encloses a placed zero.
    pub seams: usize,
    /// Independent single-valuedness probe on set + collar: the obstruction
    /// found there, if any.
    pub obstruction: Option<ObstructionSummary>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessReport {
    pub mode: String,
    pub f: AnalyticFn,
    pub hole_label: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<Point>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub zetas: Vec<Point>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n0: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arcs: Option<ArcSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chosen_hole: Option<ChosenHole>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub glue: Option<GlueSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_abs_on_set: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_abs_at_zeros: Option<f64>,
    pub gamma: PolyPath,
    pub winding: i64,
    /// Accumulated phase of `f` along gamma; equals `2 pi * winding` within
    /// the winding tolerance.
    pub total_phase: f64,
    pub max_phase_residual: f64,
    /// Whether every gamma vertex lies in the recorded extension domain.
    pub gamma_in_certified_domain: bool,
    pub certified_domain_cells: usize,
    pub conclusion: String,
}

/// Pick the curve standoff for a hole of the given clearance.
fn choose_epsilon(h: f64, clearance: f64) -> Result<f64> {
    let eps = (0.5 * clearance).min(6.0 * h).max(2.0 * h);
    if eps >= clearance {
        return Err(Error::Resolution(format!(
            "hole too thin for curve extraction: clearance {clearance} vs required standoff {eps}"
        )));
    }
    Ok(eps)
}

/// Set cells 8-adjacent to cells of the given complement region.
fn boundary_ring(ambient: &GridSet, labeling: &RegionLabeling, label: i32) -> Result<GridSet> {
    let (nx, ny) = (ambient.nx(), ambient.ny());
    let mut ring = GridSet::empty(ambient.window)?;
    for j in 0..ny {
        for i in 0..nx {
            if labeling.label_at(i, j) != label {
                continue;
            }
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
                    let (ii, jj) = (ii as usize, jj as usize);
                    if ambient.at(ii, jj) {
                        let idx = ring.idx(ii, jj);
                        ring.mask[idx] = true;
                    }
                }
            }
        }
    }
    Ok(ring)
}

fn gamma_containment(gamma: &PolyPath, domain: &GridSet) -> bool {
    gamma.points.iter().all(|p| domain.contains_point(*p))
}

/// Step-1 witness: a hole of the set itself.
pub fn witness_step1(set: &GridSet, hole_label: Option<i32>, tols: &Tolerances) -> Result<WitnessReport> {
    let labeling = components(set);
    let hole: &RegionInfo = match hole_label {
        Some(l) => {
            let r = labeling
                .region(l)
                .ok_or_else(|| Error::Domain(format!("no component with label {l}")))?;
            if !r.is_hole() {
                return Err(Error::Domain(format!(
                    "component {l} touches the window border; it is not a hole"
                )));
            }
            r
        }
        None => labeling
            .regions
            .iter()
            .find(|r| r.is_hole())
            .ok_or_else(|| Error::Domain("the set has no holes; nothing to witness".into()))?,
    };

    let h = set.window.h;
    let zeta = hole.representative;
    if hole.clearance < MIN_CLEARANCE_CELLS * h {
        return Err(Error::Resolution(format!(
            "hole {} is too thin to host a zero with {MIN_CLEARANCE_CELLS}h clearance",
            hole.label
        )));
    }
    let eps = choose_epsilon(h, hole.clearance)?;
    let f = AnalyticFn::LinearFactor { zeta };

    let v = filling(&labeling, hole.label)?;
    let gamma = enclosing_curve(&v, zeta, eps)?;
    let winding = winding_number(&f, &gamma, tols)?;
    if winding != 1 {
        return Err(Error::Construction(format!(
            "expected winding 1 around the hole representative, got {winding}"
        )));
    }
    let lp = log_on_path(&f, &gamma, None, tols)?;
    let max_phase_residual = (lp.total_phase - TAU * winding as f64).abs();
    if max_phase_residual >= tols.winding {
        return Err(Error::Construction(format!(
            "phase accumulation {} disagrees with winding {winding}",
            lp.total_phase
        )));
    }

    // The extension domain near the hole boundary in which the curve lives.
    let ring = boundary_ring(set, &labeling, hole.label)?;
    let domain = dilate(&ring, eps + 2.0 * h)?;
    let gamma_in = gamma_containment(&gamma, &domain);

    Ok(WitnessReport {
        mode: "step1".into(),
        f,
        hole_label: hole.label,
        zeta: Some(zeta),
        zetas: Vec::new(),
        n0: None,
        delta: None,
        arcs: None,
        chosen_hole: None,
        glue: None,
        min_abs_on_set: None,
        max_abs_at_zeros: None,
        gamma,
        winding,
        total_phase: lp.total_phase,
        max_phase_residual,
        gamma_in_certified_domain: gamma_in,
        certified_domain_cells: domain.marked_count(),
        conclusion: format!(
            "no continuous logarithm of f(z) = z - ({} + {}i) exists on the set: any such \
             branch extends to a collar of the hole boundary, where the curve gamma encloses \
             the zero and accumulates phase 2*pi instead of 0",
            zeta.re, zeta.im
        ),
    })
}

/// Extension of a logarithm grid onto a collar: each collar cell outside
/// the base domain takes its phase from the nearest base cell, transported
/// continuously along the connecting segment.
pub fn extend_log(
    base: &LogGrid,
    f: &AnalyticFn,
    collar: &GridSet,
    tols: &Tolerances,
) -> Result<LogGrid> {
    if !base.domain.same_grid(collar) {
        return Err(Error::Domain("extension collar must share the base window".into()));
    }
    let (nx, ny) = (collar.nx(), collar.ny());
    // The ring search terminates one ring past the first hit, so a full-grid
    // bound costs nothing when the base is nearby.
    let scan = nx.max(ny);
    let mut values = vec![Complex64::new(0.0, 0.0); nx * ny];
    let mut max_residual = 0.0f64;
    for j in 0..ny {
        for i in 0..nx {
            if !collar.at(i, j) {
                continue;
            }
            let idx = j * nx + i;
            if let Some(g) = base.value_at(i, j) {
                values[idx] = g;
                continue;
            }
            let (bi, bj) = nearest_marked_within(&base.domain, i, j, scan).ok_or_else(|| {
                Error::Construction(format!(
                    "no base cell near collar cell ({i},{j}) for the extension"
                ))
            })?;
            let gb = base.value_at(bi, bj).expect("nearest cell is in the base");
            let zb = collar.center(bi, bj).to_c();
            let zu = collar.center(i, j).to_c();
            let dphi = continuous_phase_change(f, zb, zu, tols)?;
            let vu = f.eval(zu)?;
            if vu.value.norm() <= tols.tol_zero_at(zu) {
                return Err(Error::ZeroOnContour(format!(
                    "|f| below tolerance at collar cell {} + {}i",
                    zu.re, zu.im
                )));
            }
            let g = Complex64::new(vu.value.norm().ln(), gb.im + dphi);
            let residual = (g.exp() - vu.value).norm() / vu.value.norm();
            if residual > max_residual {
                max_residual = residual;
            }
            values[idx] = g;
        }
    }
    let max_residual = max_residual.max(base.max_residual);
    Ok(LogGrid::from_values(
        collar.clone(),
        values,
        max_residual,
        Vec::new(),
    ))
}

/// Glue two logarithm grids of one function over a shared window. Each
/// 8-connected component of the second domain is shifted by the integer
/// multiple of 2*pi*i fixed at its first overlap cell in raster order;
/// components without overlap keep independent branches. After shifting,
/// every overlap cell must agree within the glue tolerance.
pub fn glue_log_domains(
    g1: &LogGrid,
    g2: &LogGrid,
    overlap: &GridSet,
    tols: &Tolerances,
) -> Result<LogGrid> {
    if !g1.domain.same_grid(&g2.domain) || !g1.domain.same_grid(overlap) {
        return Err(Error::Domain("glue requires grids over one window".into()));
    }
    if !overlap.is_subset_of(&g1.domain) || !overlap.is_subset_of(&g2.domain) {
        return Err(Error::Domain("overlap must lie inside both domains".into()));
    }
    let (labels2, count2) = set_components(&g2.domain);
    let (nx, ny) = (overlap.nx(), overlap.ny());
    let mut shifts: Vec<Option<i64>> = vec![None; count2];
    for j in 0..ny {
        for i in 0..nx {
            if !overlap.at(i, j) {
                continue;
            }
            let comp = labels2[j * nx + i];
            if comp < 0 || shifts[comp as usize].is_some() {
                continue;
            }
            let a = g1.value_at(i, j).expect("overlap in g1");
            let b = g2.value_at(i, j).expect("overlap in g2");
            let k = ((a.im - b.im) / TAU).round() as i64;
            if (a.im - b.im - k as f64 * TAU).abs() > tols.glue {
                return Err(Error::Gluing(format!(
                    "non-integer branch mismatch {} at overlap cell ({i},{j})",
                    a.im - b.im
                )));
            }
            shifts[comp as usize] = Some(k);
        }
    }
    // Verify every overlap cell under its component's shift.
    for j in 0..ny {
        for i in 0..nx {
            if !overlap.at(i, j) {
                continue;
            }
            let comp = labels2[j * nx + i];
            let k = shifts[comp as usize].unwrap_or(0);
            let a = g1.value_at(i, j).expect("overlap in g1");
            let b = g2.value_at(i, j).expect("overlap in g2");
            if (a.im - b.im - k as f64 * TAU).abs() > tols.glue {
                return Err(Error::Gluing(format!(
                    "branch mismatch at overlap cell ({i},{j}): the two logarithms differ by a \
                     non-constant multiple of 2*pi on one component"
                )));
            }
        }
    }

    let union = g1.domain.union_with(&g2.domain)?;
    let mut values = vec![Complex64::new(0.0, 0.0); nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let idx = j * nx + i;
            if let Some(g) = g1.value_at(i, j) {
                values[idx] = g;
            } else if let Some(g) = g2.value_at(i, j) {
                let k = shifts[labels2[idx] as usize].unwrap_or(0);
                values[idx] = g + Complex64::new(0.0, k as f64 * TAU);
            }
        }
    }
    Ok(LogGrid::from_values(
        union,
        values,
        g1.max_residual.max(g2.max_residual),
        g1.roots.clone(),
    ))
}

/// Step-2 witness: a hole-free set whose enlargement by the closed disk of
/// radius `n0` produces margin-reaching holes.
pub fn witness_step2(
    set: &GridSet,
    n0: u32,
    samples_per_unit: u32,
    tols: &Tolerances,
) -> Result<WitnessReport> {
    let h = set.window.h;
    let base_holes = components(set);
    if base_holes.regions.iter().any(|r| r.is_hole()) {
        return Err(Error::Domain(
            "the set already has a hole (condition 1 fails); use the step-1 witness".into(),
        ));
    }

    let disk = rasterize(
        &Scene::default().union(ShapeKind::Disk {
            cx: 0.0,
            cy: 0.0,
            r: n0 as f64,
        }),
        set.window,
    )?;
    let enlarged = set.union_with(&disk)?;
    let labeling2 = components(&enlarged);
    let mut holes2: Vec<RegionInfo> = labeling2
        .regions
        .iter()
        .filter(|r| r.is_hole())
        .cloned()
        .collect();
    if holes2.is_empty() {
        return Err(Error::Domain(format!(
            "adding the radius-{n0} disk creates no holes; nothing to witness"
        )));
    }
    if !holes2.iter().any(|r| r.touches_margin) {
        return Err(Error::Domain(format!(
            "holes of the enlarged set stay inside the margin at n0 = {n0}; the failure of the \
             bounded-hole-union condition is not visible in this window"
        )));
    }
    holes2.sort_by(|a, b| {
        a.max_modulus
            .partial_cmp(&b.max_modulus)
            .unwrap()
            .then(a.label.cmp(&b.label))
    });

    // One zero per hole, placed at the deep representative.
    let usable: Vec<&RegionInfo> = holes2
        .iter()
        .filter(|r| r.clearance >= MIN_CLEARANCE_CELLS * h)
        .collect();
    if usable.is_empty() {
        return Err(Error::Construction(
            "no enlargement hole is thick enough to host a zero".into(),
        ));
    }
    let zetas: Vec<Point> = usable.iter().map(|r| r.representative).collect();
    let f = weierstrass_build(&zetas, set.window.corner_radius())?;

    // Certify the zero placement against the set.
    let mut max_abs_at_zeros = 0.0f64;
    for z in &zetas {
        max_abs_at_zeros = max_abs_at_zeros.max(f.eval(z.to_c())?.value.norm());
    }
    let mut min_abs_on_set = f64::INFINITY;
    for (i, j) in set.iter_marked() {
        let z = set.center(i, j).to_c();
        let v = f.eval(z)?.value.norm();
        if v <= tols.tol_zero_at(z) {
            return Err(Error::Construction(format!(
                "a placed zero falls within the zero tolerance of the set cell at {} + {}i",
                z.re, z.im
            )));
        }
        min_abs_on_set = min_abs_on_set.min(v);
    }

    // The assumed logarithm on the set itself: the set is hole-free, so
    // this must succeed.
    let g_set = match log_on_set(&f, set, tols)? {
        LogResult::Grid(g) => g,
        LogResult::Obstruction(_) => {
            return Err(Error::Construction(
                "unexpected obstruction on the hole-free set".into(),
            ))
        }
    };

    // Trace of the set on the enlargement circle, and the collar radius
    // delta = min(dist(K, U^c), 1) / 2 from the distance transform of a
    // zero-avoiding neighborhood U of K.
    let radius = n0 as f64;
    let mut k_band = GridSet::empty(set.window)?;
    for (i, j) in set.iter_marked() {
        if (set.center(i, j).norm() - radius).abs() <= h {
            let idx = k_band.idx(i, j);
            k_band.mask[idx] = true;
        }
    }
    if k_band.is_empty() {
        return Err(Error::Construction(format!(
            "the set does not meet the circle of radius {n0}; no collar to glue across"
        )));
    }
    let mut rho0 = f64::INFINITY;
    for (i, j) in k_band.iter_marked() {
        let c = k_band.center(i, j);
        for z in &zetas {
            rho0 = rho0.min((c.re - z.re).hypot(c.im - z.im));
        }
    }
    let rho = (rho0 / 2.0).min(1.0);
    let u_neighborhood = dilate(&k_band, rho)?;
    let dt_u = distance_transform(&u_neighborhood);
    let mut dist_k_to_complement = f64::INFINITY;
    for (i, j) in k_band.iter_marked() {
        dist_k_to_complement = dist_k_to_complement.min(dt_u.at(i, j));
    }
    let delta = dist_k_to_complement.min(1.0) / 2.0;
    if delta < 2.0 * h {
        return Err(Error::Resolution(format!(
            "collar radius {delta} below the 2h resolution floor"
        )));
    }
    let collar = dilate(&k_band, delta)?;

    // Piecewise branch: extend the set branch onto the collar, then glue.
    let g_collar = extend_log(&g_set, &f, &collar, tols)?;
    let overlap = set.intersect_with(&collar)?;
    let glued = glue_log_domains(&g_set, &g_collar, &overlap, tols)?;

    // Independent single-valuedness probe on the glued domain: when the
    // collar closes a hole's boundary ring, the probe returns the
    // obstruction that contradicts the assumed logarithm.
    let glue_domain = set.union_with(&collar)?;
    let probe = log_on_set(&f, &glue_domain, tols)?;
    let probe_summary = match &probe {
        LogResult::Grid(_) => None,
        LogResult::Obstruction(o) => Some(ObstructionSummary {
            winding: o.winding,
            hole_label: o.hole_label,
            cycle_points: o.cycle.points.len(),
        }),
    };

    // Arc measures on the circle; pick the smallest-measure usable hole.
    let arcs = circle_arcs(set, &labeling2, n0, samples_per_unit)?;
    let chosen = usable
        .iter()
        .map(|r| (arcs.measure_for(r.label), r.label))
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)))
        .expect("usable holes exist");
    let (measure, chosen_label) = chosen;
    let chosen_region = usable.iter().find(|r| r.label == chosen_label).unwrap();
    let small_arc_target = delta * ARC_RATIO;

    let ring = boundary_ring(&enlarged, &labeling2, chosen_label)?;
    let mut ring_covered = true;
    for (i, j) in ring.iter_marked() {
        if !(set.at(i, j) || collar.at(i, j)) {
            ring_covered = false;
            break;
        }
    }

    // The enclosing curve around the selected hole's filling.
    let zeta0 = chosen_region.representative;
    let eps = choose_epsilon(h, chosen_region.clearance)?;
    let v = filling(&labeling2, chosen_label)?;
    let gamma = enclosing_curve(&v, zeta0, eps)?;
    let winding = winding_number(&f, &gamma, tols)?;
    if winding < 1 {
        return Err(Error::Construction(format!(
            "expected winding >= 1 around the selected hole, got {winding}"
        )));
    }
    let lp = log_on_path(&f, &gamma, None, tols)?;
    let max_phase_residual = (lp.total_phase - TAU * winding as f64).abs();
    if max_phase_residual >= tols.winding {
        return Err(Error::Construction(format!(
            "phase accumulation {} disagrees with winding {winding}",
            lp.total_phase
        )));
    }

    let extension_domain = dilate(&ring, eps + 2.0 * h)?;
    let gamma_in = gamma_containment(&gamma, &extension_domain);

    let conclusion = format!(
        "assuming a continuous logarithm of the product function on the set, it extends across \
         the circle collar (delta = {delta:.6}); the boundary of hole {chosen_label} then lies \
         in the extended domain, where the curve gamma encloses the placed zero and accumulates \
         phase 2*pi*{winding} instead of 0 — no such logarithm exists",
    );

    Ok(WitnessReport {
        mode: "step2".into(),
        f,
        hole_label: chosen_label,
        zeta: None,
        zetas,
        n0: Some(n0),
        delta: Some(delta),
        arcs: Some(arcs),
        chosen_hole: Some(ChosenHole {
            label: chosen_label,
            measure,
            small_arc_target,
            small_arc_bound_met: measure < small_arc_target,
            ring_covered,
        }),
        glue: Some(GlueSummary {
            max_residual: glued.max_residual,
            seams: glued.seam_count(),
            obstruction: probe_summary,
        }),
        min_abs_on_set: Some(min_abs_on_set),
        max_abs_at_zeros: Some(max_abs_at_zeros),
        gamma,
        winding,
        total_phase: lp.total_phase,
        max_phase_residual,
        gamma_in_certified_domain: gamma_in,
        certified_domain_cells: extension_domain.marked_count(),
        conclusion,
    })
}

/// The glued grid of a step-2 run, re-derived for callers that need the
/// full per-cell branch rather than the report summary.
pub fn step2_glued_grid(
    set: &GridSet,
    f: &AnalyticFn,
    n0: u32,
    tols: &Tolerances,
) -> Result<(LogGrid, GridSet)> {
    let h = set.window.h;
    let g_set = match log_on_set(f, set, tols)? {
        LogResult::Grid(g) => g,
        LogResult::Obstruction(_) => {
            return Err(Error::Construction("obstruction on the base set".into()))
        }
    };
    let radius = n0 as f64;
    let mut k_band = GridSet::empty(set.window)?;
    for (i, j) in set.iter_marked() {
        if (set.center(i, j).norm() - radius).abs() <= h {
            let idx = k_band.idx(i, j);
            k_band.mask[idx] = true;
        }
    }
    let mut zeros = Vec::new();
    if let AnalyticFn::WeierstrassProduct { zeros: zs, .. } = f {
        zeros = zs.clone();
    }
    let mut rho0 = f64::INFINITY;
    for (i, j) in k_band.iter_marked() {
        let c = k_band.center(i, j);
        for z in &zeros {
            rho0 = rho0.min((c.re - z.re).hypot(c.im - z.im));
        }
    }
    let rho = (rho0 / 2.0).min(1.0);
    let u_neighborhood = dilate(&k_band, rho)?;
    let dt_u = distance_transform(&u_neighborhood);
    let mut dist_k = f64::INFINITY;
    for (i, j) in k_band.iter_marked() {
        dist_k = dist_k.min(dt_u.at(i, j));
    }
    let delta = dist_k.min(1.0) / 2.0;
    let collar = dilate(&k_band, delta)?;
    let g_collar = extend_log(&g_set, f, &collar, tols)?;
    let overlap = set.intersect_with(&collar)?;
    let glued = glue_log_domains(&g_set, &g_collar, &overlap, tols)?;
    let domain = set.union_with(&collar)?;
    Ok((glued, domain))
}
