//! Pinned numeric thresholds.
//!
//! Every tolerance used by the analysis and witness operations is defined
//! here, once, with its origin. Tests assert against these constants rather
//! than repeating magic numbers.

use std::f64::consts::FRAC_PI_2;

/// Scale factor for the zero tolerance: a function value `f(z)` counts as a
/// zero when `|f(z)| <= TOL_ZERO_FACTOR * max(1, |z|)`. Exact non-vanishing
/// is a continuum notion; floating point needs a threshold.
pub const TOL_ZERO_FACTOR: f64 = 1e-12;

/// Maximum allowed phase step between consecutive samples of an unwrapped
/// argument. Any bound below pi gives unique unwrapping; pi/2 leaves a
/// factor-of-two margin against aliasing while keeping refinement cheap.
pub const PHASE_STEP_MAX: f64 = FRAC_PI_2;

/// Maximum relative residual `|exp(g) - f| / |f|` for a logarithm branch.
pub const RESIDUAL_MAX: f64 = 1e-9;

/// Winding-number integrality: both the pre-rounding phase sum and the
/// trapezoid estimate of the logarithmic-derivative integral must land
/// within this distance of the rounded integer.
pub const WINDING_TOL: f64 = 1e-6;

/// Maximum imaginary mismatch when gluing two logarithm grids after the
/// per-component 2*pi*k shift.
pub const GLUE_TOL: f64 = 1e-6;

/// Width of the window margin ring, in cells. A hole reaching this ring is
/// treated as window-scale evidence of unbounded hole growth.
pub const MARGIN_CELLS: usize = 4;

/// Slack for the bounded-growth surrogate: the union of holes of the set
/// enlarged by a closed disk of radius n must stay within modulus n + slack
/// for the enlargement to count as conclusive evidence of boundedness.
pub const GROWTH_SLACK: f64 = 1.0;

/// Target ratio between the selected arc measure and the collar radius in
/// the witness construction (arc measure < delta * ARC_RATIO).
pub const ARC_RATIO: f64 = 1e-3;

/// Minimum clearance, in cells, between a placed zero and the ambient set.
pub const MIN_CLEARANCE_CELLS: f64 = 2.0;

/// Central finite-difference step for derivative validation.
pub const FD_STEP: f64 = 1e-6;

/// Maximum relative error allowed between analytic and finite-difference
/// derivatives at probe points away from zeros.
pub const FD_REL_TOL: f64 = 1e-6;

/// Hard cap on recursive bisection depth for a single path segment.
pub const MAX_REFINE_DEPTH: u32 = 48;

/// Hard cap on function evaluations per adaptive operation.
pub const MAX_EVALS: usize = 4_000_000;

/// Maximum cells along one grid axis.
pub const MAX_CELLS_PER_AXIS: usize = 4096;

/// Maximum total cells in a grid.
pub const MAX_TOTAL_CELLS: usize = MAX_CELLS_PER_AXIS * MAX_CELLS_PER_AXIS;

/// Runtime-configurable tolerances, threaded through the analysis entry
/// points. Defaults are the pinned constants above; the CLI can override
/// the zero tolerance via `--tol-zero` or the `ARAKELIAN_TOL_ZERO` env var.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub tol_zero_factor: f64,
    pub residual: f64,
    pub winding: f64,
    pub glue: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_zero_factor: TOL_ZERO_FACTOR,
            residual: RESIDUAL_MAX,
            winding: WINDING_TOL,
            glue: GLUE_TOL,
        }
    }
}

impl Tolerances {
    /// Defaults with environment overrides applied.
    pub fn from_env() -> Self {
        let mut t = Tolerances::default();
        if let Some(v) = read_env("ARAKELIAN_TOL_ZERO") {
            t.tol_zero_factor = v;
        }
        if let Some(v) = read_env("ARAKELIAN_TOL_RESIDUAL") {
            t.residual = v;
        }
        if let Some(v) = read_env("ARAKELIAN_TOL_WINDING") {
            t.winding = v;
        }
        if let Some(v) = read_env("ARAKELIAN_TOL_GLUE") {
            t.glue = v;
        }
        t
    }

    /// Zero threshold at a point: `tol_zero_factor * max(1, |z|)`.
    pub fn tol_zero_at(&self, z: num_complex::Complex64) -> f64 {
        self.tol_zero_factor * z.norm().max(1.0)
    }
}

fn read_env(name: &str) -> Option<f64> {
    std::env::var(name).ok().and_then(|s| s.parse().ok())
}
