//! Winding numbers by adaptive phase accumulation, cross-checked against a
//! trapezoid estimate of the logarithmic-derivative integral.
//!
//! Each path segment is bisected until (a) both half-segment principal
//! phase increments stay below the phase-step bound, (b) the whole-segment
//! increment agrees with their sum (an aliasing detector), and, when the
//! integral is requested, (c) the trapezoid value has converged. The two
//! routes must agree near an integer; disagreement is a refinement signal,
//! not a rounding choice.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::Error;
use crate::tolerances::{Tolerances, MAX_EVALS, MAX_REFINE_DEPTH, PHASE_STEP_MAX};
use crate::topology::PolyPath;
use crate::Result;

use super::{AnalyticFn, ValDer};

pub(crate) struct RefineOutput {
    pub phase: f64,
    pub integral: Complex64,
}

pub(crate) struct Refiner<'a> {
    f: &'a AnalyticFn,
    tols: &'a Tolerances,
    evals: usize,
    /// Per-unit-length tolerance for trapezoid convergence; `None` skips
    /// the integral entirely.
    int_tol_per_len: Option<f64>,
}

impl<'a> Refiner<'a> {
    pub fn new(f: &'a AnalyticFn, tols: &'a Tolerances, int_tol_per_len: Option<f64>) -> Self {
        Refiner {
            f,
            tols,
            evals: 0,
            int_tol_per_len,
        }
    }

    pub fn eval_checked(&mut self, z: Complex64) -> Result<ValDer> {
        self.evals += 1;
        if self.evals > MAX_EVALS {
            return Err(Error::NonConvergence(
                "refinement evaluation budget exhausted".into(),
            ));
        }
        let vd = self.f.eval(z)?;
        if vd.value.norm() <= self.tols.tol_zero_at(z) {
            return Err(Error::ZeroOnContour(format!(
                "|f| = {} below the zero tolerance at z = {} + {}i",
                vd.value.norm(),
                z.re,
                z.im
            )));
        }
        Ok(vd)
    }

    /// Refine one segment; `sink` receives each accepted leaf endpoint in
    /// order together with the phase increment leading into it.
    pub fn segment(
        &mut self,
        a: Complex64,
        fa: &ValDer,
        b: Complex64,
        fb: &ValDer,
        depth: u32,
        sink: &mut dyn FnMut(Complex64, &ValDer, f64),
    ) -> Result<RefineOutput> {
        if a == b {
            return Ok(RefineOutput {
                phase: 0.0,
                integral: Complex64::new(0.0, 0.0),
            });
        }
        if depth > MAX_REFINE_DEPTH {
            return Err(Error::NonConvergence(format!(
                "segment refinement exceeded depth {MAX_REFINE_DEPTH} near z = {} + {}i",
                a.re, a.im
            )));
        }
        let m = (a + b) / 2.0;
        let fm = self.eval_checked(m)?;
        let whole = (fb.value / fa.value).arg();
        let dl = (fm.value / fa.value).arg();
        let dr = (fb.value / fm.value).arg();
        let phase_ok = dl.abs() < PHASE_STEP_MAX && dr.abs() < PHASE_STEP_MAX;
        let alias_ok = (whole - (dl + dr)).abs() < 1e-9;
        let int_ok;
        let t_split;
        match self.int_tol_per_len {
            Some(tol) => {
                let la = fa.deriv / fa.value;
                let lm = fm.deriv / fm.value;
                let lb = fb.deriv / fb.value;
                let t_whole = (la + lb) / 2.0 * (b - a);
                let split = (la + lm) / 2.0 * (m - a) + (lm + lb) / 2.0 * (b - m);
                int_ok = (t_whole - split).norm() <= tol * (b - a).norm();
                t_split = split;
            }
            None => {
                int_ok = true;
                t_split = Complex64::new(0.0, 0.0);
            }
        }
        if phase_ok && alias_ok && int_ok && m != a && m != b {
            sink(m, &fm, dl);
            sink(b, fb, dr);
            return Ok(RefineOutput {
                phase: dl + dr,
                integral: t_split,
            });
        }
        if m == a || m == b {
            return Err(Error::NonConvergence(
                "segment refinement hit floating-point resolution".into(),
            ));
        }
        let left = self.segment(a, fa, m, &fm, depth + 1, sink)?;
        let right = self.segment(m, &fm, b, fb, depth + 1, sink)?;
        Ok(RefineOutput {
            phase: left.phase + right.phase,
            integral: left.integral + right.integral,
        })
    }
}

/// Continuous phase change of `f` along the straight segment from `a` to
/// `b`, with adaptive bisection. The result is the imaginary part of the
/// analytic continuation of `log f` along the segment.
pub fn continuous_phase_change(
    f: &AnalyticFn,
    a: Complex64,
    b: Complex64,
    tols: &Tolerances,
) -> Result<f64> {
    let mut refiner = Refiner::new(f, tols, None);
    let fa = refiner.eval_checked(a)?;
    let fb = refiner.eval_checked(b)?;
    let out = refiner.segment(a, &fa, b, &fb, 0, &mut |_, _, _| {})?;
    Ok(out.phase)
}

/// Winding number of `f` along a closed path: the rounded total phase
/// change divided by 2*pi. The pre-rounding value and the trapezoid
/// estimate of the logarithmic-derivative integral must both land within
/// the winding tolerance of the returned integer.
pub fn winding_number(f: &AnalyticFn, gamma: &PolyPath, tols: &Tolerances) -> Result<i64> {
    let (w, _) = winding_number_detailed(f, gamma, tols)?;
    Ok(w)
}

/// Winding number plus the raw pre-rounding phase estimate.
pub fn winding_number_detailed(
    f: &AnalyticFn,
    gamma: &PolyPath,
    tols: &Tolerances,
) -> Result<(i64, f64)> {
    if !gamma.closed {
        return Err(Error::Domain("winding number needs a closed path".into()));
    }
    let total_len = gamma.total_length();
    if total_len == 0.0 {
        return Err(Error::Domain("winding number needs a nondegenerate path".into()));
    }
    let int_tol = 0.05 * tols.winding / total_len;
    let mut refiner = Refiner::new(f, tols, Some(int_tol));

    let verts: Vec<Complex64> = gamma.points.iter().map(|p| p.to_c()).collect();
    let mut evals = Vec::with_capacity(verts.len());
    for &z in &verts {
        evals.push(refiner.eval_checked(z)?);
    }

    let mut phase = 0.0f64;
    let mut integral = Complex64::new(0.0, 0.0);
    let n = verts.len();
    for k in 0..n {
        let (a, b) = (verts[k], verts[(k + 1) % n]);
        let (fa, fb) = (evals[k], evals[(k + 1) % n]);
        let out = refiner.segment(a, &fa, b, &fb, 0, &mut |_, _, _| {})?;
        phase += out.phase;
        integral += out.integral;
    }

    let raw = phase / TAU;
    let w = raw.round() as i64;
    if (raw - w as f64).abs() >= tols.winding {
        return Err(Error::NonConvergence(format!(
            "phase sum {raw} is not within {} of an integer",
            tols.winding
        )));
    }
    let trap = integral / Complex64::new(0.0, TAU);
    if (trap - Complex64::new(w as f64, 0.0)).norm() >= tols.winding {
        return Err(Error::NonConvergence(format!(
            "trapezoid estimate {} + {}i disagrees with winding {w}",
            trap.re, trap.im
        )));
    }
    Ok((w, raw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn circle(center: Complex64, radius: f64, samples: usize) -> PolyPath {
        let pts = (0..samples)
            .map(|k| {
                let t = k as f64 / samples as f64 * TAU;
                Point::new(center.re + radius * t.cos(), center.im + radius * t.sin())
            })
            .collect();
        PolyPath::new(pts, true).unwrap()
    }

    #[test]
    fn linear_factor_winds_once_around_its_zero() {
        let zeta = Complex64::new(0.3, -0.2);
        let f = AnalyticFn::LinearFactor {
            zeta: Point::from_c(zeta),
        };
        let tols = Tolerances::default();
        let gamma = circle(zeta, 1.0, 32);
        assert_eq!(winding_number(&f, &gamma, &tols).unwrap(), 1);
    }

    #[test]
    fn contour_avoiding_the_zero_winds_zero_times() {
        let f = AnalyticFn::LinearFactor {
            zeta: Point::new(3.0, 0.0),
        };
        let tols = Tolerances::default();
        let gamma = circle(Complex64::new(0.0, 0.0), 1.0, 32);
        assert_eq!(winding_number(&f, &gamma, &tols).unwrap(), 0);
    }

    #[test]
    fn random_polynomials_count_enclosed_roots() {
        use rand::{Rng, SeedableRng};
        let tols = Tolerances::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..40 {
            let k = rng.gen_range(0..=3usize);
            let roots: Vec<Complex64> = (0..k)
                .map(|_| Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)))
                .collect();
            let center = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
            let radius = rng.gen_range(0.5..1.5);
            if roots
                .iter()
                .any(|r| ((r - center).norm() - radius).abs() < 0.1)
            {
                continue; // root too close to the contour; skip this draw
            }
            let f = AnalyticFn::Product {
                factors: if roots.is_empty() {
                    vec![AnalyticFn::Polynomial {
                        coeffs: vec![Point::new(2.0, 1.0)],
                    }]
                } else {
                    roots
                        .iter()
                        .map(|r| AnalyticFn::LinearFactor {
                            zeta: Point::from_c(*r),
                        })
                        .collect()
                },
            };
            let expected = roots.iter().filter(|r| (*r - center).norm() < radius).count() as i64;
            let gamma = circle(center, radius, 24);
            let (w, raw) = winding_number_detailed(&f, &gamma, &tols).unwrap();
            assert_eq!(w, expected);
            assert!((raw - w as f64).abs() < tols.winding);
        }
    }

    #[test]
    fn zero_on_the_contour_is_detected() {
        let f = AnalyticFn::LinearFactor {
            zeta: Point::new(1.0, 0.0),
        };
        let tols = Tolerances::default();
        let gamma = circle(Complex64::new(0.0, 0.0), 1.0, 64);
        // The contour passes exactly through the zero at sample 0.
        assert!(matches!(
            winding_number(&f, &gamma, &tols),
            Err(Error::ZeroOnContour(_))
        ));
    }

    #[test]
    fn open_paths_are_rejected() {
        let f = AnalyticFn::LinearFactor {
            zeta: Point::new(0.0, 0.0),
        };
        let path = PolyPath::new(vec![Point::new(1.0, 0.0), Point::new(2.0, 0.0)], false).unwrap();
        assert!(matches!(
            winding_number(&f, &path, &Tolerances::default()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn phase_change_along_upper_semicircle_is_pi() {
        let f = AnalyticFn::LinearFactor {
            zeta: Point::new(0.0, 0.0),
        };
        let tols = Tolerances::default();
        // Continuation along the two quarter-arc chords overestimates the
        // refinement need; chain chords of the unit upper semicircle.
        let mut total = 0.0;
        let steps = 8;
        for k in 0..steps {
            let t0 = k as f64 / steps as f64 * std::f64::consts::PI;
            let t1 = (k + 1) as f64 / steps as f64 * std::f64::consts::PI;
            total += continuous_phase_change(
                &f,
                Complex64::from_polar(1.0, t0),
                Complex64::from_polar(1.0, t1),
                &tols,
            )
            .unwrap();
        }
        assert!((total - std::f64::consts::PI).abs() < 1e-12);
    }
}
