//! Construction of functions with prescribed zeros from elementary factors.

use crate::error::Error;
use crate::geometry::Point;
use crate::Result;

use super::AnalyticFn;

/// Genus for a zero strictly outside the evaluation radius: the minimal `p`
/// with `(evalRadius / |zeta|)^(p+1) <= 2^-n`, where `n` is the 1-based
/// position of the zero in the modulus-sorted list. This pins the factor's
/// log to a summable tail on the evaluation disk with far fewer terms than
/// the classical genus-equals-index choice.
pub fn far_zero_genus(abs_zeta: f64, eval_radius: f64, index: usize) -> Result<u32> {
    if !abs_zeta.is_finite() || abs_zeta <= eval_radius {
        return Err(Error::Policy(format!(
            "zero with modulus {abs_zeta} is not outside the evaluation radius {eval_radius}"
        )));
    }
    let ratio = eval_radius / abs_zeta;
    let target = 0.5f64.powi((index + 1) as i32);
    let mut p = 0u32;
    let mut bound = ratio; // ratio^(p+1)
    while bound > target {
        p += 1;
        bound *= ratio;
        if p > 512 {
            return Err(Error::Construction(format!(
                "genus selection did not converge for |zeta| = {abs_zeta}, R = {eval_radius}"
            )));
        }
    }
    Ok(p)
}

/// Build the product of elementary factors vanishing exactly at the given
/// zeros with multiplicity one inside the evaluation radius.
///
/// Zeros are sorted by modulus (ties by coordinates) before genus selection.
/// A zero inside the evaluation radius contributes a plain linear factor
/// `1 - z/zeta` (genus 0): with finitely many factors nothing is truncated,
/// so the factor is exact and certified as-is. Far zeros get the summable
/// genus from [`far_zero_genus`].
pub fn weierstrass_build(zeros: &[Point], eval_radius: f64) -> Result<AnalyticFn> {
    if zeros.is_empty() {
        return Err(Error::Domain("weierstrass build needs at least one zero".into()));
    }
    if !eval_radius.is_finite() || eval_radius <= 0.0 {
        return Err(Error::Schema("evaluation radius must be positive".into()));
    }
    let mut sorted: Vec<Point> = zeros.to_vec();
    for z in &sorted {
        if !z.is_finite() {
            return Err(Error::Schema("zeros must be finite".into()));
        }
        if z.norm() == 0.0 {
            return Err(Error::Domain("a zero at the origin is not supported".into()));
        }
    }
    sorted.sort_by(|a, b| {
        a.norm()
            .partial_cmp(&b.norm())
            .unwrap()
            .then(a.re.partial_cmp(&b.re).unwrap())
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    for k in 1..sorted.len() {
        if sorted[k - 1] == sorted[k] {
            return Err(Error::Domain("zeros must be distinct".into()));
        }
    }
    let mut genera = Vec::with_capacity(sorted.len());
    for (idx, z) in sorted.iter().enumerate() {
        let r = z.norm();
        if r > eval_radius {
            genera.push(far_zero_genus(r, eval_radius, idx)?);
        } else {
            genera.push(0);
        }
    }
    let f = AnalyticFn::WeierstrassProduct {
        zeros: sorted,
        genera,
    };
    f.validate()?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn single_zero_gives_linear_factor() {
        let f = weierstrass_build(&[Point::new(1.0, 0.0)], 1.0).unwrap();
        // 1 - z: vanishes at 1, equals 1 at 0.
        let at_one = f.eval(Complex64::new(1.0, 0.0)).unwrap().value;
        let at_zero = f.eval(Complex64::new(0.0, 0.0)).unwrap().value;
        assert!(at_one.norm() < 1e-15);
        assert!((at_zero - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        match f {
            AnalyticFn::WeierstrassProduct { genera, .. } => assert_eq!(genera, vec![0]),
            _ => panic!("expected a product"),
        }
    }

    #[test]
    fn far_zeros_vanish_only_at_the_zeros() {
        let zeros = [
            Point::new(2.0, 0.0),
            Point::new(4.0, 0.0),
            Point::new(8.0, 0.0),
        ];
        let f = weierstrass_build(&zeros, 1.0).unwrap();
        for z in &zeros {
            let v = f.eval(z.to_c()).unwrap().value;
            assert!(v.norm() < 1e-10, "|f({})| = {}", z.re, v.norm());
        }
        // Dense sampling of the closed unit disk: no zeros inside.
        let mut min_abs = f64::INFINITY;
        for a in 0..60 {
            for b in 0..60 {
                let r = a as f64 / 59.0;
                let t = b as f64 / 60.0 * std::f64::consts::TAU;
                let z = Complex64::from_polar(r, t);
                min_abs = min_abs.min(f.eval(z).unwrap().value.norm());
            }
        }
        assert!(min_abs > 0.05, "min |f| on the unit disk: {min_abs}");
    }

    #[test]
    fn derivative_matches_finite_differences() {
        use rand::{Rng, SeedableRng};
        let f = weierstrass_build(
            &[
                Point::new(2.0, 1.0),
                Point::new(-3.0, 0.5),
                Point::new(0.0, 6.0),
            ],
            1.5,
        )
        .unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let z = Complex64::new(rng.gen_range(-1.4..1.4), rng.gen_range(-1.4..1.4));
            let err = super::super::derivative_fd_error(&f, z).unwrap();
            assert!(err < 1e-6, "fd error {err} at {z}");
        }
    }

    #[test]
    fn near_zero_requested_as_far_is_a_policy_error() {
        assert!(matches!(
            far_zero_genus(0.5, 1.0, 0),
            Err(Error::Policy(_))
        ));
    }

    #[test]
    fn empty_zero_list_is_a_domain_error() {
        assert!(matches!(weierstrass_build(&[], 1.0), Err(Error::Domain(_))));
    }
}
