//! Evaluatable analytic functions and logarithm-branch machinery.
//!
//! [`AnalyticFn`] is a small closed expression language: linear factors,
//! polynomials, finite products of elementary factors with prescribed zeros,
//! general products, and exponentials. Every variant evaluates to a value
//! and an exact derivative; serialization is a JSON expression tree of
//! `{kind, params, children}` nodes so scene files can specify functions.

mod logbranch;
mod weierstrass;
mod winding;

pub use logbranch::{
    log_on_path, log_on_set, log_on_set_with, plaquette_windings_all_zero, LogGrid, LogPath,
    LogResult, Obstruction, PathSample,
};
pub use weierstrass::{far_zero_genus, weierstrass_build};
pub use winding::{continuous_phase_change, winding_number, winding_number_detailed};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geometry::Point;
use crate::tolerances::{FD_REL_TOL, FD_STEP};
use crate::Result;

/// Value and derivative of a function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValDer {
    pub value: Complex64,
    pub deriv: Complex64,
}

/// Closed family of entire functions with exact derivatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "FnNode", try_from = "FnNode")]
pub enum AnalyticFn {
    /// `z - zeta`.
    LinearFactor { zeta: Point },
    /// Coefficients in ascending degree order.
    Polynomial { coeffs: Vec<Point> },
    /// Product of elementary factors `E_p(z / zeta_n)` with per-zero genus,
    /// vanishing exactly at the zeros with multiplicity one.
    WeierstrassProduct { zeros: Vec<Point>, genera: Vec<u32> },
    Product { factors: Vec<AnalyticFn> },
    ExpOf { inner: Box<AnalyticFn> },
}

impl AnalyticFn {
    pub fn validate(&self) -> Result<()> {
        match self {
            AnalyticFn::LinearFactor { zeta } => {
                if !zeta.is_finite() {
                    return Err(Error::Schema("linearFactor zeta must be finite".into()));
                }
            }
            AnalyticFn::Polynomial { coeffs } => {
                if coeffs.is_empty() {
                    return Err(Error::Schema("polynomial needs coefficients".into()));
                }
                if coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(Error::Schema("polynomial coefficients must be finite".into()));
                }
            }
            AnalyticFn::WeierstrassProduct { zeros, genera } => {
                if zeros.is_empty() {
                    return Err(Error::Domain("weierstrassProduct needs zeros".into()));
                }
                if zeros.len() != genera.len() {
                    return Err(Error::Schema(
                        "weierstrassProduct needs one genus per zero".into(),
                    ));
                }
                for (a, za) in zeros.iter().enumerate() {
                    if za.norm() == 0.0 {
                        return Err(Error::Domain(
                            "weierstrassProduct zeros must be nonzero".into(),
                        ));
                    }
                    for zb in zeros.iter().skip(a + 1) {
                        if za == zb {
                            return Err(Error::Domain(
                                "weierstrassProduct zeros must be distinct".into(),
                            ));
                        }
                    }
                }
            }
            AnalyticFn::Product { factors } => {
                if factors.is_empty() {
                    return Err(Error::Schema("product needs factors".into()));
                }
                for f in factors {
                    f.validate()?;
                }
            }
            AnalyticFn::ExpOf { inner } => inner.validate()?,
        }
        Ok(())
    }

    /// Evaluate value and derivative. Errors on non-finite results.
    pub fn eval(&self, z: Complex64) -> Result<ValDer> {
        let out = match self {
            AnalyticFn::LinearFactor { zeta } => ValDer {
                value: z - zeta.to_c(),
                deriv: Complex64::new(1.0, 0.0),
            },
            AnalyticFn::Polynomial { coeffs } => {
                let mut value = Complex64::new(0.0, 0.0);
                let mut deriv = Complex64::new(0.0, 0.0);
                for c in coeffs.iter().rev() {
                    deriv = deriv * z + value;
                    value = value * z + c.to_c();
                }
                ValDer { value, deriv }
            }
            AnalyticFn::WeierstrassProduct { zeros, genera } => {
                let mut acc = ValDer {
                    value: Complex64::new(1.0, 0.0),
                    deriv: Complex64::new(0.0, 0.0),
                };
                for (zero, &p) in zeros.iter().zip(genera) {
                    let f = elementary_factor(z, zero.to_c(), p);
                    acc = ValDer {
                        value: acc.value * f.value,
                        deriv: acc.deriv * f.value + acc.value * f.deriv,
                    };
                }
                acc
            }
            AnalyticFn::Product { factors } => {
                let mut acc = ValDer {
                    value: Complex64::new(1.0, 0.0),
                    deriv: Complex64::new(0.0, 0.0),
                };
                for f in factors {
                    let g = f.eval(z)?;
                    acc = ValDer {
                        value: acc.value * g.value,
                        deriv: acc.deriv * g.value + acc.value * g.deriv,
                    };
                }
                acc
            }
            AnalyticFn::ExpOf { inner } => {
                let g = inner.eval(z)?;
                let e = g.value.exp();
                ValDer {
                    value: e,
                    deriv: g.deriv * e,
                }
            }
        };
        if !out.value.is_finite() || !out.deriv.is_finite() {
            return Err(Error::Overflow(format!(
                "evaluation overflowed at z = {} + {}i",
                z.re, z.im
            )));
        }
        Ok(out)
    }

    /// Short human-readable description for reports.
    pub fn describe(&self) -> String {
        match self {
            AnalyticFn::LinearFactor { zeta } => {
                format!("z - ({} + {}i)", zeta.re, zeta.im)
            }
            AnalyticFn::Polynomial { coeffs } => format!("polynomial of degree {}", coeffs.len() - 1),
            AnalyticFn::WeierstrassProduct { zeros, .. } => {
                format!("product of {} elementary factors", zeros.len())
            }
            AnalyticFn::Product { factors } => format!("product of {} functions", factors.len()),
            AnalyticFn::ExpOf { .. } => "exp of inner function".into(),
        }
    }
}

/// Elementary factor `E_p(w) = (1 - w) exp(sum_{k=1..p} w^k / k)` at
/// `w = z / zero`, with the derivative taken in `z`.
fn elementary_factor(z: Complex64, zero: Complex64, p: u32) -> ValDer {
    let w = z / zero;
    let one = Complex64::new(1.0, 0.0);
    let mut q = Complex64::new(0.0, 0.0); // sum w^k / k
    let mut qp = Complex64::new(0.0, 0.0); // sum w^{k-1}
    let mut wk = one;
    for k in 1..=p {
        qp += wk;
        wk *= w;
        q += wk / (k as f64);
    }
    let e = q.exp();
    let value = (one - w) * e;
    // d/dw [(1-w) e^q] = e^q (-1 + (1-w) q'), then chain rule via 1/zero.
    let dw = e * (-one + (one - w) * qp);
    ValDer {
        value,
        deriv: dw / zero,
    }
}

/// Central finite-difference check of the analytic derivative at `z`.
/// Returns the relative error.
pub fn derivative_fd_error(f: &AnalyticFn, z: Complex64) -> Result<f64> {
    let step = FD_STEP * z.norm().max(1.0);
    let vd = f.eval(z)?;
    let right = f.eval(z + Complex64::new(step, 0.0))?.value;
    let left = f.eval(z - Complex64::new(step, 0.0))?.value;
    let fd = (right - left) / (2.0 * step);
    let scale = vd.deriv.norm().max(1.0);
    Ok((fd - vd.deriv).norm() / scale)
}

/// Run the finite-difference check at seeded random probes inside the given
/// square; returns the maximum relative error observed.
pub fn validate_derivative(
    f: &AnalyticFn,
    half_width: f64,
    seed: u64,
    probes: usize,
) -> Result<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut max_err = 0.0f64;
    let mut taken = 0usize;
    let mut attempts = 0usize;
    while taken < probes && attempts < probes * 50 {
        attempts += 1;
        let z = Complex64::new(
            rng.gen_range(-half_width..half_width),
            rng.gen_range(-half_width..half_width),
        );
        let vd = f.eval(z)?;
        // Skip probes too close to zeros, where relative error is undefined.
        if vd.value.norm() < 1e-6 {
            continue;
        }
        max_err = max_err.max(derivative_fd_error(f, z)?);
        taken += 1;
    }
    if taken < probes {
        return Err(Error::Construction(
            "could not find enough probe points away from zeros".into(),
        ));
    }
    if max_err > FD_REL_TOL {
        return Err(Error::Construction(format!(
            "derivative check failed: max relative error {max_err}"
        )));
    }
    Ok(max_err)
}

/// JSON expression-tree node: `{kind, params, children}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct FnNode {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    children: Option<Vec<FnNode>>,
}

#[derive(Serialize, Deserialize)]
struct LinearParams {
    zeta: Point,
}

#[derive(Serialize, Deserialize)]
struct PolyParams {
    coeffs: Vec<Point>,
}

#[derive(Serialize, Deserialize)]
struct WeierstrassParams {
    zeros: Vec<Point>,
    genera: Vec<u32>,
}

impl From<AnalyticFn> for FnNode {
    fn from(f: AnalyticFn) -> FnNode {
        match f {
            AnalyticFn::LinearFactor { zeta } => FnNode {
                kind: "linearFactor".into(),
                params: Some(serde_json::to_value(LinearParams { zeta }).unwrap()),
                children: None,
            },
            AnalyticFn::Polynomial { coeffs } => FnNode {
                kind: "polynomial".into(),
                params: Some(serde_json::to_value(PolyParams { coeffs }).unwrap()),
                children: None,
            },
            AnalyticFn::WeierstrassProduct { zeros, genera } => FnNode {
                kind: "weierstrassProduct".into(),
                params: Some(serde_json::to_value(WeierstrassParams { zeros, genera }).unwrap()),
                children: None,
            },
            AnalyticFn::Product { factors } => FnNode {
                kind: "product".into(),
                params: None,
                children: Some(factors.into_iter().map(FnNode::from).collect()),
            },
            AnalyticFn::ExpOf { inner } => FnNode {
                kind: "expOf".into(),
                params: None,
                children: Some(vec![FnNode::from(*inner)]),
            },
        }
    }
}

impl TryFrom<FnNode> for AnalyticFn {
    type Error = Error;

    fn try_from(node: FnNode) -> Result<AnalyticFn> {
        let take_params = |node: &FnNode| -> Result<serde_json::Value> {
            node.params
                .clone()
                .ok_or_else(|| Error::Schema(format!("function kind {} needs params", node.kind)))
        };
        let f = match node.kind.as_str() {
            "linearFactor" => {
                let p: LinearParams = serde_json::from_value(take_params(&node)?)?;
                AnalyticFn::LinearFactor { zeta: p.zeta }
            }
            "polynomial" => {
                let p: PolyParams = serde_json::from_value(take_params(&node)?)?;
                AnalyticFn::Polynomial { coeffs: p.coeffs }
            }
            "weierstrassProduct" => {
                let p: WeierstrassParams = serde_json::from_value(take_params(&node)?)?;
                AnalyticFn::WeierstrassProduct {
                    zeros: p.zeros,
                    genera: p.genera,
                }
            }
            "product" => {
                let children = node
                    .children
                    .ok_or_else(|| Error::Schema("product needs children".into()))?;
                AnalyticFn::Product {
                    factors: children
                        .into_iter()
                        .map(AnalyticFn::try_from)
                        .collect::<Result<_>>()?,
                }
            }
            "expOf" => {
                let mut children = node
                    .children
                    .ok_or_else(|| Error::Schema("expOf needs one child".into()))?;
                if children.len() != 1 {
                    return Err(Error::Schema("expOf needs exactly one child".into()));
                }
                AnalyticFn::ExpOf {
                    inner: Box::new(AnalyticFn::try_from(children.remove(0))?),
                }
            }
            other => {
                return Err(Error::Schema(format!("unknown function kind {other:?}")));
            }
        };
        f.validate()?;
        Ok(f)
    }
}
