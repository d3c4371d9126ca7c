//! Stationary rays `L = ρ·K` of a scalarized objective.
//!
//! Dividing `φ'_K = 0` by `φ'_L = 0` eliminates `cQ` and gives
//!
//! ```text
//! ρ = ((1−a)·|cK| / (a·|cL|))^(1/(1+r))
//! ```
//!
//! Because `φ` is positively homogeneous of degree one, the two equations are
//! only jointly solvable when `cQ` takes one particular value (Euler's
//! identity forces `φ = 0` on a stationary ray). [`StationaryRay`] reports
//! that required value next to the supplied one.
//!
//! The closed forms printed with the original derivation differ from this by
//! a shift of `a/(1−a)` inside the power; [`stationary_ray_closed_form`] evaluates
//! them verbatim for comparison.

use serde::Serialize;

use crate::ces::{CesParams, EconomicProblem, ResourceBundle};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::scalarize::{AggregateCoefficients, Scalarization};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StationaryRay<T> {
    /// Slope `ρ = L/K`.
    pub ratio: T,
    /// `cQ` at which both partials vanish on the ray.
    pub required_revenue: T,
    /// `cQ` actually supplied.
    pub supplied_revenue: T,
}

impl<T: Scalar> StationaryRay<T> {
    /// `(supplied − required)/required`; zero when the ray is truly stationary.
    pub fn compatibility_residual(&self) -> T {
        (self.supplied_revenue - self.required_revenue) / self.required_revenue
    }
}

/// Ray on which `φ'_K/φ'_L = cK/cL`, plus the `cQ` compatibility check.
pub fn stationary_ray_derived<T: Scalar>(
    coefficients: &AggregateCoefficients<T>,
    params: &CesParams<T>,
) -> Result<StationaryRay<T>> {
    let r = params.substitution;
    if r == T::zero() {
        return Err(Error::NoInteriorRay("r = 0".into()));
    }
    let a = params.share;
    let one = T::one();
    let ck = coefficients.c_k.abs();
    let cl = coefficients.c_l.abs();
    let log_ratio = ((one - a).ln() + ck.ln() - a.ln() - cl.ln()) / (one + r);
    let ratio = log_ratio.exp();
    let required = required_revenue(coefficients.c_k, params, ratio);
    if !(ratio > T::zero() && ratio.is_finite()) {
        return Err(Error::NoInteriorRay(format!(
            "ratio {ratio} is not finite and positive"
        )));
    }
    if !(required > T::zero() && required.is_finite()) {
        return Err(Error::NoInteriorRay(format!(
            "required cQ {required} is not positive"
        )));
    }
    Ok(StationaryRay {
        ratio,
        required_revenue: required,
        supplied_revenue: coefficients.c_q,
    })
}

/// `cQ` solving `φ'_K = 0` at ratio `ρ`:
/// `|cK| / (a·(a + (1−a)ρ^(−r))^(−(1+r)/r))`.
pub fn required_revenue<T: Scalar>(c_k: T, params: &CesParams<T>, ratio: T) -> T {
    let a = params.share;
    let r = params.substitution;
    let one = T::one();
    let log_inner = ((one - a) * (-r * ratio.ln()).exp_m1()).ln_1p();
    let partial = a * (-(one + r) / r * log_inner).exp();
    c_k.abs() / partial
}

/// Which printed closed form to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ClosedForm {
    /// Ray family of the `g` problem, in the collapsed coefficients.
    G4,
    /// Ray family of the `f̄` problem, with its numerator and denominator as printed.
    #[serde(rename = "FBAR4")]
    FBar4,
    /// Ray family of the original problem `f`.
    F3,
}

/// The printed formula's inner base `(…)^(−r/(1+r)) − a/(1−a)` was not positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DomainFailure {
    pub formula: ClosedForm,
    pub base: f64,
}

/// Evaluates `ρ = (s^(−r/(1+r)) − a/(1−a))^(−1/r)` exactly as printed, where
/// `s = (1−a)·N/(a·D)`:
///
/// * `G4`: `N/D = cK/cL`,
/// * `FBar4`: `N = pK·(λ2 + λ4·w3(1))`, `D = pL·(λ1 + λ3·w3(1))`, i.e.
///   `N/D = pK²·|cL| / (pL²·|cK|)` in collapsed coefficients,
/// * `F3`: `N/D = pK·λ01 / (pL·λ02) = cK/cL`.
pub fn stationary_ray_closed_form<T: Scalar>(
    coefficients: &AggregateCoefficients<T>,
    problem: &EconomicProblem<T>,
    formula: ClosedForm,
) -> std::result::Result<T, DomainFailure> {
    let a = problem.params.share;
    let r = problem.params.substitution;
    let one = T::one();
    let (pk, pl) = (problem.prices.capital, problem.prices.labor);
    let ck = coefficients.c_k;
    let cl = coefficients.c_l;
    let quotient = match formula {
        ClosedForm::G4 | ClosedForm::F3 => ck / cl,
        ClosedForm::FBar4 => (pk * pk * cl.abs()) / (pl * pl * ck.abs()),
    };
    let s = (one - a) * quotient / a;
    let base = s.powf(-r / (one + r)) - a / (one - a);
    let failure = DomainFailure {
        formula,
        base: base.to_f64_lossy(),
    };
    if !(base > T::zero()) || r == T::zero() {
        return Err(failure);
    }
    let ratio = base.powf(-one / r);
    if ratio > T::zero() && ratio.is_finite() {
        Ok(ratio)
    } else {
        Err(failure)
    }
}

/// Relative stationarity residual at slope `ratio`.
///
/// Builds `φ` with `cQ` matched through `φ'_K = 0` at that slope, takes a
/// central-difference gradient at `(K, ratio·K)`, and returns
/// `‖∇φ‖ / ‖(cK, cL)‖`.
pub fn ray_gradient_residual<T: Scalar>(
    coefficients: &AggregateCoefficients<T>,
    params: &CesParams<T>,
    ratio: T,
    capital: T,
) -> Result<T> {
    let matched = coefficients.with_revenue(required_revenue(coefficients.c_k, params, ratio));
    let phi = Scalarization::new(matched, *params);
    let x = ResourceBundle::new(capital, ratio * capital)?;
    let (gk, gl) = phi.gradient_fd(&x, T::lit(1e-6))?;
    Ok(gk.hypot(gl) / coefficients.c_k.hypot(coefficients.c_l))
}
