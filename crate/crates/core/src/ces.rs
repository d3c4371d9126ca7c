//! CES production technology and the three-criterion economic problem.
//!
//! Output is `F·(a·K^(−r) + (1−a)·L^(−r))^(−1/r)`. It is evaluated in the
//! ratio form `F·K·(1 + (1−a)·expm1(−r·ln(L/K)))^(−1/r)` so that extreme
//! factor ratios or large `|r|` do not overflow and small `|r|` keeps full
//! precision near the Cobb–Douglas limit.
//!
//! The criteria are `f1 = −pK·K`, `f2 = −pL·L`, `f3 = pQ·Q`. Note that `f1`
//! is the (negated) capital cost and `f2` the labor cost.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Production technology `(F, a, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CesParams<T> {
    /// Total factor productivity `F > 0`.
    pub tfp: T,
    /// Share parameter `0 < a < 1`.
    pub share: T,
    /// Substitution parameter `r > −1`; elasticity of substitution is `1/(1+r)`.
    pub substitution: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prices<T> {
    pub capital: T,
    pub labor: T,
    pub output: T,
}

/// A point `(K, L)` of the open positive quadrant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResourceBundle<T> {
    pub capital: T,
    pub labor: T,
}

/// `(f1, f2, f3)`: negated capital cost, negated labor cost, revenue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriteriaVector<T> {
    pub f1: T,
    pub f2: T,
    pub f3: T,
}

/// One violated inequality, named by the inequality that should hold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub name: &'static str,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.violations.iter().map(|v| v.name.to_string()).collect()
    }

    fn check(&mut self, holds: bool, name: &'static str) {
        if !holds {
            self.violations.push(Violation { name });
        }
    }
}

/// Checks every technology and price invariant, listing each violated one.
pub fn validate_params<T: Scalar>(params: &CesParams<T>, prices: &Prices<T>) -> ValidationReport {
    let mut report = params.validate();
    report.violations.extend(prices.validate().violations);
    report
}

impl<T: Scalar> CesParams<T> {
    pub fn new(tfp: T, share: T, substitution: T) -> Result<Self> {
        let params = Self {
            tfp,
            share,
            substitution,
        };
        let report = params.validate();
        if report.passed() {
            Ok(params)
        } else {
            Err(Error::InvalidParams(report.names()))
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let zero = T::zero();
        let mut report = ValidationReport::default();
        report.check(self.tfp > zero && self.tfp.is_finite(), "F > 0");
        report.check(self.share > zero, "a > 0");
        report.check(self.share < T::one(), "a < 1");
        report.check(
            self.substitution > -T::one() && self.substitution.is_finite(),
            "r > -1",
        );
        report
    }

    /// Elasticity of substitution `1/(1+r)`.
    pub fn elasticity(&self) -> T {
        T::one() / (T::one() + self.substitution)
    }

    /// Output `Q(K, L)`. Errors at `r = 0`, where the closed form is undefined.
    pub fn output(&self, x: &ResourceBundle<T>) -> Result<T> {
        x.ensure_valid()?;
        let r = self.substitution;
        if r == T::zero() {
            return Err(Error::ZeroSubstitution);
        }
        // (a + (1−a)(L/K)^(−r))^(−1/r)
        let log_inner = self.log_share_sum(x.labor / x.capital, self.share);
        Ok(self.tfp * x.capital * (-log_inner / r).exp())
    }

    /// `F·K^a·L^(1−a)`, the `r → 0` limit of [`CesParams::output`].
    pub fn cobb_douglas_limit(&self, x: &ResourceBundle<T>) -> Result<T> {
        x.ensure_valid()?;
        let a = self.share;
        Ok(self.tfp * (a * x.capital.ln() + (T::one() - a) * x.labor.ln()).exp())
    }

    /// `(∂Q/∂K, ∂Q/∂L)`.
    pub fn marginal_products(&self, x: &ResourceBundle<T>) -> Result<(T, T)> {
        x.ensure_valid()?;
        let r = self.substitution;
        if r == T::zero() {
            return Err(Error::ZeroSubstitution);
        }
        let a = self.share;
        let exponent = -(T::one() + r) / r;
        // a + (1−a)(L/K)^(−r)
        let log_k = self.log_share_sum(x.labor / x.capital, a);
        // a(K/L)^(−r) + (1−a)
        let log_l = self.log_share_sum(x.capital / x.labor, T::one() - a);
        let dk = self.tfp * a * (exponent * log_k).exp();
        let dl = self.tfp * (T::one() - a) * (exponent * log_l).exp();
        Ok((dk, dl))
    }

    /// `ln(w + (1−w)·ratio^(−r))`, computed as `ln1p((1−w)·expm1(−r·ln ratio))`.
    fn log_share_sum(&self, ratio: T, w: T) -> T {
        let r = self.substitution;
        ((T::one() - w) * (-r * ratio.ln()).exp_m1()).ln_1p()
    }
}

impl<T: Scalar> Prices<T> {
    pub fn new(capital: T, labor: T, output: T) -> Result<Self> {
        let prices = Self {
            capital,
            labor,
            output,
        };
        let report = prices.validate();
        if report.passed() {
            Ok(prices)
        } else {
            Err(Error::InvalidParams(report.names()))
        }
    }

    pub fn unit() -> Self {
        Self {
            capital: T::one(),
            labor: T::one(),
            output: T::one(),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let zero = T::zero();
        let mut report = ValidationReport::default();
        report.check(self.capital > zero && self.capital.is_finite(), "pK > 0");
        report.check(self.labor > zero && self.labor.is_finite(), "pL > 0");
        report.check(self.output > zero && self.output.is_finite(), "pQ > 0");
        report
    }
}

impl<T: Scalar> ResourceBundle<T> {
    pub fn new(capital: T, labor: T) -> Result<Self> {
        let x = Self { capital, labor };
        x.ensure_valid()?;
        Ok(x)
    }

    pub fn is_valid(&self) -> bool {
        let zero = T::zero();
        self.capital > zero
            && self.labor > zero
            && self.capital.is_finite()
            && self.labor.is_finite()
    }

    /// `(t·K, t·L)`.
    pub fn scaled(&self, t: T) -> Self {
        Self {
            capital: self.capital * t,
            labor: self.labor * t,
        }
    }

    fn ensure_valid(&self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            let mut bad = Vec::new();
            if !(self.capital > T::zero() && self.capital.is_finite()) {
                bad.push("K > 0".to_string());
            }
            if !(self.labor > T::zero() && self.labor.is_finite()) {
                bad.push("L > 0".to_string());
            }
            Err(Error::InvalidParams(bad))
        }
    }
}

impl<T: Copy> CriteriaVector<T> {
    pub fn to_array(&self) -> [T; 3] {
        [self.f1, self.f2, self.f3]
    }
}

/// Technology plus prices: everything needed to evaluate the criteria `f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EconomicProblem<T> {
    pub params: CesParams<T>,
    pub prices: Prices<T>,
}

impl<T: Scalar> EconomicProblem<T> {
    pub fn new(params: CesParams<T>, prices: Prices<T>) -> Result<Self> {
        let report = validate_params(&params, &prices);
        if report.passed() {
            Ok(Self { params, prices })
        } else {
            Err(Error::InvalidParams(report.names()))
        }
    }

    pub fn criteria(&self, x: &ResourceBundle<T>) -> Result<CriteriaVector<T>> {
        let q = self.params.output(x)?;
        Ok(CriteriaVector {
            f1: -self.prices.capital * x.capital,
            f2: -self.prices.labor * x.labor,
            f3: self.prices.output * q,
        })
    }
}

/// Free-function form of [`EconomicProblem::criteria`].
pub fn criteria<T: Scalar>(
    problem: &EconomicProblem<T>,
    x: &ResourceBundle<T>,
) -> Result<CriteriaVector<T>> {
    problem.criteria(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(f: f64, a: f64, r: f64) -> CesParams<f64> {
        CesParams::new(f, a, r).unwrap()
    }

    fn bundle(k: f64, l: f64) -> ResourceBundle<f64> {
        ResourceBundle::new(k, l).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn validation_reports_named_violations() {
        let ok = validate_params(
            &CesParams {
                tfp: 1.0,
                share: 0.5,
                substitution: 1.0,
            },
            &Prices::unit(),
        );
        assert!(ok.passed());

        let share_one = validate_params(
            &CesParams {
                tfp: 1.0,
                share: 1.0,
                substitution: 1.0,
            },
            &Prices::unit(),
        );
        assert_eq!(share_one.names(), vec!["a < 1"]);

        let r_minus_one = validate_params(
            &CesParams {
                tfp: 1.0,
                share: 0.5,
                substitution: -1.0,
            },
            &Prices::unit(),
        );
        assert_eq!(r_minus_one.names(), vec!["r > -1"]);

        let many = validate_params(
            &CesParams {
                tfp: 0.0,
                share: 0.0,
                substitution: f64::NAN,
            },
            &Prices {
                capital: -1.0,
                labor: 1.0,
                output: 0.0,
            },
        );
        assert_eq!(
            many.names(),
            vec!["F > 0", "a > 0", "r > -1", "pK > 0", "pQ > 0"]
        );
    }

    #[test]
    fn output_examples() {
        assert_eq!(
            params(1.0, 0.5, 1.0).output(&bundle(1.0, 1.0)).unwrap(),
            1.0
        );
        assert_eq!(
            params(2.0, 0.5, 1.0).output(&bundle(1.0, 1.0)).unwrap(),
            2.0
        );
        assert!(
            rel(
                params(1.0, 0.5, 1.0).output(&bundle(2.0, 2.0)).unwrap(),
                2.0
            ) < 1e-15
        );
    }

    #[test]
    fn output_rejects_zero_substitution() {
        let p = CesParams::new(1.0, 0.5, 0.0).unwrap();
        assert_eq!(p.output(&bundle(1.0, 1.0)), Err(Error::ZeroSubstitution));
        assert_eq!(
            p.marginal_products(&bundle(1.0, 1.0)),
            Err(Error::ZeroSubstitution)
        );
        assert_eq!(p.cobb_douglas_limit(&bundle(4.0, 1.0)).unwrap(), 2.0);
    }

    #[test]
    fn output_matches_direct_formula() {
        let p = params(1.7, 0.3, 0.5);
        let x = bundle(2.0, 3.0);
        let direct = 1.7 * (0.3 * 2f64.powf(-0.5) + 0.7 * 3f64.powf(-0.5)).powf(-1.0 / 0.5);
        assert!(rel(p.output(&x).unwrap(), direct) < 1e-14);
    }

    #[test]
    fn extreme_ratios_do_not_overflow() {
        let p = params(1.0, 0.5, 50.0);
        let q = p.output(&bundle(1e-3, 1e3)).unwrap();
        assert!(q.is_finite() && q > 0.0);
        // Large r approaches Leontief: min(K, L) scaled by a^(−1/r).
        assert!(rel(q, 1e-3 * 0.5f64.powf(-1.0 / 50.0)) < 1e-9);
    }

    #[test]
    fn cobb_douglas_examples() {
        let p = CesParams::new(1.0, 0.5, 0.0).unwrap();
        assert_eq!(p.cobb_douglas_limit(&bundle(4.0, 1.0)).unwrap(), 2.0);
        assert_eq!(p.cobb_douglas_limit(&bundle(1.0, 1.0)).unwrap(), 1.0);
        let near = params(1.0, 0.5, 1e-8).output(&bundle(4.0, 1.0)).unwrap();
        assert!(rel(near, 2.0) < 1e-6);
    }

    #[test]
    fn criteria_examples() {
        let problem =
            EconomicProblem::new(params(1.0, 0.5, 1.0), Prices::new(2.0, 1.0, 1.0).unwrap())
                .unwrap();
        assert_eq!(problem.criteria(&bundle(3.0, 5.0)).unwrap().f1, -6.0);

        let unit = EconomicProblem::new(params(1.0, 0.5, 1.0), Prices::unit()).unwrap();
        assert_eq!(
            criteria(&unit, &bundle(1.0, 1.0)).unwrap().to_array(),
            [-1.0, -1.0, 1.0]
        );

        let pq3 = EconomicProblem::new(params(1.0, 0.5, 1.0), Prices::new(1.0, 1.0, 3.0).unwrap())
            .unwrap();
        assert_eq!(pq3.criteria(&bundle(1.0, 1.0)).unwrap().f3, 3.0);
    }

    #[test]
    fn invalid_bundle_is_rejected() {
        assert!(ResourceBundle::new(0.0, 1.0).is_err());
        assert!(ResourceBundle::new(1.0, f64::INFINITY).is_err());
        let p = params(1.0, 0.5, 1.0);
        let bad = ResourceBundle {
            capital: -1.0,
            labor: 1.0,
        };
        assert_eq!(
            p.output(&bad),
            Err(Error::InvalidParams(vec!["K > 0".into()]))
        );
    }

    #[test]
    fn marginal_products_unit_case() {
        // Q = 2KL/(K+L) here, so ∂Q/∂K = 2L²/(K+L)² = 0.5 at (1, 1)
        let (dk, dl) = params(1.0, 0.5, 1.0)
            .marginal_products(&bundle(1.0, 1.0))
            .unwrap();
        assert!((dk - 0.5).abs() < 1e-15);
        assert!((dl - 0.5).abs() < 1e-15);
    }

    #[test]
    fn euler_identity() {
        let p = params(1.0, 0.3, 0.5);
        let x = bundle(2.0, 3.0);
        let (dk, dl) = p.marginal_products(&x).unwrap();
        let q = p.output(&x).unwrap();
        assert!(rel(2.0 * dk + 3.0 * dl, q) < 1e-12);
    }

    #[test]
    fn abundant_factor_has_lower_marginal_product() {
        let (dk, dl) = params(1.0, 0.5, 1.0)
            .marginal_products(&bundle(4.0, 1.0))
            .unwrap();
        assert!(dk < dl);
    }

    #[test]
    fn elasticity_of_substitution() {
        assert_eq!(params(1.0, 0.5, 1.0).elasticity(), 0.5);
        assert_eq!(params(1.0, 0.5, -0.5).elasticity(), 2.0);
    }

    #[test]
    fn works_in_single_precision() {
        let p = CesParams::<f32>::new(1.0, 0.5, 1.0).unwrap();
        let x = ResourceBundle::<f32>::new(2.0, 2.0).unwrap();
        assert!((p.output(&x).unwrap() - 2.0).abs() < 1e-6);
    }
}
