//! Linear scalarization of a derived criterion vector.
//!
//! Every criterion kind is a positive combination of `f1 = −pK·K`,
//! `f2 = −pL·L` and `f3 = pQ·Q`, so `Σ λ_i·h_i` collapses to
//! `φ(K, L) = cK·K + cL·L + cQ·Q/F`, where `cQ` carries the factor `F`.

use serde::Serialize;

use crate::ces::{CesParams, EconomicProblem, ResourceBundle};
use crate::error::{Error, Result};
use crate::quanta::{build_criteria, CriteriaKind, PreferencePair, Resource};
use crate::scalar::Scalar;

use super::simplex::SimplexWeights;

/// Collapsed coefficients of `φ`: `cK < 0`, `cL < 0`, `cQ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AggregateCoefficients<T> {
    pub c_k: T,
    pub c_l: T,
    pub c_q: T,
}

impl<T: Scalar> AggregateCoefficients<T> {
    pub fn new(c_k: T, c_l: T, c_q: T) -> Result<Self> {
        let zero = T::zero();
        let mut bad = Vec::new();
        if !(c_k < zero) {
            bad.push("cK < 0".to_string());
        }
        if !(c_l < zero) {
            bad.push("cL < 0".to_string());
        }
        if !(c_q > zero) {
            bad.push("cQ > 0".to_string());
        }
        if bad.is_empty() {
            Ok(Self { c_k, c_l, c_q })
        } else {
            Err(Error::InvalidParams(bad))
        }
    }

    pub fn with_revenue(&self, c_q: T) -> Self {
        Self { c_q, ..*self }
    }
}

/// `φ` for one weight vector, with its value and derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scalarization<T> {
    pub coefficients: AggregateCoefficients<T>,
    pub params: CesParams<T>,
}

impl<T: Scalar> Scalarization<T> {
    pub fn new(coefficients: AggregateCoefficients<T>, params: CesParams<T>) -> Self {
        Self {
            coefficients,
            params,
        }
    }

    pub fn value(&self, x: &ResourceBundle<T>) -> Result<T> {
        let c = &self.coefficients;
        let q = self.params.output(x)? / self.params.tfp;
        Ok(c.c_k * x.capital + c.c_l * x.labor + c.c_q * q)
    }

    /// Analytic gradient from the CES marginal products.
    pub fn gradient(&self, x: &ResourceBundle<T>) -> Result<(T, T)> {
        let c = &self.coefficients;
        let (dk, dl) = self.params.marginal_products(x)?;
        let f = self.params.tfp;
        Ok((c.c_k + c.c_q * dk / f, c.c_l + c.c_q * dl / f))
    }

    /// Central differences with steps `rel_step·K` and `rel_step·L`.
    pub fn gradient_fd(&self, x: &ResourceBundle<T>, rel_step: T) -> Result<(T, T)> {
        let hk = rel_step * x.capital;
        let hl = rel_step * x.labor;
        let two = T::lit(2.0);
        let at = |k: T, l: T| {
            self.value(&ResourceBundle {
                capital: k,
                labor: l,
            })
        };
        let dk = (at(x.capital + hk, x.labor)? - at(x.capital - hk, x.labor)?) / (two * hk);
        let dl = (at(x.capital, x.labor + hl)? - at(x.capital, x.labor - hl)?) / (two * hl);
        Ok((dk, dl))
    }

    /// Finite-difference Hessian `[[φ_KK, φ_KL], [φ_KL, φ_LL]]` from the analytic gradient.
    pub fn hessian_fd(&self, x: &ResourceBundle<T>, rel_step: T) -> Result<[[T; 2]; 2]> {
        let hk = rel_step * x.capital;
        let hl = rel_step * x.labor;
        let two = T::lit(2.0);
        let grad = |k: T, l: T| {
            self.gradient(&ResourceBundle {
                capital: k,
                labor: l,
            })
        };
        let (kp_k, kp_l) = grad(x.capital + hk, x.labor)?;
        let (km_k, km_l) = grad(x.capital - hk, x.labor)?;
        let (lp_k, lp_l) = grad(x.capital, x.labor + hl)?;
        let (lm_k, lm_l) = grad(x.capital, x.labor - hl)?;
        let kk = (kp_k - km_k) / (two * hk);
        let ll = (lp_l - lm_l) / (two * hl);
        let kl = ((kp_l - km_l) / (two * hk) + (lp_k - lm_k) / (two * hl)) / two;
        Ok([[kk, kl], [kl, ll]])
    }
}

/// Collapses `Σ λ_i·h_i` for the chosen criteria kind into `(cK, cL, cQ)`.
pub fn scalarization<T: Scalar>(
    kind: CriteriaKind,
    pair: &PreferencePair<T>,
    problem: &EconomicProblem<T>,
    weights: &SimplexWeights<T>,
) -> Result<Scalarization<T>> {
    if weights.len() != kind.dimension() {
        return Err(Error::DimensionMismatch {
            kind: kind.as_str(),
            expected: kind.dimension(),
            got: weights.len(),
        });
    }
    let criteria = build_criteria(kind, pair, problem)?;
    let (mut k_sum, mut l_sum, mut q_sum) = (T::zero(), T::zero(), T::zero());
    for (component, &lambda) in criteria.components.iter().zip(weights.values()) {
        if let Some(c) = component.revenue {
            q_sum = q_sum + lambda * c;
        }
        match component.resource {
            Some((Resource::Capital, c)) => k_sum = k_sum + lambda * c,
            Some((Resource::Labor, c)) => l_sum = l_sum + lambda * c,
            None => {}
        }
    }
    let prices = &problem.prices;
    let coefficients = AggregateCoefficients::new(
        -prices.capital * k_sum,
        -prices.labor * l_sum,
        prices.output * problem.params.tfp * q_sum,
    )?;
    Ok(Scalarization::new(coefficients, problem.params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ces::Prices;

    fn sample_pair() -> PreferencePair<f64> {
        PreferencePair::new([2.0, 2.0, 1.0], None, [1.0, 1.0, 3.0], None).unwrap()
    }

    fn problem(a: f64, r: f64, prices: [f64; 3]) -> EconomicProblem<f64> {
        EconomicProblem::new(
            CesParams::new(1.3, a, r).unwrap(),
            Prices::new(prices[0], prices[1], prices[2]).unwrap(),
        )
        .unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-14 * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn g4_barycenter_example() {
        let unit =
            EconomicProblem::new(CesParams::new(1.0, 0.5, 1.0).unwrap(), Prices::unit()).unwrap();
        let lambda = SimplexWeights::barycenter(4).unwrap();
        let s = scalarization(CriteriaKind::G4, &sample_pair(), &unit, &lambda).unwrap();
        assert_eq!(
            s.coefficients,
            AggregateCoefficients {
                c_k: -1.0,
                c_l: -1.0,
                c_q: 1.5
            }
        );
    }

    #[test]
    fn f3_barycenter_example() {
        let unit =
            EconomicProblem::new(CesParams::new(1.0, 0.5, 1.0).unwrap(), Prices::unit()).unwrap();
        let lambda = SimplexWeights::barycenter(3).unwrap();
        let s = scalarization(CriteriaKind::F3, &sample_pair(), &unit, &lambda).unwrap();
        let third = 1.0 / 3.0;
        assert_eq!(
            s.coefficients,
            AggregateCoefficients {
                c_k: -third,
                c_l: -third,
                c_q: third
            }
        );
    }

    // Expanded per-kind coefficient formulas, written out independently of
    // the component-table route used by `scalarization`.
    #[test]
    fn matches_expanded_formulas() {
        let pair = PreferencePair::new([2.5, 1.7, 0.9], None, [0.4, 0.6, 2.2], None).unwrap();
        let p = problem(0.35, 0.8, [1.4, 0.7, 2.1]);
        let (pk, pl, pq, f) = (1.4, 0.7, 2.1, 1.3);
        let [a1, a2, a3] = [2.5, 1.7, 0.9];
        let [b1, b2, b3] = [0.4, 0.6, 2.2];

        let l4 = SimplexWeights::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let [l1, l2, l3, l4v] = [0.1, 0.2, 0.3, 0.4];
        let g = scalarization(CriteriaKind::G4, &pair, &p, &l4)
            .unwrap()
            .coefficients;
        assert!(close(g.c_k, -pk * (l1 * a3 + l3 * b3)));
        assert!(close(g.c_l, -pl * (l2 * a3 + l4v * b3)));
        assert!(close(
            g.c_q,
            pq * f * (l1 * a1 + l2 * a2 + l3 * b1 + l4v * b2)
        ));

        let fb = scalarization(CriteriaKind::FBar4, &pair, &p, &l4)
            .unwrap()
            .coefficients;
        assert!(close(fb.c_k, -pk * (l1 + l3 * a3)));
        assert!(close(fb.c_l, -pl * (l2 + l4v * a3)));
        assert!(close(fb.c_q, pq * f * (l3 * a1 + l4v * a2)));

        let l3w = SimplexWeights::new(vec![0.2, 0.3, 0.5]).unwrap();
        let fh = scalarization(CriteriaKind::FHat3, &pair, &p, &l3w)
            .unwrap()
            .coefficients;
        assert!(close(fh.c_k, -pk * b3 * 0.2));
        assert!(close(fh.c_l, -pl * b3 * 0.3));
        assert!(close(fh.c_q, pq * f * (0.2 * b1 + 0.3 * b2 + 0.5)));

        let f3 = scalarization(CriteriaKind::F3, &pair, &p, &l3w)
            .unwrap()
            .coefficients;
        assert!(close(f3.c_k, -0.2 * pk));
        assert!(close(f3.c_l, -0.3 * pl));
        assert!(close(f3.c_q, 0.5 * pq * f));
    }

    #[test]
    fn dimension_mismatch() {
        let unit =
            EconomicProblem::new(CesParams::new(1.0, 0.5, 1.0).unwrap(), Prices::unit()).unwrap();
        let lambda = SimplexWeights::barycenter(3).unwrap();
        assert_eq!(
            scalarization(CriteriaKind::G4, &sample_pair(), &unit, &lambda),
            Err(Error::DimensionMismatch {
                kind: "G4",
                expected: 4,
                got: 3
            })
        );
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let s = Scalarization::new(
            AggregateCoefficients::<f64>::new(-1.0, -1.0, 1.5).unwrap(),
            CesParams::new(1.0, 0.5, 1.0).unwrap(),
        );
        let x = ResourceBundle::new(1.0, 1.0).unwrap();
        let (gk, gl) = s.gradient(&x).unwrap();
        // Q = 2KL/(K+L) ⇒ ∂Q/∂K = 2L²/(K+L)² = 0.5 at (1, 1)
        assert!((gk - (-1.0 + 1.5 * 0.5)).abs() < 1e-15);
        assert!((gl - (-1.0 + 1.5 * 0.5)).abs() < 1e-15);
        let (fk, fl) = s.gradient_fd(&x, 1e-6).unwrap();
        assert!((gk - fk).abs() < 1e-6 && (gl - fl).abs() < 1e-6);
    }

    #[test]
    fn hessian_is_negative_semidefinite() {
        let s = Scalarization::new(
            AggregateCoefficients::new(-0.7, -1.2, 2.0).unwrap(),
            CesParams::new(1.0, 0.3, 2.0).unwrap(),
        );
        for &(k, l) in &[(0.5, 2.0), (1.0, 1.0), (3.0, 0.2)] {
            let h = s
                .hessian_fd(&ResourceBundle::new(k, l).unwrap(), 1e-5)
                .unwrap();
            let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
            assert!(h[0][0] <= 0.0 && h[1][1] <= 0.0);
            // degree-1 homogeneity makes the Hessian singular: det ≈ 0, never clearly positive-definite
            assert!(det >= -1e-6, "det {det}");
        }
    }
}
