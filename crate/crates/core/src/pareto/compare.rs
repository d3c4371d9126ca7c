//! Reconciles the printed ray formulas with the rederived one and the grid oracle.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::ces::{EconomicProblem, ResourceBundle};
use crate::error::Result;
use crate::quanta::{CriteriaKind, PreferencePair};
use crate::scalar::Scalar;

use super::grid::GridSpec;
use super::oracle::{oracle_pareto, OracleSet};
use super::rays::{
    ray_gradient_residual, stationary_ray_closed_form, stationary_ray_derived, ClosedForm,
};
use super::scalarize::scalarization;
use super::simplex::{sample_simplex, SimplexWeights, SweepSpec};
use super::sweep::RaySource;

/// Relative tolerance under which a printed ratio counts as agreeing.
pub const AGREEMENT_TOLERANCE: f64 = 1e-6;

/// Kinds that have a printed ray formula, in report order.
pub const COMPARED_KINDS: [CriteriaKind; 3] =
    [CriteriaKind::G4, CriteriaKind::FBar4, CriteriaKind::F3];

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonScenario<T> {
    pub problem: EconomicProblem<T>,
    pub pair: PreferencePair<T>,
    pub sweep: SweepSpec,
    pub grid: GridSpec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DiscrepancyRow<T> {
    pub kind: CriteriaKind,
    pub source: RaySource,
    pub weights: SimplexWeights<T>,
    pub closed_form_rho: Option<T>,
    /// Inner base of the printed formula when it failed.
    pub closed_form_domain_base: Option<f64>,
    pub derived_rho: T,
    pub required_revenue: T,
    pub supplied_revenue: T,
    pub compatibility_residual: T,
    pub derived_grad_residual: T,
    pub closed_form_grad_residual: Option<T>,
    pub agrees: bool,
    /// Printed formula with its K/L coefficients exchanged (only for the `f̄` formula).
    pub swapped_rho: Option<T>,
    pub swapped_agrees: Option<bool>,
    /// Whether the grid node nearest the derived ray is non-dominated;
    /// `None` when the ray misses the grid window.
    pub nearest_nondominated: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DiscrepancyReport<T> {
    pub agreement_pct: f64,
    pub max_grad_residual: T,
    pub domain_failures: usize,
    /// Share of derived rays (inside the window) whose nearest node is non-dominated.
    pub nondominated_pct: f64,
    pub oracle_sizes: BTreeMap<CriteriaKind, usize>,
    pub grid_nodes: usize,
    pub rows: Vec<DiscrepancyRow<T>>,
}

/// Point of the ray `L = ρK` closest (in log coordinates) to the window center,
/// clamped into the window, or `None` if the ray misses the window.
pub fn ray_window_point<T: Scalar>(grid: &GridSpec<T>, ratio: T) -> Option<ResourceBundle<T>> {
    let (k_lo, k_hi) = grid.k_range();
    let (l_lo, l_hi) = grid.l_range();
    let half = T::lit(0.5);
    let log_kc = (k_lo.ln() + k_hi.ln()) * half;
    let log_lc = (l_lo.ln() + l_hi.ln()) * half;
    let mut k = ((log_kc + log_lc - ratio.ln()) * half).exp();
    k = k.max(k_lo).min(k_hi);
    let mut l = ratio * k;
    if l < l_lo || l > l_hi {
        l = l.max(l_lo).min(l_hi);
        k = l / ratio;
    }
    let x = ResourceBundle {
        capital: k,
        labor: l,
    };
    grid.contains(&x).then_some(x)
}

fn relative_gap<T: Scalar>(a: T, b: T) -> T {
    (a - b).abs() / b.abs()
}

pub fn compare_formulas<T: Scalar>(
    scenario: &ComparisonScenario<T>,
) -> Result<DiscrepancyReport<T>> {
    let ComparisonScenario {
        problem,
        pair,
        sweep,
        grid,
    } = scenario;
    let tolerance = T::lit(AGREEMENT_TOLERANCE);

    let mut oracles: BTreeMap<CriteriaKind, OracleSet<T>> = BTreeMap::new();
    for kind in COMPARED_KINDS {
        oracles.insert(kind, oracle_pareto(kind, pair, problem, grid)?);
    }

    let mut rows = Vec::new();
    for kind in COMPARED_KINDS {
        let source = RaySource::printed_for(kind).expect("compared kinds have printed formulas");
        let formula = source.formula().expect("printed source");
        let oracle = &oracles[&kind];
        let samples: Vec<SimplexWeights<T>> = sample_simplex(kind.dimension(), sweep)?;
        let kind_rows = samples
            .into_par_iter()
            .map(|weights| {
                let phi = scalarization(kind, pair, problem, &weights)?;
                let coeffs = phi.coefficients;
                let derived = stationary_ray_derived(&coeffs, &problem.params)?;
                let point = ray_window_point(grid, derived.ratio);
                let probe_k = point.map_or(T::one(), |x| x.capital);
                let derived_grad =
                    ray_gradient_residual(&coeffs, &problem.params, derived.ratio, probe_k)?;

                let closed = stationary_ray_closed_form(&coeffs, problem, formula);
                let closed_form_rho = closed.ok();
                let closed_grad = match closed_form_rho {
                    Some(rho) => Some(ray_gradient_residual(
                        &coeffs,
                        &problem.params,
                        rho,
                        probe_k,
                    )?),
                    None => None,
                };
                let (swapped_rho, swapped_agrees) = if formula == ClosedForm::FBar4 {
                    let rho = stationary_ray_closed_form(&coeffs, problem, ClosedForm::G4).ok();
                    (
                        rho,
                        Some(rho.is_some_and(|r| relative_gap(r, derived.ratio) <= tolerance)),
                    )
                } else {
                    (None, None)
                };
                let nearest_nondominated = match point {
                    Some(x) => Some(oracle.contains(grid.nearest(&x)?.index)),
                    None => None,
                };
                Ok(DiscrepancyRow {
                    kind,
                    source,
                    weights,
                    closed_form_rho,
                    closed_form_domain_base: closed.err().map(|f| f.base),
                    derived_rho: derived.ratio,
                    required_revenue: derived.required_revenue,
                    supplied_revenue: derived.supplied_revenue,
                    compatibility_residual: derived.compatibility_residual(),
                    derived_grad_residual: derived_grad,
                    closed_form_grad_residual: closed_grad,
                    agrees: closed_form_rho
                        .is_some_and(|r| relative_gap(r, derived.ratio) <= tolerance),
                    swapped_rho,
                    swapped_agrees,
                    nearest_nondominated,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.extend(kind_rows);
    }

    let total = rows.len().max(1) as f64;
    let agreeing = rows.iter().filter(|r| r.agrees).count() as f64;
    let in_window: Vec<bool> = rows.iter().filter_map(|r| r.nearest_nondominated).collect();
    let nondominated_pct = if in_window.is_empty() {
        0.0
    } else {
        100.0 * in_window.iter().filter(|&&b| b).count() as f64 / in_window.len() as f64
    };
    Ok(DiscrepancyReport {
        agreement_pct: 100.0 * agreeing / total,
        max_grad_residual: rows
            .iter()
            .map(|r| r.derived_grad_residual)
            .fold(T::zero(), T::max),
        domain_failures: rows.iter().filter(|r| r.closed_form_rho.is_none()).count(),
        nondominated_pct,
        oracle_sizes: oracles.iter().map(|(k, o)| (*k, o.len())).collect(),
        grid_nodes: grid.len(),
        rows,
    })
}
