//! Brute-force Pareto sets on a grid.

use rayon::prelude::*;
use serde::Serialize;

use crate::ces::{EconomicProblem, ResourceBundle};
use crate::error::Result;
use crate::quanta::{build_criteria, CriteriaKind, PreferencePair};
use crate::scalar::Scalar;

use super::dominance::nondominated_filter;
use super::grid::GridSpec;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSet<T> {
    pub kind: CriteriaKind,
    pub grid: GridSpec<T>,
    pub points: Vec<ResourceBundle<T>>,
    pub values: Vec<Vec<T>>,
    /// Ascending node indices of the non-dominated nodes.
    pub nondominated: Vec<usize>,
    #[serde(skip)]
    mask: Vec<bool>,
}

impl<T: Scalar> OracleSet<T> {
    pub fn len(&self) -> usize {
        self.nondominated.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nondominated.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.mask.get(index).copied().unwrap_or(false)
    }

    pub fn is_full(&self) -> bool {
        self.nondominated.len() == self.points.len()
    }

    pub fn is_subset_of(&self, other: &OracleSet<T>) -> bool {
        self.nondominated.iter().all(|&i| other.contains(i))
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }
}

/// Evaluates the chosen criteria at every grid node and keeps the non-dominated ones.
pub fn oracle_pareto<T: Scalar>(
    kind: CriteriaKind,
    pair: &PreferencePair<T>,
    problem: &EconomicProblem<T>,
    grid: &GridSpec<T>,
) -> Result<OracleSet<T>> {
    let criteria = build_criteria(kind, pair, problem)?;
    let points = grid.nodes();
    let values = points
        .par_iter()
        .map(|x| criteria.evaluate(x))
        .collect::<Result<Vec<_>>>()?;
    let nondominated = nondominated_filter(&values)?;
    let mut mask = vec![false; points.len()];
    for &i in &nondominated {
        mask[i] = true;
    }
    Ok(OracleSet {
        kind,
        grid: *grid,
        points,
        values,
        nondominated,
        mask,
    })
}
