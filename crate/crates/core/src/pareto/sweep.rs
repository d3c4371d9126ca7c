//! Ray families swept over the interior of the weight simplex.

use rayon::prelude::*;
use serde::Serialize;

use crate::ces::EconomicProblem;
use crate::error::{Error, Result};
use crate::quanta::{CriteriaKind, PreferencePair};
use crate::scalar::Scalar;

use super::rays::{stationary_ray_closed_form, stationary_ray_derived, ClosedForm};
use super::scalarize::scalarization;
use super::simplex::{sample_simplex, SimplexWeights, SweepSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RaySource {
    #[serde(rename = "PAPER_EQ10")]
    ClosedFormG4,
    #[serde(rename = "PAPER_EQ12")]
    ClosedFormFBar4,
    #[serde(rename = "PAPER_EQ15")]
    ClosedFormF3,
    #[serde(rename = "DERIVED")]
    Derived,
}

impl RaySource {
    pub fn as_str(self) -> &'static str {
        match self {
            RaySource::ClosedFormG4 => "PAPER_EQ10",
            RaySource::ClosedFormFBar4 => "PAPER_EQ12",
            RaySource::ClosedFormF3 => "PAPER_EQ15",
            RaySource::Derived => "DERIVED",
        }
    }

    pub fn formula(self) -> Option<ClosedForm> {
        match self {
            RaySource::ClosedFormG4 => Some(ClosedForm::G4),
            RaySource::ClosedFormFBar4 => Some(ClosedForm::FBar4),
            RaySource::ClosedFormF3 => Some(ClosedForm::F3),
            RaySource::Derived => None,
        }
    }

    /// The printed closed form for a criteria kind; `FHAT3` has none.
    pub fn printed_for(kind: CriteriaKind) -> Option<RaySource> {
        match kind {
            CriteriaKind::G4 => Some(RaySource::ClosedFormG4),
            CriteriaKind::FBar4 => Some(RaySource::ClosedFormFBar4),
            CriteriaKind::F3 => Some(RaySource::ClosedFormF3),
            CriteriaKind::FHat3 => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RaySample<T> {
    pub ratio: T,
    pub weights: SimplexWeights<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RayFamily<T> {
    pub source: RaySource,
    pub kind: CriteriaKind,
    /// Sorted ascending by ratio.
    pub rays: Vec<RaySample<T>>,
    pub min_ratio: Option<T>,
    pub max_ratio: Option<T>,
    /// Weight vectors for which the formula produced no ray.
    pub domain_failures: usize,
    pub sweep: SweepSpec,
}

impl<T: Scalar> RayFamily<T> {
    pub fn ratios(&self) -> Vec<T> {
        self.rays.iter().map(|r| r.ratio).collect()
    }
}

/// Samples the weight simplex and maps each weight vector to its ray slope.
pub fn ray_family_sweep<T: Scalar>(
    kind: CriteriaKind,
    pair: &PreferencePair<T>,
    problem: &EconomicProblem<T>,
    sweep: &SweepSpec,
    source: RaySource,
) -> Result<RayFamily<T>> {
    if source != RaySource::Derived && RaySource::printed_for(kind) != Some(source) {
        return Err(Error::InvalidScenario(format!(
            "{} is not the printed ray formula for {kind}",
            source.as_str()
        )));
    }
    let samples: Vec<SimplexWeights<T>> = sample_simplex(kind.dimension(), sweep)?;
    let outcomes: Vec<Result<Option<T>>> = samples
        .par_iter()
        .map(|weights| {
            let phi = scalarization(kind, pair, problem, weights)?;
            Ok(match source.formula() {
                None => stationary_ray_derived(&phi.coefficients, &problem.params)
                    .ok()
                    .map(|ray| ray.ratio),
                Some(formula) => {
                    stationary_ray_closed_form(&phi.coefficients, problem, formula).ok()
                }
            })
        })
        .collect();

    let mut rays = Vec::with_capacity(samples.len());
    let mut domain_failures = 0;
    for (weights, outcome) in samples.into_iter().zip(outcomes) {
        match outcome? {
            Some(ratio) => rays.push(RaySample { ratio, weights }),
            None => domain_failures += 1,
        }
    }
    // stable sort keeps sample order among equal ratios
    rays.sort_by(|a, b| a.ratio.partial_cmp(&b.ratio).expect("finite ratios"));
    Ok(RayFamily {
        source,
        kind,
        min_ratio: rays.first().map(|r| r.ratio),
        max_ratio: rays.last().map(|r| r.ratio),
        rays,
        domain_failures,
        sweep: *sweep,
    })
}
