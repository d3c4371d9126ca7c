//! Request-scoped computations shared by the HTTP handlers and the CLI.
//!
//! Every entry point validates its input completely (field invariants, then
//! preference consistency) before touching the grid, so bad input is cheap to
//! reject.

use std::collections::BTreeMap;

use ces_pareto::pareto::{
    compare_formulas, oracle_pareto, ray_family_sweep, ray_window_point, ComparisonScenario,
    OracleSet, RayFamily, RaySource,
};
use ces_pareto::scenario::{
    CesSection, FieldViolation, GridSection, PriceSection, QuantumSection, SweepSection,
};
use ces_pareto::{
    build_criteria, membership_with_nesting, Consistency, CriteriaKind, DiscrepancyReportF64,
    FuzzyScenario, GridSpecF64, NestingReport, ResourceBundle, Scenario, ScenarioSpec, Tier,
    TierCounts,
};
use serde::{Deserialize, Serialize};

/// Why a request was refused.
#[derive(Debug, Clone, PartialEq)]
pub enum ComputeError {
    /// Field-level invariant failures (HTTP 400).
    Invalid(Vec<FieldViolation>),
    /// The quanta contradict each other or lack natural compromise (HTTP 422);
    /// carries the names of the violated inequalities.
    Inconsistent(Vec<String>),
    /// An engine invariant broke on valid input (HTTP 500).
    Internal(String),
}

impl std::fmt::Display for ComputeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ComputeError::Invalid(v) => {
                let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
                write!(f, "invalid scenario: {}", parts.join("; "))
            }
            ComputeError::Inconsistent(v) => {
                write!(f, "inconsistent preferences, violated: {}", v.join(", "))
            }
            ComputeError::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl std::error::Error for ComputeError {}

impl From<ces_pareto::Error> for ComputeError {
    fn from(e: ces_pareto::Error) -> Self {
        ComputeError::Internal(e.to_string())
    }
}

pub type ComputeResult<T> = Result<T, ComputeError>;

fn field(name: &str, message: &str) -> FieldViolation {
    FieldViolation {
        field: name.into(),
        message: message.into(),
    }
}

/// Builds the scenario and requires the two consistency inequalities.
pub fn consistent_scenario(spec: &ScenarioSpec) -> ComputeResult<Scenario> {
    let scenario = spec.build().map_err(ComputeError::Invalid)?;
    if scenario.pair.consistency() != Consistency::BothHold {
        let names = scenario.pair.consistency_violations();
        return Err(ComputeError::Inconsistent(
            names.into_iter().map(String::from).collect(),
        ));
    }
    Ok(scenario)
}

/// Builds the fuzzy scenario: both confidences, consistency and natural compromise.
pub fn fuzzy_scenario(spec: &ScenarioSpec) -> ComputeResult<(Scenario, FuzzyScenario<f64>)> {
    let scenario = spec.build().map_err(ComputeError::Invalid)?;
    let mut missing = Vec::new();
    if spec.quantum1.mu.is_none() {
        missing.push(field("quantum1", "mu is required for the fuzzy reduction"));
    }
    if spec.quantum2.mu.is_none() {
        missing.push(field("quantum2", "mu is required for the fuzzy reduction"));
    }
    if !missing.is_empty() {
        return Err(ComputeError::Invalid(missing));
    }
    let mut violated: Vec<String> = scenario
        .pair
        .consistency_violations()
        .into_iter()
        .map(String::from)
        .collect();
    violated.extend(
        scenario
            .pair
            .compromise_violations()
            .into_iter()
            .map(String::from),
    );
    if !violated.is_empty() {
        return Err(ComputeError::Inconsistent(violated));
    }
    let fuzzy = FuzzyScenario::new(scenario.problem, scenario.pair.clone(), scenario.grid)?;
    Ok((scenario, fuzzy))
}

// ---------------------------------------------------------------- evaluate

/// A bundle plus the problem; grid and sweep may be sent along and are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluateRequest {
    pub ces: CesSection,
    pub prices: PriceSection,
    pub quantum1: QuantumSection,
    pub quantum2: QuantumSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(rename = "K")]
    pub capital: f64,
    #[serde(rename = "L")]
    pub labor: f64,
}

impl EvaluateRequest {
    pub fn from_spec(spec: &ScenarioSpec, capital: f64, labor: f64) -> Self {
        Self {
            ces: spec.ces,
            prices: spec.prices,
            quantum1: spec.quantum1,
            quantum2: spec.quantum2,
            grid: Some(spec.grid),
            sweep: Some(spec.sweep),
            capital,
            labor,
        }
    }

    fn spec(&self) -> ScenarioSpec {
        ScenarioSpec {
            ces: self.ces,
            prices: self.prices,
            quantum1: self.quantum1,
            quantum2: self.quantum2,
            grid: self.grid.unwrap_or_default(),
            sweep: self.sweep.unwrap_or(SweepSection {
                samples: 500,
                seed: 0,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabeledValues {
    pub labels: Vec<&'static str>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EvaluateResponse {
    #[serde(rename = "K")]
    pub capital: f64,
    #[serde(rename = "L")]
    pub labor: f64,
    /// CES output `Q(K, L)`.
    pub output: f64,
    /// `(∂Q/∂K, ∂Q/∂L)`.
    pub marginal_products: [f64; 2],
    /// The original criteria `(f1, f2, f3)`.
    pub f: [f64; 3],
    pub consistency: Consistency,
    /// Every criteria vector keyed by kind.
    pub criteria: BTreeMap<CriteriaKind, LabeledValues>,
}

pub fn evaluate(request: &EvaluateRequest) -> ComputeResult<EvaluateResponse> {
    let mut violations = match request.spec().build() {
        Ok(_) => Vec::new(),
        Err(v) => v,
    };
    let bundle = ResourceBundle {
        capital: request.capital,
        labor: request.labor,
    };
    if !bundle.is_valid() {
        violations.push(field("K, L", "bundle must be positive and finite"));
    }
    if !violations.is_empty() {
        return Err(ComputeError::Invalid(violations));
    }
    let scenario = consistent_scenario(&request.spec())?;
    let problem = scenario.problem;
    let f = problem.criteria(&bundle)?;
    let mut criteria = BTreeMap::new();
    for kind in CriteriaKind::ALL {
        let derived = build_criteria(kind, &scenario.pair, &problem)?;
        criteria.insert(
            kind,
            LabeledValues {
                labels: derived.labels(),
                values: derived.combine(&f),
            },
        );
    }
    let (qk, ql) = problem.params.marginal_products(&bundle)?;
    Ok(EvaluateResponse {
        capital: bundle.capital,
        labor: bundle.labor,
        output: problem.params.output(&bundle)?,
        marginal_products: [qk, ql],
        f: f.to_array(),
        consistency: scenario.pair.consistency(),
        criteria,
    })
}

// ---------------------------------------------------------------- rays

/// How many derived rays of a family land on a non-dominated node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RayCheck {
    pub kind: CriteriaKind,
    pub rays: usize,
    /// Rays that miss the grid window entirely.
    pub outside_window: usize,
    pub nondominated: usize,
}

/// Snaps each ray's window point to the grid and asks `nondominated` about the node.
pub fn check_rays(
    family: &RayFamily<f64>,
    grid: &GridSpecF64,
    nondominated: impl Fn(usize) -> bool,
) -> RayCheck {
    let mut check = RayCheck {
        kind: family.kind,
        rays: family.rays.len(),
        outside_window: 0,
        nondominated: 0,
    };
    for ray in &family.rays {
        match ray_window_point(grid, ray.ratio).and_then(|x| grid.nearest(&x).ok()) {
            Some(snap) if nondominated(snap.index) => check.nondominated += 1,
            Some(_) => {}
            None => check.outside_window += 1,
        }
    }
    check
}

/// The ray families a reduction reports: derived rays for every derived
/// kind, plus the printed closed forms where they exist.
pub fn ray_families(scenario: &Scenario) -> ComputeResult<Vec<RayFamily<f64>>> {
    let plan = [
        (CriteriaKind::G4, RaySource::Derived),
        (CriteriaKind::G4, RaySource::ClosedFormG4),
        (CriteriaKind::FBar4, RaySource::Derived),
        (CriteriaKind::FBar4, RaySource::ClosedFormFBar4),
        (CriteriaKind::FHat3, RaySource::Derived),
    ];
    plan.iter()
        .map(|&(kind, source)| {
            ray_family_sweep(
                kind,
                &scenario.pair,
                &scenario.problem,
                &scenario.sweep,
                source,
            )
            .map_err(ComputeError::from)
        })
        .collect()
}

// ---------------------------------------------------------------- crisp

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CrispReduction {
    pub grid_nodes: usize,
    pub oracle_sizes: BTreeMap<CriteriaKind, usize>,
    /// `oracle(G4) ⊆ oracle(FBAR4)`.
    pub g_in_fbar: bool,
    /// `oracle(FBAR4) ⊆ oracle(F3)`.
    pub fbar_in_f: bool,
    /// `oracle(F3)` is the whole grid.
    pub f_is_grid: bool,
    pub ray_check: RayCheck,
    /// Node indices of `oracle(G4)`.
    pub nondominated: Vec<usize>,
    /// Per-node criteria values and membership of `oracle(G4)`.
    #[serde(skip)]
    pub oracle: OracleSet<f64>,
    pub ray_families: Vec<RayFamily<f64>>,
}

/// Ray sweep plus grid oracle for the recombined criteria `g`, with the
/// inclusion chain against `f̄` and `f`.
pub fn reduce_crisp(spec: &ScenarioSpec) -> ComputeResult<CrispReduction> {
    let scenario = consistent_scenario(spec)?;
    let (pair, problem, grid) = (&scenario.pair, &scenario.problem, &scenario.grid);
    let mut oracles = BTreeMap::new();
    for kind in [CriteriaKind::F3, CriteriaKind::G4, CriteriaKind::FBar4] {
        oracles.insert(kind, oracle_pareto(kind, pair, problem, grid)?);
    }
    let families = ray_families(&scenario)?;
    let g4 = oracles.remove(&CriteriaKind::G4).expect("computed above");
    let fbar = &oracles[&CriteriaKind::FBar4];
    let f3 = &oracles[&CriteriaKind::F3];
    let mut oracle_sizes: BTreeMap<CriteriaKind, usize> =
        oracles.iter().map(|(k, o)| (*k, o.len())).collect();
    oracle_sizes.insert(CriteriaKind::G4, g4.len());
    Ok(CrispReduction {
        grid_nodes: grid.len(),
        g_in_fbar: g4.is_subset_of(fbar),
        fbar_in_f: fbar.is_subset_of(f3),
        f_is_grid: f3.is_full(),
        ray_check: check_rays(&families[0], grid, |i| g4.contains(i)),
        nondominated: g4.nondominated.clone(),
        oracle_sizes,
        oracle: g4,
        ray_families: families,
    })
}

// ---------------------------------------------------------------- fuzzy

/// The three inclusions of the reduction chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InclusionVerdicts {
    /// CORE equals `oracle(G4)`.
    pub core_is_g: bool,
    /// `oracle(G4) ⊆` second-stage oracle set.
    pub g_in_second: bool,
    /// Second-stage oracle set `⊆ oracle(F3)`.
    pub second_in_f: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReduceResponse {
    pub branch: ces_pareto::ConfidenceBranch,
    pub tier_values: BTreeMap<Tier, f64>,
    pub k: Vec<f64>,
    pub l: Vec<f64>,
    pub tier: Vec<Tier>,
    pub lambda: Vec<f64>,
    pub tier_counts: TierCounts,
    pub inclusions: InclusionVerdicts,
    pub nesting: NestingReport,
    pub ray_families: Vec<RayFamily<f64>>,
    pub ray_check: RayCheck,
}

/// Crisp and fuzzy reduction in one pass: membership map over the grid,
/// nesting verdicts and ray families.
pub fn reduce(spec: &ScenarioSpec) -> ComputeResult<ReduceResponse> {
    let (scenario, fuzzy) = fuzzy_scenario(spec)?;
    let (map, nesting) = membership_with_nesting(&fuzzy)?;
    let families = ray_families(&scenario)?;

    // CORE is oracle(G4), so the G4 ray cross-check reads the tiers directly.
    let ray_check = check_rays(&families[0], &scenario.grid, |i| map.tiers[i] == Tier::Core);

    let nodes = scenario.grid.nodes();
    let tier_values = [Tier::Core, Tier::Mid, Tier::Outer]
        .into_iter()
        .map(|t| (t, fuzzy.tier_value(t)))
        .collect();
    Ok(ReduceResponse {
        branch: map.branch,
        tier_values,
        k: nodes.iter().map(|x| x.capital).collect(),
        l: nodes.iter().map(|x| x.labor).collect(),
        tier_counts: map.counts(),
        tier: map.tiers,
        lambda: map.values,
        inclusions: InclusionVerdicts {
            core_is_g: nesting.core_is_g,
            g_in_second: nesting.g_in_second,
            second_in_f: nesting.second_in_f,
        },
        nesting,
        ray_families: families,
        ray_check,
    })
}

// ---------------------------------------------------------------- compare

pub fn compare(spec: &ScenarioSpec) -> ComputeResult<DiscrepancyReportF64> {
    let scenario = consistent_scenario(spec)?;
    Ok(compare_formulas(&ComparisonScenario {
        problem: scenario.problem,
        pair: scenario.pair,
        sweep: scenario.sweep,
        grid: scenario.grid,
    })?)
}
