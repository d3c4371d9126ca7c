//! Fuzzy membership map built from three nested crisp Pareto problems.
//!
//! With confidences `μ1` (first quantum) and `μ2` (second quantum):
//!
//! | branch    | second-stage problem | MID value | OUTER value |
//! |-----------|----------------------|-----------|-------------|
//! | `μ1 ≥ μ2` | `f̄ = (f1, f2, g13, g23)` | `1 − μ2` | `1 − μ1` |
//! | `μ1 < μ2` | `f̂ = (g31, g32, f3)`     | `1 − μ1` | `1 − μ2` |
//!
//! CORE nodes (non-dominated for `g`) keep membership 1. Every node of the
//! grid is Pareto-optimal for `f` itself, so the Pareto membership is 1
//! everywhere and bounds the map from above.

use serde::{Deserialize, Serialize};

use crate::ces::{EconomicProblem, ResourceBundle};
use crate::error::{Error, Result};
use crate::pareto::{oracle_pareto, GridSpec, OracleSet};
use crate::quanta::{CriteriaKind, PreferencePair};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyScenario<T> {
    problem: EconomicProblem<T>,
    pair: PreferencePair<T>,
    grid: GridSpec<T>,
    mu1: T,
    mu2: T,
}

impl<T: Scalar> FuzzyScenario<T> {
    /// Requires both confidences and the "gain exceeds loss" inequalities.
    pub fn new(
        problem: EconomicProblem<T>,
        pair: PreferencePair<T>,
        grid: GridSpec<T>,
    ) -> Result<Self> {
        let (Some(mu1), Some(mu2)) = pair.confidences() else {
            return Err(Error::InvalidScenario(
                "both quanta need a confidence in [0, 1]".into(),
            ));
        };
        let violations = pair.compromise_violations();
        if !violations.is_empty() {
            return Err(Error::Inconsistent(violations.join(", ")));
        }
        Ok(Self {
            problem,
            pair,
            grid,
            mu1,
            mu2,
        })
    }

    pub fn problem(&self) -> &EconomicProblem<T> {
        &self.problem
    }

    pub fn pair(&self) -> &PreferencePair<T> {
        &self.pair
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn confidences(&self) -> (T, T) {
        (self.mu1, self.mu2)
    }

    /// Ties go to the `μ1 ≥ μ2` branch.
    pub fn branch(&self) -> ConfidenceBranch {
        if self.mu1 >= self.mu2 {
            ConfidenceBranch::FirstAtLeastSecond
        } else {
            ConfidenceBranch::FirstBelowSecond
        }
    }

    /// Membership of a tier under this scenario's confidences.
    pub fn tier_value(&self, tier: Tier) -> T {
        let one = T::one();
        match (tier, self.branch()) {
            (Tier::Core, _) => one,
            (Tier::Mid, ConfidenceBranch::FirstAtLeastSecond) => one - self.mu2,
            (Tier::Outer, ConfidenceBranch::FirstAtLeastSecond) => one - self.mu1,
            (Tier::Mid, ConfidenceBranch::FirstBelowSecond) => one - self.mu1,
            (Tier::Outer, ConfidenceBranch::FirstBelowSecond) => one - self.mu2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConfidenceBranch {
    #[serde(rename = "mu1>=mu2")]
    FirstAtLeastSecond,
    #[serde(rename = "mu1<mu2")]
    FirstBelowSecond,
}

impl ConfidenceBranch {
    pub fn second_stage(self) -> CriteriaKind {
        match self {
            ConfidenceBranch::FirstAtLeastSecond => CriteriaKind::FBar4,
            ConfidenceBranch::FirstBelowSecond => CriteriaKind::FHat3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ConfidenceBranch::FirstAtLeastSecond => "mu1>=mu2",
            ConfidenceBranch::FirstBelowSecond => "mu1<mu2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Tier {
    Core,
    Mid,
    Outer,
}

impl Tier {
    pub fn as_str(self) -> &'static str {
        match self {
            Tier::Core => "CORE",
            Tier::Mid => "MID",
            Tier::Outer => "OUTER",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TierCounts {
    pub core: usize,
    pub mid: usize,
    pub outer: usize,
}

impl TierCounts {
    pub fn total(&self) -> usize {
        self.core + self.mid + self.outer
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipMap<T> {
    pub grid: GridSpec<T>,
    pub branch: ConfidenceBranch,
    pub tiers: Vec<Tier>,
    pub values: Vec<T>,
}

impl<T: Scalar> MembershipMap<T> {
    pub fn counts(&self) -> TierCounts {
        let mut counts = TierCounts::default();
        for tier in &self.tiers {
            match tier {
                Tier::Core => counts.core += 1,
                Tier::Mid => counts.mid += 1,
                Tier::Outer => counts.outer += 1,
            }
        }
        counts
    }

    pub fn classify(&self, x: &ResourceBundle<T>) -> Result<PointClass<T>> {
        let snap = self.grid.nearest(x)?;
        Ok(PointClass {
            tier: self.tiers[snap.index],
            value: self.values[snap.index],
            node: snap.node,
            snap_distance: snap.distance,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointClass<T> {
    pub tier: Tier,
    pub value: T,
    pub node: ResourceBundle<T>,
    pub snap_distance: T,
}

struct Stages<T> {
    core: OracleSet<T>,
    second: OracleSet<T>,
}

fn stages<T: Scalar>(scenario: &FuzzyScenario<T>) -> Result<Stages<T>> {
    let second_kind = scenario.branch().second_stage();
    let (core, second) = rayon::join(
        || {
            oracle_pareto(
                CriteriaKind::G4,
                &scenario.pair,
                &scenario.problem,
                &scenario.grid,
            )
        },
        || {
            oracle_pareto(
                second_kind,
                &scenario.pair,
                &scenario.problem,
                &scenario.grid,
            )
        },
    );
    Ok(Stages {
        core: core?,
        second: second?,
    })
}

fn assemble<T: Scalar>(scenario: &FuzzyScenario<T>, stages: &Stages<T>) -> MembershipMap<T> {
    let tiers: Vec<Tier> = (0..scenario.grid.len())
        .map(|i| {
            if stages.core.contains(i) {
                Tier::Core
            } else if stages.second.contains(i) {
                Tier::Mid
            } else {
                Tier::Outer
            }
        })
        .collect();
    let values = tiers.iter().map(|&t| scenario.tier_value(t)).collect();
    MembershipMap {
        grid: scenario.grid,
        branch: scenario.branch(),
        tiers,
        values,
    }
}

/// Solves the `g` problem and the branch's second-stage problem on the grid
/// and labels every node.
pub fn build_membership<T: Scalar>(scenario: &FuzzyScenario<T>) -> Result<MembershipMap<T>> {
    Ok(assemble(scenario, &stages(scenario)?))
}

/// Tier and membership of the grid node nearest to `x`.
pub fn classify_point<T: Scalar>(
    scenario: &FuzzyScenario<T>,
    x: &ResourceBundle<T>,
) -> Result<PointClass<T>> {
    if !scenario.grid.contains(x) {
        return Err(Error::OutsideWindow {
            k: x.capital.to_f64_lossy(),
            l: x.labor.to_f64_lossy(),
        });
    }
    build_membership(scenario)?.classify(x)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NestingReport {
    pub branch: ConfidenceBranch,
    pub grid_nodes: usize,
    pub f3_size: usize,
    pub fbar4_size: usize,
    pub fhat3_size: usize,
    pub g4_size: usize,
    /// `oracle(G4) ⊆ oracle(second stage)`.
    pub g_in_second: bool,
    /// `oracle(second stage) ⊆ oracle(F3)`.
    pub second_in_f: bool,
    /// `oracle(F3)` is the whole grid.
    pub f_is_grid: bool,
    pub g_in_fbar: bool,
    pub g_in_fhat: bool,
    /// Membership never exceeds the Pareto membership 1.
    pub upper_bound_holds: bool,
    /// Membership equals 1 on CORE and nowhere else (needs both confidences positive).
    pub one_exactly_on_core: bool,
    pub core_is_g: bool,
    pub partition_holds: bool,
    pub tiers: TierCounts,
    pub failures: Vec<String>,
}

impl NestingReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Recomputes all four oracle sets and checks the inclusion chain and the
/// membership bounds on the grid.
pub fn verify_nesting<T: Scalar>(scenario: &FuzzyScenario<T>) -> Result<NestingReport> {
    Ok(membership_with_nesting(scenario)?.1)
}

/// [`build_membership`] and [`verify_nesting`] from a single set of oracle runs.
pub fn membership_with_nesting<T: Scalar>(
    scenario: &FuzzyScenario<T>,
) -> Result<(MembershipMap<T>, NestingReport)> {
    let (pair, problem, grid) = (&scenario.pair, &scenario.problem, &scenario.grid);
    let ((f3, g4), (fbar, fhat)) = rayon::join(
        || {
            rayon::join(
                || oracle_pareto(CriteriaKind::F3, pair, problem, grid),
                || oracle_pareto(CriteriaKind::G4, pair, problem, grid),
            )
        },
        || {
            rayon::join(
                || oracle_pareto(CriteriaKind::FBar4, pair, problem, grid),
                || oracle_pareto(CriteriaKind::FHat3, pair, problem, grid),
            )
        },
    );
    let (f3, g4, fbar, fhat) = (f3?, g4?, fbar?, fhat?);
    let second = match scenario.branch() {
        ConfidenceBranch::FirstAtLeastSecond => &fbar,
        ConfidenceBranch::FirstBelowSecond => &fhat,
    };
    let map = assemble(
        scenario,
        &Stages {
            core: g4.clone(),
            second: second.clone(),
        },
    );

    let one = T::one();
    let g_in_second = g4.is_subset_of(second);
    let second_in_f = second.is_subset_of(&f3);
    let f_is_grid = f3.is_full();
    let upper_bound_holds = map.values.iter().all(|&v| v <= one && v >= T::zero());
    let one_exactly_on_core = map
        .tiers
        .iter()
        .zip(&map.values)
        .all(|(&t, &v)| (t == Tier::Core) == (v == one));
    let core_is_g = map
        .tiers
        .iter()
        .enumerate()
        .all(|(i, &t)| (t == Tier::Core) == g4.contains(i));
    let tiers = map.counts();
    let partition_holds = tiers.total() == grid.len() && map.tiers.len() == grid.len();

    let mut failures = Vec::new();
    let mut require = |ok: bool, what: &str| {
        if !ok {
            failures.push(what.to_string());
        }
    };
    require(
        g_in_second,
        "oracle(G4) is not inside the second-stage oracle set",
    );
    require(
        second_in_f,
        "second-stage oracle set is not inside oracle(F3)",
    );
    require(f_is_grid, "oracle(F3) is not the whole grid");
    require(upper_bound_holds, "membership outside [0, 1]");
    require(core_is_g, "CORE differs from oracle(G4)");
    require(partition_holds, "tiers do not partition the grid");

    let report = NestingReport {
        branch: scenario.branch(),
        grid_nodes: grid.len(),
        f3_size: f3.len(),
        fbar4_size: fbar.len(),
        fhat3_size: fhat.len(),
        g4_size: g4.len(),
        g_in_second,
        second_in_f,
        f_is_grid,
        g_in_fbar: g4.is_subset_of(&fbar),
        g_in_fhat: g4.is_subset_of(&fhat),
        upper_bound_holds,
        one_exactly_on_core,
        core_is_g,
        partition_holds,
        tiers,
        failures,
    };
    Ok((map, report))
}
