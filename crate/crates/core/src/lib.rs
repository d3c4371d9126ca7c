//! Pareto-set reduction for the three-criterion CES production problem.
//!
//! The decision maker chooses capital `K` and labor `L` to maximize the
//! vector `f = (−pK·K, −pL·L, pQ·Q(K, L))`. Every feasible bundle is
//! Pareto-optimal for `f`, so the Pareto set alone gives no guidance. Two
//! "quanta of information" (trade-off statements between cost and revenue)
//! are turned into recombined criteria whose Pareto sets are strictly
//! smaller:
//!
//! * [`quanta`] builds the recombined criteria `g`, `f̄`, `f̂`,
//! * [`pareto`] computes their Pareto sets with a brute-force grid oracle
//!   and with closed-form stationary rays, and reconciles the two,
//! * [`fuzzy`] turns quanta with confidence degrees into a membership map.
//!
//! All math is generic over [`Scalar`] (`f32` or `f64`); the `*F64`
//! aliases below name the common instantiations.

pub mod ces;
pub mod error;
pub mod fuzzy;
pub mod pareto;
pub mod quanta;
pub mod scalar;
pub mod scenario;

pub use ces::{
    criteria, validate_params, CesParams, CriteriaVector, EconomicProblem, Prices, ResourceBundle,
    ValidationReport,
};
pub use error::{Error, Result};
pub use fuzzy::{
    build_membership, classify_point, membership_with_nesting, verify_nesting, ConfidenceBranch,
    FuzzyScenario, MembershipMap, NestingReport, PointClass, Tier, TierCounts,
};
pub use quanta::{
    build_criteria, build_fbar, build_fhat, build_g, check_consistency, check_natural_compromise,
    quantum_vector, Consistency, CriteriaKind, DerivedCriteria, PreferencePair, Quantum,
};
pub use scalar::Scalar;
pub use scenario::{Scenario, ScenarioConfig, ScenarioSpec};

pub type CesParamsF64 = CesParams<f64>;
pub type PricesF64 = Prices<f64>;
pub type ResourceBundleF64 = ResourceBundle<f64>;
pub type EconomicProblemF64 = EconomicProblem<f64>;
pub type PreferencePairF64 = PreferencePair<f64>;
pub type GridSpecF64 = pareto::GridSpec<f64>;
pub type OracleSetF64 = pareto::OracleSet<f64>;
pub type RayFamilyF64 = pareto::RayFamily<f64>;
pub type MembershipMapF64 = MembershipMap<f64>;
pub type FuzzyScenarioF64 = FuzzyScenario<f64>;
pub type DiscrepancyReportF64 = pareto::DiscrepancyReport<f64>;

pub type CesParamsF32 = CesParams<f32>;
pub type EconomicProblemF32 = EconomicProblem<f32>;
pub type GridSpecF32 = pareto::GridSpec<f32>;
