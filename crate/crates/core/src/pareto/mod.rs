//! Pareto sets three ways: the grid dominance oracle, the printed ray
//! formulas, and the rederived stationary rays.

pub mod compare;
pub mod dominance;
pub mod grid;
pub mod oracle;
pub mod rays;
pub mod scalarize;
pub mod simplex;
pub mod sweep;

pub use compare::{
    compare_formulas, ray_window_point, ComparisonScenario, DiscrepancyReport, DiscrepancyRow,
};
pub use dominance::{dominates, nondominated_filter};
pub use grid::{GridScale, GridSpec, Snap, DEFAULT_NODE_CAP};
pub use oracle::{oracle_pareto, OracleSet};
pub use rays::{
    ray_gradient_residual, required_revenue, stationary_ray_closed_form, stationary_ray_derived,
    ClosedForm, DomainFailure, StationaryRay,
};
pub use scalarize::{scalarization, AggregateCoefficients, Scalarization};
pub use simplex::{sample_simplex, SimplexWeights, SweepSpec};
pub use sweep::{ray_family_sweep, RayFamily, RaySample, RaySource};
