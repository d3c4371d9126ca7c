use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {}", .0.join(", "))]
    InvalidParams(Vec<String>),

    #[error("CES output is undefined at r = 0; use the Cobb-Douglas limit instead")]
    ZeroSubstitution,

    #[error("criterion index {index} is outside 1..={count}")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("invalid quantum: {0}")]
    InvalidQuantum(String),

    #[error(
        "preference quanta are not jointly consistent (both ratio inequalities must hold): {0}"
    )]
    Inconsistent(String),

    #[error("vector lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("expected {expected} scalarization weights for {kind}, got {got}")]
    DimensionMismatch {
        kind: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid simplex weights: {0}")]
    InvalidWeights(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid has {nodes} nodes, above the cap of {cap}")]
    GridTooLarge { nodes: usize, cap: usize },

    #[error("point ({k}, {l}) lies outside the grid window")]
    OutsideWindow { k: f64, l: f64 },

    #[error("no interior stationary ray: {0}")]
    NoInteriorRay(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
