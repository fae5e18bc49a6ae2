//! Exact integer hulls of aggregated knapsack relaxations of packing and
//! covering integer programs, sampled (k-)aggregation closures, and the
//! recursive `K ∩ L` closure construction with executable checks.
//!
//! All arithmetic is exact (arbitrary precision rationals). Polyhedra are
//! kept in both H- and V-representation and compared through a canonical
//! H-representation.

pub mod cli;
pub mod closure;
pub mod exactnum;
pub mod knapsack;
pub mod polyhedron;
pub mod verify;

pub use closure::{
    aggregation_closure, sample_lambdas, sampled_closure, Aggregation, ClosureArtifacts, ClosureEngine, FacetTuple,
    SampleScheme, Separation,
};
pub use exactnum::{Rat, RatMatrix, RatVector};
pub use knapsack::{Instance, KnapsackRelaxation, Sense};
pub use polyhedron::{LinearInequality, Polyhedron, Relation};

/// Default cap on the number of lattice cells any single enumeration may visit.
pub const DEFAULT_CELL_BUDGET: u64 = 10_000_000;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular matrix")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("trivial aggregation")]
    TrivialAggregation,
    #[error("empty relaxation")]
    EmptyRelaxation,
    #[error("enumeration box of {cells} cells exceeds the budget of {budget}")]
    Budget { cells: u128, budget: u64 },
    #[error("integer overflow during lattice enumeration")]
    Overflow,
    #[error("degenerate facet: {0}")]
    DegenerateFacet(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Usage(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
