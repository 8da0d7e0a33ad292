//! Exact-arithmetic construction and classification of lattice contact
//! polytopes: shortest/closest vector enumeration, polar duals, orbit-wise
//! vertex enumeration under a finite symmetry group, and diagram/graph
//! classification of the resulting orbits.

pub mod classify;
pub mod engine;
pub mod exactalg;
pub mod golay;
pub mod io;
pub mod lattice;
pub mod polytope;
pub mod symmetry;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("table row inconsistent: {0}")]
    TableConsistency(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("linear program infeasible")]
    Infeasible,
    #[error("objective stayed degenerate after retries")]
    DegenerateObjective,
    #[error("point violates inequality {0}")]
    NotInPolytope(usize),
    #[error("point is not a vertex")]
    NotAVertex,
    #[error("edge is unbounded")]
    UnboundedEdge,
    #[error("generator {0} does not map the point set to itself")]
    NotASymmetry(usize),
    #[error("search budget of {0} nodes exhausted before a decision")]
    Undecided(u64),
    #[error("bad seed vertex: {0}")]
    BadSeed(String),
    #[error("group action does not match the polytope: {0}")]
    ActionMismatch(String),
    #[error("classification rule does not apply: {0}")]
    RuleDomain(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
