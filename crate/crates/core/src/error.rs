//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size must be even, got {0}")]
    OddGridSize(usize),
    #[error("grid size must be at least 4, got {0}")]
    GridTooSmall(usize),
    #[error("values indexed by different grids (n = {0} vs n = {1})")]
    GridMismatch(usize, usize),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("direction index {0} out of range for grid of size {1}")]
    IndexOutOfRange(usize, usize),
    #[error("point set is empty")]
    EmptyPointSet,
    #[error("polygon is not convex (cross product {0:e} at vertex {1})")]
    NotConvex(f64, usize),
    #[error("support vector is not valid (edge length {0:e} at index {1})")]
    InvalidSupport(f64, usize),
    #[error("origin is not interior: support value {0:e} at index {1}")]
    OriginNotInterior(f64, usize),
    #[error("weights do not close up: |sum w_i u_i| = {0:e} exceeds tolerance")]
    ClosureViolated(f64),
    #[error("measure support lies in a closed half-circle; body is lower-dimensional")]
    DegenerateMeasure,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("LP dimensions inconsistent: {0}")]
    LpDimensionMismatch(String),
    #[error("problem is infeasible: {0}")]
    Infeasible(String),
    #[error("problem is unbounded")]
    Unbounded,
    #[error("numerical failure in solver: {0}")]
    SolverFailure(String),
    #[error("profile is not symmetric about the rotation axis (max asymmetry {0:e})")]
    AsymmetricProfile(f64),
    #[error("cap angle {0} out of range (0, pi/2)")]
    CapAngleOutOfRange(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
