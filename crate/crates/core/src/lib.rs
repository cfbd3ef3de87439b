//! Support-function calculus for planar convex bodies and Pareto-style
//! optimization over Minkowski balls (centrally symmetric bodies).
//!
//! Bodies are sampled support functions on an even direction grid; their
//! surface-area measures are atomic vectors on the same grid. On top of the
//! calculus sit a dense LP oracle, a linear-majorization test with transport
//! witnesses, concave volume maximization by conditional gradients, and
//! LP-checkable optimality certificates for isoperimetric and
//! Urysohn-type problems.
//!
//! All core types are generic over the floating scalar; the aliases at the
//! crate root fix `f64`, which is what the CLI and the test suites use.

pub mod error;
pub mod geom;
pub mod grid;
pub mod linalg;
pub mod lp;
pub mod majorization;
pub mod measure;
pub mod polygon;
pub mod rotation;
pub mod scalar;
pub mod solvers;
pub mod support;
pub mod tol;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// `f64` concrete aliases for the generic core types.
pub type Vec2 = geom::Vec2<f64>;
pub type DirectionGrid = grid::DirectionGrid<f64>;
pub type SupportVector = support::SupportVector<f64>;
pub type Polygon = polygon::Polygon<f64>;
pub type GridMeasure = measure::GridMeasure<f64>;
pub type DiracPair = measure::DiracPair<f64>;
pub type LinearProgram = lp::LinearProgram<f64>;
pub type LpSolution = lp::LpSolution<f64>;
pub type TransportWitness = majorization::TransportWitness<f64>;
pub type FeasibleRegion = solvers::FeasibleRegion<f64>;
pub type Certificate = solvers::Certificate<f64>;
pub type ParetoPoint = solvers::ParetoPoint<f64>;
pub type RevolutionBody = rotation::RevolutionBody<f64>;
