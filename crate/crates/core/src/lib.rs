//! Exact bounds for copulas with a prescribed piecewise-linear diagonal
//! section.
//!
//! The crate computes, with exact rational arithmetic, the pointwise best
//! possible upper bound on the set of copulas with a given diagonal, the
//! Bertino lower bound, the coarser upper bounds A and K, the copula U
//! attaining the upper bound on half the square, and the maximal asymmetry
//! attainable with that diagonal. Brute-force grid oracles double-check
//! every analytic construction.

pub mod asymmetry;
pub mod bounds;
pub mod curated;
pub mod diagonal;
pub mod error;
pub mod geometry;
pub mod pl;
pub mod rational;
pub mod sample;
pub mod svg;
pub mod verify;

pub use bounds::{BoundFamily, DiagonalData, Evaluator, FSplit, GridMatrix};
pub use diagonal::{DeltaHat, DiagonalSection, Extremum};
pub use error::{Error, Result};
pub use pl::PiecewiseLinear;
pub use rational::{rat, Rational};
