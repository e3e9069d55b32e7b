//! Time-analytic solutions of the heat equation `∂ₜu = Δu` on locally
//! finite weighted graphs.
//!
//! The crate builds the power series `u(x,t) = Σ Δᵏa(x) tᵏ/k!` with a
//! certified truncation bound ([`series`]), evaluates the growth-based
//! analytic-radius estimates ([`bounds`]), audits the flat-bump solution on
//! `ℤ` that is smooth but not time-analytic ([`counterexample`]), and checks
//! everything against dense brute-force references ([`oracle`]).

pub mod bounds;
pub mod counterexample;
pub mod error;
pub mod graph;
pub mod laplacian;
pub mod oracle;
pub mod scalar;
pub mod series;

pub use bounds::{radius_estimate, DegreeGrowth, GrowthProfile, RadiusCertificate, RadiusKind};
pub use error::{Error, Result};
pub use graph::{
    deg, distance, one_neighborhood, CachedBalls, FiniteGraph, Graph, GraphFamily, IntegerLine, Lattice,
    LocalFunction, RegularTree, TreeWord,
};
pub use laplacian::{apply_laplacian, iterated_laplacian, IteratedLaplacianTable};
pub use num_rational::BigRational;
pub use scalar::{ArithmeticMode, Scalar};
pub use series::{backward_solve, SeriesEvaluation, SeriesSolution};
