//! Correlated-randomness synthesis over finite alphabets.
//!
//! Exact rate-region evaluation for point-to-point synthesis with decoder
//! side information and for the two-encoder distributed setting, exact
//! Fourier–Motzkin projection of the underlying rate systems, and
//! finite-blocklength simulation of the random-binning codes with exact
//! total-variation measurement.

pub mod cli;
pub mod codec;
pub mod error;
pub mod harness;
pub mod polyhedra;
pub mod prob;
pub mod region;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Exact, Real};

/// Joint table over `f64`.
pub type Pmf = prob::JointPmf<f64>;
/// Conditional table over `f64`.
pub type CondDist = prob::CondPmf<f64>;
/// Linear system over arbitrary-precision rationals.
pub type RationalSystem = polyhedra::LinIneqSystem<num_rational::BigRational>;
