//! Graded differential polynomials, n-ansatz recursions and explicit
//! solutions of the heat and Burgers equations.

pub mod ansatz;
pub mod cli;
pub mod dynsys;
pub mod error;
pub mod grpoly;
pub mod operators;
pub mod output;
pub mod scalar;
pub mod series;
pub mod solution;
pub mod verify;

pub use error::{Error, Result};
pub use grpoly::{Degree, Family, GradedPoly, JetPoint};
pub use scalar::{Dual, Rational, Scalar};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;
