//! Convolution operators on symmetric powers of a curve, the Schur algebra
//! as their pointwise shadow, finite Heisenberg groups and the elliptic
//! classical r-matrix.
//!
//! Indices in this API are 0-based; serialized and displayed forms are 1-based.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod combinatorics;
pub mod convolution;
pub mod elliptic;
pub mod error;
pub mod funcspace;
pub mod heisenberg;
pub mod linalg;
pub mod orbits;

pub use error::{Error, Result};

/// Exact rational numbers.
pub type Rational = num_rational::BigRational;
