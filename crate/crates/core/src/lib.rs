//! Irreducible Sobol' sequences in prime-power bases.
//!
//! The crate builds generating matrices for classical Sobol', Niederreiter,
//! irreducible Sobol' (IS) and irreducible Sobol'-Niederreiter (ISN) digital
//! sequences, generates (digitally shifted) points from them, measures their
//! equidistribution through t-values and Property A/A' rank tests, searches
//! for direction numbers, and runs randomized quasi-Monte Carlo experiments.

pub mod construct;
pub mod error;
pub mod experiments;
pub mod formats;
pub mod galois;
pub mod points;
pub mod quality;
pub mod search;

pub use error::{Error, Result};
