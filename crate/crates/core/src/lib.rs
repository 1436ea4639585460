//! Exact moments of sub-permanents over random permutation-sum ensembles.
//!
//! The sub-permanent `perm_m(A)` of an `n × n` matrix is the sum, over all
//! ways to pick `m` rows, `m` columns, and a bijection between them, of the
//! product of the selected entries. This crate computes moments of products
//! of sub-permanents under three random-matrix ensembles, entirely in exact
//! rational arithmetic:
//!
//! - the sum-of-permutations ensemble (`A` = entrywise sum of `r` independent
//!   uniform permutation matrices),
//! - the uniform ensemble of 0/1 matrices with all row and column sums `r`
//!   (tiny sizes only, by exhaustive enumeration),
//! - the Bernoulli ensemble with entry probability `r/n`.
//!
//! Modules:
//! - [`arith`]: rationals, factorials, composition enumeration, polynomial
//!   algebra, exact interpolation and rational-function reconstruction.
//! - [`ensembles`]: matrix realizations, the sub-permanent kernel, exact
//!   brute-force and symmetry-reduced expectation oracles, seeded samplers.
//! - [`formulas`]: closed-form composition sums for the leading contributions
//!   to product moments, series coefficients, and related exact identities.
//! - [`verify`]: reconstruction of product moments as exact polynomials or
//!   rational functions of `n`, convergence-order estimation, and a claim
//!   verification suite.
//!
//! Everything outside the slope fits of [`verify`] is exact: values are
//! arbitrary-precision rationals and equality checks are equality, not
//! tolerance.

pub mod arith;
pub mod ensembles;
pub mod error;
pub mod formulas;
pub mod verify;

pub use arith::{PolyQ, Rat, RatFuncQ};
pub use error::Error;

/// Shorthand result type used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
