//! Matrix realizations and ground-truth oracles.
//!
//! - [`IntMatrix`] / [`Permutation`]: realizations `A = sum of r permutation
//!   matrices` and friends.
//! - [`subpermanent_sum`] / [`subperm_vector_big`]: the exact sub-permanent
//!   kernel (truncated column-subset DP).
//! - [`e1_exact`] / [`e1_exact_naive`]: the sum-of-permutations measure,
//!   symmetry-reduced and brute-force.
//! - [`e_uniform_exact_tiny`]: the uniform r-regular 0/1 measure at tiny n.
//! - [`eb_expectation_single`] / [`eb_product_exact_tiny`]: the Bernoulli
//!   measure.
//! - [`sample`] / [`monte_carlo_moment`]: seeded reproducible sampling.

mod cycles;
mod kernel;
mod matrix;
mod oracle;
mod sampling;

pub use cycles::{
    canonical_permutation, class_perm_vector, class_size, cycle_block, cycle_block_vector,
    partitions, CycleType,
};
pub use kernel::{subperm_vector, subperm_vector_big, subpermanent_sum, KernelScalar};
pub use matrix::{IntMatrix, Permutation};
pub use oracle::{
    e1_exact, e1_exact_naive, e_uniform_exact_tiny, eb_expectation_single,
    eb_product_exact_tiny, free_perm_sum, MeasureKind, MomentSpec, OracleOptions, DEFAULT_BUDGET,
};
pub use sampling::{monte_carlo_moment, sample, McEstimate};
