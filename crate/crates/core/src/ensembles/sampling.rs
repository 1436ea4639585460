//! Seeded, reproducible samplers and the Monte Carlo estimator.
//!
//! Every sample is a deterministic function of `(seed, sample index)`: each
//! index gets its own ChaCha stream, so samples can be drawn in parallel in
//! any order and still reproduce bit-identically.

use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernel::subperm_vector_big;
use super::matrix::{IntMatrix, Permutation};
use super::oracle::{MeasureKind, MomentSpec, OracleOptions};
use crate::error::Error;
use crate::Result;

fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform random permutation by an unbiased Fisher-Yates shuffle.
fn random_permutation(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        images.swap(i, j);
    }
    Permutation::from_images(images)
}

/// Draw one matrix from the measure. Only the sum-of-permutations and
/// Bernoulli measures are sampled; uniform-regular sampling is a non-goal.
pub fn sample(
    measure: MeasureKind,
    spec: &MomentSpec,
    seed: u64,
    index: u64,
) -> Result<IntMatrix> {
    spec.validate()?;
    let n = spec.n as usize;
    let mut rng = stream_rng(seed, index);
    match measure {
        MeasureKind::SumOfPermutations => {
            let perms: Vec<Permutation> = (0..spec.r)
                .map(|_| random_permutation(n, &mut rng))
                .collect();
            Ok(IntMatrix::sum_of_permutations(n, &perms))
        }
        MeasureKind::Bernoulli => {
            // Entry = 1 with probability exactly r/n: draw an integer
            // below n and compare against r. No floating point involved.
            let rows: Vec<Vec<u64>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| u64::from(rng.gen_range(0..spec.n) < spec.r))
                        .collect()
                })
                .collect();
            Ok(IntMatrix::from_rows(rows))
        }
        MeasureKind::UniformRegular => Err(Error::UnsupportedMeasure(
            "uniform r-regular sampling is not provided; use the tiny-n enumeration oracle"
                .into(),
        )),
    }
}

/// Monte Carlo estimate of the product moment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

/// Sample mean and standard error of `prod_k perm_{m_k}(A)` over `samples`
/// independent draws. Reproducible from `(seed, samples)` regardless of
/// thread count: per-index streams plus an index-ordered reduction.
pub fn monte_carlo_moment(
    measure: MeasureKind,
    spec: &MomentSpec,
    samples: u64,
    seed: u64,
    opts: &OracleOptions,
) -> Result<McEstimate> {
    spec.validate()?;
    if samples < 2 {
        return Err(Error::InvalidInput("need at least 2 samples".into()));
    }
    if samples as u128 > opts.budget as u128 {
        return Err(Error::BudgetExceeded {
            estimate: samples as u128,
            budget: opts.budget,
        });
    }
    let m_max = spec.max_order();
    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let a = sample(measure, spec, seed, i).expect("measure already validated");
            let v = subperm_vector_big(&a, m_max);
            let mut prod = num_bigint::BigInt::from(1);
            for &m in &spec.m_list {
                prod *= &v[m as usize];
            }
            prod.to_f64().unwrap_or(f64::INFINITY)
        })
        .collect();

    let n = samples as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    Ok(McEstimate {
        mean,
        std_error: (var / n).sqrt(),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: u32, r: u32, m: &[u32]) -> MomentSpec {
        MomentSpec::new(n, r, m.to_vec()).unwrap()
    }

    #[test]
    fn permutation_sum_samples_are_regular() {
        for index in 0..20 {
            let m = sample(MeasureKind::SumOfPermutations, &spec(5, 2, &[1]), 42, index).unwrap();
            assert!(m.is_r_regular(2));
        }
    }

    #[test]
    fn r1_sample_is_a_permutation_matrix() {
        let m = sample(MeasureKind::SumOfPermutations, &spec(5, 1, &[1]), 7, 0).unwrap();
        assert!(m.is_r_regular(1));
        assert!(m.rows().iter().flatten().all(|&e| e <= 1));
    }

    #[test]
    fn bernoulli_entries_are_zero_one() {
        let m = sample(MeasureKind::Bernoulli, &spec(5, 2, &[1]), 3, 1).unwrap();
        assert!(m.rows().iter().flatten().all(|&e| e <= 1));
    }

    #[test]
    fn uniform_regular_sampling_unsupported() {
        assert!(matches!(
            sample(MeasureKind::UniformRegular, &spec(4, 2, &[1]), 0, 0),
            Err(Error::UnsupportedMeasure(_))
        ));
    }

    #[test]
    fn samples_reproduce_from_seed_and_index() {
        let a = sample(MeasureKind::SumOfPermutations, &spec(6, 2, &[1]), 11, 5).unwrap();
        let b = sample(MeasureKind::SumOfPermutations, &spec(6, 2, &[1]), 11, 5).unwrap();
        assert_eq!(a, b);
        let c = sample(MeasureKind::SumOfPermutations, &spec(6, 2, &[1]), 11, 6).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn mc_of_deterministic_order_one_has_zero_error() {
        // perm_1 = r n on every sample.
        let est = monte_carlo_moment(
            MeasureKind::SumOfPermutations,
            &spec(6, 2, &[1]),
            1000,
            9,
            &OracleOptions::default(),
        )
        .unwrap();
        assert_eq!(est.mean, 12.0);
        assert_eq!(est.std_error, 0.0);
    }
}
