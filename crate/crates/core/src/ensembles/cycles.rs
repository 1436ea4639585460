//! Conjugacy classes of the symmetric group: cycle types, class sizes, and
//! per-cycle sub-permanent blocks.
//!
//! Functions of a matrix `I + P_sigma` that are invariant under simultaneous
//! row/column permutation depend on sigma only through its cycle type, so
//! sums over the symmetric group reduce to sums over integer partitions
//! weighted by class size. Moreover `I + P_sigma` is block-diagonal under
//! grouping by cycles, so its sub-permanent vector is the convolution of
//! small per-cycle-length vectors, which we memoize globally.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::One;

use super::kernel::subperm_vector_big;
use super::matrix::{IntMatrix, Permutation};
use crate::arith::factorial;

/// A conjugacy class of `S_n`: the partition of `n` given by the cycle
/// lengths, plus how many permutations have that cycle type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleType {
    /// Cycle lengths, non-increasing, summing to `n`.
    pub partition: Vec<u32>,
    /// `n! / prod_j (j^{c_j} c_j!)` where `c_j` is the multiplicity of `j`.
    pub class_size: BigInt,
}

impl CycleType {
    /// All cycle types of `S_n`, in the order produced by
    /// [`partitions`] (descending-part lexicographic).
    pub fn enumerate(n: u32) -> Vec<CycleType> {
        partitions(n)
            .into_iter()
            .map(|partition| {
                let class_size = class_size(n, &partition);
                CycleType {
                    partition,
                    class_size,
                }
            })
            .collect()
    }
}

/// All partitions of `n` into non-increasing positive parts.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(remaining: u32, max_part: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            cur.push(part);
            rec(remaining - part, part, cur, out);
            cur.pop();
        }
    }
    rec(n, n.max(1), &mut cur, &mut out);
    out
}

/// Number of permutations of `n` with the given cycle type.
pub fn class_size(n: u32, partition: &[u32]) -> BigInt {
    let mut mult: HashMap<u32, u32> = HashMap::new();
    for &p in partition {
        *mult.entry(p).or_insert(0) += 1;
    }
    let mut denom = BigInt::one();
    for (&j, &c) in &mult {
        denom *= BigInt::from(j).pow(c) * factorial(c as usize);
    }
    factorial(n as usize) / denom
}

/// A permutation with the given cycle type: consecutive blocks of indices,
/// each cyclically shifted.
pub fn canonical_permutation(partition: &[u32]) -> Permutation {
    let n: u32 = partition.iter().sum();
    let mut images = vec![0usize; n as usize];
    let mut start = 0usize;
    for &len in partition {
        let len = len as usize;
        for k in 0..len {
            images[start + k] = start + (k + 1) % len;
        }
        start += len;
    }
    debug_assert_eq!(start, n as usize);
    Permutation::from_images(images)
}

/// The `L x L` block that one length-`L` cycle of sigma contributes to
/// `I + P_sigma`: identity plus the cyclic shift (a single `[2]` for a
/// fixed point).
pub fn cycle_block(len: u32) -> IntMatrix {
    let l = len as usize;
    let mut rows = vec![vec![0u64; l]; l];
    for k in 0..l {
        rows[k][k] += 1;
        rows[k][(k + 1) % l] += 1;
    }
    IntMatrix::from_rows(rows)
}

static BLOCK_VECTORS: OnceLock<Mutex<HashMap<(u32, usize), Vec<BigInt>>>> = OnceLock::new();

/// Memoized sub-permanent vector of [`cycle_block`]`(len)` up to order
/// `m_max`. Shared across classes and across dimensions.
pub fn cycle_block_vector(len: u32, m_max: usize) -> Vec<BigInt> {
    let cache = BLOCK_VECTORS.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (len, m_max.min(len as usize));
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return v.clone();
    }
    let v = subperm_vector_big(&cycle_block(len), key.1);
    cache.lock().unwrap().insert(key, v.clone());
    v
}

/// Sub-permanent vector of `I + P_sigma` for any sigma of the given cycle
/// type, truncated at `m_max`: the convolution of the per-cycle blocks.
pub fn class_perm_vector(partition: &[u32], m_max: usize) -> Vec<BigInt> {
    let mut acc = vec![BigInt::one()];
    for &len in partition {
        let block = cycle_block_vector(len, m_max);
        let out_len = (acc.len() + block.len() - 1).min(m_max + 1);
        let mut next = vec![BigInt::from(0); out_len];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in block.iter().enumerate() {
                if i + j < out_len {
                    next[i + j] += a * b;
                }
            }
        }
        acc = next;
    }
    acc.resize(m_max + 1, BigInt::from(0));
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(5).len(), 7);
        assert_eq!(partitions(10).len(), 42);
        assert_eq!(partitions(0), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn class_sizes_sum_to_group_order() {
        for n in 1..=12u32 {
            let total: BigInt = CycleType::enumerate(n)
                .iter()
                .map(|c| c.class_size.clone())
                .sum();
            assert_eq!(total, factorial(n as usize), "n = {n}");
        }
    }

    #[test]
    fn canonical_permutation_has_requested_type() {
        let p = canonical_permutation(&[4, 2, 1]);
        assert_eq!(p.cycle_type(), vec![4, 2, 1]);
    }

    #[test]
    fn block_convolution_matches_direct_kernel() {
        for partition in partitions(7) {
            let sigma = canonical_permutation(&partition);
            let mut a = IntMatrix::identity(7);
            a.add_permutation(&sigma);
            let direct = subperm_vector_big(&a, 7);
            let blocked = class_perm_vector(&partition, 7);
            assert_eq!(direct, blocked, "partition {partition:?}");
        }
    }

    #[test]
    fn fixed_point_block_counts_double_entry() {
        // perm vector of [2] is (1, 2).
        assert_eq!(
            cycle_block_vector(1, 1),
            vec![BigInt::one(), BigInt::from(2)]
        );
        // A 2-cycle block is the all-ones 2x2 matrix: (1, 4, 2).
        assert_eq!(
            cycle_block_vector(2, 2),
            vec![BigInt::one(), BigInt::from(4), BigInt::from(2)]
        );
    }

    #[test]
    fn truncated_class_vector_pads_with_zeros() {
        let v = class_perm_vector(&[2, 1], 5);
        assert_eq!(v.len(), 6);
        assert!(v[4].is_zero() && v[5].is_zero());
    }
}
