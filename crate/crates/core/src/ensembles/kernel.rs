//! The sub-permanent kernel: a bitmask-style dynamic program over column
//! subsets, truncated at the requested order.
//!
//! `perm_m(A)` is the sum over all placements of `m` non-attacking rooks on
//! `A` of the product of the covered entries. The DP walks the rows in
//! order; each row is either skipped or matched to one still-unused column,
//! and the state is the set of used columns. Truncating the state to subsets
//! of size <= `m_max` gives the whole vector `perm_0..perm_{m_max}` in
//! `O(n * sum_{s<=m_max} C(n,s) * s)` operations, which is bounded by the
//! full `O(2^n n^2)` sweep and polynomial for fixed `m_max`.
//!
//! The scalar is generic: `u128` for the hot enumeration paths (chosen only
//! when a proven a-priori bound fits), `BigInt` otherwise.

use std::ops::AddAssign;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;
use crate::arith::{binomial, factorial};

/// Scalar the DP accumulates in.
pub trait KernelScalar:
    Clone + Zero + One + AddAssign + std::ops::Mul<Output = Self> + From<u64>
{
}

impl<T> KernelScalar for T where
    T: Clone + Zero + One + AddAssign + std::ops::Mul<Output = Self> + From<u64>
{
}

/// `C(x, j)` lookup table for subset ranking, `x <= n`, `j <= k_max`.
struct BinomTable {
    k_max: usize,
    table: Vec<u64>,
}

impl BinomTable {
    fn new(n: usize, k_max: usize) -> Self {
        let mut table = vec![0u64; (n + 1) * (k_max + 1)];
        for x in 0..=n {
            for j in 0..=k_max.min(x) {
                table[x * (k_max + 1) + j] = if j == 0 {
                    1
                } else {
                    table[(x - 1) * (k_max + 1) + j - 1]
                        + if j <= x - 1 {
                            table[(x - 1) * (k_max + 1) + j]
                        } else {
                            0
                        }
                };
            }
        }
        BinomTable { k_max, table }
    }

    #[inline]
    fn get(&self, x: usize, j: usize) -> u64 {
        if j > self.k_max || j > x {
            0
        } else {
            self.table[x * (self.k_max + 1) + j]
        }
    }
}

/// The vector `(perm_0(A), ..., perm_{m_max}(A))`. Entries beyond `n` are
/// zero; `perm_0 = 1` always.
pub fn subperm_vector<T: KernelScalar>(a: &IntMatrix, m_max: usize) -> Vec<T> {
    let n = a.n();
    let mm = m_max.min(n);
    let binoms = BinomTable::new(n.max(1), mm + 1);

    // dp[s][colex rank of S] = total weight of matchings of some s rows seen
    // so far onto exactly the column set S.
    let mut dp: Vec<Vec<T>> = (0..=mm)
        .map(|s| vec![T::zero(); binoms.get(n, s) as usize])
        .collect();
    if let Some(level0) = dp.get_mut(0) {
        level0[0] = T::one();
    }

    let mut positions: Vec<usize> = Vec::with_capacity(mm);
    let mut pre: Vec<u64> = Vec::with_capacity(mm + 1);
    for row in 0..n {
        let entries = &a.rows()[row];
        if entries.iter().all(|&e| e == 0) {
            continue;
        }
        // Descending level order: dp[s-1] still holds the pre-row value
        // when level s is updated, which realizes "skip or match" in place.
        for s in (1..=mm.min(row + 1)).rev() {
            positions.clear();
            positions.extend(0..s);
            let (lo, hi) = {
                let (head, tail) = dp.split_at_mut(s);
                (&head[s - 1], &mut tail[0])
            };
            let mut rank: usize = 0;
            loop {
                // pre[t] = sum_{j<t} C(c_j, j+1); with suffix sums of
                // C(c_j, j) this ranks S minus any one element in O(1).
                pre.clear();
                pre.push(0);
                for (j, &c) in positions.iter().enumerate() {
                    pre.push(pre[j] + binoms.get(c, j + 1));
                }
                let mut suf = 0u64;
                let mut acc = T::zero();
                let mut hit = false;
                for t in (0..s).rev() {
                    let c = positions[t];
                    let e = entries[c];
                    if e != 0 {
                        let sub_rank = (pre[t] + suf) as usize;
                        acc += T::from(e) * lo[sub_rank].clone();
                        hit = true;
                    }
                    suf += binoms.get(c, t);
                }
                if hit {
                    hi[rank] += acc;
                }

                // Colex successor.
                let Some(i) = (0..s).find(|&i| {
                    let limit = if i + 1 < s { positions[i + 1] } else { n };
                    positions[i] + 1 < limit
                }) else {
                    break;
                };
                positions[i] += 1;
                for (j, p) in positions.iter_mut().enumerate().take(i) {
                    *p = j;
                }
                rank += 1;
            }
        }
    }

    let mut out: Vec<T> = dp
        .into_iter()
        .map(|level| {
            let mut sum = T::zero();
            for v in level {
                sum += v;
            }
            sum
        })
        .collect();
    out.resize(m_max + 1, T::zero());
    out
}

/// Upper bound on `perm_s(A)` for any `s <= m`: `C(n,m)^2 m! max_entry^m`
/// is monotone in `m` over the range we truncate to.
fn perm_value_bound(n: usize, m: usize, max_entry: u64) -> BigInt {
    let mut best = BigInt::one();
    for s in 0..=m.min(n) {
        let b = binomial(n as i64, s as i64);
        let cand = &b * &b * factorial(s) * BigInt::from(max_entry).pow(s as u32);
        if cand > best {
            best = cand;
        }
    }
    best
}

/// True when the whole DP provably fits in `u128`.
pub fn fits_u128(a: &IntMatrix, m_max: usize) -> bool {
    let max_entry = a.rows().iter().flatten().copied().max().unwrap_or(0);
    perm_value_bound(a.n(), m_max, max_entry.max(1)) < (BigInt::one() << 126)
}

/// Sub-permanent vector in arbitrary precision, running the DP in `u128`
/// when a proven bound allows it.
pub fn subperm_vector_big(a: &IntMatrix, m_max: usize) -> Vec<BigInt> {
    if fits_u128(a, m_max) {
        subperm_vector::<u128>(a, m_max)
            .into_iter()
            .map(BigInt::from)
            .collect()
    } else {
        subperm_vector::<BigInt>(a, m_max)
    }
}

/// `perm_m(A)` exactly: 1 for `m = 0`, 0 for `m > n`.
pub fn subpermanent_sum(a: &IntMatrix, m: usize) -> BigInt {
    if m > a.n() {
        return BigInt::zero();
    }
    subperm_vector_big(a, m).swap_remove(m)
}
