//! Ground-truth expectation oracles.
//!
//! `e1_exact` computes moments under the sum-of-permutations measure by
//! exact enumeration with symmetry reductions:
//!
//! - the first permutation is always fixed to the identity (row-permuting
//!   the matrix leaves every sub-permanent unchanged);
//! - for `r = 2` the remaining sum reduces to cycle types of the second
//!   permutation with class-size weights, and each class value comes from
//!   the per-cycle block factorization of `I + P_sigma`;
//! - for `r = 3` with at most two sub-permanent factors, the sum over the
//!   second permutation reduces to cycle types and the sum over the third
//!   is collapsed algebraically: expanding each sub-permanent over the
//!   entries it takes from `P_sigma` and counting the permutations through
//!   a given partial permutation turns the n! terms into a short sum over
//!   deletion sizes and overlaps (see `free_perm_sum_*`).
//!
//! Every reduction is cross-checked against `e1_exact_naive`, which fixes
//! only the first permutation and enumerates the rest.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cycles::{class_perm_vector, canonical_permutation, CycleType};
use super::kernel::{fits_u128, subperm_vector, subperm_vector_big, KernelScalar};
use super::matrix::{IntMatrix, Permutation};
use crate::arith::{binomial, factorial, Rat};
use crate::error::Error;
use crate::Result;

/// Default work budget, in kernel evaluations.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Hard cap on the DP state count of a single kernel evaluation.
const MAX_KERNEL_STATES: u128 = 50_000_000;

/// Knobs for the enumeration oracles.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleOptions {
    /// Maximum number of kernel evaluations an operation may schedule.
    /// Operations estimate their work up front and refuse with
    /// [`Error::BudgetExceeded`] rather than hang.
    pub budget: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            budget: DEFAULT_BUDGET,
        }
    }
}

fn check_budget(estimate: u128, opts: &OracleOptions) -> Result<()> {
    if estimate > opts.budget as u128 {
        return Err(Error::BudgetExceeded {
            estimate,
            budget: opts.budget,
        });
    }
    Ok(())
}

/// Guard against a single kernel evaluation whose truncated state space is
/// itself unreasonable.
fn check_kernel_states(n: usize, m_max: usize) -> Result<()> {
    let mut states: u128 = 0;
    for s in 0..=m_max.min(n) {
        let b = binomial(n as i64, s as i64);
        states += u128::try_from(&b).unwrap_or(u128::MAX);
        if states > MAX_KERNEL_STATES {
            return Err(Error::BudgetExceeded {
                estimate: states,
                budget: 0,
            });
        }
    }
    Ok(())
}

/// Which random-matrix ensemble a moment is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureKind {
    /// Uniform over sums of `r` independent permutation matrices.
    #[serde(rename = "e1")]
    SumOfPermutations,
    /// Uniform over 0/1 matrices with all row and column sums equal `r`.
    #[serde(rename = "e")]
    UniformRegular,
    /// Independent Bernoulli entries with probability `r/n`.
    #[serde(rename = "eb")]
    Bernoulli,
}

/// A moment specification: dimension `n`, regularity `r`, and the orders of
/// the sub-permanent factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentSpec {
    pub n: u32,
    pub r: u32,
    pub m_list: Vec<u32>,
}

impl MomentSpec {
    pub fn new(n: u32, r: u32, m_list: Vec<u32>) -> Result<Self> {
        let spec = MomentSpec { n, r, m_list };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidSpec("n must be at least 1".into()));
        }
        if self.r == 0 {
            return Err(Error::InvalidSpec("r must be at least 1".into()));
        }
        if self.m_list.is_empty() {
            return Err(Error::InvalidSpec("m_list must be nonempty".into()));
        }
        Ok(())
    }

    pub fn max_order(&self) -> usize {
        self.m_list.iter().copied().max().unwrap_or(0) as usize
    }
}

fn partition_count(n: u32) -> u128 {
    // Euler's recurrence with generalized pentagonal numbers.
    let n = n as usize;
    let mut p = vec![0u128; n + 1];
    p[0] = 1;
    for i in 1..=n {
        let mut acc: i128 = 0;
        let mut k = 1i64;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g1 > i && g2 > i {
                break;
            }
            let sign = if k % 2 == 0 { -1i128 } else { 1i128 };
            if g1 <= i {
                acc += sign * p[i - g1] as i128;
            }
            if g2 <= i {
                acc += sign * p[i - g2] as i128;
            }
            k += 1;
        }
        p[i] = acc as u128;
    }
    p[n]
}

/// Exact `E_1` moment: the uniform average over `r`-tuples of permutations
/// of the product of sub-permanents of their matrix sum.
pub fn e1_exact(spec: &MomentSpec, opts: &OracleOptions) -> Result<Rat> {
    spec.validate()?;
    let n = spec.n as usize;
    if spec.m_list.iter().any(|&m| m as usize > n) {
        return Ok(Rat::zero());
    }
    match spec.r {
        // A single permutation matrix: every sub-permanent is a binomial
        // count, independent of the permutation.
        1 => {
            let mut prod = BigInt::one();
            for &m in &spec.m_list {
                prod *= binomial(n as i64, m as i64);
            }
            Ok(Rat::from_integer(prod))
        }
        2 => e1_cycle_reduced_r2(spec, opts),
        3 if spec.m_list.len() <= 2 => e1_cycle_reduced_r3(spec, opts),
        _ => e1_enumerate_tuples(spec, opts),
    }
}

fn e1_cycle_reduced_r2(spec: &MomentSpec, opts: &OracleOptions) -> Result<Rat> {
    let n = spec.n as usize;
    let m_max = spec.max_order();
    check_budget(partition_count(spec.n), opts)?;
    check_kernel_states(n, m_max)?;

    let classes = CycleType::enumerate(spec.n);
    let terms: Vec<BigInt> = classes
        .par_iter()
        .map(|class| {
            let v = class_perm_vector(&class.partition, m_max);
            let mut prod = class.class_size.clone();
            for &m in &spec.m_list {
                prod *= &v[m as usize];
            }
            prod
        })
        .collect();
    // Sequential reduction in class order keeps results bit-identical
    // regardless of thread count.
    let sum: BigInt = terms.into_iter().sum();
    Ok(Rat::new(sum, factorial(n)))
}

fn e1_cycle_reduced_r3(spec: &MomentSpec, opts: &OracleOptions) -> Result<Rat> {
    let n = spec.n as usize;
    let ms: Vec<usize> = spec.m_list.iter().map(|&m| m as usize).collect();
    let per_class = free_perm_sum_cost(n, &ms);
    check_budget(partition_count(spec.n).saturating_mul(per_class), opts)?;
    check_kernel_states(n, spec.max_order())?;

    let classes = CycleType::enumerate(spec.n);
    let terms: Vec<BigInt> = classes
        .par_iter()
        .map(|class| {
            let sigma = canonical_permutation(&class.partition);
            let mut b = IntMatrix::identity(n);
            b.add_permutation(&sigma);
            let f = free_perm_sum(&b, &ms);
            f * &class.class_size
        })
        .collect();
    let sum: BigInt = terms.into_iter().sum();
    let nf = factorial(n);
    Ok(Rat::new(sum, &nf * &nf))
}

/// Kernel evaluations needed by [`free_perm_sum`] on an `n x n` matrix.
fn free_perm_sum_cost(n: usize, ms: &[usize]) -> u128 {
    match ms {
        [_] => 1,
        [m1, m2] => {
            let pmax = (*m1).min(*m2);
            let mut per_side: u128 = 0;
            for a in 0..=pmax {
                per_side += u128::try_from(&binomial(n as i64, a as i64)).unwrap_or(u128::MAX);
            }
            per_side.saturating_mul(per_side)
        }
        _ => u128::MAX,
    }
}

/// `sum over all permutations sigma of prod_k perm_{m_k}(B + P_sigma)`,
/// computed without enumerating sigma.
///
/// Expanding each sub-permanent term over the subset of its entries taken
/// from `P_sigma` leaves, for a fixed choice of those entries `T`, the
/// factor `perm_{m-|T|}` of `B` with the rows and columns of `T` removed;
/// the number of permutations whose graph contains a partial permutation of
/// size `u` is `(n-u)!`. Sums of deleted sub-permanents over all
/// size-`s` row/column supersets of a fixed pair `(rho, gamma)` collapse to
/// binomial multiples of `perm_k(B minus (rho, gamma))`, and exact overlap
/// counts between the two factors' supports are recovered by binomial
/// inversion. Only matrices with one or two factors are supported.
pub fn free_perm_sum(b: &IntMatrix, ms: &[usize]) -> BigInt {
    // The u128 path needs headroom for products of two sub-permanents and
    // the support sums; `fits_u128` bounds one factor by < 2^126, so demand
    // a much smaller bound before using the fast path.
    let kmax = ms.iter().copied().max().unwrap_or(0);
    let fast = fits_u128(b, kmax) && {
        let v = subperm_vector_big(b, kmax);
        let bound: BigInt = v.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero);
        let support: BigInt = (0..=ms.iter().copied().min().unwrap_or(0))
            .map(|a| binomial(b.n() as i64, a as i64))
            .sum();
        &bound * &bound * &support * &support < (BigInt::one() << 126)
    };
    match ms {
        [m] => free_perm_sum_single(b, *m),
        [m1, m2] => {
            if fast {
                free_perm_sum_pair::<u128>(b, *m1, *m2)
            } else {
                free_perm_sum_pair::<BigInt>(b, *m1, *m2)
            }
        }
        _ => panic!("free_perm_sum supports one or two factors"),
    }
}

fn free_perm_sum_single(b: &IntMatrix, m: usize) -> BigInt {
    let n = b.n();
    if m > n {
        return BigInt::zero();
    }
    let v = subperm_vector_big(b, m);
    let mut total = BigInt::zero();
    // k entries taken from B, m - k from the free permutation.
    for (k, perm_k) in v.iter().enumerate() {
        let s = m - k;
        let free_rows = binomial((n - k) as i64, s as i64);
        total += factorial(n - s) * factorial(s) * &free_rows * &free_rows * perm_k;
    }
    total
}

fn free_perm_sum_pair<T>(b: &IntMatrix, m1: usize, m2: usize) -> BigInt
where
    T: KernelScalar + Into<BigInt> + Send + Sync,
{
    let n = b.n();
    if m1 > n || m2 > n {
        return BigInt::zero();
    }
    let pmax = m1.min(m2);
    let kmax = m1.max(m2);

    // support_sums[alpha][beta][k1][k2] =
    //   sum over |rho|=alpha, |gamma|=beta of
    //     perm_{k1}(B minus (rho,gamma)) * perm_{k2}(B minus (rho,gamma)).
    let subsets: Vec<Vec<Vec<usize>>> = (0..=pmax)
        .map(|s| combinations(n, s))
        .collect();
    let mut support_sums =
        vec![vec![vec![vec![T::zero(); m2 + 1]; m1 + 1]; pmax + 1]; pmax + 1];
    for (alpha, rhos) in subsets.iter().enumerate() {
        for (beta, gammas) in subsets.iter().enumerate() {
            let cell: Vec<Vec<Vec<T>>> = rhos
                .par_iter()
                .map(|rho| {
                    let mut local = vec![vec![T::zero(); m2 + 1]; m1 + 1];
                    for gamma in gammas {
                        let v: Vec<T> = subperm_vector(&b.minor(rho, gamma), kmax);
                        for k1 in 0..=m1 {
                            for k2 in 0..=m2 {
                                local[k1][k2] += v[k1].clone() * v[k2].clone();
                            }
                        }
                    }
                    local
                })
                .collect();
            let target = &mut support_sums[alpha][beta];
            for local in cell {
                for k1 in 0..=m1 {
                    for k2 in 0..=m2 {
                        target[k1][k2] += local[k1][k2].clone();
                    }
                }
            }
        }
    }

    let bino = |x: i64, j: i64| binomial(x, j);
    let mut total = BigInt::zero();
    for s1 in 0..=m1 {
        let k1 = m1 - s1;
        for s2 in 0..=m2 {
            let k2 = m2 - s2;
            let amax = s1.min(s2);
            // overlap_counts(alpha, beta): both factors' free supports
            // summed over all placements containing a marked (rho, gamma).
            let jhat = |alpha: usize, beta: usize| -> BigInt {
                let f = bino((n - alpha - k1) as i64, (s1 - alpha) as i64)
                    * bino((n - beta - k1) as i64, (s1 - beta) as i64)
                    * bino((n - alpha - k2) as i64, (s2 - alpha) as i64)
                    * bino((n - beta - k2) as i64, (s2 - beta) as i64);
                f * support_sums[alpha][beta][k1][k2].clone().into()
            };
            for a in 0..=amax {
                if s1 + s2 - a > n {
                    continue;
                }
                // Exact overlap (a rows and a columns shared) by binomial
                // inversion over the marked-subset sums.
                let mut exact = BigInt::zero();
                for alpha in a..=amax {
                    for beta in a..=amax {
                        let term = bino(alpha as i64, a as i64)
                            * bino(beta as i64, a as i64)
                            * jhat(alpha, beta);
                        if (alpha + beta - 2 * a) % 2 == 0 {
                            exact += term;
                        } else {
                            exact -= term;
                        }
                    }
                }
                let weight = factorial(n - s1 - s2 + a)
                    * factorial(a)
                    * factorial(s1 - a)
                    * factorial(s2 - a);
                total += weight * exact;
            }
        }
    }
    total
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..n).combinations(k).collect()
}

/// Shared enumeration core: fix the first permutation to the identity and
/// sum the remaining `r - 1` permutations exhaustively.
fn e1_enumerate_tuples(spec: &MomentSpec, opts: &OracleOptions) -> Result<Rat> {
    let n = spec.n as usize;
    let free = (spec.r - 1) as u32;
    let nf_u = factorial(n);
    let tuples = num_traits::ToPrimitive::to_u128(&nf_u.pow(free)).unwrap_or(u128::MAX);
    check_budget(tuples, opts)?;
    check_kernel_states(n, spec.max_order())?;

    let perms = Permutation::all(n);
    let m_max = spec.max_order();
    let eval = |indices: &[usize]| -> BigInt {
        let mut a = IntMatrix::identity(n);
        for &i in indices {
            a.add_permutation(&perms[i]);
        }
        let v = subperm_vector_big(&a, m_max);
        let mut prod = BigInt::one();
        for &m in &spec.m_list {
            prod *= &v[m as usize];
        }
        prod
    };

    let total: BigInt = if free == 0 {
        eval(&[])
    } else {
        // Parallelize over the first free permutation, enumerate the rest
        // with an odometer; reduce in index order.
        let parts: Vec<BigInt> = (0..perms.len())
            .into_par_iter()
            .map(|first| {
                let mut indices = vec![0usize; free as usize];
                indices[0] = first;
                let mut acc = BigInt::zero();
                loop {
                    acc += eval(&indices);
                    // Advance the odometer over indices[1..].
                    let mut pos = 1;
                    loop {
                        if pos >= free as usize {
                            return acc;
                        }
                        indices[pos] += 1;
                        if indices[pos] < perms.len() {
                            break;
                        }
                        indices[pos] = 0;
                        pos += 1;
                    }
                }
            })
            .collect();
        parts.into_iter().sum()
    };
    Ok(Rat::new(total, nf_u.pow(free)))
}

/// Independent oracle for the symmetry reductions: fixes the first
/// permutation only and enumerates all `(n!)^{r-1}` remaining tuples.
/// Restricted to `n <= 6`, `r <= 3`.
pub fn e1_exact_naive(spec: &MomentSpec, opts: &OracleOptions) -> Result<Rat> {
    spec.validate()?;
    if spec.n > 6 || spec.r > 3 {
        return Err(Error::InvalidSpec(format!(
            "naive enumeration is restricted to n <= 6 and r <= 3, got n={} r={}",
            spec.n, spec.r
        )));
    }
    if spec.m_list.iter().any(|&m| m > spec.n) {
        return Ok(Rat::zero());
    }
    e1_enumerate_tuples(spec, opts)
}

/// Exact uniform-measure moment over all 0/1 matrices with every row and
/// column sum equal to `r`, by row-wise backtracking with column-capacity
/// pruning. Tiny `n` only.
pub fn e_uniform_exact_tiny(spec: &MomentSpec, opts: &OracleOptions) -> Result<Rat> {
    spec.validate()?;
    let n = spec.n as usize;
    let r = spec.r as usize;
    if r > n {
        return Err(Error::InfeasibleEnsemble(format!(
            "no 0/1 matrix of size {n} has row sums {r} > n"
        )));
    }
    // Upper bound on enumeration leaves: every row picks one of C(n, r)
    // column subsets.
    let per_row = num_traits::ToPrimitive::to_u128(&binomial(n as i64, r as i64)).unwrap();
    let est = per_row.checked_pow(n as u32).unwrap_or(u128::MAX);
    check_budget(est, opts)?;

    if spec.m_list.iter().any(|&m| m as usize > n) {
        return Ok(Rat::zero());
    }
    let m_max = spec.max_order();

    let mut col_left = vec![r as u32; n];
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut total = BigInt::zero();
    let mut count = BigInt::zero();

    fn recurse(
        row: usize,
        n: usize,
        r: usize,
        m_max: usize,
        m_list: &[u32],
        col_left: &mut Vec<u32>,
        rows: &mut Vec<Vec<u64>>,
        total: &mut BigInt,
        count: &mut BigInt,
    ) {
        if row == n {
            let a = IntMatrix::from_rows(rows.clone());
            let v = subperm_vector_big(&a, m_max);
            let mut prod = BigInt::one();
            for &m in m_list {
                prod *= &v[m as usize];
            }
            *total += prod;
            *count += 1;
        } else {
            let rows_left = (n - row - 1) as u32;
            // Choose the r columns for this row among those with capacity.
            let mut chosen = Vec::with_capacity(r);
            fn pick(
                start: usize,
                need: usize,
                row: usize,
                n: usize,
                r: usize,
                m_max: usize,
                m_list: &[u32],
                rows_left: u32,
                chosen: &mut Vec<usize>,
                col_left: &mut Vec<u32>,
                rows: &mut Vec<Vec<u64>>,
                total: &mut BigInt,
                count: &mut BigInt,
            ) {
                if need == 0 {
                    // Prune: a column must not need more ones than there
                    // are rows left.
                    if col_left.iter().all(|&c| c <= rows_left) {
                        let mut line = vec![0u64; n];
                        for &j in chosen.iter() {
                            line[j] = 1;
                        }
                        rows.push(line);
                        recurse(
                            row + 1,
                            n,
                            r,
                            m_max,
                            m_list,
                            col_left,
                            rows,
                            total,
                            count,
                        );
                        rows.pop();
                    }
                    return;
                }
                if n - start < need {
                    return;
                }
                for j in start..n {
                    if col_left[j] == 0 {
                        continue;
                    }
                    col_left[j] -= 1;
                    chosen.push(j);
                    pick(
                        j + 1,
                        need - 1,
                        row,
                        n,
                        r,
                        m_max,
                        m_list,
                        rows_left,
                        chosen,
                        col_left,
                        rows,
                        total,
                        count,
                    );
                    chosen.pop();
                    col_left[j] += 1;
                }
            }
            pick(
                0, r, row, n, r, m_max, m_list, rows_left, &mut chosen, col_left, rows, total,
                count,
            );
        }
    }

    recurse(
        0,
        n,
        r,
        m_max,
        &spec.m_list,
        &mut col_left,
        &mut rows,
        &mut total,
        &mut count,
    );
    debug_assert!(count > BigInt::zero());
    Ok(Rat::new(total, count))
}

/// `E_B(perm_m)` in closed form: each of the `C(n,m)^2 m!` placements is a
/// product of `m` independent Bernoulli(r/n) entries.
pub fn eb_expectation_single(n: u32, r: u32, m: u32) -> Rat {
    let b = binomial(n as i64, m as i64);
    let count = &b * &b * factorial(m as usize);
    let p = Rat::new(BigInt::from(r), BigInt::from(n));
    let mut pm = Rat::one();
    for _ in 0..m {
        pm *= &p;
    }
    Rat::from_integer(count) * pm
}

/// 256-bit cell set for partial-permutation supports (n <= 16).
#[derive(Clone, Copy)]
struct CellSet([u64; 4]);

impl CellSet {
    fn insert(&mut self, cell: usize) {
        self.0[cell / 64] |= 1u64 << (cell % 64);
    }

    fn union_count(&self, other: &CellSet) -> u32 {
        (0..4).map(|i| (self.0[i] | other.0[i]).count_ones()).sum()
    }
}

/// All partial permutations of size `m` on the `n x n` grid, as cell sets.
fn partial_perm_supports(n: usize, m: usize) -> Vec<CellSet> {
    use itertools::Itertools;
    let mut out = Vec::new();
    for rows in (0..n).combinations(m) {
        for cols in (0..n).combinations(m) {
            for perm in (0..m).permutations(m) {
                let mut set = CellSet([0; 4]);
                for (i, &pi) in perm.iter().enumerate() {
                    set.insert(rows[i] * n + cols[pi]);
                }
                out.push(set);
            }
        }
    }
    out
}

/// Exact `E_B(perm_{m1} perm_{m2})` by enumerating pairs of placement
/// supports: a pair with union size `u` contributes `p^u` because repeated
/// 0/1 entries collapse.
pub fn eb_product_exact_tiny(
    n: u32,
    r: u32,
    m1: u32,
    m2: u32,
    opts: &OracleOptions,
) -> Result<Rat> {
    if n > 16 {
        return Err(Error::InvalidInput(
            "Bernoulli product enumeration supports n <= 16".into(),
        ));
    }
    if m1 > n || m2 > n {
        return Ok(Rat::zero());
    }
    let count = |m: u32| {
        let b = binomial(n as i64, m as i64);
        &b * &b * factorial(m as usize)
    };
    let est = num_traits::ToPrimitive::to_u128(&(count(m1) * count(m2))).unwrap_or(u128::MAX);
    check_budget(est, opts)?;

    let s1 = partial_perm_supports(n as usize, m1 as usize);
    let s2 = if m1 == m2 {
        s1.clone()
    } else {
        partial_perm_supports(n as usize, m2 as usize)
    };

    let max_u = (m1 + m2) as usize;
    let counts: Vec<u64> = s1
        .par_iter()
        .map(|a| {
            let mut local = vec![0u64; max_u + 1];
            for b in &s2 {
                local[a.union_count(b) as usize] += 1;
            }
            local
        })
        .reduce(
            || vec![0u64; max_u + 1],
            |mut x, y| {
                for (xi, yi) in x.iter_mut().zip(y) {
                    *xi += yi;
                }
                x
            },
        );

    let p = Rat::new(BigInt::from(r), BigInt::from(n));
    let mut value = Rat::zero();
    let mut pu = Rat::one();
    for (u, &c) in counts.iter().enumerate() {
        if u > 0 {
            pu *= &p;
        }
        if c > 0 {
            value += Rat::from_integer(BigInt::from(c)) * pu.clone();
        }
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_int;

    fn opts() -> OracleOptions {
        OracleOptions::default()
    }

    fn spec(n: u32, r: u32, m: &[u32]) -> MomentSpec {
        MomentSpec::new(n, r, m.to_vec()).unwrap()
    }

    /// Direct sum over the free permutation, for validating the collapsed
    /// form on small matrices.
    fn direct_free_perm_sum(b: &IntMatrix, ms: &[usize]) -> BigInt {
        let n = b.n();
        let kmax = ms.iter().copied().max().unwrap();
        let mut total = BigInt::zero();
        for sigma in Permutation::all(n) {
            let mut a = b.clone();
            a.add_permutation(&sigma);
            let v = subperm_vector_big(&a, kmax);
            let mut prod = BigInt::one();
            for &m in ms {
                prod *= &v[m];
            }
            total += prod;
        }
        total
    }

    #[test]
    fn free_perm_sum_matches_direct_enumeration() {
        for n in 1..=5usize {
            let b = if n >= 3 {
                let mut b = IntMatrix::identity(n);
                b.add_permutation(&Permutation::from_images(
                    (0..n).map(|i| (i + 1) % n).collect(),
                ));
                b
            } else {
                IntMatrix::identity(n)
            };
            for ms in [vec![1], vec![2], vec![1, 1], vec![2, 1], vec![2, 2], vec![3, 2]] {
                if ms.iter().any(|&m| m > n) {
                    continue;
                }
                assert_eq!(
                    free_perm_sum(&b, &ms),
                    direct_free_perm_sum(&b, &ms),
                    "n={n} ms={ms:?}"
                );
            }
        }
    }

    #[test]
    fn free_perm_sum_on_irregular_matrix() {
        // The collapse is an algebraic identity for any base matrix, not
        // just sums of permutations.
        let b = IntMatrix::from_rows(vec![
            vec![2, 0, 1, 0],
            vec![0, 0, 3, 1],
            vec![1, 1, 0, 0],
            vec![0, 2, 0, 1],
        ]);
        for ms in [vec![2, 2], vec![3, 1], vec![4, 2]] {
            assert_eq!(free_perm_sum(&b, &ms), direct_free_perm_sum(&b, &ms));
        }
    }

    #[test]
    fn e1_order_one_is_rn() {
        // perm_1 = sum of entries = r n, deterministically.
        assert_eq!(e1_exact(&spec(3, 2, &[1]), &opts()).unwrap(), rat_int(6));
    }

    #[test]
    fn e1_single_permutation_is_binomial() {
        assert_eq!(e1_exact(&spec(4, 1, &[2]), &opts()).unwrap(), rat_int(6));
    }

    #[test]
    fn e1_matches_naive_spot_checks() {
        for (n, r, ms) in [
            (4u32, 2u32, vec![2u32]),
            (5, 2, vec![2, 2]),
            (4, 3, vec![2, 1]),
            (5, 3, vec![2, 2]),
            (4, 3, vec![3]),
        ] {
            let s = spec(n, r, &ms);
            assert_eq!(
                e1_exact(&s, &opts()).unwrap(),
                e1_exact_naive(&s, &opts()).unwrap(),
                "n={n} r={r} ms={ms:?}"
            );
        }
    }

    #[test]
    fn e1_order_above_n_vanishes() {
        assert_eq!(e1_exact(&spec(3, 2, &[4]), &opts()).unwrap(), Rat::zero());
    }

    #[test]
    fn naive_rejects_large_inputs() {
        assert!(matches!(
            e1_exact_naive(&spec(7, 2, &[2]), &opts()),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn budget_guard_refuses() {
        let tiny = OracleOptions { budget: 10 };
        assert!(matches!(
            e1_exact(&spec(6, 3, &[2, 2]), &tiny),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn uniform_tiny_full_regularity_unique_matrix() {
        // n = r: only the all-ones matrix qualifies.
        let v = e_uniform_exact_tiny(&spec(3, 3, &[2]), &opts()).unwrap();
        assert_eq!(v, rat_int(18)); // C(3,2)^2 * 2!
    }

    #[test]
    fn uniform_tiny_r1_is_binomial() {
        let v = e_uniform_exact_tiny(&spec(4, 1, &[2]), &opts()).unwrap();
        assert_eq!(v, rat_int(6));
    }

    #[test]
    fn uniform_tiny_infeasible() {
        assert!(matches!(
            e_uniform_exact_tiny(&spec(3, 4, &[1]), &opts()),
            Err(Error::InfeasibleEnsemble(_))
        ));
    }

    #[test]
    fn uniform_matches_independent_row_product_enumeration() {
        // Independent oracle: iterate all assignments of one r-subset per
        // row (no pruning, no backtracking sharing) and filter on column
        // sums.
        use itertools::Itertools;
        let (n, r) = (5usize, 2usize);
        let row_choices: Vec<Vec<usize>> = (0..n).combinations(r).collect();
        let mut total = BigInt::zero();
        let mut count = 0u64;
        let k = row_choices.len();
        let mut idx = vec![0usize; n];
        loop {
            let mut colsum = vec![0u32; n];
            for &i in idx.iter() {
                for &j in &row_choices[i] {
                    colsum[j] += 1;
                }
            }
            if colsum.iter().all(|&c| c == r as u32) {
                let rows: Vec<Vec<u64>> = idx
                    .iter()
                    .map(|&i| {
                        let mut row = vec![0u64; n];
                        for &j in &row_choices[i] {
                            row[j] = 1;
                        }
                        row
                    })
                    .collect();
                let a = IntMatrix::from_rows(rows);
                total += subpermanent_sum_local(&a, 2);
                count += 1;
            }
            let mut pos = 0;
            loop {
                if pos == n {
                    let expected = Rat::new(total.clone(), BigInt::from(count));
                    let got = e_uniform_exact_tiny(&spec(5, 2, &[2]), &opts()).unwrap();
                    assert_eq!(got, expected);
                    return;
                }
                idx[pos] += 1;
                if idx[pos] < k {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }

        fn subpermanent_sum_local(a: &IntMatrix, m: usize) -> BigInt {
            super::super::kernel::subpermanent_sum(a, m)
        }
    }

    #[test]
    fn uniform_coincides_with_e1_at_r1() {
        for n in 2..=5 {
            for m in 1..=2 {
                let s = spec(n, 1, &[m]);
                assert_eq!(
                    e_uniform_exact_tiny(&s, &opts()).unwrap(),
                    e1_exact(&s, &opts()).unwrap()
                );
            }
        }
    }

    #[test]
    fn eb_single_examples() {
        assert_eq!(eb_expectation_single(4, 2, 1), rat_int(8));
        assert_eq!(eb_expectation_single(7, 3, 0), Rat::one());
        assert_eq!(eb_expectation_single(5, 2, 2), rat_int(32));
    }

    #[test]
    fn eb_product_reduces_to_single_for_m2_zero() {
        let v = eb_product_exact_tiny(5, 2, 2, 0, &opts()).unwrap();
        assert_eq!(v, eb_expectation_single(5, 2, 2));
    }

    #[test]
    fn eb_product_order_one_squared_matches_moment_identity() {
        // perm_1 = sum of n^2 independent Bernoulli(p) entries X, so
        // E(X^2) = (n^2 p)^2 + n^2 p (1 - p).
        for (n, r) in [(3u32, 1u32), (4, 2), (5, 3)] {
            let p = Rat::new(BigInt::from(r), BigInt::from(n));
            let n2 = rat_int((n * n) as i64);
            let mean = &n2 * &p;
            let expected = &mean * &mean + n2 * &p * (Rat::one() - &p);
            let got = eb_product_exact_tiny(n, r, 1, 1, &opts()).unwrap();
            assert_eq!(got, expected, "n={n} r={r}");
        }
    }
}
