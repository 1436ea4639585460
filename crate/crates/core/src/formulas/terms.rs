//! The four aggregate contributions to a product of sub-permanent moments
//! under the sum-of-permutations measure, as exact composition sums.
//!
//! Expanding each factor `perm_{m_k}` into placements and each placement
//! into per-color entry counts (a composition of `m_k` into `r` parts)
//! reduces the leading contributions to weighted sums over composition
//! matrices. The four sums implemented here are:
//!
//! - [`marginal_product`] (label I): the product of the marginal single
//!   moments, each an independent composition sum.
//! - [`disjoint_support_sum`] (label II): placements of all factors on
//!   pairwise disjoint rows and columns, which share one factorial weight
//!   per color across factors.
//! - [`shared_entry_sum`] (label III): exactly one entry of a later factor
//!   coincides (same cell, same color) with an entry of an earlier factor.
//! - [`shared_line_sum`] (label IV): exactly one entry of a later factor
//!   shares only a row or only a column with an entry of an earlier factor,
//!   in a different color, occupying a fresh column or row.
//!
//! All values are exact rationals; no asymptotic approximation is made.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, compositions, factorial, Composition, Rat};
use crate::ensembles::MomentSpec;

/// Which aggregate contribution a [`TermValue`] is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TermLabel {
    #[serde(rename = "I")]
    MarginalProduct,
    #[serde(rename = "II")]
    DisjointSupport,
    #[serde(rename = "III")]
    SharedEntry,
    #[serde(rename = "IV")]
    SharedLine,
}

/// One exactly-summed contribution.
#[derive(Debug, Clone)]
pub struct TermValue {
    pub label: TermLabel,
    pub value: Rat,
    pub spec: MomentSpec,
    /// False when the contribution is structurally empty (fewer than two
    /// factors for the shared-entry and shared-line sums); the value is
    /// then zero.
    pub applicable: bool,
}

/// `1 / (n (n-1) ... (n-k+1))` as an exact rational; the per-color weight
/// `(n-k)!/n!`.
fn inv_falling(n: u32, k: u32) -> Rat {
    debug_assert!(k <= n);
    Rat::new(BigInt::one(), factorial(n as usize) / factorial((n - k) as usize))
}

/// `m! / prod_i c_i!`: the number of ways to color the entries of one
/// placement according to the composition.
fn color_multiplicity(m: u32, comp: &Composition) -> BigInt {
    let mut denom = BigInt::one();
    for &c in &comp.parts {
        denom *= factorial(c as usize);
    }
    factorial(m as usize) / denom
}

fn all_compositions(m: u32, r: u32) -> Vec<Composition> {
    compositions(m, r)
        .expect("r >= 1 validated by the spec")
        .collect()
}

/// All composition matrices: one composition of `ms[k]` per factor.
fn composition_matrices(ms: &[u32], r: u32) -> impl Iterator<Item = Vec<Composition>> {
    ms.iter()
        .map(|&m| all_compositions(m, r))
        .multi_cartesian_product()
}

/// Per-color totals across all rows of a composition matrix.
fn color_sums(rows: &[Composition], r: u32) -> Vec<u32> {
    let mut sums = vec![0u32; r as usize];
    for row in rows {
        for (i, &c) in row.parts.iter().enumerate() {
            sums[i] += c;
        }
    }
    sums
}

/// The product of the marginal single-factor moments: for each factor an
/// independent sum over color splits of
/// `C(n,m)^2 m! * (m!/prod_i c_i!) * prod_i (n-c_i)!/n!`.
///
/// This equals the product of the exact single-factor expectations, for
/// any `n >= 1` (binomials vanish naturally when `m > n`).
pub fn marginal_product(spec: &MomentSpec) -> TermValue {
    let n = spec.n;
    let r = spec.r;
    let mut value = Rat::one();
    for &m in &spec.m_list {
        let mut factor = Rat::zero();
        let b = binomial(n as i64, m as i64);
        if b.is_zero() {
            value = Rat::zero();
            break;
        }
        let placements = &b * &b * factorial(m as usize);
        for comp in all_compositions(m, r) {
            let mut weight = Rat::from_integer(&placements * color_multiplicity(m, &comp));
            for &c in &comp.parts {
                weight *= inv_falling(n, c);
            }
            factor += weight;
        }
        value *= factor;
    }
    TermValue {
        label: TermLabel::MarginalProduct,
        value,
        spec: spec.clone(),
        applicable: true,
    }
}

/// Kernel shared by the joint sums: the product over factors of
/// `C(n - prefix_k, m_k)^2 m_k! (m_k!/prod c_i!)` for one composition
/// matrix, with factors placed on disjoint supports so each successive
/// factor picks rows and columns from what is left. Zero when the supports
/// do not fit.
fn disjoint_kernel(n: u32, ms: &[u32], rows: &[Composition]) -> BigInt {
    let mut prefix = 0u32;
    let mut kernel = BigInt::one();
    for (k, &m) in ms.iter().enumerate() {
        let b = binomial(n as i64 - prefix as i64, m as i64);
        if b.is_zero() {
            return BigInt::zero();
        }
        kernel *= &b * &b * factorial(m as usize) * color_multiplicity(m, &rows[k]);
        prefix += m;
    }
    kernel
}

/// The all-factors-disjoint contribution: a joint sum over composition
/// matrices in which every color contributes one shared factorial weight
/// `(n - S_i)!/n!`, `S_i` the color total across factors.
///
/// With one factor this is exactly [`marginal_product`].
pub fn disjoint_support_sum(spec: &MomentSpec) -> TermValue {
    let n = spec.n;
    let r = spec.r;
    let mut value = Rat::zero();
    for rows in composition_matrices(&spec.m_list, r) {
        let kernel = disjoint_kernel(n, &spec.m_list, &rows);
        if kernel.is_zero() {
            continue;
        }
        let mut term = Rat::from_integer(kernel);
        for &s in &color_sums(&rows, r) {
            term *= inv_falling(n, s);
        }
        value += term;
    }
    TermValue {
        label: TermLabel::DisjointSupport,
        value,
        spec: spec.clone(),
        applicable: true,
    }
}

/// The single-shared-entry contribution: one entry of factor `j` coincides
/// with a same-color entry of an earlier factor `i`, so factor `j`
/// effectively places `m_j - 1` entries and the coinciding entry is chosen
/// among the color-`s` entries of factor `i` (the `c_{i,s}` multiplicity).
/// The coinciding entry consumes no extra color slot.
///
/// Zero (and flagged inapplicable) with fewer than two factors.
pub fn shared_entry_sum(spec: &MomentSpec) -> TermValue {
    let n = spec.n;
    let r = spec.r;
    let nfac = spec.m_list.len();
    if nfac < 2 {
        return TermValue {
            label: TermLabel::SharedEntry,
            value: Rat::zero(),
            spec: spec.clone(),
            applicable: false,
        };
    }
    let mut value = Rat::zero();
    for j in 1..nfac {
        if spec.m_list[j] == 0 {
            continue;
        }
        let mut ms = spec.m_list.clone();
        ms[j] -= 1;
        for rows in composition_matrices(&ms, r) {
            let kernel = disjoint_kernel(n, &ms, &rows);
            if kernel.is_zero() {
                continue;
            }
            let mut weight = Rat::from_integer(kernel);
            for &s in &color_sums(&rows, r) {
                weight *= inv_falling(n, s);
            }
            // Choice of the coinciding entry: any color-s entry of any
            // earlier factor.
            let mut choices = 0u32;
            for i in 0..j {
                for s in 0..r as usize {
                    choices += rows[i].parts[s];
                }
            }
            value += weight * Rat::from_integer(BigInt::from(choices));
        }
    }
    TermValue {
        label: TermLabel::SharedEntry,
        value,
        spec: spec.clone(),
        applicable: true,
    }
}

/// The single-shared-line contribution: one extra entry of factor `j`
/// shares a row (or, symmetrically, a column — hence the overall factor 2)
/// with a color-`a` entry of an earlier factor `i`, carries a different
/// color `b`, and occupies one fresh column (or row), chosen among
/// `n - sum(m) + 1`. The extra entry consumes one additional slot of
/// color `b`.
///
/// Zero for a single factor, and zero for `r = 1` (no second color).
pub fn shared_line_sum(spec: &MomentSpec) -> TermValue {
    let n = spec.n;
    let r = spec.r;
    let nfac = spec.m_list.len();
    if nfac < 2 {
        return TermValue {
            label: TermLabel::SharedLine,
            value: Rat::zero(),
            spec: spec.clone(),
            applicable: false,
        };
    }
    let total_m: u32 = spec.m_list.iter().sum();
    let fresh_lines = n as i64 - total_m as i64 + 1;
    let mut value = Rat::zero();
    if fresh_lines > 0 && r >= 2 {
        for j in 1..nfac {
            if spec.m_list[j] == 0 {
                continue;
            }
            let mut ms = spec.m_list.clone();
            ms[j] -= 1;
            for rows in composition_matrices(&ms, r) {
                let kernel = disjoint_kernel(n, &ms, &rows);
                if kernel.is_zero() {
                    continue;
                }
                let sums = color_sums(&rows, r);
                for b in 0..r as usize {
                    let mut weight = Rat::from_integer(&kernel * BigInt::from(fresh_lines));
                    for (c, &s) in sums.iter().enumerate() {
                        weight *= inv_falling(n, s + u32::from(c == b));
                    }
                    // The line-sharing partner: any entry of an earlier
                    // factor whose color differs from b.
                    let mut partners = 0u32;
                    for i in 0..j {
                        for a in 0..r as usize {
                            if a != b {
                                partners += rows[i].parts[a];
                            }
                        }
                    }
                    value += weight * Rat::from_integer(BigInt::from(partners));
                }
            }
        }
        // Row-sharing and column-sharing contribute equally.
        value *= Rat::from_integer(BigInt::from(2));
    }
    TermValue {
        label: TermLabel::SharedLine,
        value,
        spec: spec.clone(),
        applicable: true,
    }
}

/// First-order coefficient of the logarithm of the kernel ratio between the
/// disjoint-support and marginal-product sums, for one composition matrix:
///
/// `(1/2n) [ -4 sum_{t<k} m_t m_k + 2 sum_i sum_{t<k} c_{t,i} c_{k,i} ]`.
pub fn first_order_log_ratio(m_list: &[u32], rows: &[Vec<u32>], n: u32) -> Rat {
    let nfac = m_list.len();
    let r = rows.first().map_or(0, Vec::len);
    let mut cross: i64 = 0;
    for k in 0..nfac {
        for t in 0..k {
            cross += m_list[t] as i64 * m_list[k] as i64;
        }
    }
    let mut color_cross: i64 = 0;
    for i in 0..r {
        for k in 0..nfac {
            for t in 0..k {
                color_cross += rows[t][i] as i64 * rows[k][i] as i64;
            }
        }
    }
    Rat::new(
        BigInt::from(-4 * cross + 2 * color_cross),
        BigInt::from(2 * n as i64),
    )
}

/// Exact per-composition kernel ratio between the disjoint-support and
/// marginal-product sums (whose logarithm [`first_order_log_ratio`]
/// approximates to first order):
///
/// `(n!)^{r(N-1)} * prod_k C(n-prefix_k, m_k)^2 / C(n, m_k)^2
///  * prod_i (n-S_i)! / prod_{k,i} (n-c_{k,i})!`.
pub fn restriction_kernel_ratio(m_list: &[u32], rows: &[Vec<u32>], n: u32) -> Rat {
    let r = rows.first().map_or(0, Vec::len) as u32;
    let nfac = m_list.len() as u32;
    let nf = factorial(n as usize);
    let mut num = nf.pow(r * (nfac - 1));
    let mut den = BigInt::one();

    let mut prefix = 0u32;
    for (k, &m) in m_list.iter().enumerate() {
        let shifted = binomial(n as i64 - prefix as i64, m as i64);
        let plain = binomial(n as i64, m as i64);
        num *= &shifted * &shifted;
        den *= &plain * &plain;
        prefix += m;
        let _ = k;
    }
    let mut sums = vec![0u32; r as usize];
    for row in rows {
        for (i, &c) in row.iter().enumerate() {
            sums[i] += c;
            den *= factorial((n - c) as usize);
        }
    }
    for &s in &sums {
        num *= factorial((n - s) as usize);
    }
    Rat::new(num, den)
}

/// The color-symmetry residual: the marginal composition sum for a single
/// factor of order `m`, reweighted by `(c_j - m/r)` for one distinguished
/// color `j` (0-based). Symmetry of the colors makes this exactly zero.
pub fn color_symmetry_residual(n: u32, r: u32, m: u32, color: usize) -> Rat {
    assert!(color < r as usize, "color index out of range");
    let b = binomial(n as i64, m as i64);
    let placements = &b * &b * factorial(m as usize);
    let mean = Rat::new(BigInt::from(m), BigInt::from(r));
    let mut total = Rat::zero();
    if placements.is_zero() {
        return total;
    }
    for comp in all_compositions(m, r) {
        let mut weight = Rat::from_integer(&placements * color_multiplicity(m, &comp));
        for &c in &comp.parts {
            weight *= inv_falling(n, c);
        }
        total += weight * (Rat::from_integer(BigInt::from(comp.parts[color])) - &mean);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_int;
    use crate::ensembles::{e1_exact, OracleOptions};

    fn spec(n: u32, r: u32, m: &[u32]) -> MomentSpec {
        MomentSpec::new(n, r, m.to_vec()).unwrap()
    }

    #[test]
    fn marginal_product_single_permutation() {
        assert_eq!(marginal_product(&spec(4, 1, &[2])).value, rat_int(6));
    }

    #[test]
    fn marginal_product_of_empty_order_is_one() {
        assert_eq!(marginal_product(&spec(5, 2, &[0])).value, Rat::one());
    }

    #[test]
    fn marginal_product_equals_product_of_oracle_singles() {
        let opts = OracleOptions::default();
        for (n, r, ms) in [(8u32, 2u32, vec![5u32, 3]), (7, 3, vec![2, 2]), (6, 2, vec![3])] {
            let term = marginal_product(&spec(n, r, &ms)).value;
            let mut oracle = Rat::one();
            for &m in &ms {
                oracle *= e1_exact(&spec(n, r, &[m]), &opts).unwrap();
            }
            assert_eq!(term, oracle, "n={n} r={r} ms={ms:?}");
        }
    }

    #[test]
    fn disjoint_support_equals_marginal_for_single_factor() {
        for (n, r, m) in [(7u32, 2u32, 3u32), (9, 3, 4)] {
            assert_eq!(
                disjoint_support_sum(&spec(n, r, &[m])).value,
                marginal_product(&spec(n, r, &[m])).value
            );
        }
    }

    #[test]
    fn disjoint_support_drops_empty_factor() {
        assert_eq!(
            disjoint_support_sum(&spec(9, 2, &[3, 0])).value,
            marginal_product(&spec(9, 2, &[3])).value
        );
    }

    // Exact values for two order-1 factors at r = 2, worked out by hand
    // from the composition sums: I = 4n^2, II = 2(n-1)(2n-1), III = 2n,
    // IV = 4(n-1), so II + III + IV - I = -2.
    #[test]
    fn order_one_pair_closed_forms() {
        for n in 4u32..12 {
            let s = spec(n, 2, &[1, 1]);
            let n_i = n as i64;
            assert_eq!(marginal_product(&s).value, rat_int(4 * n_i * n_i));
            assert_eq!(
                disjoint_support_sum(&s).value,
                rat_int(2 * (n_i - 1) * (2 * n_i - 1))
            );
            assert_eq!(shared_entry_sum(&s).value, rat_int(2 * n_i));
            assert_eq!(shared_line_sum(&s).value, rat_int(4 * (n_i - 1)));
        }
    }

    #[test]
    fn shared_sums_vanish_for_single_factor() {
        let iii = shared_entry_sum(&spec(8, 2, &[3]));
        let iv = shared_line_sum(&spec(8, 2, &[3]));
        assert!(!iii.applicable && iii.value.is_zero());
        assert!(!iv.applicable && iv.value.is_zero());
    }

    #[test]
    fn shared_entry_vanishes_with_empty_later_factor() {
        assert!(shared_entry_sum(&spec(8, 2, &[3, 0])).value.is_zero());
    }

    #[test]
    fn shared_line_vanishes_for_one_color() {
        assert!(shared_line_sum(&spec(9, 1, &[2, 2])).value.is_zero());
    }

    // The coinciding-entry multiplicity sums over colors to m_i, so the
    // shared-entry sum telescopes into earlier-order disjoint sums.
    #[test]
    fn shared_entry_telescopes_to_decremented_disjoint_sums() {
        for (n, r, ms) in [
            (9u32, 2u32, vec![2u32, 2]),
            (10, 3, vec![3, 2]),
            (12, 2, vec![2, 2, 1]),
        ] {
            let direct = shared_entry_sum(&spec(n, r, &ms)).value;
            let mut expected = Rat::zero();
            for j in 1..ms.len() {
                if ms[j] == 0 {
                    continue;
                }
                let mut dec = ms.clone();
                dec[j] -= 1;
                let earlier: u32 = ms[..j].iter().sum();
                expected += disjoint_support_sum(&spec(n, r, &dec)).value
                    * Rat::from_integer(BigInt::from(earlier));
            }
            assert_eq!(direct, expected, "n={n} r={r} ms={ms:?}");
        }
    }

    #[test]
    fn first_order_log_ratio_examples() {
        // Two order-1 factors, both colored on color 0: -1/n.
        let v = first_order_log_ratio(&[1, 1], &[vec![1, 0], vec![1, 0]], 10);
        assert_eq!(v, Rat::new((-1).into(), 10.into()));
        // Opposite colors: -2/n.
        let v = first_order_log_ratio(&[1, 1], &[vec![1, 0], vec![0, 1]], 10);
        assert_eq!(v, Rat::new((-2).into(), 10.into()));
        // Single factor: no cross terms.
        let v = first_order_log_ratio(&[3], &[vec![2, 1]], 10);
        assert!(v.is_zero());
    }

    // exp(first-order log ratio) approximates the exact kernel ratio to
    // O(1/n^2): the log difference shrinks about 4x per n-doubling.
    #[test]
    fn log_ratio_matches_kernel_ratio_to_second_order() {
        use num_traits::ToPrimitive;
        let rows = vec![vec![2u32, 1], vec![1, 1]];
        let m_list = [3u32, 2];
        let diff = |n: u32| -> f64 {
            let exact = restriction_kernel_ratio(&m_list, &rows, n);
            let alpha = first_order_log_ratio(&m_list, &rows, n);
            (exact.to_f64().unwrap().ln() - alpha.to_f64().unwrap()).abs()
        };
        let (d1, d2, d3) = (diff(32), diff(64), diff(128));
        assert!(d1 / d2 > 3.0 && d1 / d2 < 5.0, "ratio {}", d1 / d2);
        assert!(d2 / d3 > 3.0 && d2 / d3 < 5.0, "ratio {}", d2 / d3);
    }

    #[test]
    fn color_symmetry_residual_is_zero() {
        for n in 1..=10u32 {
            for r in 1..=4u32 {
                for m in 0..=6u32.min(n) {
                    for color in 0..r as usize {
                        assert!(
                            color_symmetry_residual(n, r, m, color).is_zero(),
                            "n={n} r={r} m={m} color={color}"
                        );
                    }
                }
            }
        }
    }
}
