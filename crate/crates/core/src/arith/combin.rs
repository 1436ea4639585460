//! Factorials, binomials, and composition enumeration.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Error;

static FACTORIALS: OnceLock<RwLock<Vec<BigInt>>> = OnceLock::new();

/// `k!` as an arbitrary-precision integer, memoized up to the largest `k`
/// requested so far. The memo table is safe for concurrent readers.
pub fn factorial(k: usize) -> BigInt {
    let table = FACTORIALS.get_or_init(|| RwLock::new(vec![BigInt::one()]));
    {
        let t = table.read().unwrap();
        if k < t.len() {
            return t[k].clone();
        }
    }
    let mut t = table.write().unwrap();
    while t.len() <= k {
        let next = t.last().unwrap() * BigInt::from(t.len());
        t.push(next);
    }
    t[k].clone()
}

/// `C(n, k)`, zero whenever `k < 0`, `k > n`, or `n < 0`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let (n, k) = (n as usize, k as usize);
    let k = k.min(n - k);
    // Multiplicative form keeps intermediate sizes small; every partial
    // product C(n-k+i, i) is an integer.
    let mut acc = BigInt::one();
    for i in 1..=k {
        acc = acc * BigInt::from(n - k + i) / BigInt::from(i);
    }
    acc
}

/// An ordered split of `total` into `parts` non-negative summands. Used as
/// the per-color split of the entries of one sub-permanent term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composition {
    pub parts: Vec<u32>,
    pub total: u32,
}

impl Composition {
    pub fn part(&self, i: usize) -> u32 {
        self.parts[i]
    }
}

/// Iterator over all compositions of `total` into `parts` parts, each
/// yielded exactly once in colexicographic order, e.g. for (3, 2):
/// (3,0), (2,1), (1,2), (0,3).
///
/// The order is part of the contract so parallel partial sums over
/// composition ranges are reproducible.
pub struct Compositions {
    state: Option<Vec<u32>>,
}

/// Enumerate compositions of `total` into `parts` parts. Rejects
/// `parts == 0` (unless callers want the empty product they should not be
/// summing over color splits at all).
pub fn compositions(total: u32, parts: u32) -> Result<Compositions, Error> {
    if parts == 0 {
        return Err(Error::EmptyParts);
    }
    let mut first = vec![0u32; parts as usize];
    first[0] = total;
    Ok(Compositions { state: Some(first) })
}

/// `C(total + parts - 1, parts - 1)`: how many compositions there are.
pub fn composition_count(total: u32, parts: u32) -> BigInt {
    binomial((total + parts - 1) as i64, (parts - 1) as i64)
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let cur = self.state.take()?;
        let total: u32 = cur.iter().sum();
        let out = Composition {
            parts: cur.clone(),
            total,
        };
        // Colex successor: move the first nonzero part one slot right,
        // dumping its remainder minus one back into slot zero.
        let mut next = cur;
        if let Some(i) = next.iter().position(|&p| p > 0) {
            if i + 1 < next.len() {
                let v = next[i];
                next[i] = 0;
                next[0] = v - 1;
                next[i + 1] += 1;
                self.state = Some(next);
            }
        }
        Some(out)
    }
}
