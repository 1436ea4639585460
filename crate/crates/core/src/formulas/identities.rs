//! Multinomial color identities and the log-factorial expansion lemma.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{compositions, factorial, Rat};
use crate::error::Error;
use crate::Result;

/// The four weighted composition sums with closed forms: the weight applied
/// to `1/prod_i c_i!` before summing over compositions of `m` into `r`
/// parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MultinomialIdentity {
    /// weight 1, sum = `r^m/m!`
    #[serde(rename = "a1")]
    Plain,
    /// weight `c_1`, sum = `(m/r) r^m/m!`
    #[serde(rename = "a2")]
    FirstPart,
    /// weight `c_1^2`, sum = `m(m-1) r^{m-2}/m! + m r^{m-1}/m!`
    #[serde(rename = "a3")]
    FirstPartSquared,
    /// weight `c_1 c_2`, sum = `m(m-1) r^{m-2}/m!` (needs `r >= 2`)
    #[serde(rename = "a4")]
    FirstTwoParts,
}

/// Evaluate one identity both ways: the left side by explicit summation
/// over compositions, the right side by the closed form. The contract is
/// exact equality.
pub fn multinomial_identity_check(
    identity: MultinomialIdentity,
    m: u32,
    r: u32,
) -> (Rat, Rat) {
    assert!(r >= 1, "r must be at least 1");
    if identity == MultinomialIdentity::FirstTwoParts {
        assert!(r >= 2, "the two-part identity needs r >= 2");
    }
    let mut lhs = Rat::zero();
    for comp in compositions(m, r).expect("r >= 1") {
        let mut denom = BigInt::one();
        for &c in &comp.parts {
            denom *= factorial(c as usize);
        }
        let weight: BigInt = match identity {
            MultinomialIdentity::Plain => BigInt::one(),
            MultinomialIdentity::FirstPart => BigInt::from(comp.parts[0]),
            MultinomialIdentity::FirstPartSquared => {
                BigInt::from(comp.parts[0]) * BigInt::from(comp.parts[0])
            }
            MultinomialIdentity::FirstTwoParts => {
                BigInt::from(comp.parts[0]) * BigInt::from(comp.parts[1])
            }
        };
        lhs += Rat::new(weight, denom);
    }

    let m_i = m as i64;
    let r_big = BigInt::from(r);
    let mf = factorial(m as usize);
    let pow = |e: i64| -> Rat {
        // r^e for e >= 0; the callers only use negative exponents with a
        // vanishing integer prefactor, which is handled before calling.
        Rat::from_integer(r_big.pow(e as u32))
    };
    let rhs = match identity {
        MultinomialIdentity::Plain => Rat::new(r_big.pow(m), mf),
        MultinomialIdentity::FirstPart => {
            Rat::new(BigInt::from(m_i), (&r_big).clone()) * Rat::new(r_big.pow(m), mf)
        }
        MultinomialIdentity::FirstPartSquared => {
            let mut rhs = Rat::zero();
            if m >= 2 {
                rhs += Rat::new(BigInt::from(m_i * (m_i - 1)), mf.clone()) * pow(m_i - 2);
            }
            if m >= 1 {
                rhs += Rat::new(BigInt::from(m_i), mf) * pow(m_i - 1);
            }
            rhs
        }
        MultinomialIdentity::FirstTwoParts => {
            if m >= 2 {
                Rat::new(BigInt::from(m_i * (m_i - 1)), mf) * pow(m_i - 2)
            } else {
                Rat::zero()
            }
        }
    };
    (lhs, rhs)
}

/// Input to the log-factorial expansion lemma: coefficients `a_i` and
/// shifts `q_i` with `sum a_i = 0` and `sum a_i q_i = 0`, both enforced at
/// construction.
#[derive(Debug, Clone)]
pub struct LemmaInput {
    a_list: Vec<Rat>,
    q_list: Vec<u32>,
    n: u32,
}

impl LemmaInput {
    pub fn new(a_list: Vec<Rat>, q_list: Vec<u32>, n: u32) -> Result<Self> {
        if a_list.len() != q_list.len() {
            return Err(Error::HypothesisViolated(
                "coefficient and shift lists differ in length".into(),
            ));
        }
        let sum_a: Rat = a_list.iter().cloned().sum();
        if !sum_a.is_zero() {
            return Err(Error::HypothesisViolated("sum a_i != 0".into()));
        }
        let sum_aq: Rat = a_list
            .iter()
            .zip(&q_list)
            .map(|(a, &q)| a * Rat::from_integer(BigInt::from(q)))
            .sum();
        if !sum_aq.is_zero() {
            return Err(Error::HypothesisViolated("sum a_i q_i != 0".into()));
        }
        if q_list.iter().any(|&q| q >= n) {
            return Err(Error::HypothesisViolated("need n > max q_i".into()));
        }
        Ok(LemmaInput { a_list, q_list, n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Same coefficients and shifts at a different dimension.
    pub fn at(&self, n: u32) -> Result<Self> {
        Self::new(self.a_list.clone(), self.q_list.clone(), n)
    }
}

/// Measured and predicted values of the combination
/// `sum a_i ln((n - q_i)!)`.
#[derive(Debug, Clone, Serialize)]
pub struct StirlingResidual {
    /// `sum a_i ln((n - q_i)!)`, evaluated in floating point with error far
    /// below `1/n^5` (each log-factorial comes from an exactly computed
    /// integer, so carries only conversion rounding).
    pub actual: f64,
    /// `sum a_i (q_i^2/2n + q_i^3/6n^2 - q_i^2/4n^2)`, exact.
    #[serde(serialize_with = "crate::arith::serialize_rat")]
    pub predicted: Rat,
}

impl StirlingResidual {
    /// `|actual - predicted|`; the lemma's contract is that this is
    /// `O(1/n^3)`.
    pub fn gap(&self) -> f64 {
        (self.actual - self.predicted.to_f64().unwrap()).abs()
    }
}

fn ln_factorial(k: usize) -> f64 {
    if k <= 170 {
        // 170! is the largest factorial representable in f64; converting
        // the exact integer keeps the relative error at one rounding.
        factorial(k).to_f64().unwrap().ln()
    } else {
        // Compensated summation of ln j.
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for j in 2..=k {
            let y = (j as f64).ln() - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        sum
    }
}

/// Evaluate the lemma combination both ways. The hypotheses cancel the
/// `n ln n`, `n`, `ln n`, and constant parts of the factorial expansion, so
/// the exact second-order prediction is accurate to `O(1/n^3)`.
pub fn stirling_residual(input: &LemmaInput) -> StirlingResidual {
    let n = input.n;
    let actual: f64 = input
        .a_list
        .iter()
        .zip(&input.q_list)
        .map(|(a, &q)| a.to_f64().unwrap() * ln_factorial((n - q) as usize))
        .sum();

    let n_big = BigInt::from(n);
    let n2 = &n_big * &n_big;
    let mut predicted = Rat::zero();
    for (a, &q) in input.a_list.iter().zip(&input.q_list) {
        let q2 = BigInt::from(q) * BigInt::from(q);
        let q3 = &q2 * BigInt::from(q);
        let term = Rat::new(q2.clone(), BigInt::from(2u32) * &n_big)
            + Rat::new(q3, BigInt::from(6u32) * &n2)
            - Rat::new(q2, BigInt::from(4u32) * &n2);
        predicted += a * term;
    }
    StirlingResidual { actual, predicted }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_int;

    fn q(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn plain_identity_m3_r2() {
        let (lhs, rhs) = multinomial_identity_check(MultinomialIdentity::Plain, 3, 2);
        assert_eq!(lhs, q(4, 3));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn first_part_identity_m4_r3() {
        let (lhs, rhs) = multinomial_identity_check(MultinomialIdentity::FirstPart, 4, 3);
        assert_eq!(lhs, q(4, 3) * q(81, 24));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn degenerate_orders_consistent() {
        for m in 0..=1 {
            for r in 1..=4 {
                let (lhs, rhs) =
                    multinomial_identity_check(MultinomialIdentity::FirstPartSquared, m, r);
                assert_eq!(lhs, rhs, "m={m} r={r}");
            }
        }
    }

    #[test]
    fn all_identities_exact_over_range() {
        use MultinomialIdentity::*;
        for m in 0..=10u32 {
            for r in 1..=6u32 {
                for id in [Plain, FirstPart, FirstPartSquared, FirstTwoParts] {
                    if id == FirstTwoParts && r < 2 {
                        continue;
                    }
                    let (lhs, rhs) = multinomial_identity_check(id, m, r);
                    assert_eq!(lhs, rhs, "{id:?} m={m} r={r}");
                }
            }
        }
    }

    #[test]
    fn lemma_telescoping_example() {
        // a = (1,-2,1), q = (0,1,2): the combination telescopes to
        // ln(n/(n-1)); the prediction at n=10 is 1/10 + 1/200.
        let input = LemmaInput::new(
            vec![rat_int(1), rat_int(-2), rat_int(1)],
            vec![0, 1, 2],
            10,
        )
        .unwrap();
        let res = stirling_residual(&input);
        assert_eq!(res.predicted, q(1, 10) + q(1, 200));
        assert!((res.actual - (10f64 / 9.0).ln()).abs() < 1e-12);
        assert!(res.gap() < 1e-3);
    }

    #[test]
    fn identical_terms_cancel_exactly() {
        let input =
            LemmaInput::new(vec![rat_int(1), rat_int(-1)], vec![3, 3], 10).unwrap();
        let res = stirling_residual(&input);
        assert_eq!(res.actual, 0.0);
        assert!(res.predicted.is_zero());
    }

    #[test]
    fn gap_shrinks_eightfold_per_doubling() {
        let base = LemmaInput::new(
            vec![rat_int(1), rat_int(-2), rat_int(1)],
            vec![0, 1, 2],
            10,
        )
        .unwrap();
        let gaps: Vec<f64> = [10u32, 20, 40, 80]
            .iter()
            .map(|&n| stirling_residual(&base.at(n).unwrap()).gap())
            .collect();
        for w in gaps.windows(2) {
            let ratio = w[0] / w[1];
            assert!((6.0..10.5).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn hypotheses_enforced() {
        assert!(matches!(
            LemmaInput::new(vec![rat_int(1)], vec![0], 10),
            Err(Error::HypothesisViolated(_))
        ));
        assert!(matches!(
            LemmaInput::new(vec![rat_int(1), rat_int(-1)], vec![0, 1], 10),
            Err(Error::HypothesisViolated(_))
        ));
    }
}
