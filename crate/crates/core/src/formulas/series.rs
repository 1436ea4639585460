//! Coefficients of the descending-power expansion of the single-factor
//! moment under the uniform r-regular measure,
//! `a n^m + b n^{m-1} + c n^{m-2} + ...`.
//!
//! The sum-of-permutations measure matches `a` and `b` but not `c`; the
//! verification suite measures its third coefficient from exact data and
//! reports the difference.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::arith::{factorial, Rat};

/// Leading three expansion coefficients for given `(r, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesCoeffs {
    #[serde(serialize_with = "crate::arith::serialize_rat")]
    pub a: Rat,
    #[serde(serialize_with = "crate::arith::serialize_rat")]
    pub b: Rat,
    #[serde(serialize_with = "crate::arith::serialize_rat")]
    pub c: Rat,
}

/// `a = r^m/m!`, `b = a m(m-1) (-1 + 1/2r)`,
/// `c = a m(m-1)(m-2) ((3m+1)/6 - (m+1)/2r + (3m+7)/24r^2)`.
pub fn moment_series_coeffs(r: u32, m: u32) -> SeriesCoeffs {
    assert!(r >= 1, "r must be at least 1");
    let m_i = m as i64;
    let r_i = r as i64;
    let a = Rat::new(BigInt::from(r_i).pow(m), factorial(m as usize));
    let b = &a
        * Rat::from_integer(BigInt::from(m_i * (m_i - 1)))
        * (Rat::from_integer(BigInt::from(-1)) + Rat::new(1.into(), (2 * r_i).into()));
    let c = &a
        * Rat::from_integer(BigInt::from(m_i * (m_i - 1) * (m_i - 2)))
        * (Rat::new((3 * m_i + 1).into(), 6.into())
            - Rat::new((m_i + 1).into(), (2 * r_i).into())
            + Rat::new((3 * m_i + 7).into(), (24 * r_i * r_i).into()));
    SeriesCoeffs { a, b, c }
}

impl SeriesCoeffs {
    /// True when `a` is nonzero, which holds for every `m >= 0`.
    pub fn leading_nonzero(&self) -> bool {
        !num_traits::Zero::is_zero(&self.a)
    }
}

#[allow(dead_code)]
fn one() -> Rat {
    Rat::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn coefficients_r2_m3() {
        let s = moment_series_coeffs(2, 3);
        assert_eq!(s.a, q(4, 3));
        assert_eq!(s.b, q(-6, 1));
        assert_eq!(s.c, q(20, 3));
    }

    #[test]
    fn order_one_has_no_corrections() {
        for r in 1..=5 {
            let s = moment_series_coeffs(r, 1);
            assert!(s.b.is_zero() && s.c.is_zero());
            assert!(s.leading_nonzero());
        }
    }

    #[test]
    fn cross_term_of_orders_five_and_three() {
        // a5 b3 + a3 b5 = -104/15, the subleading coefficient of the exact
        // order-(5,3) product moment at r = 2.
        let s5 = moment_series_coeffs(2, 5);
        let s3 = moment_series_coeffs(2, 3);
        assert_eq!(&s5.a * &s3.b + &s3.a * &s5.b, q(-104, 15));
        assert_eq!(&s5.a * &s3.a, q(16, 45));
    }
}
