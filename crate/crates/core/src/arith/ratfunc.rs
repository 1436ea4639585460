//! Rational functions (ratios of polynomials) with monic denominator.

use std::fmt;

use super::poly::{Polynomial, Scalar};

/// A ratio of polynomials. Normalized so the denominator is monic; the
/// denominator is never the zero polynomial. No symbolic gcd reduction is
/// attempted — freedom from common roots is checked at the integer sample
/// nodes by the reconstruction code, not guaranteed symbolically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction<T> {
    num: Polynomial<T>,
    den: Polynomial<T>,
}

impl<T: Scalar> RationalFunction<T> {
    /// Build `num/den`, normalizing the denominator to be monic.
    /// Panics if `den` is the zero polynomial.
    pub fn new(num: Polynomial<T>, den: Polynomial<T>) -> Self {
        let lead = den
            .leading_coeff()
            .cloned()
            .expect("rational function denominator must be nonzero");
        let inv = T::one() / lead;
        RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn from_polynomial(num: Polynomial<T>) -> Self {
        Self::new(num, Polynomial::constant(T::one()))
    }

    pub fn numerator(&self) -> &Polynomial<T> {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial<T> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Degree of the numerator and denominator.
    pub fn degrees(&self) -> (Option<usize>, Option<usize>) {
        (self.num.degree(), self.den.degree())
    }

    /// Degree as `n -> infinity`: deg(num) - deg(den). `None` for the zero
    /// function.
    pub fn asymptotic_degree(&self) -> Option<i64> {
        let dn = self.num.degree()? as i64;
        let dd = self.den.degree().unwrap_or(0) as i64;
        Some(dn - dd)
    }

    /// Leading coefficient of the asymptotic expansion (numerator leading
    /// coefficient, since the denominator is monic).
    pub fn asymptotic_leading_coeff(&self) -> Option<&T> {
        self.num.leading_coeff()
    }

    /// Exact evaluation; `None` at poles.
    pub fn eval(&self, x: &T) -> Option<T> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for RationalFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] / [{}]", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat_int, PolyQ, RatFuncQ};

    #[test]
    fn monic_normalization_and_eval() {
        // (2n + 2) / (2n) normalizes to (n + 1) / n.
        let num = PolyQ::from_coeffs(vec![rat_int(2), rat_int(2)]);
        let den = PolyQ::from_coeffs(vec![rat_int(0), rat_int(2)]);
        let f = RatFuncQ::new(num, den);
        assert_eq!(f.denominator().leading_coeff().unwrap(), &rat_int(1));
        assert_eq!(f.eval(&rat_int(3)).unwrap(), crate::arith::Rat::new(4.into(), 3.into()));
        assert_eq!(f.eval(&rat_int(0)), None);
        assert_eq!(f.asymptotic_degree(), Some(0));
    }
}
