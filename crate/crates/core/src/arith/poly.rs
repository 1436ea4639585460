//! Dense univariate polynomials, generic over the scalar field.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

/// Field-like scalar the polynomial algebra is generic over. Satisfied by
/// exact rationals (the concrete type used throughout this crate) and by
/// floats, which the slope-fitting code uses.
pub trait Scalar:
    Clone
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + Neg<Output = T>
{
}

/// Dense polynomial; `coeffs[i]` is the coefficient of the i-th power.
/// Invariant: the trailing coefficient is nonzero unless the polynomial is
/// the zero polynomial (empty coefficient list).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    /// Build from low-to-high coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn constant(c: T) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Polynomial { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of the i-th power (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Option<&T> {
        self.coeffs.last()
    }

    /// Exact evaluation by Horner's rule.
    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Self::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect();
        Self::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*n")?,
                _ => write!(f, "({c})*n^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat_int, PolyQ, Rat};

    fn poly(coeffs: &[i64]) -> PolyQ {
        PolyQ::from_coeffs(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = poly(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.coeff(5), Rat::from_integer(0.into()));
    }

    #[test]
    fn eval_and_arithmetic() {
        let p = poly(&[1, 0, 2]); // 1 + 2n^2
        let q = poly(&[0, 3]); // 3n
        assert_eq!(p.eval(&rat_int(5)), rat_int(51));
        assert_eq!(p.add(&q).eval(&rat_int(2)), rat_int(15));
        assert_eq!(p.mul(&q), poly(&[0, 3, 0, 6]));
        assert_eq!(p.sub(&p), PolyQ::zero());
        assert_eq!(PolyQ::zero().degree(), None);
    }
}
