//! Exact arithmetic kernel: rationals, factorials, binomials, composition
//! enumeration, polynomial algebra, and exact interpolation/reconstruction
//! in the single integer variable `n`.
//!
//! Nothing in this module rounds. All arithmetic is over arbitrary-precision
//! integers and rationals, and the interpolation routines verify surplus
//! sample points with exact equality.

mod combin;
mod interp;
mod poly;
mod ratfunc;

pub use combin::{binomial, composition_count, compositions, factorial, Composition, Compositions};
pub use interp::{interpolate_polynomial, reconstruct_rational};
pub use poly::{Polynomial, Scalar};
pub use ratfunc::RationalFunction;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::Error;

/// The universal exact scalar: an arbitrary-precision rational. Always
/// reduced, denominator positive (maintained by `num-rational`).
pub type Rat = BigRational;

/// Dense polynomial in `n` with exact rational coefficients.
pub type PolyQ = Polynomial<Rat>;

/// Ratio of two [`PolyQ`] with monic denominator.
pub type RatFuncQ = RationalFunction<Rat>;

/// Build a rational from an integer.
pub fn rat_int<T: Into<BigInt>>(v: T) -> Rat {
    Rat::from_integer(v.into())
}

/// Format a rational as `"p/q"`, or just `"p"` when the denominator is one.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde adapter: emit a rational as its `"p/q"` string.
pub fn serialize_rat<S: serde::Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rat_to_string(r))
}

/// Serde adapter for the `"p/q"` string form.
pub fn deserialize_rat<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
    let s = <String as serde::Deserialize>::deserialize(d)?;
    rat_parse(&s).map_err(serde::de::Error::custom)
}

/// Serde adapter: a coefficient list as `"p/q"` strings, index = power.
pub fn serialize_rat_vec<S: serde::Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&rat_to_string(r))?;
    }
    seq.end()
}

/// Parse the `"p/q"` (or `"p"`) form produced by [`rat_to_string`].
pub fn rat_parse(s: &str) -> Result<Rat, Error> {
    let bad = |_| Error::InvalidInput(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(bad)?;
            let q: BigInt = q.trim().parse().map_err(bad)?;
            if q == BigInt::from(0) {
                return Err(Error::InvalidInput(format!("zero denominator: {s:?}")));
            }
            Ok(Rat::new(p, q))
        }
        None => {
            let p: BigInt = s.trim().parse().map_err(bad)?;
            Ok(Rat::from_integer(p))
        }
    }
}
