//! Exact polynomial interpolation and rational-function reconstruction over
//! integer nodes.

use num_traits::FromPrimitive;

use super::poly::{Polynomial, Scalar};
use super::ratfunc::RationalFunction;
use crate::error::Error;

fn scalar_from_node<T: Scalar + FromPrimitive>(x: i64) -> T {
    T::from_i64(x).expect("node representable in the scalar type")
}

/// Interpolate the unique polynomial of degree <= `degree` through the first
/// `degree + 1` points (Newton divided differences, exact arithmetic), then
/// require that every remaining point is reproduced exactly.
///
/// The surplus check is the consistency test that the data really is
/// polynomial of the claimed degree; a disagreeing extra point returns
/// [`Error::SurplusMismatch`].
pub fn interpolate_polynomial<T>(points: &[(i64, T)], degree: usize) -> Result<Polynomial<T>, Error>
where
    T: Scalar + FromPrimitive + std::fmt::Display,
{
    let need = degree + 1;
    if points.len() < need {
        return Err(Error::NotEnoughPoints {
            need,
            got: points.len(),
        });
    }
    for (i, (xi, _)) in points.iter().enumerate() {
        if points[..i].iter().any(|(xj, _)| xj == xi) {
            return Err(Error::InvalidInput(format!("duplicate node n={xi}")));
        }
    }

    let xs: Vec<T> = points[..need]
        .iter()
        .map(|(x, _)| scalar_from_node(*x))
        .collect();

    // Divided-difference coefficients.
    let mut dd: Vec<T> = points[..need].iter().map(|(_, v)| v.clone()).collect();
    for level in 1..need {
        for i in (level..need).rev() {
            let dx = xs[i].clone() - xs[i - level].clone();
            dd[i] = (dd[i].clone() - dd[i - 1].clone()) / dx;
        }
    }

    // Expand the Newton form into monomial coefficients.
    let mut poly = Polynomial::zero();
    let mut basis = Polynomial::constant(T::one());
    for (i, c) in dd.iter().enumerate() {
        poly = poly.add(&basis.scale(c));
        if i + 1 < need {
            let lin = Polynomial::from_coeffs(vec![T::zero() - xs[i].clone(), T::one()]);
            basis = basis.mul(&lin);
        }
    }

    // Exact reproduction of every input point, fitted and surplus alike.
    for (x, v) in points {
        let got = poly.eval(&scalar_from_node(*x));
        if &got != v {
            return Err(Error::SurplusMismatch {
                node: *x,
                expected: v.to_string(),
                actual: got.to_string(),
            });
        }
    }
    Ok(poly)
}

/// One nonzero vector of the null space of `mat` (rows are equations), or
/// `None` when the null space is trivial. Exact Gaussian elimination; the
/// free variable of smallest column index is set to one.
fn null_space_vector<T: Scalar>(mut mat: Vec<Vec<T>>, cols: usize) -> Option<Vec<T>> {
    let rows = mat.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(r) = (pivot_row..rows).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(pivot_row, r);
        let inv = T::one() / mat[pivot_row][col].clone();
        for c in col..cols {
            mat[pivot_row][c] = mat[pivot_row][c].clone() * inv.clone();
        }
        for r in 0..rows {
            if r != pivot_row && !mat[r][col].is_zero() {
                let f = mat[r][col].clone();
                for c in col..cols {
                    mat[r][c] = mat[r][c].clone() - f.clone() * mat[pivot_row][c].clone();
                }
            }
        }
        pivot_of_col[col] = Some(pivot_row);
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }

    let free = (0..cols).find(|&c| pivot_of_col[c].is_none())?;
    let mut v = vec![T::zero(); cols];
    v[free] = T::one();
    for c in 0..cols {
        if let Some(r) = pivot_of_col[c] {
            v[c] = T::zero() - mat[r][free].clone();
        }
    }
    Some(v)
}

/// Reconstruct the lowest-degree rational function consistent with all
/// sample points, searching `(num_deg, den_deg)` pairs in increasing total
/// degree and breaking ties toward the smaller denominator degree.
///
/// Each candidate is fitted on `num_deg + den_deg + 2` points by solving the
/// homogeneous linear system `num(x) - f(x) * den(x) = 0` exactly, then
/// validated on *all* points (at least two surplus points are required, and
/// the denominator must be nonzero at every node, which also rules out a
/// common numerator/denominator root among the nodes). Returns
/// [`Error::NoConsistentModel`] when no degree pair within the bounds fits.
pub fn reconstruct_rational<T>(
    points: &[(i64, T)],
    max_num_deg: usize,
    max_den_deg: usize,
) -> Result<RationalFunction<T>, Error>
where
    T: Scalar + FromPrimitive,
{
    if points.len() < 4 {
        return Err(Error::NotEnoughPoints {
            need: 4,
            got: points.len(),
        });
    }
    let xs: Vec<T> = points.iter().map(|(x, _)| scalar_from_node(*x)).collect();

    for total in 0..=(max_num_deg + max_den_deg) {
        for den_deg in 0..=total.min(max_den_deg) {
            let num_deg = total - den_deg;
            if num_deg > max_num_deg {
                continue;
            }
            let unknowns = num_deg + den_deg + 2;
            if unknowns + 2 > points.len() {
                continue;
            }
            // Rows: num(x) - f(x) den(x) = 0 at the first `unknowns` nodes.
            let mat: Vec<Vec<T>> = points[..unknowns]
                .iter()
                .zip(&xs)
                .map(|((_, f), x)| {
                    let mut row = Vec::with_capacity(unknowns);
                    let mut p = T::one();
                    for _ in 0..=num_deg {
                        row.push(p.clone());
                        p = p * x.clone();
                    }
                    let mut p = T::zero() - f.clone();
                    for _ in 0..=den_deg {
                        row.push(p.clone());
                        p = p * x.clone();
                    }
                    row
                })
                .collect();

            let Some(v) = null_space_vector(mat, unknowns) else {
                continue;
            };
            let num = Polynomial::from_coeffs(v[..=num_deg].to_vec());
            let den = Polynomial::from_coeffs(v[num_deg + 1..].to_vec());
            if den.is_zero() {
                continue;
            }
            let cand = RationalFunction::new(num, den);
            let ok = points.iter().zip(&xs).all(|((_, f), x)| match cand.eval(x) {
                Some(v) => &v == f,
                None => false,
            });
            if ok {
                return Ok(cand);
            }
        }
    }
    Err(Error::NoConsistentModel)
}
