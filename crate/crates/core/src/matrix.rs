//! Exact determinants by fraction-free (Bareiss) elimination.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Determinant of a square matrix given as rows. Every intermediate
/// quotient is exact, so any exact integral domain works.
pub fn determinant<S: Scalar>(rows: &[Vec<S>]) -> Result<S> {
    let n = rows.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::LengthMismatch { left: n, right: bad.len() });
    }
    if n == 0 {
        return Ok(S::one());
    }
    let mut a: Vec<Vec<S>> = rows.to_vec();
    let mut sign = S::one();
    let mut prev = S::one();
    for p in 0..n {
        let Some(pivot) = (p..n).find(|&r| !a[r][p].is_zero()) else {
            return Ok(S::zero());
        };
        if pivot != p {
            a.swap(pivot, p);
            sign = -sign;
        }
        for i in p + 1..n {
            for j in p + 1..n {
                let v = (a[i][j].clone() * a[p][p].clone() - a[i][p].clone() * a[p][j].clone()) / prev.clone();
                a[i][j] = v;
            }
            a[i][p] = S::zero();
        }
        prev = a[p][p].clone();
    }
    Ok(sign * a[n - 1][n - 1].clone())
}
