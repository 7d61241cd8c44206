//! Sylvester resultants with polynomial entries, by fraction-free elimination.

use num_rational::BigRational;
use num_traits::One;

use super::poly::UniPoly;

/// Sylvester matrix of `p` and `q`, each given by ascending coefficients in the
/// eliminated variable.
pub fn sylvester(p: &[UniPoly], q: &[UniPoly]) -> Vec<Vec<UniPoly>> {
    let m = p.len().saturating_sub(1);
    let n = q.len().saturating_sub(1);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (coeffs, count) in [(p, n), (q, m)] {
        for i in 0..count {
            let mut row = vec![UniPoly::zero(); size];
            for (k, c) in coeffs.iter().rev().enumerate() {
                row[i + k] = c.clone();
            }
            rows.push(row);
        }
    }
    rows
}

/// Determinant over `Q[t]` by Bareiss elimination; every division is exact.
pub fn determinant(mut m: Vec<Vec<UniPoly>>) -> UniPoly {
    let n = m.len();
    if n == 0 {
        return UniPoly::constant(BigRational::one());
    }
    let mut sign_flip = false;
    let mut prev = UniPoly::constant(BigRational::one());
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return UniPoly::zero();
            };
            m.swap(k, r);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        -&det
    } else {
        det
    }
}

/// `Res(p, q)` in the eliminated variable.
pub fn resultant(p: &[UniPoly], q: &[UniPoly]) -> UniPoly {
    determinant(sylvester(p, q))
}
