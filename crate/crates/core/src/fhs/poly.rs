//! Exact polynomials over the rationals in one and two variables.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Univariate polynomial, ascending coefficients, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        UniPoly::new(vec![c])
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        UniPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().expect("nonzero").clone();
        let mut rem = self.coeffs.clone();
        let n = rem.len();
        if n <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); n - dd];
        for i in (0..n - dd).rev() {
            let q = &rem[i + dd] / &lead;
            if !q.is_zero() {
                for (j, c) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &q * c;
                }
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    /// Division known to be exact.
    pub fn div_exact(&self, divisor: &UniPoly) -> UniPoly {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = BigRational::zero();
        UniPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, o: &UniPoly) -> UniPoly {
        self + &(-o)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sep = if first { "" } else { " + " };
            first = false;
            match i {
                0 => write!(f, "{sep}({c})")?,
                1 => write!(f, "{sep}({c})*t")?,
                _ => write!(f, "{sep}({c})*t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Polynomial in `c` and `d`: map from exponents `(i, j)` of `c^i d^j` to
/// nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(usize, usize), BigRational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn constant(k: BigRational) -> Self {
        BiPoly::monomial(k, 0, 0)
    }

    pub fn monomial(k: BigRational, i: usize, j: usize) -> Self {
        let mut terms = BTreeMap::new();
        if !k.is_zero() {
            terms.insert((i, j), k);
        }
        BiPoly { terms }
    }

    pub fn c() -> Self {
        BiPoly::monomial(BigRational::one(), 1, 0)
    }

    pub fn d() -> Self {
        BiPoly::monomial(BigRational::one(), 0, 1)
    }

    pub fn terms(&self) -> &BTreeMap<(usize, usize), BigRational> {
        &self.terms
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(BiPoly::constant(BigRational::one()), |acc, _| &acc * self)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let mut out = BiPoly::zero();
        for (&m, v) in &self.terms {
            out.add_term(m, v * k);
        }
        out
    }

    fn add_term(&mut self, m: (usize, usize), v: BigRational) {
        let e = self.terms.entry(m).or_insert_with(BigRational::zero);
        *e += v;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Coefficients as a polynomial in `c` over `Q[d]`.
    pub fn in_c(&self) -> Vec<UniPoly> {
        self.collect(|(i, j)| (i, j))
    }

    /// Coefficients as a polynomial in `d` over `Q[c]`.
    pub fn in_d(&self) -> Vec<UniPoly> {
        self.collect(|(i, j)| (j, i))
    }

    fn collect(&self, key: impl Fn((usize, usize)) -> (usize, usize)) -> Vec<UniPoly> {
        let top = self.terms.keys().map(|&m| key(m).0).max();
        let Some(top) = top else { return Vec::new() };
        let mut rows: Vec<Vec<BigRational>> = vec![Vec::new(); top + 1];
        for (&m, v) in &self.terms {
            let (outer, inner) = key(m);
            let row = &mut rows[outer];
            if row.len() <= inner {
                row.resize(inner + 1, BigRational::zero());
            }
            row[inner] = v.clone();
        }
        rows.into_iter().map(UniPoly::new).collect()
    }

    pub fn eval_f64(&self, c: f64, d: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(&(i, j), v)| v.to_f64().unwrap_or(f64::NAN) * c.powi(i as i32) * d.powi(j as i32))
            .sum()
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, o: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&m, v) in &o.terms {
            out.add_term(m, v.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, o: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&m, v) in &o.terms {
            out.add_term(m, -v);
        }
        out
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, o: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &o.terms {
                out.add_term((i + k, j + l), a * b);
            }
        }
        out
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(v: &[i64]) -> UniPoly {
        UniPoly::new(v.iter().map(|&x| rat(x)).collect())
    }

    #[test]
    fn division_roundtrip() {
        let a = up(&[1, 2, 3]);
        let b = up(&[-1, 0, 0, 5]);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&b), a);
        let (q, r) = up(&[1, 0, 1]).div_rem(&up(&[1, 1]));
        assert_eq!(q, up(&[-1, 1]));
        assert_eq!(r, up(&[2]));
    }

    #[test]
    fn trimming_and_eval() {
        assert_eq!(up(&[1, 0, 0]).degree(), Some(0));
        assert!(up(&[0]).is_zero());
        assert_eq!(up(&[1, -1, 1]).eval(&rat(3)), rat(7));
    }

    #[test]
    fn bivariate_views() {
        // (c − d)² = c² − 2cd + d²
        let p = (&BiPoly::c() - &BiPoly::d()).pow(2);
        let in_c = p.in_c();
        assert_eq!(in_c, vec![up(&[0, 0, 1]), up(&[0, -2]), up(&[1])]);
        assert_eq!(p.in_d(), in_c);
        assert_eq!(p.eval_f64(3.0, 1.0), 4.0);
    }
}
