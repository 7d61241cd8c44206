//! Simple closed curves on the one-holed torus, indexed by primitive slopes.
//!
//! Traces of curves are computed by the Farey mediant recursion
//! `tr(v+w) = tr(v) tr(w) - tr(v-w)` walked down the Stern–Brocot tree, and the
//! same walk yields generator words (for the matrix oracle) and integer trace
//! polynomials for the symmetric family `(t,t,t)`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fricke::{Generator, Trace, Word};
use crate::space::FrickePoint;

/// Unoriented primitive homology class `(p, q)`, normalized so that `q > 0`
/// or `(p, q) = (1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope {
    p: i64,
    q: i64,
}

impl Slope {
    pub const X: Slope = Slope { p: 1, q: 0 };
    pub const Y: Slope = Slope { p: 0, q: 1 };
    pub const Z: Slope = Slope { p: 1, q: 1 };

    /// Primitive slope through `(p, q)`; the sign is normalized away.
    pub fn new(p: i64, q: i64) -> Result<Slope> {
        if p == i64::MIN || q == i64::MIN {
            return Err(Error::Overflow("slope normalization"));
        }
        if p.gcd(&q) != 1 {
            return Err(Error::NotPrimitive { p, q });
        }
        Ok(Self::normalized(p, q))
    }

    /// Divides out the gcd. Returns the slope and whether a reduction happened.
    pub fn reduced(p: i64, q: i64) -> Result<(Slope, bool)> {
        if p == i64::MIN || q == i64::MIN {
            return Err(Error::Overflow("slope normalization"));
        }
        let g = p.gcd(&q);
        if g == 0 {
            return Err(Error::NotPrimitive { p, q });
        }
        Ok((Self::normalized(p / g, q / g), g != 1))
    }

    fn normalized(p: i64, q: i64) -> Slope {
        if q < 0 || (q == 0 && p < 0) {
            Slope { p: -p, q: -q }
        } else {
            Slope { p, q }
        }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn vector(&self) -> (i64, i64) {
        (self.p, self.q)
    }

    /// `|p| + |q|`, the complexity used by the orbit searches.
    pub fn complexity(&self) -> u64 {
        self.p.unsigned_abs() + self.q.unsigned_abs()
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Signed determinant `p1 q2 - q1 p2` of two integer vectors.
pub(crate) fn det(a: (i64, i64), b: (i64, i64)) -> i128 {
    a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128
}

pub fn intersection_number(s1: Slope, s2: Slope) -> u64 {
    det(s1.vector(), s2.vector()).unsigned_abs() as u64
}

/// Image of `s` under the `k`-fold right Dehn twist about `along`:
/// `s + k det(along, s) along` on homology.
pub fn dehn_twist(s: Slope, along: Slope, k: i64) -> Result<Slope> {
    let d = det(along.vector(), s.vector());
    let shift = d
        .checked_mul(k as i128)
        .ok_or(Error::Overflow("dehn twist"))?;
    let p = s.p as i128 + shift * along.p as i128;
    let q = s.q as i128 + shift * along.q as i128;
    let p = i64::try_from(p).map_err(|_| Error::Overflow("dehn twist"))?;
    let q = i64::try_from(q).map_err(|_| Error::Overflow("dehn twist"))?;
    Slope::new(p, q)
}

/// Element of GL(2,Z) acting on column vectors `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SlopeMap {
    pub m: [[i64; 2]; 2],
}

impl SlopeMap {
    pub const IDENTITY: SlopeMap = SlopeMap { m: [[1, 0], [0, 1]] };
    /// Order-3 rotation `(p,q) ↦ (-q, p-q)` cycling `1/0 → 0/1 → 1/1`.
    pub const ROTATE: SlopeMap = SlopeMap { m: [[0, -1], [1, -1]] };
    /// Orientation-reversing swap `(p,q) ↦ (q,p)`.
    pub const SWAP: SlopeMap = SlopeMap { m: [[0, 1], [1, 0]] };

    /// The map sending `(1,0) ↦ u` and `(0,1) ↦ v`.
    pub fn from_columns(u: (i64, i64), v: (i64, i64)) -> SlopeMap {
        SlopeMap { m: [[u.0, v.0], [u.1, v.1]] }
    }

    pub fn det(&self) -> i64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn apply_vector(&self, v: (i64, i64)) -> Result<(i64, i64)> {
        let p = self.m[0][0] as i128 * v.0 as i128 + self.m[0][1] as i128 * v.1 as i128;
        let q = self.m[1][0] as i128 * v.0 as i128 + self.m[1][1] as i128 * v.1 as i128;
        Ok((
            i64::try_from(p).map_err(|_| Error::Overflow("slope map"))?,
            i64::try_from(q).map_err(|_| Error::Overflow("slope map"))?,
        ))
    }

    pub fn apply(&self, s: Slope) -> Result<Slope> {
        let (p, q) = self.apply_vector(s.vector())?;
        Slope::new(p, q)
    }
}

/// Walks the Stern–Brocot tree from the edge `(1/0, 0/1)` to the positive
/// slope `(p, q)`, calling `left` / `right` at every step. `p, q > 0`.
fn stern_brocot_walk(p: i64, q: i64, mut step: impl FnMut(bool)) {
    debug_assert!(p > 0 && q > 0);
    let (mut l, mut r) = ((1i64, 0i64), (0i64, 1i64));
    loop {
        let m = (l.0 + r.0, l.1 + r.1);
        if m == (p, q) {
            return;
        }
        // Target is on the `l` side of the mediant when p/q > m.p/m.q.
        if (p as i128) * (m.1 as i128) > (q as i128) * (m.0 as i128) {
            step(true);
            r = m;
        } else {
            step(false);
            l = m;
        }
    }
}

/// Runs the Farey recursion for a slope over any value type with the seeds
/// `tr(1/0)`, `tr(0/1)`, `tr(1/1)` and the "reflected" seed `tr(1/-1)`.
fn farey_recursion<T: Clone>(
    s: Slope,
    x: T,
    y: T,
    z: T,
    z_reflected: impl FnOnce() -> T,
    combine: impl Fn(&T, &T, &T) -> T,
) -> T {
    match s.vector() {
        (1, 0) => x,
        (0, 1) => y,
        (p, q) => {
            let (p, z) = if p < 0 { (-p, z_reflected()) } else { (p, z) };
            let (mut tl, mut tr, mut tm) = (x, y, z);
            stern_brocot_walk(p, q, |left| {
                if left {
                    let next = combine(&tl, &tm, &tr);
                    tr = std::mem::replace(&mut tm, next);
                } else {
                    let next = combine(&tm, &tr, &tl);
                    tl = std::mem::replace(&mut tm, next);
                }
            });
            tm
        }
    }
}

/// Trace of the curve with slope `s` at `point`, via the Farey recursion
/// seeded by `x = tr(1/0)`, `y = tr(0/1)`, `z = tr(1/1)`.
pub fn trace_of_slope(point: &FrickePoint, s: Slope) -> Trace {
    Trace(trace_of_slope_f64(point.x, point.y, point.z, s))
}

pub(crate) fn trace_of_slope_f64(x: f64, y: f64, z: f64, s: Slope) -> f64 {
    farey_recursion(s, x, y, z, || x * y - z, |a, b, c| a * b - c)
}

/// Generator word representing the slope: `(1,0) ↦ A`, `(0,1) ↦ B`, mediants
/// concatenate, and negative slopes substitute `B ↦ B^-1`.
pub fn slope_word(s: Slope) -> Word {
    let mut a = Word::new();
    a.push(Generator::A, 1);
    let mut b = Word::new();
    b.push(Generator::B, 1);
    match s.vector() {
        (1, 0) => a,
        (0, 1) => b,
        (p, q) => {
            let reflected = p < 0;
            let (mut wl, mut wr) = (a, b);
            let mut wm = wl.concat(&wr);
            stern_brocot_walk(p.abs(), q, |left| {
                if left {
                    wr = std::mem::replace(&mut wm, Word::new());
                    wm = wl.concat(&wr);
                } else {
                    wl = std::mem::replace(&mut wm, Word::new());
                    wm = wl.concat(&wr);
                }
            });
            if reflected {
                wm.invert_b()
            } else {
                wm
            }
        }
    }
}

/// Integer polynomial in `t`, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TracePolynomial {
    coeffs: Vec<BigInt>,
}

impl TracePolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        TracePolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The polynomial `t`.
    pub fn t() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval_int(&self, t: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    /// Horner evaluation in binary64.
    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) - other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }
}

impl fmt::Display for TracePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let show_coeff = !mag.is_one() || deg == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match deg {
                0 => {}
                1 => write!(f, "t")?,
                d => write!(f, "t^{d}")?,
            }
        }
        Ok(())
    }
}

/// Trace of slope `s` on the symmetric point `(t, t, t)` as an exact integer polynomial.
pub fn trace_polynomial(s: Slope) -> TracePolynomial {
    let t = TracePolynomial::t();
    let reflected = || t.mul(&t).sub(&t);
    farey_recursion(s, t.clone(), t.clone(), t.clone(), reflected, |a, b, c| {
        a.mul(b).sub(c)
    })
}

/// Orbit of `s` under the order-6 group generated by [`SlopeMap::ROTATE`] and
/// [`SlopeMap::SWAP`], the slope action of the symmetric torus's isometries.
pub fn isometry_orbit(s: Slope) -> BTreeSet<Slope> {
    orbit_under(s, &[SlopeMap::ROTATE, SlopeMap::SWAP]).expect("order-6 maps preserve primitivity")
}

/// Closure of `{s}` under the given generators.
pub fn orbit_under(s: Slope, generators: &[SlopeMap]) -> Result<BTreeSet<Slope>> {
    let mut seen = BTreeSet::from([s]);
    let mut frontier = vec![s];
    while let Some(cur) = frontier.pop() {
        for g in generators {
            let img = g.apply(cur)?;
            if seen.insert(img) {
                frontier.push(img);
            }
        }
    }
    Ok(seen)
}

/// A slope `η` with `det(γ, η) = 1`, as an oriented vector.
pub fn complete_basis(gamma: Slope) -> (i64, i64) {
    let (p, q) = gamma.vector();
    // p*s - q*r = 1  <=>  p*s + q*(-r) = 1
    let e = p.extended_gcd(&q);
    debug_assert_eq!(e.gcd.abs(), 1);
    let (s, minus_r) = if e.gcd == 1 { (e.x, e.y) } else { (-e.x, -e.y) };
    (-minus_r, s)
}

/// Every primitive slope with `|p| + |q| <= cap`, sorted.
pub fn slopes_up_to_complexity(cap: u64) -> Vec<Slope> {
    let cap = cap as i64;
    let mut out = Vec::new();
    for q in 0..=cap {
        for p in -(cap - q)..=(cap - q) {
            if let Ok(s) = Slope::new(p, q) {
                if s.vector() == (p, q) {
                    out.push(s);
                }
            }
        }
    }
    out.sort();
    out
}

/// Smallest member of each order-6 orbit among slopes with `|p| + |q| <= cap`.
pub fn orbit_representatives(cap: u64) -> Vec<Slope> {
    let mut covered = BTreeSet::new();
    let mut reps = Vec::new();
    for s in slopes_up_to_complexity(cap) {
        if covered.contains(&s) {
            continue;
        }
        let orbit = isometry_orbit(s);
        reps.push(*orbit.iter().next().expect("orbit contains s"));
        covered.extend(orbit);
    }
    reps.sort();
    reps
}
