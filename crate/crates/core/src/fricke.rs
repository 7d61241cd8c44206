//! Trace/length conversions, explicit SL(2,R) realizations of trace triples
//! and the cosh-sum zero counter.
//!
//! The matrix realization is the brute-force oracle that every recursive
//! trace computation elsewhere in the crate is checked against.

use std::fmt;
use std::ops::Mul;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots::bisect;

/// Hyperbolic length of a closed geodesic.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Length(pub f64);

/// Trace `2 cosh(l/2)` of a hyperbolic element.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Trace(pub f64);

impl Length {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl Trace {
    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn trace_from_length(length: Length) -> Result<Trace> {
    let l = length.0;
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::domain(format!("length must be positive and finite, got {l}")));
    }
    Ok(Trace(2.0 * (0.5 * l).cosh()))
}

pub fn length_from_trace(trace: Trace) -> Result<Length> {
    let t = trace.0;
    if !(t > 2.0) {
        return Err(Error::domain(format!("trace must exceed 2, got {t}")));
    }
    Ok(Length(length_of_trace(t)))
}

/// `2 arccosh(t/2)` for `t > 2`, evaluated without cancellation near 2.
pub(crate) fn length_of_trace(t: f64) -> f64 {
    let u = 0.5 * t - 1.0;
    if u < 0.5 {
        // arccosh(1+u) = log1p(u + sqrt(u(u+2)))
        2.0 * (u + (u * (u + 2.0)).sqrt()).ln_1p()
    } else {
        2.0 * (0.5 * t).acosh()
    }
}

/// Trace of the commutator `[A,B]` given `tr A`, `tr B`, `tr AB`.
pub fn commutator_trace(x: f64, y: f64, z: f64) -> f64 {
    x * x + y * y + z * z - x * y * z - 2.0
}

/// A 2x2 real matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse_unimodular(&self) -> Mat2 {
        Mat2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn pow(&self, k: i64) -> Mat2 {
        let base = if k < 0 { self.inverse_unimodular() } else { *self };
        let mut acc = Mat2::IDENTITY;
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * sq;
            }
            sq = sq * sq;
            e >>= 1;
        }
        acc
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, o: Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

/// Matrices `A`, `B` with `tr A = x`, `tr B = y`, `tr AB = z`.
///
/// `A` is diagonal with eigenvalue `λ > 1`, `λ + 1/λ = x`; `B` has upper-right
/// entry 1 and determinant 1.
pub fn realize_generators(x: f64, y: f64, z: f64) -> Result<(Mat2, Mat2)> {
    if !(x > 2.0) {
        return Err(Error::domain(format!(
            "diagonal normal form needs tr A > 2, got {x}"
        )));
    }
    let lambda = 0.5 * (x + (x * x - 4.0).sqrt());
    let inv = 1.0 / lambda;
    let b11 = (z - y * inv) / (lambda - inv);
    let b22 = y - b11;
    let a = Mat2::new(lambda, 0.0, 0.0, inv);
    let b = Mat2::new(b11, 1.0, b11 * b22 - 1.0, b22);
    Ok((a, b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Generator {
    A,
    B,
}

/// A word in the free group on `A`, `B`, stored as syllables `(generator, exponent)`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Word(pub Vec<(Generator, i64)>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&(_, e)| e == 0)
    }

    /// Appends a syllable, merging with the last one when the generator repeats.
    pub fn push(&mut self, g: Generator, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(last) = self.0.last_mut() {
            if last.0 == g {
                last.1 += e;
                if last.1 == 0 {
                    self.0.pop();
                }
                return;
            }
        }
        self.0.push((g, e));
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &(g, e) in &other.0 {
            w.push(g, e);
        }
        w
    }

    /// Replaces every `B` by `B^-1`.
    pub fn invert_b(&self) -> Word {
        Word(
            self.0
                .iter()
                .map(|&(g, e)| if g == Generator::B { (g, -e) } else { (g, e) })
                .collect(),
        )
    }

    /// Parses words such as `AB`, `AB^-1`, `ABab`, `A^3B` or `AB⁻¹`.
    ///
    /// Upper-case letters are the generators, lower-case letters their inverses.
    pub fn parse(s: &str) -> Result<Word> {
        let mut w = Word::new();
        let mut chars = s.chars().filter(|c| !c.is_whitespace()).peekable();
        while let Some(c) = chars.next() {
            let (g, sign) = match c {
                'A' => (Generator::A, 1),
                'B' => (Generator::B, 1),
                'a' => (Generator::A, -1),
                'b' => (Generator::B, -1),
                other => return Err(Error::Parse(format!("unexpected character {other:?} in word"))),
            };
            let mut exp: i64 = 1;
            match chars.peek() {
                Some('^') => {
                    chars.next();
                    let mut digits = String::new();
                    if let Some(&c) = chars.peek() {
                        if c == '-' || c == '+' {
                            digits.push(c);
                            chars.next();
                        }
                    }
                    while let Some(&c) = chars.peek() {
                        if c.is_ascii_digit() {
                            digits.push(c);
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    exp = digits
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent {digits:?} in word")))?;
                }
                Some('⁻') => {
                    chars.next();
                    match chars.next() {
                        Some('¹') => exp = -1,
                        _ => return Err(Error::Parse("expected ¹ after ⁻".into())),
                    }
                }
                _ => {}
            }
            let e = exp
                .checked_mul(sign)
                .ok_or_else(|| Error::Parse("exponent out of range".into()))?;
            if let Some(&(last, le)) = w.0.last() {
                if last == g && le.checked_add(e).is_none() {
                    return Err(Error::Parse("exponent out of range".into()));
                }
            }
            w.push(g, e);
        }
        Ok(w)
    }

    pub fn evaluate(&self, a: &Mat2, b: &Mat2) -> Mat2 {
        self.0.iter().fold(Mat2::IDENTITY, |acc, &(g, e)| {
            let m = match g {
                Generator::A => a,
                Generator::B => b,
            };
            acc * m.pow(e)
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(g, e) in &self.0 {
            let letter = match g {
                Generator::A => 'A',
                Generator::B => 'B',
            };
            if e == 1 {
                write!(f, "{letter}")?;
            } else {
                write!(f, "{letter}^{e}")?;
            }
        }
        Ok(())
    }
}

pub fn word_trace(a: &Mat2, b: &Mat2, word: &Word) -> Result<Trace> {
    if word.is_empty() {
        return Err(Error::domain("empty word"));
    }
    Ok(Trace(word.evaluate(a, b).trace()))
}

/// `f(t) = Σ cosh(a_i t) − Σ cosh(b_k t)` with two positive rates `a` and any
/// number of positive rates `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoshSumSpec {
    pub a: [f64; 2],
    pub b: Vec<f64>,
}

/// Result of scanning a cosh-sum for positive zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroScan {
    pub zeros: Vec<f64>,
    /// Set when `|f|` stayed below the plateau threshold on consecutive grid points.
    pub plateau: bool,
}

impl ZeroScan {
    pub fn count(&self) -> usize {
        self.zeros.len()
    }
}

pub const DEFAULT_ZERO_GRID: usize = 10_000;
const PLATEAU_EPS: f64 = 1e-13;

impl CoshSumSpec {
    pub fn new(a: [f64; 2], b: Vec<f64>) -> Result<Self> {
        if a.iter().chain(b.iter()).any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::domain("cosh-sum rates must be positive and finite"));
        }
        Ok(CoshSumSpec { a, b })
    }

    /// True when the leading rate dominates every subtracted rate.
    pub fn dominated(&self) -> bool {
        let a1 = self.a[0].max(self.a[1]);
        self.b.iter().all(|&b| a1 > b)
    }

    fn max_rate(&self) -> f64 {
        self.a.iter().chain(self.b.iter()).fold(0.0f64, |m, &v| m.max(v))
    }

    /// `f(t)` itself; overflows for large `t`.
    pub fn eval(&self, t: f64) -> f64 {
        self.a.iter().map(|&a| (a * t).cosh()).sum::<f64>()
            - self.b.iter().map(|&b| (b * t).cosh()).sum::<f64>()
    }

    /// `2 e^{-mt} f(t)` with `m` the largest rate: same sign as `f`, never overflows.
    pub fn eval_scaled(&self, t: f64) -> f64 {
        let m = self.max_rate();
        let term = |r: f64| ((r - m) * t).exp() + ((-r - m) * t).exp();
        self.a.iter().map(|&a| term(a)).sum::<f64>() - self.b.iter().map(|&b| term(b)).sum::<f64>()
    }
}

/// Counts sign changes of the cosh-sum on `(0, t_max]` over a uniform grid of
/// `grid` points, refining each crossing by bisection to `tol`.
pub fn count_positive_zeros(sum: &CoshSumSpec, t_max: f64, tol: f64) -> Result<ZeroScan> {
    count_positive_zeros_with_grid(sum, t_max, tol, DEFAULT_ZERO_GRID)
}

pub fn count_positive_zeros_with_grid(
    sum: &CoshSumSpec,
    t_max: f64,
    tol: f64,
    grid: usize,
) -> Result<ZeroScan> {
    if !(t_max > 0.0) {
        return Err(Error::domain(format!("t_max must be positive, got {t_max}")));
    }
    let grid = grid.max(1);
    let step = t_max / grid as f64;
    let mut zeros = Vec::new();
    let mut plateau = false;

    // f(0) = #a - #b; its sign seeds the scan when nonzero.
    let f0 = (2 - sum.b.len() as i64) as f64;
    let mut last: Option<(f64, f64)> = if f0 != 0.0 { Some((0.0, f0)) } else { None };
    let mut small_run = 0usize;
    for i in 1..=grid {
        let t = if i == grid { t_max } else { step * i as f64 };
        let v = sum.eval_scaled(t);
        if v.abs() < PLATEAU_EPS {
            small_run += 1;
            if small_run >= 2 {
                plateau = true;
            }
            continue;
        }
        small_run = 0;
        if let Some((t_prev, v_prev)) = last {
            if v_prev.signum() != v.signum() {
                let root = bisect(|s| sum.eval_scaled(s), t_prev, t, tol, 0.0);
                if root > 0.0 {
                    zeros.push(root);
                }
            }
        }
        last = Some((t, v));
    }
    Ok(ZeroScan { zeros, plateau })
}
