//! Flat tori: the Euclidean prototype of the equal-length problem.
//!
//! On the flat torus `C / (Z + τZ)` the curve of slope `p/q` has length
//! `|pτ + q|`. Equal-length sets are hyperbolic geodesics of the upper half
//! plane, and multiplicities come from sums of two squares.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::{Integer, Roots};
use serde::Serialize;

use crate::curves::{det, Slope};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TauPoint {
    pub re: f64,
    pub im: f64,
}

impl TauPoint {
    pub const I: TauPoint = TauPoint { re: 0.0, im: 1.0 };

    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(im > 0.0) || !re.is_finite() || !im.is_finite() {
            return Err(Error::domain(format!("tau must lie in the upper half plane, got {re} + {im}i")));
        }
        Ok(TauPoint { re, im })
    }
}

/// `|pτ + q|`.
pub fn flat_length(tau: TauPoint, s: Slope) -> f64 {
    let (p, q) = (s.p() as f64, s.q() as f64);
    (p * tau.re + q).hypot(p * tau.im)
}

/// `|p i + q|² = p² + q²`, exactly.
pub fn flat_length_squared_at_i(s: Slope) -> u128 {
    let (p, q) = (s.p() as i128, s.q() as i128);
    (p * p + q * q) as u128
}

/// A point of `R ∪ {∞}` at the end of a Poincaré geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Endpoint {
    /// `num / den` in lowest terms with `den > 0`.
    Rational { num: i128, den: i128 },
    Infinity,
}

impl Endpoint {
    fn rational(num: i128, den: i128) -> Endpoint {
        debug_assert!(den != 0);
        let g = num.gcd(&den);
        let s = if den < 0 { -1 } else { 1 };
        Endpoint::Rational { num: s * num / g, den: s * den / g }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Endpoint::Rational { num, den } => num as f64 / den as f64,
            Endpoint::Infinity => f64::INFINITY,
        }
    }

    /// Integer minimal polynomial, ascending coefficients: `[−num, den]`;
    /// empty for `∞`.
    pub fn min_poly(&self) -> Vec<i128> {
        match *self {
            Endpoint::Rational { num, den } => vec![-num, den],
            Endpoint::Infinity => Vec::new(),
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Rational { num, den: 1 } => write!(f, "{num}"),
            Endpoint::Rational { num, den } => write!(f, "{num}/{den}"),
            Endpoint::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Endpoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GeodesicShape {
    Vertical { foot: f64 },
    Circle { center: f64, radius: f64 },
}

/// A geodesic of the upper half plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoincareGeodesic {
    pub shape: GeodesicShape,
    /// Ascending; `∞` last.
    pub endpoints: [Endpoint; 2],
    /// `[C, B, A]` of `A|τ|² + B Re τ + C = 0`; the endpoints are the real
    /// roots of `A u² + B u + C`.
    pub equation: [i128; 3],
}

impl PoincareGeodesic {
    /// Evenly spread points on the geodesic (angles for circles, log-heights
    /// for vertical lines).
    pub fn sample(&self, n: usize) -> Vec<TauPoint> {
        (1..=n)
            .map(|k| {
                let s = k as f64 / (n + 1) as f64;
                match self.shape {
                    GeodesicShape::Circle { center, radius } => {
                        let phi = std::f64::consts::PI * s;
                        TauPoint { re: center + radius * phi.cos(), im: radius * phi.sin() }
                    }
                    GeodesicShape::Vertical { foot } => TauPoint { re: foot, im: (8.0 * (2.0 * s - 1.0)).exp() },
                }
            })
            .collect()
    }
}

/// The set `{τ : |p₁τ + q₁| = |p₂τ + q₂|}`.
pub fn equal_locus_flat(s1: Slope, s2: Slope) -> Result<PoincareGeodesic> {
    if s1 == s2 {
        return Err(Error::domain(format!("equal-length locus of {s1} with itself is everything")));
    }
    let (p1, q1) = (s1.p() as i128, s1.q() as i128);
    let (p2, q2) = (s2.p() as i128, s2.q() as i128);
    let a = p1 * p1 - p2 * p2;
    let b = 2 * (p1 * q1 - p2 * q2);
    let c = q1 * q1 - q2 * q2;
    // A u² + B u + C = ((p₁−p₂)u + (q₁−q₂)) ((p₁+p₂)u + (q₁+q₂))
    let factors = [(p1 - p2, q1 - q2), (p1 + p2, q1 + q2)];
    let mut roots: Vec<Endpoint> = factors
        .iter()
        .filter(|(lin, _)| *lin != 0)
        .map(|&(lin, cst)| Endpoint::rational(-cst, lin))
        .collect();
    let shape = if a == 0 {
        debug_assert_eq!(roots.len(), 1);
        roots.push(Endpoint::Infinity);
        GeodesicShape::Vertical { foot: roots[0].value() }
    } else {
        let d = det(s1.vector(), s2.vector()) as f64;
        GeodesicShape::Circle { center: -(b as f64) / (2.0 * a as f64), radius: (d / a as f64).abs() }
    };
    roots.sort_by(|x, y| x.value().total_cmp(&y.value()));
    Ok(PoincareGeodesic { shape, endpoints: [roots[0], roots[1]], equation: [c, b, a] })
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Prime factorization by trial division, ascending.
fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `p = a² + b²` for a prime `p ≡ 1 (mod 4)` (Hermite–Serret descent).
fn two_squares_prime(p: u64) -> (u64, u64) {
    let mut c = 2;
    while pow_mod(c, (p - 1) / 2, p) != p - 1 {
        c += 1;
    }
    let x = pow_mod(c, (p - 1) / 4, p);
    let (mut r0, mut r1) = (p, x);
    let root = p.sqrt();
    while r1 > root {
        (r0, r1) = (r1, r0 % r1);
    }
    let _ = r0;
    let b = (p - r1 * r1).sqrt();
    debug_assert_eq!(r1 * r1 + b * b, p);
    (r1, b)
}

type Gauss = (i128, i128);

fn gmul(a: Gauss, b: Gauss) -> Gauss {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

/// Unordered pairs `a ≤ b` of positive coprime integers with `a² + b² = n`.
pub fn coprime_representations(n: u64) -> Vec<(u64, u64)> {
    if n < 2 {
        return Vec::new();
    }
    let mut gaussian_factors: Vec<Gauss> = Vec::new();
    let mut base: Gauss = (1, 0);
    for (p, e) in factorize(n) {
        match p % 4 {
            2 if e == 1 => base = gmul(base, (1, 1)),
            1 => {
                let (a, b) = two_squares_prime(p);
                let mut pi: Gauss = (1, 0);
                for _ in 0..e {
                    pi = gmul(pi, (a as i128, b as i128));
                }
                gaussian_factors.push(pi);
            }
            _ => return Vec::new(),
        }
    }
    let k = gaussian_factors.len();
    let mut reps = BTreeSet::new();
    // Conjugating every factor gives the same unordered pair, so fix the first.
    let choices = if k == 0 { 1 } else { 1u64 << (k - 1) };
    for mask in 0..choices {
        let mut z = base;
        for (i, &g) in gaussian_factors.iter().enumerate() {
            let conj = i > 0 && (mask >> (i - 1)) & 1 == 1;
            z = gmul(z, if conj { (g.0, -g.1) } else { g });
        }
        let (x, y) = (z.0.unsigned_abs() as u64, z.1.unsigned_abs() as u64);
        if x > 0 && y > 0 {
            reps.insert((x.min(y), x.max(y)));
        }
    }
    reps.into_iter().collect()
}

pub fn coprime_rep_count(n: u64) -> usize {
    coprime_representations(n).len()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HighMultiplicity {
    pub primes: Vec<u64>,
    pub n: u64,
    pub representations: Vec<(u64, u64)>,
}

impl HighMultiplicity {
    /// Slopes `a/b` from the representations, all of flat length `√N` at `τ = i`.
    pub fn slopes(&self) -> Result<Vec<Slope>> {
        self.representations
            .iter()
            .map(|&(a, b)| Slope::new(a as i64, b as i64))
            .collect()
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// `N` = product of the `count` smallest primes `≡ 1 (mod 4)`, with its
/// `2^(count−1)` coprime representations.
pub fn construct_high_multiplicity(count: u32) -> Result<HighMultiplicity> {
    if count == 0 {
        return Err(Error::domain("need at least one prime"));
    }
    let primes: Vec<u64> = (5u64..)
        .step_by(4)
        .filter(|&p| is_prime(p))
        .take(count as usize)
        .collect();
    let n = primes
        .iter()
        .try_fold(1u64, |acc, &p| acc.checked_mul(p))
        .ok_or(Error::Overflow("product of primes"))?;
    let representations = coprime_representations(n);
    Ok(HighMultiplicity { primes, n, representations })
}
