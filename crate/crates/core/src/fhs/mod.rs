//! Trace algebra of the four-holed sphere in half-traces `cosh(ℓ/2)`.
//!
//! Boundary curves carry half-traces `a, b, c, d`; the three pairs of interior
//! curves `(ξ, ξ̄)`, `(υ, ῡ)`, `(ζ, ζ̄)` carry `x, x̄, y, ȳ, z, z̄`. Four
//! symmetric functions of the boundary data are determined by interior data:
//!
//! ```text
//! ad + bc = yz − (x + x̄)/2
//! ac + bd = xy − (z + z̄)/2
//! ab + cd = xz − (y + ȳ)/2
//! a² + b² + c² + d² + 4abcd = 1 − 4xyz + xx̄ + yȳ + zz̄
//! ```

pub mod poly;
pub mod resultant;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use poly::{rat, BiPoly, UniPoly};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Invariant4 {
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    pub f4: f64,
}

impl Invariant4 {
    pub fn as_array(&self) -> [f64; 4] {
        [self.f1, self.f2, self.f3, self.f4]
    }

    /// Largest coordinate difference.
    pub fn max_diff(&self, other: &Invariant4) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn boundary_invariants(a: f64, b: f64, c: f64, d: f64) -> Invariant4 {
    Invariant4 {
        f1: a * d + b * c,
        f2: a * c + b * d,
        f3: a * b + c * d,
        f4: a * a + b * b + c * c + d * d + 4.0 * a * b * c * d,
    }
}

pub fn interior_invariants(x: f64, xb: f64, y: f64, yb: f64, z: f64, zb: f64) -> Invariant4 {
    Invariant4 {
        f1: y * z - (x + xb) / 2.0,
        f2: x * y - (z + zb) / 2.0,
        f3: x * z - (y + yb) / 2.0,
        f4: 1.0 - 4.0 * x * y * z + x * xb + y * yb + z * zb,
    }
}

/// The companion half-traces `(x̄, ȳ, z̄)` forced by the first three equations.
pub fn bar_traces_from(a: f64, b: f64, c: f64, d: f64, x: f64, y: f64, z: f64) -> (f64, f64, f64) {
    let f = boundary_invariants(a, b, c, d);
    (
        2.0 * (y * z - f.f1) - x,
        2.0 * (x * z - f.f3) - y,
        2.0 * (x * y - f.f2) - z,
    )
}

/// `a²+b²+c²+d²+x²+y²+z²+4abcd − 1 − 2xyz + 2x(ad+bc) + 2y(ab+cd) + 2z(ac+bd)`.
pub fn tracepoly_residual(a: f64, b: f64, c: f64, d: f64, x: f64, y: f64, z: f64) -> f64 {
    let f = boundary_invariants(a, b, c, d);
    f.f4 + x * x + y * y + z * z - 1.0 - 2.0 * x * y * z + 2.0 * x * f.f1 + 2.0 * y * f.f3 + 2.0 * z * f.f2
}

/// Half-traces of a marked four-holed sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FhsTraces {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub x: f64,
    pub xb: f64,
    pub y: f64,
    pub yb: f64,
    pub z: f64,
    pub zb: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Consistency {
    /// `x + x̄ + 2(ad+bc) − 2yz` and its two cyclic analogues.
    pub basic_identities: [f64; 3],
    /// Boundary minus interior invariants, slot by slot.
    pub slots: [f64; 4],
    pub tracepoly: f64,
    /// Every half-trace is at least 1.
    pub geometric: bool,
}

impl Consistency {
    pub fn max_residual(&self) -> f64 {
        self.basic_identities
            .iter()
            .chain(&self.slots)
            .chain(std::iter::once(&self.tracepoly))
            .fold(0.0f64, |m, r| m.max(r.abs()))
    }
}

impl FhsTraces {
    /// Completes boundary and `x, y, z` with the forced bar half-traces.
    pub fn with_bars(a: f64, b: f64, c: f64, d: f64, x: f64, y: f64, z: f64) -> Self {
        let (xb, yb, zb) = bar_traces_from(a, b, c, d, x, y, z);
        FhsTraces { a, b, c, d, x, xb, y, yb, z, zb }
    }

    pub fn boundary(&self) -> Invariant4 {
        boundary_invariants(self.a, self.b, self.c, self.d)
    }

    pub fn interior(&self) -> Invariant4 {
        interior_invariants(self.x, self.xb, self.y, self.yb, self.z, self.zb)
    }

    pub fn is_geometric(&self) -> bool {
        [self.a, self.b, self.c, self.d, self.x, self.xb, self.y, self.yb, self.z, self.zb]
            .iter()
            .all(|&v| v >= 1.0)
    }

    pub fn check_consistency(&self) -> Consistency {
        let (bd, int) = (self.boundary(), self.interior());
        Consistency {
            basic_identities: [
                check_basic_identity(self),
                self.y + self.yb + 2.0 * bd.f3 - 2.0 * self.x * self.z,
                self.z + self.zb + 2.0 * bd.f2 - 2.0 * self.x * self.y,
            ],
            slots: [bd.f1 - int.f1, bd.f2 - int.f2, bd.f3 - int.f3, bd.f4 - int.f4],
            tracepoly: tracepoly_residual(self.a, self.b, self.c, self.d, self.x, self.y, self.z),
            geometric: self.is_geometric(),
        }
    }

    /// Boundary half-traces in ascending order.
    pub fn boundary_multiset(&self) -> [f64; 4] {
        let mut v = [self.a, self.b, self.c, self.d];
        v.sort_by(f64::total_cmp);
        v
    }
}

/// `x + x̄ + 2(ad+bc) − 2yz`.
pub fn check_basic_identity(t: &FhsTraces) -> f64 {
    t.x + t.xb + 2.0 * (t.a * t.d + t.b * t.c) - 2.0 * t.y * t.z
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetricCase {
    /// `a = b = c = d`.
    AllEqual,
    /// `a = b = c`.
    ThreeEqual,
    /// `a = d`, `b = c`.
    TwoPairs,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricSolution {
    pub case: SymmetricCase,
    /// Each `(a, b, c, d)` reproduces the invariants.
    pub solutions: Vec<[f64; 4]>,
    /// Violation of the case's compatibility conditions; solutions are empty when
    /// it exceeds the tolerance.
    pub consistency_residual: f64,
}

const SOLVE_TOL: f64 = 1e-9;
/// Solutions closer than this (relative) are one root.
const DEDUP_TOL: f64 = 1e-7;

fn rel(x: f64, scale: f64) -> f64 {
    x.abs() / scale.abs().max(1.0)
}

fn verified(f: &Invariant4, candidates: Vec<[f64; 4]>) -> Vec<[f64; 4]> {
    let mut out: Vec<[f64; 4]> = candidates
        .into_iter()
        .filter(|s| s.iter().all(|v| v.is_finite() && *v > 0.0))
        .filter(|s| {
            let g = boundary_invariants(s[0], s[1], s[2], s[3]);
            rel(g.max_diff(f), f.f4) < SOLVE_TOL
        })
        .collect();
    out.sort_by(|p, q| p.iter().zip(q).map(|(a, b)| a.total_cmp(b)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    // Newton copies of one root agree to ~1e-12 but need not be adjacent after sorting
    let mut kept: Vec<[f64; 4]> = Vec::new();
    for s in out {
        let near = |k: &[f64; 4]| k.iter().zip(&s).all(|(a, b)| (a - b).abs() <= DEDUP_TOL * a.abs().max(1.0));
        if !kept.iter().any(near) {
            kept.push(s);
        }
    }
    kept
}

/// Real roots of `c3 u³ + c2 u² + c1 u + c0` (`c3 ≠ 0`), polished by Newton steps.
fn real_cubic_roots(c3: f64, c2: f64, c1: f64, c0: f64) -> Vec<f64> {
    let (b, c, d) = (c2 / c3, c1 / c3, c0 / c3);
    // u = s − b/3 gives s³ + p s + q = 0
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let mut roots = if disc > 0.0 {
        let r = disc.sqrt();
        vec![(-q / 2.0 + r).cbrt() + (-q / 2.0 - r).cbrt()]
    } else if p == 0.0 {
        vec![0.0]
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        let phi = (3.0 * q / (p * m)).clamp(-1.0, 1.0).acos() / 3.0;
        (0..3)
            .map(|k| m * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos())
            .collect()
    };
    for s in &mut roots {
        let mut u = *s - b / 3.0;
        for _ in 0..4 {
            let f = ((u + b) * u + c) * u + d;
            let df = (3.0 * u + 2.0 * b) * u + c;
            if df == 0.0 {
                break;
            }
            u -= f / df;
        }
        *s = u;
    }
    roots.sort_by(f64::total_cmp);
    roots
}

/// All real positive boundary data in a symmetric family with the given invariants.
pub fn solve_boundary_symmetric(f: &Invariant4, case: SymmetricCase) -> SymmetricSolution {
    let scale = f.f1.abs().max(f.f2.abs()).max(f.f3.abs());
    let (consistency_residual, candidates) = match case {
        SymmetricCase::AllEqual => {
            let a = (f.f1 / 2.0).sqrt();
            let r = rel(f.f1 - f.f2, scale)
                .max(rel(f.f1 - f.f3, scale))
                .max(rel(4.0 * a * a + 4.0 * a.powi(4) - f.f4, f.f4));
            (r, vec![[a; 4]])
        }
        SymmetricCase::ThreeEqual => {
            let r = rel(f.f1 - f.f2, scale).max(rel(f.f1 - f.f3, scale));
            let cands = real_cubic_roots(-4.0, 4.0 + 4.0 * f.f1, -(2.0 * f.f1 + f.f4), f.f1 * f.f1)
                .into_iter()
                .filter(|&u| u > 0.0)
                .map(|u| {
                    let a = u.sqrt();
                    [a, a, a, (f.f1 - u) / a]
                })
                .collect();
            (r, cands)
        }
        SymmetricCase::TwoPairs => {
            let (s, prod) = ((f.f1 + f.f2).sqrt(), f.f2 / 2.0);
            let disc = (s * s - 4.0 * prod).max(0.0).sqrt();
            let (a, c) = ((s + disc) / 2.0, (s - disc) / 2.0);
            let r = rel(f.f2 - f.f3, scale)
                .max(rel(2.0 * a * a + 2.0 * c * c + 4.0 * a * a * c * c - f.f4, f.f4))
                .max(rel((s * s - 4.0 * prod).min(0.0), scale));
            (r, vec![[a, c, c, a], [c, a, a, c]])
        }
    };
    let solutions = if consistency_residual < SOLVE_TOL { verified(f, candidates) } else { Vec::new() };
    SymmetricSolution { case, solutions, consistency_residual }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralSolution {
    pub solutions: Vec<[f64; 4]>,
    pub seeds: usize,
    /// Newton from a finite grid can miss solutions.
    pub best_effort: bool,
}

fn general_residual(f: &Invariant4, c: f64, d: f64) -> Option<([f64; 2], [f64; 4])> {
    let den = c * c - d * d;
    if den.abs() < 1e-12 {
        return None;
    }
    let a = (f.f2 * c - f.f1 * d) / den;
    let b = (f.f1 * c - f.f2 * d) / den;
    let r = [a * b + c * d - f.f3, a * a + b * b + c * c + d * d + 4.0 * a * b * c * d - f.f4];
    Some((r, [a, b, c, d]))
}

/// Newton search for boundary data with `c ≠ d`, from a `grid × grid` seed set.
pub fn solve_boundary_general(f: &Invariant4, grid: usize) -> GeneralSolution {
    let top = f.f4.abs().sqrt().max(2.0) + 1.0;
    let seeds: Vec<f64> = (0..grid).map(|i| 0.5 + (top - 0.5) * (i as f64 + 0.5) / grid as f64).collect();
    let mut found = Vec::new();
    for &c0 in &seeds {
        for &d0 in &seeds {
            let (mut c, mut d) = (c0, d0);
            for _ in 0..80 {
                let Some((r, abcd)) = general_residual(f, c, d) else { break };
                if rel(r[0], f.f3).max(rel(r[1], f.f4)) < 1e-13 {
                    found.push(abcd);
                    break;
                }
                let (hc, hd) = (1e-7 * c.abs().max(1.0), 1e-7 * d.abs().max(1.0));
                let (Some((rc, _)), Some((rd, _))) = (general_residual(f, c + hc, d), general_residual(f, c, d + hd)) else {
                    break;
                };
                let j = [[(rc[0] - r[0]) / hc, (rd[0] - r[0]) / hd], [(rc[1] - r[1]) / hc, (rd[1] - r[1]) / hd]];
                let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
                if det == 0.0 || !det.is_finite() {
                    break;
                }
                c -= (j[1][1] * r[0] - j[0][1] * r[1]) / det;
                d -= (-j[1][0] * r[0] + j[0][0] * r[1]) / det;
                if !(c.is_finite() && d.is_finite()) {
                    break;
                }
            }
        }
    }
    GeneralSolution { solutions: verified(f, found), seeds: grid * grid, best_effort: true }
}

/// Exact invariants for the resultant computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactInvariant4 {
    pub f1: BigRational,
    pub f2: BigRational,
    pub f3: BigRational,
    pub f4: BigRational,
}

/// The pair `(P, Q)` in `c, d` obtained by eliminating `a, b`.
pub fn appendix_polynomials(f: &ExactInvariant4) -> (BiPoly, BiPoly) {
    let (c, d) = (BiPoly::c(), BiPoly::d());
    let k = |v: &BigRational| BiPoly::constant(v.clone());
    let cd = &c * &d;
    let diff_sq = &(&c * &c) - &(&d * &d);
    let diff_sq2 = diff_sq.pow(2);
    let u = &(&k(&f.f2) * &c) - &(&k(&f.f1) * &d);
    let v = &(&k(&f.f1) * &c) - &(&k(&f.f2) * &d);
    let p = &(&(&cd - &k(&f.f3)) * &diff_sq2) + &(&v * &u);
    let sum_sq = &(&c * &c) + &(&d * &d);
    let q = &(&(&(&u * &u) + &(&v * &v)) + &(&sum_sq * &diff_sq2))
        + &(&(&(&u * &v) * &cd).scale(&rat(4)) - &(&k(&f.f4) * &diff_sq2));
    (p, q)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultantCheck {
    /// `Res_c(P, Q)` as a polynomial in `d`.
    pub r_c: UniPoly,
    /// `Res_d(P, Q)` as a polynomial in `c`.
    pub r_d: UniPoly,
    /// `256 (f1 − f2)⁴ (f1 + f2)⁴`.
    pub expected_leading: BigRational,
}

impl ResultantCheck {
    pub fn degree_in_d(&self) -> Option<usize> {
        self.r_c.degree()
    }

    pub fn degree_in_c(&self) -> Option<usize> {
        self.r_d.degree()
    }

    /// Both resultants have degree 28 and the predicted leading coefficient.
    pub fn holds(&self) -> bool {
        [&self.r_c, &self.r_d]
            .iter()
            .all(|r| r.degree() == Some(28) && r.leading() == Some(&self.expected_leading))
    }
}

pub fn expected_leading(f1: &BigRational, f2: &BigRational) -> BigRational {
    let pow4 = |v: BigRational| {
        let sq = &v * &v;
        &sq * &sq
    };
    rat(256) * pow4(f1 - f2) * pow4(f1 + f2)
}

/// Exact Sylvester resultants of `P` and `Q` in each variable.
pub fn resultant_check(f: &ExactInvariant4) -> Result<ResultantCheck> {
    if f.f1 == f.f2 {
        return Err(Error::Degenerate("f1 = f2 makes the leading coefficient vanish".into()));
    }
    if !(f.f1.is_positive() && f.f2.is_positive()) {
        return Err(Error::domain("f1 and f2 must be positive"));
    }
    let (p, q) = appendix_polynomials(f);
    let (r_c, r_d) = rayon::join(
        || resultant::resultant(&p.in_c(), &q.in_c()),
        || resultant::resultant(&p.in_d(), &q.in_d()),
    );
    Ok(ResultantCheck { r_c, r_d, expected_leading: expected_leading(&f.f1, &f.f2) })
}

/// `(1 + ∛(293 − 92√2) + ∛(293 + 92√2)) / 2`, the real root of
/// `2x³ − 3x² − 60x − 116`.
pub fn counterexample_half_trace() -> f64 {
    let r2 = 2f64.sqrt();
    (1.0 + (293.0 - 92.0 * r2).cbrt() + (293.0 + 92.0 * r2).cbrt()) / 2.0
}

/// Two non-isometric four-holed spheres with the same interior data: boundary
/// `(2, 2, 2, 3)` and `(r, r, r, s)` with `r = √(7/2 − √6)`, `s = √(79/2 + 15√6)`.
pub fn counterexample_pair() -> (FhsTraces, FhsTraces) {
    let x = counterexample_half_trace();
    let s6 = 6f64.sqrt();
    let r = (3.5 - s6).sqrt();
    let s = (39.5 + 15.0 * s6).sqrt();
    (FhsTraces::with_bars(2.0, 2.0, 2.0, 3.0, x, x, x), FhsTraces::with_bars(r, r, r, s, x, x, x))
}

impl ExactInvariant4 {
    pub fn new(f: [BigRational; 4]) -> Self {
        let [f1, f2, f3, f4] = f;
        ExactInvariant4 { f1, f2, f3, f4 }
    }

    pub fn from_integers(f: [i64; 4]) -> Self {
        ExactInvariant4::new(f.map(rat))
    }

    pub fn is_zero(&self) -> bool {
        [&self.f1, &self.f2, &self.f3, &self.f4].iter().all(|v| v.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_of_simple_data() {
        assert_eq!(boundary_invariants(1.0, 1.0, 1.0, 1.0).as_array(), [2.0, 2.0, 2.0, 8.0]);
        assert_eq!(boundary_invariants(2.0, 2.0, 2.0, 3.0).as_array(), [10.0, 10.0, 10.0, 117.0]);
        assert_eq!(interior_invariants(1.0, 1.0, 1.0, 1.0, 1.0, 1.0).as_array(), [0.0, 0.0, 0.0, 0.0]);
        assert_eq!(tracepoly_residual(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0), 20.0);
    }

    #[test]
    fn bars_and_flags() {
        let t = FhsTraces::with_bars(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0);
        assert_eq!(t.xb, -3.0);
        assert!(!t.is_geometric());
        let t = FhsTraces::with_bars(1.3, 1.7, 2.1, 1.1, 3.0, 4.0, 5.0);
        assert!(check_basic_identity(&t).abs() < 1e-12);
        let c = t.check_consistency();
        assert!(c.slots[..3].iter().all(|s| s.abs() < 1e-12));
        let mut p = t;
        p.xb += 0.1;
        assert!((check_basic_identity(&p) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn half_trace_root() {
        let x = counterexample_half_trace();
        assert!((x - 6.984325132).abs() < 1e-9);
        assert!((2.0 * x.powi(3) - 3.0 * x * x - 60.0 * x - 116.0).abs() < 1e-10);
    }

    #[test]
    fn counterexample_data() {
        let (m1, m2) = counterexample_pair();
        for m in [m1, m2] {
            assert!(m.boundary().max_diff(&Invariant4 { f1: 10.0, f2: 10.0, f3: 10.0, f4: 117.0 }) < 1e-9);
            assert!(m.interior().max_diff(&Invariant4 { f1: 10.0, f2: 10.0, f3: 10.0, f4: 117.0 }) < 1e-9);
            assert!(m.check_consistency().max_residual() < 1e-9);
            assert!(m.is_geometric());
        }
        assert!((m1.a - m2.a).abs() > 0.9);
    }

    #[test]
    fn symmetric_solvers() {
        let s = solve_boundary_symmetric(&boundary_invariants(1.0, 1.0, 1.0, 1.0), SymmetricCase::AllEqual);
        assert_eq!(s.solutions, vec![[1.0; 4]]);
        let s = solve_boundary_symmetric(&boundary_invariants(1.0, 1.0, 1.0, 1.0), SymmetricCase::TwoPairs);
        assert_eq!(s.solutions.len(), 1);
        let f = Invariant4 { f1: 5.0, f2: 4.0, f3: 4.0, f4: 26.0 };
        let s = solve_boundary_symmetric(&f, SymmetricCase::TwoPairs);
        assert_eq!(s.solutions.len(), 2);
        assert!((s.solutions[0][0] - 1.0).abs() < 1e-12 && (s.solutions[0][1] - 2.0).abs() < 1e-12);
        let bad = Invariant4 { f1: 2.0, f2: 3.0, f3: 2.0, f4: 8.0 };
        let s = solve_boundary_symmetric(&bad, SymmetricCase::AllEqual);
        assert!(s.solutions.is_empty() && s.consistency_residual > 0.1);
    }

    #[test]
    fn three_equal_recovers_both_surfaces() {
        let f = Invariant4 { f1: 10.0, f2: 10.0, f3: 10.0, f4: 117.0 };
        let s = solve_boundary_symmetric(&f, SymmetricCase::ThreeEqual);
        let r = (3.5 - 6f64.sqrt()).sqrt();
        assert!(s.solutions.iter().any(|v| (v[0] - 2.0).abs() < 1e-12 && (v[3] - 3.0).abs() < 1e-12));
        assert!(s.solutions.iter().any(|v| (v[0] - r).abs() < 1e-12));
    }

    #[test]
    fn general_solver_finds_distinct_data() {
        let f = boundary_invariants(1.2, 1.5, 2.5, 1.9);
        let g = solve_boundary_general(&f, 12);
        assert!(!g.solutions.is_empty());
        for s in &g.solutions {
            assert!(boundary_invariants(s[0], s[1], s[2], s[3]).max_diff(&f) < 1e-8);
        }
    }

    #[test]
    fn resultant_small_case() {
        let check = resultant_check(&ExactInvariant4::from_integers([2, 1, 1, 1])).unwrap();
        assert_eq!(check.expected_leading, rat(20736));
        assert_eq!(check.degree_in_d(), Some(28));
        assert_eq!(check.degree_in_c(), Some(28));
        assert!(check.holds());
        assert!(matches!(
            resultant_check(&ExactInvariant4::from_integers([1, 1, 2, 3])),
            Err(Error::Degenerate(_))
        ));
    }
}
