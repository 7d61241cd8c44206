//! Equal-length loci `E(α, β) = {ℓ(α) = ℓ(β)}` inside a fixed-boundary slice.
//!
//! The slice is foliated by the leaves `tr γ = x` where `γ` is a companion of
//! the pair. On each leaf `ℓ(α) − ℓ(β)` is strictly monotone in the leaf
//! coordinate and changes sign exactly once, so the locus meets every leaf in
//! one point.

use rayon::prelude::*;
use serde::Serialize;

use crate::curves::{complete_basis, det, intersection_number, Slope};
use crate::error::{Error, Result};
use crate::fricke::{length_of_trace, Trace};
use crate::roots::bisect;
use crate::space::{leaf_point, project_to_relation, standard_from_basis, trace_in_basis, FrickePoint, TeichSlice};

pub const DEFAULT_THETA_CAP: f64 = 512.0;
pub const DEFAULT_LOCUS_TOLERANCE: f64 = 1e-10;

/// The two companions `γ, γ′`: primitive parts of `[α] − [β]` and `[α] + [β]`,
/// the lexicographically smaller normalized slope first.
pub fn companion_curves(alpha: Slope, beta: Slope) -> Result<(Slope, Slope)> {
    if alpha == beta {
        return Err(Error::domain(format!("companions need distinct slopes, got {alpha} twice")));
    }
    let (a, b) = (alpha.vector(), beta.vector());
    let diff = Slope::reduced(
        a.0.checked_sub(b.0).ok_or(Error::Overflow("companion"))?,
        a.1.checked_sub(b.1).ok_or(Error::Overflow("companion"))?,
    )?
    .0;
    let sum = Slope::reduced(
        a.0.checked_add(b.0).ok_or(Error::Overflow("companion"))?,
        a.1.checked_add(b.1).ok_or(Error::Overflow("companion"))?,
    )?
    .0;
    let (gamma, gamma_prime) = if diff <= sum { (diff, sum) } else { (sum, diff) };
    debug_assert_eq!(intersection_number(alpha, gamma), intersection_number(beta, gamma));
    debug_assert_eq!(intersection_number(alpha, gamma_prime), intersection_number(beta, gamma_prime));
    Ok((gamma, gamma_prime))
}

/// A locus point on the leaf `tr γ = x_gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocusPoint {
    pub x_gamma: f64,
    pub theta: f64,
    /// The torus in the standard marking.
    pub point: FrickePoint,
    /// `ℓ(α) − ℓ(β)`, evaluated in the leaf frame.
    pub residual: f64,
}

/// Leaf machinery for a fixed pair: the basis `(γ, η)` with `det(γ, η) = 1`.
#[derive(Debug, Clone, Copy)]
pub struct LeafFrame {
    pub slice: TeichSlice,
    pub alpha: Slope,
    pub beta: Slope,
    pub gamma: Slope,
    pub gamma_prime: Slope,
    eta: (i64, i64),
}

impl LeafFrame {
    pub fn new(slice: TeichSlice, alpha: Slope, beta: Slope) -> Result<Self> {
        let (gamma, gamma_prime) = companion_curves(alpha, beta)?;
        let eta = complete_basis(gamma);
        debug_assert_eq!(det(gamma.vector(), eta), 1);
        Ok(LeafFrame { slice, alpha, beta, gamma, gamma_prime, eta })
    }

    /// The point with `tr γ = x` and leaf coordinate `θ`, marked in `(γ, η)`.
    /// Far from `θ = 0` this triple is badly conditioned; prefer
    /// [`Self::standard_point_at`] and [`Self::length_gap`].
    pub fn marked_point(&self, x: f64, theta: f64) -> Result<FrickePoint> {
        leaf_point(&self.slice, Trace(x), theta)
    }

    pub fn trace_of(&self, marked: &FrickePoint, s: Slope) -> Result<f64> {
        trace_in_basis(marked, self.gamma.vector(), self.eta, s)
    }

    pub fn standard_point(&self, marked: &FrickePoint) -> Result<FrickePoint> {
        standard_from_basis(marked, self.gamma.vector(), self.eta)
    }

    /// The same torus marked in `(γ, η + kγ)`, with `k` chosen so the leaf
    /// coordinate lies within half a twist of 0. Twisting along `γ` moves `θ`
    /// by exactly `arccosh(x/2)`, so the re-marking is exact, and a small `θ`
    /// keeps short traces free of the cancellation a skewed triple suffers.
    fn adapted(&self, x: f64, theta: f64) -> Result<(FrickePoint, (i64, i64))> {
        let shift = (0.5 * x).acosh();
        let k = (theta / shift).round();
        if !(k.abs() < 1e15) {
            return Err(Error::Overflow("leaf twist"));
        }
        let k = k as i64;
        let g = self.gamma.vector();
        let eta = (
            k.checked_mul(g.0).and_then(|v| v.checked_add(self.eta.0)).ok_or(Error::Overflow("leaf twist"))?,
            k.checked_mul(g.1).and_then(|v| v.checked_add(self.eta.1)).ok_or(Error::Overflow("leaf twist"))?,
        );
        let marked = leaf_point(&self.slice, Trace(x), theta - k as f64 * shift)?;
        Ok((marked, eta))
    }

    /// `ℓ(α) − ℓ(β)` at leaf coordinates `(x, θ)`; NaN when traces overflow.
    pub fn length_gap(&self, x: f64, theta: f64) -> f64 {
        let Ok((m, eta)) = self.adapted(x, theta) else {
            return f64::NAN;
        };
        let g = self.gamma.vector();
        match (trace_in_basis(&m, g, eta, self.alpha), trace_in_basis(&m, g, eta, self.beta)) {
            (Ok(ta), Ok(tb)) if ta.is_finite() && tb.is_finite() => length_of_trace(ta) - length_of_trace(tb),
            _ => f64::NAN,
        }
    }

    /// The torus at leaf coordinates `(x, θ)` in the standard marking.
    pub fn standard_point_at(&self, x: f64, theta: f64) -> Result<FrickePoint> {
        let (m, eta) = self.adapted(x, theta)?;
        let p = standard_from_basis(&m, self.gamma.vector(), eta)?;
        Ok(project_to_relation(p, self.slice.relation()))
    }

    /// Root of [`Self::length_gap`] on the leaf `tr γ = x`.
    pub fn solve(&self, x: f64, tol: f64, theta_cap: f64) -> Result<LocusPoint> {
        if !(x > 2.0) || !x.is_finite() {
            return Err(Error::domain(format!("leaf trace must exceed 2, got {x}")));
        }
        if !(tol > 0.0) {
            return Err(Error::domain("tolerance must be positive"));
        }
        let f = |t: f64| self.length_gap(x, t);
        let (mut lo, mut hi) = (-1.0f64, 1.0f64);
        loop {
            let (flo, fhi) = (f(lo), f(hi));
            if flo.is_nan() || fhi.is_nan() {
                return Err(Error::BracketNotFound { cap: hi });
            }
            if flo == 0.0 || fhi == 0.0 || flo.signum() != fhi.signum() {
                break;
            }
            if hi >= theta_cap {
                return Err(Error::BracketNotFound { cap: theta_cap });
            }
            lo *= 2.0;
            hi *= 2.0;
        }
        let theta = bisect(f, lo, hi, 0.0, 0.25 * tol);
        let point = self.standard_point_at(x, theta)?;
        // Measured in the (γ, η) frame: the standard-basis triple can be badly
        // conditioned (|relation error| ~ xyz·ε), so re-deriving lengths from it
        // would report rounding rather than the solution's accuracy.
        let residual = self.length_gap(x, theta);
        Ok(LocusPoint { x_gamma: x, theta, point, residual })
    }
}

/// The unique torus on the leaf `ℓ(γ) = const` (given as `tr γ`) where `α`
/// and `β` have equal length.
pub fn locus_point_on_leaf(slice: &TeichSlice, alpha: Slope, beta: Slope, x_gamma: Trace, tol: f64) -> Result<LocusPoint> {
    LeafFrame::new(*slice, alpha, beta)?.solve(x_gamma.0, tol, DEFAULT_THETA_CAP)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocusPolyline {
    pub slice: TeichSlice,
    pub gamma: Slope,
    pub gamma_prime: Slope,
    pub points: Vec<LocusPoint>,
}

impl LocusPolyline {
    /// `ℓ(γ) / ℓ(γ′)` at each point.
    pub fn ratios(&self) -> Vec<f64> {
        self.points
            .iter()
            .map(|p| length_of_trace(p.x_gamma) / length_of_trace(p.point.trace(self.gamma_prime)))
            .collect()
    }

    /// Whether `ℓ(γ)/ℓ(γ′)` decreases strictly as `tr γ` decreases toward 2.
    pub fn ratio_monotone(&self) -> bool {
        let r = self.ratios();
        let increasing_x = self.points.windows(2).all(|w| w[0].x_gamma < w[1].x_gamma);
        r.windows(2).all(|w| if increasing_x { w[0] < w[1] } else { w[0] > w[1] })
    }
}

/// One locus point per grid leaf, in grid order.
pub fn trace_locus(slice: &TeichSlice, alpha: Slope, beta: Slope, x_grid: &[f64], tol: f64) -> Result<LocusPolyline> {
    if x_grid.is_empty() {
        return Err(Error::domain("empty leaf grid"));
    }
    if let Some(&bad) = x_grid.iter().find(|&&x| !(x > 2.0) || !x.is_finite()) {
        return Err(Error::domain(format!("grid value {bad} is not a trace above 2")));
    }
    let up = x_grid.windows(2).all(|w| w[0] < w[1]);
    let down = x_grid.windows(2).all(|w| w[0] > w[1]);
    if !(up || down) {
        return Err(Error::domain("leaf grid must be strictly monotone"));
    }
    let frame = LeafFrame::new(*slice, alpha, beta)?;
    let points = x_grid
        .par_iter()
        .map(|&x| {
            frame
                .solve(x, tol, DEFAULT_THETA_CAP)
                .map_err(|e| Error::LeafFailure { grid_value: x, source: Box::new(e) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LocusPolyline { slice: *slice, gamma: frame.gamma, gamma_prime: frame.gamma_prime, points })
}

/// `n` leaf traces with `x − 2` geometric from `lo − 2` to `hi − 2`.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 2.0 && hi > lo && hi.is_finite()) || n == 0 {
        return Err(Error::domain(format!("bad grid {lo}..{hi} with {n} points")));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = ((lo - 2.0).ln(), (hi - 2.0).ln());
    Ok((0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                2.0 + (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect())
}

pub fn default_grid() -> Vec<f64> {
    geometric_grid(2.05, 50.0, 20).expect("valid constants")
}
