//! Simple length spectra of one-holed tori.
//!
//! Enumeration walks the Farey tree of slopes. Each tree node is an edge
//! `(u, v)` of the Farey tessellation together with the vertex `u − v` on its
//! far side; the node produces the new vertex `u + v` with trace
//! `tr u · tr v − tr(u − v)`. Once a new trace exceeds the bound and is at
//! least both parent traces, every descendant is larger still (all traces
//! exceed 2), so the subtree is pruned.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::curves::{
    dehn_twist, det, intersection_number, isometry_orbit, orbit_representatives,
    trace_of_slope_f64, trace_polynomial, Slope, SlopeMap, TracePolynomial,
};
use crate::error::{Error, Result};
use crate::fricke::{length_of_trace, trace_from_length, Length, Trace};
use crate::roots::{bisect, first_sign_change};
use crate::space::{leaf_coordinates, leaf_point, symmetric_family, FrickePoint, TeichSlice};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub slope: Slope,
    pub trace: Trace,
    pub length: Length,
}

/// Slopes whose lengths agree up to a tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplicityClass {
    /// Shortest length in the class.
    pub length: Length,
    pub trace: Trace,
    pub tolerance: f64,
    pub members: Vec<Slope>,
}

impl MultiplicityClass {
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }
}

pub const DEFAULT_DEPTH_CAP: usize = 64;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Relative slack on the trace bound so that boundary values survive rounding.
const BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
struct Node {
    u: (i64, i64),
    v: (i64, i64),
    tu: f64,
    tv: f64,
    t_far: f64,
    depth: usize,
}

fn entry(slope: Slope, trace: f64) -> SpectrumEntry {
    SpectrumEntry { slope, trace: Trace(trace), length: Length(length_of_trace(trace)) }
}

fn walk_subtree(root: Node, bound: f64, depth_cap: usize) -> Result<Vec<(Slope, f64)>> {
    let mut out = Vec::new();
    let mut stack = vec![root];
    while let Some(n) = stack.pop() {
        let w = (n.u.0 + n.v.0, n.u.1 + n.v.1);
        let tw = n.tu * n.tv - n.t_far;
        if tw <= bound {
            out.push((Slope::new(w.0, w.1)?, tw));
        }
        let monotone = !(tw <= n.tu.max(n.tv));
        if tw > bound && monotone || tw.is_nan() {
            continue;
        }
        if n.depth >= depth_cap {
            return Err(Error::DepthCap(depth_cap));
        }
        stack.push(Node { u: n.u, v: w, tu: n.tu, tv: tw, t_far: n.tv, depth: n.depth + 1 });
        stack.push(Node { u: w, v: n.v, tu: tw, tv: n.tv, t_far: n.tu, depth: n.depth + 1 });
    }
    Ok(out)
}

/// Every simple closed curve with trace at most `max_trace`, sorted by length.
pub fn enumerate_by_trace(point: &FrickePoint, max_trace: f64, depth_cap: usize) -> Result<Vec<SpectrumEntry>> {
    let v = point.validate();
    if let Some(e) = v.violation {
        return Err(Error::InvalidPoint(e.to_string()));
    }
    let bound = max_trace * (1.0 + BOUND_SLACK);
    let (x, y, z) = (point.x, point.y, point.z);
    let mut found = Vec::new();
    if x <= bound {
        found.push((Slope::X, x));
    }
    if y <= bound {
        found.push((Slope::Y, y));
    }
    // Edge (1/0, 0/1): one side adds 1/1 (far vertex 1/-1), the other adds 1/-1.
    let positive = Node { u: (1, 0), v: (0, 1), tu: x, tv: y, t_far: x * y - z, depth: 1 };
    let negative = Node { u: (1, 0), v: (0, -1), tu: x, tv: y, t_far: z, depth: 1 };
    let (a, b) = rayon::join(
        || walk_subtree(positive, bound, depth_cap),
        || walk_subtree(negative, bound, depth_cap),
    );
    found.extend(a?);
    found.extend(b?);
    let mut entries: Vec<SpectrumEntry> = found.into_iter().map(|(s, t)| entry(s, t)).collect();
    sort_entries(&mut entries);
    Ok(entries)
}

fn sort_entries(entries: &mut [SpectrumEntry]) {
    entries.sort_by(|a, b| {
        a.length
            .0
            .total_cmp(&b.length.0)
            .then_with(|| a.slope.cmp(&b.slope))
    });
}

/// Simple closed geodesics of length at most `l_max`, each unoriented curve once.
pub fn enumerate_simple(point: &FrickePoint, l_max: Length) -> Result<Vec<SpectrumEntry>> {
    let t = trace_from_length(l_max)?;
    enumerate_by_trace(point, t.0, DEFAULT_DEPTH_CAP)
}

/// Single-linkage grouping of a sorted spectrum by length gaps `<= tol`.
pub fn group_by_length(entries: &[SpectrumEntry], tol: f64) -> Vec<MultiplicityClass> {
    let mut classes: Vec<MultiplicityClass> = Vec::new();
    let mut prev_len = f64::NAN;
    for e in entries {
        let joins = classes.last().is_some() && (e.length.0 - prev_len).abs() <= tol;
        if joins {
            classes.last_mut().expect("checked").members.push(e.slope);
        } else {
            classes.push(MultiplicityClass {
                length: e.length,
                trace: e.trace,
                tolerance: tol,
                members: vec![e.slope],
            });
        }
        prev_len = e.length.0;
    }
    for c in &mut classes {
        c.members.sort();
    }
    classes
}

pub fn multiplicity_histogram(point: &FrickePoint, l_max: Length, tol: f64) -> Result<Vec<MultiplicityClass>> {
    if !(tol >= 0.0) {
        return Err(Error::domain("tolerance must be nonnegative"));
    }
    Ok(group_by_length(&enumerate_simple(point, l_max)?, tol))
}

pub fn multiplicity_histogram_by_trace(point: &FrickePoint, max_trace: f64, tol: f64) -> Result<Vec<MultiplicityClass>> {
    if !(tol >= 0.0) {
        return Err(Error::domain("tolerance must be nonnegative"));
    }
    Ok(group_by_length(&enumerate_by_trace(point, max_trace, DEFAULT_DEPTH_CAP)?, tol))
}

fn traces_agree(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

/// Isometries of `point` acting on slopes, modulo the elliptic involution.
///
/// A map `φ ∈ GL(2,Z)` is an isometry exactly when it preserves the traces of
/// `1/0`, `0/1` and `1/1`; candidates for `φ(1/0)` and `φ(0/1)` are read off the
/// spectrum up to the largest coordinate trace.
pub fn point_isometries(point: &FrickePoint, rel_tol: f64) -> Result<Vec<SlopeMap>> {
    let top = point.x.max(point.y).max(point.z) * (1.0 + rel_tol.max(BOUND_SLACK));
    let spectrum = enumerate_by_trace(point, top, DEFAULT_DEPTH_CAP)?;
    let with_trace = |t: f64| -> Vec<Slope> {
        spectrum
            .iter()
            .filter(|e| traces_agree(e.trace.0, t, rel_tol))
            .map(|e| e.slope)
            .collect()
    };
    let (us, vs) = (with_trace(point.x), with_trace(point.y));
    let mut maps = Vec::new();
    for &u in &us {
        for &v in &vs {
            let (uv, vv) = (u.vector(), v.vector());
            if det(uv, vv).abs() != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                let v_signed = (sign * vv.0, sign * vv.1);
                let w = Slope::new(uv.0 + v_signed.0, uv.1 + v_signed.1)?;
                if traces_agree(point.trace(w), point.z, rel_tol) {
                    maps.push(SlopeMap::from_columns(uv, v_signed));
                }
            }
        }
    }
    maps.sort();
    maps.dedup();
    Ok(maps)
}

/// Orbit of `s` under a set of slope maps (assumed to form a group).
pub fn orbit_of(s: Slope, group: &[SlopeMap]) -> Result<BTreeSet<Slope>> {
    group.iter().map(|g| g.apply(s)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolatingPair {
    pub first: Slope,
    pub second: Slope,
    pub length_first: f64,
    pub length_second: f64,
}

/// Pairs of equal-length (within `tol`) simple geodesics not exchanged by any
/// isometry of `point`. Empty means the Markoff isometry property holds up to `l_max`.
pub fn check_markoff_property(point: &FrickePoint, l_max: Length, tol: f64) -> Result<Vec<ViolatingPair>> {
    let t = match trace_from_length(l_max) {
        Ok(t) => t.0,
        Err(_) => return Ok(Vec::new()),
    };
    check_markoff_property_by_trace(point, t, tol)
}

pub fn check_markoff_property_by_trace(point: &FrickePoint, max_trace: f64, tol: f64) -> Result<Vec<ViolatingPair>> {
    let entries = enumerate_by_trace(point, max_trace, DEFAULT_DEPTH_CAP)?;
    let classes = group_by_length(&entries, tol);
    if classes.iter().all(|c| c.members.len() < 2) {
        return Ok(Vec::new());
    }
    let group = point_isometries(point, 1e-9)?;
    let length_of = |s: Slope| {
        entries
            .iter()
            .find(|e| e.slope == s)
            .map(|e| e.length.0)
            .unwrap_or(f64::NAN)
    };
    let mut out = Vec::new();
    for c in classes.iter().filter(|c| c.members.len() > 1) {
        for (i, &a) in c.members.iter().enumerate() {
            let orbit = orbit_of(a, &group)?;
            for &b in &c.members[i + 1..] {
                if !orbit.contains(&b) {
                    out.push(ViolatingPair {
                        first: a,
                        second: b,
                        length_first: length_of(a),
                        length_second: length_of(b),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Length of the geodesic with slope `s`; errors when the trace overflows binary64.
pub fn slope_length(point: &FrickePoint, s: Slope) -> Result<f64> {
    let t = point.trace(s);
    if !t.is_finite() {
        return Err(Error::Overflow("slope trace"));
    }
    if !(t > 2.0) {
        return Err(Error::InvalidPoint(format!("trace of {s} is {t}, not greater than 2")));
    }
    Ok(length_of_trace(t))
}

/// Lengths of `T_α^k(α₀)` for `k = 0..=k_max`.
pub fn twist_sequence(point: &FrickePoint, alpha: Slope, alpha0: Slope, k_max: u32) -> Result<Vec<Length>> {
    if intersection_number(alpha, alpha0) == 0 {
        return Err(Error::Disjoint(alpha, alpha0));
    }
    (0..=k_max as i64)
        .map(|k| slope_length(point, dehn_twist(alpha0, alpha, k)?).map(Length))
        .collect()
}

/// `|ℓ(α_k) − k·i(α,α₀)·ℓ(α)| − ℓ(α₀)`; nonpositive when the twist bound holds.
pub fn twist_bound_excess(point: &FrickePoint, alpha: Slope, alpha0: Slope, k: i64) -> Result<f64> {
    let i = intersection_number(alpha, alpha0);
    if i == 0 {
        return Err(Error::Disjoint(alpha, alpha0));
    }
    let lk = slope_length(point, dehn_twist(alpha0, alpha, k)?)?;
    let la = slope_length(point, alpha)?;
    let l0 = slope_length(point, alpha0)?;
    Ok((lk - (k as f64) * (i as f64) * la).abs() - l0)
}

/// Counting estimate of a length ratio from twist sequences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioEstimate {
    /// `#{k ≥ 0 : ℓ(β_k) ≤ ℓ(α_i)}`.
    pub count: u64,
    pub i: u64,
    pub estimate: f64,
    /// `i(α,α₀) ℓ(α) / (i(β,β₀) ℓ(β))`, which is `ℓ(α)/ℓ(β)` for once-meeting companions.
    pub target: f64,
    /// `((ℓ(α₀) + ℓ(β₀)) / (i(β,β₀) ℓ(β)) + 1) / i`; the factor `i(β,β₀)` is 2 for
    /// companions meeting twice.
    pub bound: f64,
}

impl RatioEstimate {
    pub fn error(&self) -> f64 {
        (self.estimate - self.target).abs()
    }

    pub fn within_bound(&self) -> bool {
        self.error() <= self.bound
    }
}

pub fn ratio_estimate(
    point: &FrickePoint,
    alpha: Slope,
    beta: Slope,
    alpha0: Slope,
    beta0: Slope,
    i: i64,
) -> Result<RatioEstimate> {
    if i <= 0 {
        return Err(Error::domain(format!("iteration count must be positive, got {i}")));
    }
    let ia = intersection_number(alpha, alpha0);
    let ib = intersection_number(beta, beta0);
    if ia == 0 {
        return Err(Error::Disjoint(alpha, alpha0));
    }
    if ib == 0 {
        return Err(Error::Disjoint(beta, beta0));
    }
    let la = slope_length(point, alpha)?;
    let lb = slope_length(point, beta)?;
    let la0 = slope_length(point, alpha0)?;
    let lb0 = slope_length(point, beta0)?;
    let threshold = slope_length(point, dehn_twist(alpha0, alpha, i)?)?;
    // Past k with k·i(β,β₀)·ℓ(β) − ℓ(β₀) > threshold no β_k can qualify.
    let step = ib as f64 * lb;
    let k_stop = ((threshold + lb0) / step).ceil() as i64 + 1;
    let mut count = 0u64;
    for k in 0..=k_stop {
        if slope_length(point, dehn_twist(beta0, beta, k)?)? <= threshold {
            count += 1;
        }
    }
    Ok(RatioEstimate {
        count,
        i: i as u64,
        estimate: count as f64 / i as f64,
        target: (ia as f64 * la) / (ib as f64 * lb),
        bound: ((la0 + lb0) / step + 1.0) / i as f64,
    })
}

/// A pair whose length order differs between two points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderReversal {
    pub alpha: Slope,
    pub beta: Slope,
    /// `ℓ₁(α), ℓ₁(β)` with `ℓ₁(α) < ℓ₁(β)`.
    pub lengths_first: (f64, f64),
    /// `ℓ₂(α), ℓ₂(β)` with `ℓ₂(α) > ℓ₂(β)`.
    pub lengths_second: (f64, f64),
    /// `min(ℓ₁(β) − ℓ₁(α), ℓ₂(α) − ℓ₂(β))`.
    pub margin: f64,
}

impl OrderReversal {
    /// Re-evaluates both lengths at both points.
    pub fn verify(&self, m1: &FrickePoint, m2: &FrickePoint) -> bool {
        let (Ok(a1), Ok(b1), Ok(a2), Ok(b2)) = (
            slope_length(m1, self.alpha),
            slope_length(m1, self.beta),
            slope_length(m2, self.alpha),
            slope_length(m2, self.beta),
        ) else {
            return false;
        };
        a1 < b1 && a2 > b2
    }
}

/// Searches the simple curves of length `<= l_max` on either point for the
/// pair with the largest strict reversal of length order.
pub fn find_order_reversal(m1: &FrickePoint, m2: &FrickePoint, l_max: Length) -> Result<Option<OrderReversal>> {
    let t = trace_from_length(l_max)?.0;
    let mut slopes: Vec<Slope> = enumerate_by_trace(m1, t, DEFAULT_DEPTH_CAP)?
        .into_iter()
        .chain(enumerate_by_trace(m2, t, DEFAULT_DEPTH_CAP)?)
        .map(|e| e.slope)
        .collect();
    slopes.sort();
    slopes.dedup();
    let lens: Vec<(f64, f64)> = slopes
        .iter()
        .map(|&s| Ok((slope_length(m1, s)?, slope_length(m2, s)?)))
        .collect::<Result<_>>()?;
    let mut best: Option<OrderReversal> = None;
    for (i, &a) in slopes.iter().enumerate() {
        for (j, &b) in slopes.iter().enumerate() {
            if i == j {
                continue;
            }
            let (a1, a2) = lens[i];
            let (b1, b2) = lens[j];
            let margin = (b1 - a1).min(a2 - b2);
            if margin > 0.0 && best.as_ref().is_none_or(|r| margin > r.margin) {
                best = Some(OrderReversal {
                    alpha: a,
                    beta: b,
                    lengths_first: (a1, b1),
                    lengths_second: (a2, b2),
                    margin,
                });
            }
        }
    }
    Ok(best)
}

/// Straight segment between two tori in `(ε, tr 1/0, θ)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlicePath {
    start: (f64, f64, f64),
    end: (f64, f64, f64),
}

impl SlicePath {
    pub fn between(a: &FrickePoint, b: &FrickePoint) -> Result<Self> {
        let la = leaf_coordinates(a)?;
        let lb = leaf_coordinates(b)?;
        Ok(SlicePath {
            start: (la.slice.epsilon(), la.x, la.theta),
            end: (lb.slice.epsilon(), lb.x, lb.theta),
        })
    }

    pub fn at(&self, s: f64) -> Result<FrickePoint> {
        let lerp = |a: f64, b: f64| a + (b - a) * s;
        let eps = lerp(self.start.0, self.end.0);
        let slice = TeichSlice::new(eps.max(0.0))?;
        leaf_point(&slice, Trace(lerp(self.start.1, self.end.1)), lerp(self.start.2, self.end.2))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathCrossing {
    pub s: f64,
    pub point: FrickePoint,
    /// `tr α − tr β` at the returned point.
    pub residual: f64,
}

/// Intermediate-value search for a point on `path` where `α` and `β` have
/// equal length: scans `grid` subintervals for a sign change of
/// `tr α − tr β`, then bisects until `|tr α − tr β| <= tol`.
pub fn equal_length_on_path(path: &SlicePath, alpha: Slope, beta: Slope, tol: f64, grid: usize) -> Result<Option<PathCrossing>> {
    let diff = |s: f64| -> f64 {
        match path.at(s) {
            Ok(p) => p.trace(alpha) - p.trace(beta),
            Err(_) => f64::NAN,
        }
    };
    let Some((lo, hi)) = first_sign_change(diff, 0.0, 1.0, grid) else {
        return Ok(None);
    };
    let s = bisect(diff, lo, hi, 0.0, tol);
    let point = path.at(s)?;
    Ok(Some(PathCrossing { s, point, residual: point.trace(alpha) - point.trace(beta) }))
}

/// A parameter `t*` of the symmetric family where two slope orbits have equal trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualTraceParameter {
    pub first: Slope,
    pub second: Slope,
    pub t: f64,
    /// `|P₁(t*) − P₂(t*)|` evaluated through the trace recursion.
    pub residual: f64,
    /// `residual / P₁(t*)`.
    pub relative_residual: f64,
    /// Union of both orbits: slopes sharing the common trace at `t*`.
    pub equal_slopes: BTreeSet<Slope>,
}

pub const DEFAULT_PARAMETER_GRID: usize = 1000;

/// Smallest `t*` in `[t_lo, t_hi]` where the trace polynomials of `s1` and
/// `s2` agree, located by a grid scan and bisected to `1e-12`.
pub fn find_equal_trace_parameter(s1: Slope, s2: Slope, t_lo: f64, t_hi: f64, grid: usize) -> Result<Option<EqualTraceParameter>> {
    let o1 = isometry_orbit(s1);
    if o1.contains(&s2) {
        return Err(Error::SameOrbit(s1, s2));
    }
    let (p1, p2) = (trace_polynomial(s1), trace_polynomial(s2));
    if p1 == p2 {
        return Err(Error::SameOrbit(s1, s2));
    }
    equal_parameter_between(s1, &p1, o1, s2, &p2, t_lo, t_hi, grid)
}

#[allow(clippy::too_many_arguments)]
fn equal_parameter_between(
    s1: Slope,
    _p1: &TracePolynomial,
    o1: BTreeSet<Slope>,
    s2: Slope,
    _p2: &TracePolynomial,
    t_lo: f64,
    t_hi: f64,
    grid: usize,
) -> Result<Option<EqualTraceParameter>> {
    if !(t_lo < t_hi) || !t_lo.is_finite() || !t_hi.is_finite() {
        return Err(Error::domain(format!("bad parameter range [{t_lo}, {t_hi}]")));
    }
    let diff = |t: f64| trace_of_slope_f64(t, t, t, s1) - trace_of_slope_f64(t, t, t, s2);
    let Some((lo, hi)) = first_sign_change(diff, t_lo, t_hi, grid) else {
        return Ok(None);
    };
    let t = bisect(diff, lo, hi, 1e-12, 0.0);
    let v1 = trace_of_slope_f64(t, t, t, s1);
    let residual = diff(t).abs();
    let mut equal_slopes = o1;
    equal_slopes.extend(isometry_orbit(s2));
    Ok(Some(EqualTraceParameter {
        first: s1,
        second: s2,
        t,
        residual,
        relative_residual: residual / v1.abs().max(1.0),
        equal_slopes,
    }))
}

/// Scans all pairs of orbit representatives with `|p| + |q| <= cap` for
/// crossings of their trace polynomials in `[t_lo, t_hi]`. Results are sorted
/// by `t*`.
pub fn violation_search(cap: u64, t_lo: f64, t_hi: f64, grid: usize) -> Result<Vec<EqualTraceParameter>> {
    if !(t_lo >= 3.0) {
        return Err(Error::domain("the symmetric family starts at t = 3"));
    }
    let mut reps: Vec<(Slope, TracePolynomial)> = orbit_representatives(cap)
        .into_iter()
        .map(|s| (s, trace_polynomial(s)))
        .collect();
    // Drop representatives whose polynomial already appeared.
    let mut seen = std::collections::HashSet::new();
    reps.retain(|(_, p)| seen.insert(p.clone()));
    let pairs: Vec<(usize, usize)> = (0..reps.len())
        .flat_map(|i| (i + 1..reps.len()).map(move |j| (i, j)))
        .collect();
    let found: Vec<Option<EqualTraceParameter>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (s1, p1) = &reps[i];
            let (s2, p2) = &reps[j];
            equal_parameter_between(*s1, p1, isometry_orbit(*s1), *s2, p2, t_lo, t_hi, grid)
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<EqualTraceParameter> = found.into_iter().flatten().collect();
    out.sort_by(|a, b| a.t.total_cmp(&b.t).then_with(|| (a.first, a.second).cmp(&(b.first, b.second))));
    Ok(out)
}

/// The symmetric torus at a crossing parameter.
pub fn crossing_point(found: &EqualTraceParameter) -> Result<FrickePoint> {
    symmetric_family(found.t)
}
