//! Teichmüller space of one-holed tori in trace coordinates.
//!
//! A point is a triple `(x, y, z) = (tr 1/0, tr 0/1, tr 1/1)` with all traces
//! above 2 and relation value `R = x² + y² + z² − xyz ≤ 0`. The boundary
//! length `ε` satisfies `2 cosh(ε/2) = 2 − R`, so fixing `ε` cuts out a slice,
//! and fixing `x` inside a slice leaves a hyperbola (a twist leaf) that is
//! parameterized here by a real coordinate `θ`.

use std::fmt;

use serde::Serialize;

use crate::curves::{det, intersection_number, trace_of_slope_f64, Slope};
use crate::error::{Error, Result};
use crate::fricke::{commutator_trace, Trace};

/// Marked one-holed torus in Fricke trace coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrickePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Why a triple fails to be a point of Teichmüller space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Violation {
    NotFinite,
    /// A coordinate trace is `<= 2`; `coordinate` is 0, 1 or 2.
    TraceAtMostTwo { coordinate: usize, value: f64 },
    /// `x² + y² + z² − xyz > 0`.
    PositiveRelation { relation: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotFinite => write!(f, "coordinates must be finite"),
            Violation::TraceAtMostTwo { coordinate, value } => {
                let name = ["x", "y", "z"][*coordinate];
                write!(f, "{name} = {value} is not greater than 2")
            }
            Violation::PositiveRelation { relation } => {
                write!(f, "relation x²+y²+z²−xyz = {relation} is positive")
            }
        }
    }
}

/// Outcome of [`FrickePoint::validate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Validity {
    pub violation: Option<Violation>,
    /// Relation value clamped to zero when it lies within rounding of the cusp.
    pub relation: f64,
    pub cusped: bool,
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

/// Relative slack allowed on the sign of the relation value: rounding in
/// evaluating it, with room for a few operations of drift.
const RELATION_SLACK: f64 = 64.0 * f64::EPSILON;

impl FrickePoint {
    pub const MODULAR: FrickePoint = FrickePoint { x: 3.0, y: 3.0, z: 3.0 };

    /// Unchecked constructor; see [`FrickePoint::checked`].
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        FrickePoint { x, y, z }
    }

    pub fn checked(x: f64, y: f64, z: f64) -> Result<Self> {
        let p = FrickePoint { x, y, z };
        let v = p.validate();
        match v.violation {
            None => Ok(p),
            Some(e) => Err(Error::InvalidPoint(e.to_string())),
        }
    }

    /// `x² + y² + z² − xyz`, zero on the Markoff cubic.
    pub fn relation(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z - self.x * self.y * self.z
    }

    fn relation_scale(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z)
            .max((self.x * self.y * self.z).abs())
            .max(1.0)
    }

    pub fn validate(&self) -> Validity {
        let coords = [self.x, self.y, self.z];
        let raw = self.relation();
        let mut out = Validity { violation: None, relation: raw, cusped: false };
        if coords.iter().any(|c| !c.is_finite()) {
            out.violation = Some(Violation::NotFinite);
            return out;
        }
        if let Some((i, &v)) = coords.iter().enumerate().find(|(_, &c)| !(c > 2.0)) {
            out.violation = Some(Violation::TraceAtMostTwo { coordinate: i, value: v });
            return out;
        }
        let slack = RELATION_SLACK * self.relation_scale();
        if raw > slack {
            out.violation = Some(Violation::PositiveRelation { relation: raw });
            return out;
        }
        if raw.abs() <= slack {
            out.relation = 0.0;
            out.cusped = true;
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    pub fn trace(&self, s: Slope) -> f64 {
        trace_of_slope_f64(self.x, self.y, self.z, s)
    }

    pub fn commutator_trace(&self) -> f64 {
        commutator_trace(self.x, self.y, self.z)
    }

    /// Length `ε` of the boundary geodesic (0 for a cusp).
    pub fn boundary_length(&self) -> Result<f64> {
        let v = self.validate();
        if let Some(e) = v.violation {
            return Err(Error::InvalidPoint(e.to_string()));
        }
        Ok(boundary_length_of_relation(v.relation))
    }
}

impl fmt::Display for FrickePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// `ε` with `2 cosh(ε/2) = 2 − R`.
fn boundary_length_of_relation(r: f64) -> f64 {
    if r >= 0.0 {
        return 0.0;
    }
    // 2 − R = 2cosh(ε/2)  =>  cosh(ε/2) = 1 + (−R)/2
    let u = -0.5 * r;
    2.0 * (u + (u * (u + 2.0)).sqrt()).ln_1p()
}

pub fn validate(point: &FrickePoint) -> Validity {
    point.validate()
}

pub fn boundary_length(point: &FrickePoint) -> Result<f64> {
    point.boundary_length()
}

/// Tori with fixed boundary length `ε`; `relation = 2 − 2 cosh(ε/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TeichSlice {
    epsilon: f64,
    relation: f64,
}

impl TeichSlice {
    pub const CUSPED: TeichSlice = TeichSlice { epsilon: 0.0, relation: 0.0 };

    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon >= 0.0) || !epsilon.is_finite() {
            return Err(Error::domain(format!(
                "boundary length must be finite and nonnegative, got {epsilon}"
            )));
        }
        Ok(TeichSlice { epsilon, relation: 2.0 - 2.0 * (0.5 * epsilon).cosh() })
    }

    /// The slice containing `point`.
    pub fn of_point(point: &FrickePoint) -> Result<Self> {
        let v = point.validate();
        if let Some(e) = v.violation {
            return Err(Error::InvalidPoint(e.to_string()));
        }
        Ok(TeichSlice {
            epsilon: boundary_length_of_relation(v.relation),
            relation: v.relation,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn relation(&self) -> f64 {
        self.relation
    }

    /// Semi-axes `(√((x²−R)/(x−2)), √((x²−R)/(x+2)))` of the leaf hyperbola
    /// in the coordinates `u = (y+z)/2`, `w = (y−z)/2`.
    fn leaf_axes(&self, x: f64) -> (f64, f64) {
        let k = x * x - self.relation;
        ((k / (x - 2.0)).sqrt(), (k / (x + 2.0)).sqrt())
    }

    /// Smallest value of `y` (or `z`) on the leaf `tr(1/0) = x`.
    pub fn leaf_minimum(&self, x: f64) -> f64 {
        2.0 * ((x * x - self.relation) / (x * x - 4.0)).sqrt()
    }
}

/// A point on the leaf `tr(1/0) = x` of a slice, in leaf coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeafPoint {
    pub slice: TeichSlice,
    pub x: f64,
    pub theta: f64,
}

impl LeafPoint {
    pub fn point(&self) -> Result<FrickePoint> {
        leaf_point(&self.slice, Trace(self.x), self.theta)
    }
}

/// Decodes leaf coordinates: `y = u + w`, `z = u − w` with
/// `u = a cosh θ`, `w = b sinh θ` on the hyperbola `(x−2)u² − (x+2)w² = x² − R`.
pub fn leaf_point(slice: &TeichSlice, x: Trace, theta: f64) -> Result<FrickePoint> {
    let x = x.0;
    if !(x > 2.0) || !x.is_finite() {
        return Err(Error::domain(format!("leaf trace must exceed 2, got {x}")));
    }
    if !theta.is_finite() {
        return Err(Error::domain("leaf coordinate must be finite"));
    }
    let (a, b) = slice.leaf_axes(x);
    let (u, w) = (a * theta.cosh(), b * theta.sinh());
    // y z = u² − w² = a² + (a² − b²) sinh²θ, free of cancellation.
    let sh = theta.sinh();
    let yz = a * a + (a * a - b * b) * sh * sh;
    let (y, z) = if theta >= 0.0 {
        let y = u + w;
        (y, yz / y)
    } else {
        let z = u - w;
        (yz / z, z)
    };
    Ok(FrickePoint { x, y, z })
}

/// Inverse of [`leaf_point`]: the slice, leaf trace and `θ` of a valid point.
pub fn leaf_coordinates(point: &FrickePoint) -> Result<LeafPoint> {
    let slice = TeichSlice::of_point(point)?;
    let (_, b) = slice.leaf_axes(point.x);
    let w = 0.5 * (point.y - point.z);
    Ok(LeafPoint { slice, x: point.x, theta: (w / b).asinh() })
}

/// Re-marks `point` in the basis `(γ, γ′)`: returns `(tr γ, tr γ′, tr(γ+γ′))`
/// with `γ+γ′` the sum of the normalized representatives.
pub fn change_basis(point: &FrickePoint, gamma: Slope, gamma_prime: Slope) -> Result<FrickePoint> {
    let i = intersection_number(gamma, gamma_prime);
    if i != 1 {
        return Err(Error::NotUnimodular(gamma, gamma_prime, i));
    }
    let (g, h) = (gamma.vector(), gamma_prime.vector());
    let sum = Slope::new(g.0 + h.0, g.1 + h.1)?;
    Ok(FrickePoint {
        x: point.trace(gamma),
        y: point.trace(gamma_prime),
        z: point.trace(sum),
    })
}

/// Trace of the standard slope `s` on a point marked in the oriented basis `(u, v)`.
///
/// `marked` holds `(tr u, tr v, tr(u+v))`; `s` is expressed in `(u, v)` coordinates first.
pub(crate) fn trace_in_basis(marked: &FrickePoint, u: (i64, i64), v: (i64, i64), s: Slope) -> Result<f64> {
    let d = det(u, v);
    debug_assert!(d == 1 || d == -1);
    let sv = s.vector();
    // s = a u + b v  =>  a = det(s, v)/d, b = det(u, s)/d
    let a = det(sv, v) / d;
    let b = det(u, sv) / d;
    let a = i64::try_from(a).map_err(|_| Error::Overflow("basis change"))?;
    let b = i64::try_from(b).map_err(|_| Error::Overflow("basis change"))?;
    Ok(marked.trace(Slope::new(a, b)?))
}

/// Standard-basis triple of a point marked in the oriented basis `(u, v)`.
pub(crate) fn standard_from_basis(marked: &FrickePoint, u: (i64, i64), v: (i64, i64)) -> Result<FrickePoint> {
    Ok(FrickePoint {
        x: trace_in_basis(marked, u, v, Slope::X)?,
        y: trace_in_basis(marked, u, v, Slope::Y)?,
        z: trace_in_basis(marked, u, v, Slope::Z)?,
    })
}

/// Newton steps along the gradient of `x² + y² + z² − xyz` back onto the
/// level `relation`, removing rounding drift from a computed triple.
pub(crate) fn project_to_relation(point: FrickePoint, relation: f64) -> FrickePoint {
    let mut p = point;
    for _ in 0..3 {
        let r = p.relation() - relation;
        let g = [2.0 * p.x - p.y * p.z, 2.0 * p.y - p.x * p.z, 2.0 * p.z - p.x * p.y];
        let n2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
        if r == 0.0 || !(n2 > 0.0) || !n2.is_finite() {
            break;
        }
        let k = r / n2;
        p = FrickePoint { x: p.x - k * g[0], y: p.y - k * g[1], z: p.z - k * g[2] };
    }
    p
}

/// The symmetric torus `(t, t, t)`, `t ≥ 3`; `t = 3` is the modular torus.
pub fn symmetric_family(t: f64) -> Result<FrickePoint> {
    if !(t >= 3.0) || !t.is_finite() {
        return Err(Error::domain(format!("symmetric family needs t >= 3, got {t}")));
    }
    Ok(FrickePoint { x: t, y: t, z: t })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    #[test]
    fn validation() {
        let v = FrickePoint::new(3.0, 3.0, 3.0).validate();
        assert!(v.is_valid() && v.cusped);
        let v = FrickePoint::new(3.0, 3.0, 6.0).validate();
        assert!(v.is_valid() && v.cusped);
        // 9 + 9 + 9.61 − 27.9 < 0: a holed torus, not a violation.
        let v = FrickePoint::new(3.0, 3.0, 3.1).validate();
        assert!(v.is_valid() && !v.cusped);
        assert!((v.relation + 0.29).abs() < 1e-12);
        let v = FrickePoint::new(3.0, 3.0, 2.9).validate();
        assert!(matches!(v.violation, Some(Violation::PositiveRelation { .. })));
        let v = FrickePoint::new(3.0, 2.0, 3.0).validate();
        assert!(matches!(v.violation, Some(Violation::TraceAtMostTwo { coordinate: 1, .. })));
        let v = FrickePoint::new(3.0, 3.0, 6.5).validate();
        assert!(matches!(v.violation, Some(Violation::PositiveRelation { .. })));
        assert!(FrickePoint::new(f64::NAN, 3.0, 3.0).validate().violation == Some(Violation::NotFinite));
        assert!(FrickePoint::checked(3.0, 3.0, 2.0).is_err());
    }

    #[test]
    fn boundary_lengths() {
        assert_eq!(FrickePoint::new(3.0, 3.0, 3.0).boundary_length().unwrap(), 0.0);
        assert_eq!(FrickePoint::new(3.0, 3.0, 6.0).boundary_length().unwrap(), 0.0);
        let e = FrickePoint::new(6.0, 6.0, 6.0).boundary_length().unwrap();
        assert!((e - 2.0 * 55f64.acosh()).abs() < 1e-12);
        assert!(FrickePoint::new(3.0, 3.0, 6.5).boundary_length().is_err());
    }

    #[test]
    fn slices() {
        let s = TeichSlice::new(0.0).unwrap();
        assert_eq!(s.relation(), 0.0);
        let s = TeichSlice::new(1.0).unwrap();
        assert!(s.relation() < 0.0);
        assert!(TeichSlice::new(-1.0).is_err());
        let p = FrickePoint::new(4.0, 4.0, 4.0);
        let sl = TeichSlice::of_point(&p).unwrap();
        assert!((sl.relation() - (-16.0)).abs() < 1e-12);
        let rebuilt = TeichSlice::new(sl.epsilon()).unwrap();
        assert!((rebuilt.relation() - sl.relation()).abs() < 1e-10);
    }

    #[test]
    fn leaf_examples() {
        let s = TeichSlice::CUSPED;
        let p = leaf_point(&s, Trace(3.0), 0.0).unwrap();
        assert!((p.x - 3.0).abs() < 1e-15 && (p.y - 3.0).abs() < 1e-14 && (p.z - 3.0).abs() < 1e-14);
        let s1 = TeichSlice::new(1.3).unwrap();
        let p = leaf_point(&s1, Trace(5.0), 0.0).unwrap();
        assert_eq!(p.y, p.z);
        assert!(leaf_point(&s, Trace(2.0), 0.0).is_err());
        // Off-centre point with z = 3 on the cusped leaf x = 3 is (3, 6, 3).
        let (a, b) = s.leaf_axes(3.0);
        let theta = crate::roots::bisect(
            |t| a * t.cosh() - b * t.sinh() - 3.0,
            0.5,
            10.0,
            1e-15,
            0.0,
        );
        let p = leaf_point(&s, Trace(3.0), theta).unwrap();
        assert!((p.y - 6.0).abs() < 1e-10 && (p.z - 3.0).abs() < 1e-10);
        assert!(p.relation().abs() < 1e-12);
    }

    #[test]
    fn leaf_roundtrip() {
        let s = TeichSlice::new(0.7).unwrap();
        for &theta in &[-3.0, -0.4, 0.0, 1.1, 4.0] {
            let p = leaf_point(&s, Trace(3.5), theta).unwrap();
            let lp = leaf_coordinates(&p).unwrap();
            assert!((lp.theta - theta).abs() < 1e-9, "{theta} vs {}", lp.theta);
            assert!((lp.slice.epsilon() - 0.7).abs() < 1e-9);
        }
    }

    #[test]
    fn basis_changes() {
        let p = FrickePoint::new(3.3, 4.1, 5.2);
        assert_eq!(change_basis(&p, Slope::X, Slope::Y).unwrap(), p);
        let m = FrickePoint::MODULAR;
        assert_eq!(change_basis(&m, Slope::Y, Slope::X).unwrap(), m);
        let q = FrickePoint::new(3.0, 3.0, 6.0);
        let r = change_basis(&q, sl(1, 1), sl(0, 1)).unwrap();
        assert_eq!((r.x, r.y, r.z), (6.0, 3.0, 15.0));
        assert_eq!(r.boundary_length().unwrap(), 0.0);
        assert!(matches!(
            change_basis(&q, sl(1, 1), sl(1, -1)),
            Err(Error::NotUnimodular(_, _, 2))
        ));
    }

    #[test]
    fn symmetric() {
        let p = symmetric_family(3.0).unwrap();
        assert_eq!(p.boundary_length().unwrap(), 0.0);
        let p = symmetric_family(4.0).unwrap();
        assert_eq!(p.commutator_trace(), -18.0);
        assert!((p.boundary_length().unwrap() - 2.0 * 9f64.acosh()).abs() < 1e-12);
        let p = symmetric_family(3.5).unwrap();
        assert!(p.is_valid() && p.boundary_length().unwrap() > 0.0);
        assert!(symmetric_family(2.9).is_err());
    }

    #[test]
    fn basis_round_trip() {
        let p = FrickePoint::new(3.3, 4.1, 5.2);
        let u = (2, 1);
        let v = (1, 1);
        let marked = FrickePoint {
            x: p.trace(sl(2, 1)),
            y: p.trace(sl(1, 1)),
            z: p.trace(sl(3, 2)),
        };
        let back = standard_from_basis(&marked, u, v).unwrap();
        assert!((back.x - p.x).abs() < 1e-9 && (back.y - p.y).abs() < 1e-9 && (back.z - p.z).abs() < 1e-9);
    }
}
