//! Exact Markoff triples and the uniqueness check on their maxima.
//!
//! Triples are generated from `(1, 1, 1)` by the Vieta moves of the classical
//! cubic `x² + y² + z² = 3xyz`. The trace form `x² + y² + z² = xyz` is the
//! same set scaled by 3.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::space::FrickePoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// `x² + y² + z² = 3xyz`.
    Classical,
    /// `x² + y² + z² = xyz`, the trace form.
    Trace,
}

impl Normalization {
    fn scale(self) -> u32 {
        match self {
            Normalization::Classical => 1,
            Normalization::Trace => 3,
        }
    }
}

/// A solution with `x ≥ y ≥ z ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkoffTriple {
    pub x: BigUint,
    pub y: BigUint,
    pub z: BigUint,
    pub normalization: Normalization,
}

impl MarkoffTriple {
    fn classical(mut v: [BigUint; 3]) -> Self {
        v.sort_unstable_by(|a, b| b.cmp(a));
        let [x, y, z] = v;
        MarkoffTriple { x, y, z, normalization: Normalization::Classical }
    }

    pub fn maximum(&self) -> &BigUint {
        &self.x
    }

    /// The same solution in the requested normalization.
    pub fn to_normalization(&self, target: Normalization) -> MarkoffTriple {
        if target == self.normalization {
            return self.clone();
        }
        let (x, y, z) = match target {
            Normalization::Trace => (&self.x * 3u32, &self.y * 3u32, &self.z * 3u32),
            Normalization::Classical => (&self.x / 3u32, &self.y / 3u32, &self.z / 3u32),
        };
        MarkoffTriple { x, y, z, normalization: target }
    }

    /// `x² + y² + z² − k·xyz` for the triple's own cubic; zero for every
    /// enumerated triple.
    pub fn cubic_residual(&self) -> BigInt {
        let k: u32 = match self.normalization {
            Normalization::Classical => 3,
            Normalization::Trace => 1,
        };
        let sq = |v: &BigUint| BigInt::from(v * v);
        sq(&self.x) + sq(&self.y) + sq(&self.z) - BigInt::from(&self.x * &self.y * &self.z * k)
    }
}

impl Serialize for MarkoffTriple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("MarkoffTriple", 4)?;
        st.serialize_field("x", &self.x.to_string())?;
        st.serialize_field("y", &self.y.to_string())?;
        st.serialize_field("z", &self.z.to_string())?;
        st.serialize_field("normalization", &self.normalization)?;
        st.end()
    }
}

/// Every triple whose maximum is at most `bound`, in increasing order of
/// maximum (ties by the remaining entries).
pub fn enumerate_triples(bound: &BigUint, normalization: Normalization) -> Vec<MarkoffTriple> {
    let classical_bound = bound / normalization.scale();
    let mut out = Vec::new();
    if classical_bound < BigUint::one() {
        return out;
    }
    let root = MarkoffTriple::classical([BigUint::one(), BigUint::one(), BigUint::one()]);
    let mut seen: HashSet<MarkoffTriple> = HashSet::new();
    let mut heap = BinaryHeap::new();
    seen.insert(root.clone());
    heap.push(Reverse(root));
    while let Some(Reverse(t)) = heap.pop() {
        if t.x > classical_bound {
            break;
        }
        // Replacing y or z moves away from the root; replacing the maximum moves back.
        let three_xz = &t.x * &t.z * 3u32;
        let three_xy = &t.x * &t.y * 3u32;
        let up_y = MarkoffTriple::classical([t.x.clone(), three_xz - &t.y, t.z.clone()]);
        let up_z = MarkoffTriple::classical([t.x.clone(), t.y.clone(), three_xy - &t.z]);
        for child in [up_y, up_z] {
            debug_assert!(child.x > t.x || t.x == BigUint::one());
            if child.x >= t.x && seen.insert(child.clone()) {
                heap.push(Reverse(child));
            }
        }
        out.push(t);
    }
    out.into_iter().map(|t| t.to_normalization(normalization)).collect()
}

/// Distinct triples sharing one maximum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Collision {
    #[serde(serialize_with = "as_string")]
    pub maximum: BigUint,
    pub triples: Vec<MarkoffTriple>,
}

fn as_string<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Groups triples by maximum and reports every maximum shared by more than one.
pub fn detect_collisions(triples: &[MarkoffTriple]) -> Vec<Collision> {
    let mut by_max: BTreeMap<&BigUint, Vec<&MarkoffTriple>> = BTreeMap::new();
    for t in triples {
        by_max.entry(t.maximum()).or_default().push(t);
    }
    by_max
        .into_iter()
        .filter_map(|(m, ts)| {
            let mut ts: Vec<MarkoffTriple> = ts.into_iter().cloned().collect();
            ts.sort();
            ts.dedup();
            (ts.len() > 1).then(|| Collision { maximum: m.clone(), triples: ts })
        })
        .collect()
}

/// Collisions among classical triples with maximum `<= bound`; the uniqueness
/// conjecture predicts none.
pub fn verify_uniqueness(bound: &BigUint) -> Vec<Collision> {
    detect_collisions(&enumerate_triples(bound, Normalization::Classical))
}

/// The cusped torus whose three shortest traces are the trace-form triple.
pub fn triple_to_traces(t: &MarkoffTriple) -> FrickePoint {
    let p = t.to_normalization(Normalization::Trace);
    let f = |v: &BigUint| v.to_f64().unwrap_or(f64::INFINITY);
    FrickePoint::new(f(&p.x), f(&p.y), f(&p.z))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triple(v: [u32; 3]) -> MarkoffTriple {
        MarkoffTriple::classical(v.map(BigUint::from))
    }

    #[test]
    fn small_bounds() {
        let got = enumerate_triples(&BigUint::from(5u32), Normalization::Classical);
        assert_eq!(got, vec![triple([1, 1, 1]), triple([2, 1, 1]), triple([5, 2, 1])]);
        let trace_form = enumerate_triples(&BigUint::from(3u32), Normalization::Trace);
        assert_eq!(trace_form.len(), 1);
        assert_eq!(triple_to_traces(&trace_form[0]), FrickePoint::MODULAR);
        assert!(enumerate_triples(&BigUint::from(2u32), Normalization::Trace).is_empty());
    }

    #[test]
    fn traces_of_small_triples() {
        assert_eq!(triple_to_traces(&triple([2, 1, 1])), FrickePoint::new(6.0, 3.0, 3.0));
        let p = triple_to_traces(&triple([5, 2, 1]));
        assert_eq!(p, FrickePoint::new(15.0, 6.0, 3.0));
        assert_eq!(p.relation(), 0.0);
        assert_eq!(p.commutator_trace(), -2.0);
    }

    #[test]
    fn exact_residuals() {
        for t in enumerate_triples(&BigUint::from(10_000u32), Normalization::Trace) {
            assert_eq!(t.cubic_residual(), BigInt::from(0));
        }
    }

    #[test]
    fn planted_collision_detected() {
        let mut ts = enumerate_triples(&BigUint::from(1000u32), Normalization::Classical);
        assert!(detect_collisions(&ts).is_empty());
        ts.push(triple([29, 3, 1]));
        let c = detect_collisions(&ts);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].maximum, BigUint::from(29u32));
        assert_eq!(c[0].triples.len(), 2);
    }
}
