use anyhow::Result;
use clap::{Args, Subcommand};
use serde_json::{json, Value};
use teich_core::flat::{construct_high_multiplicity, coprime_representations, equal_locus_flat, Endpoint, GeodesicShape};
use teich_core::Slope;

use crate::args::slope_arg;
use crate::output::{Cell, Report, Table};

#[derive(Debug, Clone, Subcommand)]
pub enum FlatCmd {
    /// The Poincaré geodesic where two slopes have equal flat length.
    Locus(LocusArgs),
    /// Coprime representations `n = a² + b²`.
    Reps(RepsArgs),
    /// A product of primes `≡ 1 (mod 4)` and its equal-length slopes at `τ = i`.
    Construct(ConstructArgs),
}

#[derive(Debug, Clone, Args)]
pub struct LocusArgs {
    #[arg(long, value_parser = slope_arg, allow_hyphen_values = true)]
    pub s1: Slope,
    #[arg(long, value_parser = slope_arg, allow_hyphen_values = true)]
    pub s2: Slope,
    /// Also list this many points along the geodesic.
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
}

#[derive(Debug, Clone, Args)]
pub struct RepsArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
}

#[derive(Debug, Clone, Args)]
pub struct ConstructArgs {
    /// Number of primes.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub count: u32,
}

fn endpoint_json(e: &Endpoint) -> Value {
    match e {
        Endpoint::Infinity => json!("inf"),
        Endpoint::Rational { .. } => json!(e.value()),
    }
}

pub fn run(cmd: &FlatCmd) -> Result<Report> {
    match cmd {
        FlatCmd::Locus(a) => {
            let g = equal_locus_flat(a.s1, a.s2)?;
            let mut doc = match g.shape {
                GeodesicShape::Circle { center, radius } => json!({"kind": "circle", "center": center, "radius": radius}),
                GeodesicShape::Vertical { foot } => json!({"kind": "vertical", "foot": foot}),
            };
            doc["s1"] = json!(a.s1);
            doc["s2"] = json!(a.s2);
            doc["endpoints"] = json!(g.endpoints.iter().map(endpoint_json).collect::<Vec<_>>());
            doc["endpoints_exact"] = json!(g.endpoints.iter().map(Endpoint::to_string).collect::<Vec<_>>());
            doc["min_polys"] = json!(g.endpoints.iter().map(|e| e.min_poly().iter().map(|c| c.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>());
            let samples = g.sample(a.samples);
            doc["samples"] = json!(samples.iter().map(|p| json!({"re": p.re, "im": p.im})).collect::<Vec<_>>());
            let mut table = Table::new(&["re", "im"]);
            for p in &samples {
                table.push(vec![p.re.into(), p.im.into()]);
            }
            if samples.is_empty() {
                table = Table::new(&["endpoint", "value"]);
                for e in &g.endpoints {
                    table.push(vec![e.to_string().into(), Cell::Num(e.value())]);
                }
            }
            Ok(Report::new(doc, table))
        }
        FlatCmd::Reps(a) => {
            let reps = coprime_representations(a.n);
            let mut table = Table::new(&["a", "b"]);
            for &(x, y) in &reps {
                table.push(vec![x.into(), y.into()]);
            }
            let doc = json!({"n": a.n, "count": reps.len(), "representations": reps});
            Ok(Report::new(doc, table).note(format!("representations: {}", reps.len())))
        }
        FlatCmd::Construct(a) => {
            let h = construct_high_multiplicity(a.count)?;
            let slopes = h.slopes()?;
            let mut table = Table::new(&["a", "b", "slope"]);
            for (&(x, y), s) in h.representations.iter().zip(&slopes) {
                table.push(vec![x.into(), y.into(), s.to_string().into()]);
            }
            let doc = json!({
                "primes": h.primes,
                "n": h.n,
                "flat_length": (h.n as f64).sqrt(),
                "multiplicity": slopes.len(),
                "representations": h.representations,
                "slopes": slopes,
            });
            Ok(Report::new(doc, table).note(format!("multiplicity: {}", slopes.len())))
        }
    }
}
