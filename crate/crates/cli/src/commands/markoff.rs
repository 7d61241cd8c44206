use anyhow::Result;
use clap::{Args, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::json;
use teich_core::markoff::{detect_collisions, enumerate_triples, Normalization};

use crate::output::{Report, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    /// `x² + y² + z² = 3xyz`.
    Classical,
    /// `x² + y² + z² = xyz`.
    Trace,
}

impl From<NormArg> for Normalization {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Classical => Normalization::Classical,
            NormArg::Trace => Normalization::Trace,
        }
    }
}

fn bound_arg(s: &str) -> Result<BigUint, String> {
    s.trim().parse().map_err(|_| format!("expected a non-negative integer, got {s:?}"))
}

#[derive(Debug, Clone, Args)]
pub struct MarkoffArgs {
    /// Largest maximum entry to include.
    #[arg(long, value_parser = bound_arg)]
    pub max: BigUint,
    #[arg(long, value_enum, default_value_t = NormArg::Classical)]
    pub normalization: NormArg,
}

#[derive(Debug, Clone, Subcommand)]
pub enum MarkoffCmd {
    /// Enumerate triples and report maxima shared by distinct triples.
    Verify(MarkoffArgs),
    /// Enumerate triples in increasing order of maximum.
    List(MarkoffArgs),
}

pub fn run(cmd: &MarkoffCmd) -> Result<Report> {
    match cmd {
        MarkoffCmd::Verify(a) => {
            let triples = enumerate_triples(&a.max, a.normalization.into());
            let collisions = detect_collisions(&triples);
            let mut table = Table::new(&["maximum", "triples"]);
            for c in &collisions {
                table.push(vec![c.maximum.to_string().into(), c.triples.len().into()]);
            }
            let doc = json!({
                "max": a.max.to_string(),
                "normalization": Normalization::from(a.normalization),
                "triples": triples.len(),
                "collisions": collisions,
            });
            Ok(Report::new(doc, table).note(format!("collisions: {}", collisions.len())))
        }
        MarkoffCmd::List(a) => {
            let triples = enumerate_triples(&a.max, a.normalization.into());
            let mut table = Table::new(&["x", "y", "z"]);
            for t in &triples {
                table.push(vec![t.x.to_string().into(), t.y.to_string().into(), t.z.to_string().into()]);
            }
            let doc = json!({
                "max": a.max.to_string(),
                "normalization": Normalization::from(a.normalization),
                "triples": triples,
            });
            Ok(Report::new(doc, table).note(format!("triples: {}", triples.len())))
        }
    }
}
