use std::collections::BTreeMap;

use anyhow::{bail, Result};
use clap::{Args, Subcommand};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use teich_core::fhs::{
    counterexample_half_trace, counterexample_pair, resultant_check, solve_boundary_general, solve_boundary_symmetric,
    ExactInvariant4, FhsTraces, Invariant4, SymmetricCase,
};
use teich_core::parse::parse_fhs_values;
use teich_core::Error;

use crate::args::ValuesArgs;
use crate::output::{fmt_num, Cell, Report, Table};

#[derive(Debug, Clone, Subcommand)]
pub enum FhsCmd {
    /// Check half-traces against the trace identities, or solve invariants
    /// `f1..f4` for boundary data.
    Verify(VerifyArgs),
    /// Two non-isometric spheres sharing all interior data.
    Counterexample,
    /// Exact resultants of the elimination pair and their leading coefficients.
    Resultant(ValuesArgs),
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub values: ValuesArgs,
    /// Seeds per axis for the general boundary solver.
    #[arg(long, default_value_t = 24, value_parser = clap::value_parser!(u32).range(1..=400))]
    pub grid: u32,
}

type Values = BTreeMap<String, BigRational>;

fn float(values: &Values, key: &str) -> Result<Option<f64>> {
    match values.get(key) {
        None => Ok(None),
        Some(v) => match v.to_f64().filter(|f| f.is_finite()) {
            Some(f) => Ok(Some(f)),
            None => bail!(Error::domain(format!("{key} is out of floating range"))),
        },
    }
}

fn require(values: &Values, key: &str) -> Result<f64> {
    float(values, key)?.ok_or_else(|| Error::domain(format!("missing value for {key}")).into())
}

fn traces_json(t: &FhsTraces) -> Value {
    json!({
        "a": t.a, "b": t.b, "c": t.c, "d": t.d,
        "x": t.x, "xb": t.xb, "y": t.y, "yb": t.yb, "z": t.z, "zb": t.zb,
    })
}

fn invariant_json(f: &Invariant4) -> Value {
    json!([f.f1, f.f2, f.f3, f.f4])
}

fn consistency_json(t: &FhsTraces) -> Value {
    let c = t.check_consistency();
    json!({
        "basic_identities": c.basic_identities,
        "slots": c.slots,
        "tracepoly": c.tracepoly,
        "max_residual": c.max_residual(),
        "geometric": c.geometric,
    })
}

fn verify_traces(values: &Values) -> Result<Report> {
    let [a, b, c, d, x, y, z] = ["a", "b", "c", "d", "x", "y", "z"].map(|k| require(values, k));
    let base = FhsTraces::with_bars(a?, b?, c?, d?, x?, y?, z?);
    let mut filled = Vec::new();
    let mut bar = |key: &'static str, forced: f64| -> Result<f64> {
        Ok(match float(values, key)? {
            Some(v) => v,
            None => {
                filled.push(key);
                forced
            }
        })
    };
    let t = FhsTraces { xb: bar("xb", base.xb)?, yb: bar("yb", base.yb)?, zb: bar("zb", base.zb)?, ..base };
    let consistency = t.check_consistency();
    let mut table = Table::new(&["check", "residual"]);
    for (i, r) in consistency.basic_identities.iter().enumerate() {
        table.push(vec![format!("basic_{}", i + 1).into(), Cell::Num(*r)]);
    }
    for (i, r) in consistency.slots.iter().enumerate() {
        table.push(vec![format!("slot_f{}", i + 1).into(), Cell::Num(*r)]);
    }
    table.push(vec!["tracepoly".into(), Cell::Num(consistency.tracepoly)]);
    let doc = json!({
        "mode": "traces",
        "traces": traces_json(&t),
        "filled_bars": filled,
        "boundary_invariants": invariant_json(&t.boundary()),
        "interior_invariants": invariant_json(&t.interior()),
        "consistency": consistency_json(&t),
    });
    Ok(Report::new(doc, table).note(format!("max residual: {}", fmt_num(consistency.max_residual()))))
}

fn verify_invariants(values: &Values, grid: u32) -> Result<Report> {
    let f = Invariant4 {
        f1: require(values, "f1")?,
        f2: require(values, "f2")?,
        f3: require(values, "f3")?,
        f4: require(values, "f4")?,
    };
    let mut table = Table::new(&["solver", "a", "b", "c", "d"]);
    let mut symmetric = Vec::new();
    for case in [SymmetricCase::AllEqual, SymmetricCase::ThreeEqual, SymmetricCase::TwoPairs] {
        let s = solve_boundary_symmetric(&f, case);
        let name = serde_json::to_value(case)?.as_str().unwrap_or_default().to_string();
        for sol in &s.solutions {
            let mut row: Vec<Cell> = vec![name.clone().into()];
            row.extend(sol.iter().map(|v| Cell::Num(*v)));
            table.push(row);
        }
        symmetric.push(json!({
            "case": case,
            "consistency_residual": s.consistency_residual,
            "solutions": s.solutions,
        }));
    }
    let general = solve_boundary_general(&f, grid as usize);
    for sol in &general.solutions {
        let mut row: Vec<Cell> = vec!["general".into()];
        row.extend(sol.iter().map(|v| Cell::Num(*v)));
        table.push(row);
    }
    let count = table.rows.len();
    let doc = json!({
        "mode": "invariants",
        "invariants": invariant_json(&f),
        "symmetric": symmetric,
        "general": {
            "seeds": general.seeds,
            "best_effort": general.best_effort,
            "solutions": general.solutions,
        },
    });
    Ok(Report::new(doc, table).note(format!("boundary solutions: {count}")))
}

fn verify(a: &VerifyArgs) -> Result<Report> {
    let values = parse_fhs_values(&a.values.text()?)?;
    let has_traces = ["a", "b", "c", "d", "x", "y", "z"].iter().any(|k| values.contains_key(*k));
    let has_invariants = ["f1", "f2", "f3", "f4"].iter().any(|k| values.contains_key(*k));
    match (has_traces, has_invariants) {
        (true, false) => verify_traces(&values),
        (false, true) => verify_invariants(&values, a.grid),
        (true, true) => bail!(Error::domain("give either half-traces or invariants f1..f4, not both")),
        (false, false) => bail!(Error::domain("no values given")),
    }
}

fn counterexample() -> Result<Report> {
    let (first, second) = counterexample_pair();
    let mut table = Table::new(&["surface", "a", "b", "c", "d", "x", "max_residual"]);
    for (name, t) in [("first", &first), ("second", &second)] {
        table.push(vec![
            name.into(),
            t.a.into(),
            t.b.into(),
            t.c.into(),
            t.d.into(),
            t.x.into(),
            t.check_consistency().max_residual().into(),
        ]);
    }
    let gap = first.interior().max_diff(&second.interior());
    let doc = json!({
        "half_trace": counterexample_half_trace(),
        "first": {"traces": traces_json(&first), "consistency": consistency_json(&first)},
        "second": {"traces": traces_json(&second), "consistency": consistency_json(&second)},
        "interior_invariants": invariant_json(&first.interior()),
        "interior_gap": gap,
        "boundary_multisets": [first.boundary_multiset(), second.boundary_multiset()],
    });
    Ok(Report::new(doc, table).note(format!("interior gap: {}", fmt_num(gap))))
}

fn resultant(a: &ValuesArgs) -> Result<Report> {
    let values = parse_fhs_values(&a.text()?)?;
    let get = |k: &str| values.get(k).cloned().ok_or_else(|| Error::domain(format!("missing value for {k}")));
    if let Some(extra) = values.keys().find(|k| !k.starts_with('f')) {
        bail!(Error::domain(format!("resultant takes only f1..f4, got {extra}")));
    }
    let f = ExactInvariant4::new([get("f1")?, get("f2")?, get("f3")?, get("f4")?]);
    let check = resultant_check(&f)?;
    let lead = |p: &teich_core::fhs::poly::UniPoly| p.leading().map(|c| c.to_string());
    let mut table = Table::new(&["resultant", "degree", "leading", "expected_leading"]);
    for (name, p) in [("res_c", &check.r_c), ("res_d", &check.r_d)] {
        table.push(vec![
            name.into(),
            p.degree().map_or_else(|| "none".to_string(), |d| d.to_string()).into(),
            lead(p).unwrap_or_else(|| "0".into()).into(),
            check.expected_leading.to_string().into(),
        ]);
    }
    let doc = json!({
        "invariants": [f.f1.to_string(), f.f2.to_string(), f.f3.to_string(), f.f4.to_string()],
        "degree_in_d": check.degree_in_d(),
        "degree_in_c": check.degree_in_c(),
        "leading_in_d": lead(&check.r_c),
        "leading_in_c": lead(&check.r_d),
        "expected_leading": check.expected_leading.to_string(),
        "holds": check.holds(),
    });
    Ok(Report::new(doc, table).note(format!("leading law holds: {}", check.holds())))
}

pub fn run(cmd: &FhsCmd) -> Result<Report> {
    match cmd {
        FhsCmd::Verify(a) => verify(a),
        FhsCmd::Counterexample => counterexample(),
        FhsCmd::Resultant(a) => resultant(a),
    }
}
