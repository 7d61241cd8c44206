use anyhow::Result;
use clap::{Args, Subcommand};
use serde_json::{json, Value};
use teich_core::fricke::trace_from_length;
use teich_core::locus::{default_grid, trace_locus, DEFAULT_LOCUS_TOLERANCE};
use teich_core::parse::parse_grid;
use teich_core::spectrum::{
    self, check_markoff_property_by_trace, equal_length_on_path, find_order_reversal, SlicePath, DEFAULT_DEPTH_CAP,
    DEFAULT_PARAMETER_GRID, DEFAULT_TOLERANCE,
};
use teich_core::{FrickePoint, Length, Slope, TeichSlice};

use crate::args::{finite, point_arg, positive, slope_arg, PointArgs};
use crate::output::{Report, Table};

fn point_json(p: &FrickePoint) -> Value {
    json!({"x": p.x, "y": p.y, "z": p.z})
}

fn slopes_text(slopes: &[Slope]) -> String {
    slopes.iter().map(Slope::to_string).collect::<Vec<_>>().join(";")
}

/// A trace bound given directly or as a length.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct Bound {
    /// Largest trace to include.
    #[arg(long, value_parser = positive)]
    pub max_trace: Option<f64>,
    /// Largest length to include.
    #[arg(long, value_parser = positive)]
    pub max_length: Option<f64>,
}

impl Bound {
    fn trace(&self) -> Result<f64> {
        match (self.max_trace, self.max_length) {
            (Some(t), _) => Ok(t),
            (None, Some(l)) => Ok(trace_from_length(Length(l))?.0),
            (None, None) => unreachable!("clap enforces one bound"),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[command(flatten)]
    pub bound: Bound,
    /// Length tolerance for grouping equal lengths.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE, value_parser = positive)]
    pub tol: f64,
    /// Also list equal-length pairs not exchanged by an isometry of the point.
    #[arg(long)]
    pub markoff_check: bool,
}

pub fn spectrum(a: &SpectrumArgs) -> Result<Report> {
    let point = a.point.resolve()?;
    let max_trace = a.bound.trace()?;
    let entries = spectrum::enumerate_by_trace(&point, max_trace, DEFAULT_DEPTH_CAP)?;
    let classes = spectrum::group_by_length(&entries, a.tol);
    let mut table = Table::new(&["trace", "length", "multiplicity", "members"]);
    let mut items = Vec::new();
    for c in &classes {
        table.push(vec![c.trace.0.into(), c.length.0.into(), c.multiplicity().into(), slopes_text(&c.members).into()]);
        items.push(json!({
            "trace": c.trace.0,
            "length": c.length.0,
            "multiplicity": c.multiplicity(),
            "members": c.members,
        }));
    }
    let mut doc = json!({
        "point": point_json(&point),
        "max_trace": max_trace,
        "tolerance": a.tol,
        "curves": entries.len(),
        "classes": items,
    });
    let mut report_notes = vec![format!("classes: {}", classes.len())];
    if a.markoff_check {
        let pairs = check_markoff_property_by_trace(&point, max_trace, a.tol)?;
        report_notes.push(format!("violating pairs: {}", pairs.len()));
        doc["violations"] = serde_json::to_value(&pairs)?;
    }
    let mut report = Report::new(doc, table);
    report.notes = report_notes;
    Ok(report)
}

#[derive(Debug, Clone, Args)]
pub struct LocusArgs {
    #[arg(long, value_parser = slope_arg, allow_hyphen_values = true)]
    pub alpha: Slope,
    #[arg(long, value_parser = slope_arg, allow_hyphen_values = true)]
    pub beta: Slope,
    /// Boundary length of the slice (0 for the cusped torus).
    #[arg(long, default_value_t = 0.0, value_parser = finite)]
    pub boundary: f64,
    /// Leaf traces: `geom:LO:HI:N`, `lin:LO:HI:N` or a comma list.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long, default_value_t = DEFAULT_LOCUS_TOLERANCE, value_parser = positive)]
    pub tol: f64,
}

pub fn locus(a: &LocusArgs) -> Result<Report> {
    let slice = TeichSlice::new(a.boundary)?;
    let grid = match &a.grid {
        Some(g) => parse_grid(g)?,
        None => default_grid(),
    };
    let poly = trace_locus(&slice, a.alpha, a.beta, &grid, a.tol)?;
    let ratios = poly.ratios();
    let mut table = Table::new(&["x_gamma", "theta", "x", "y", "z", "residual", "ratio"]);
    let mut items = Vec::new();
    for (p, r) in poly.points.iter().zip(&ratios) {
        table.push(vec![
            p.x_gamma.into(),
            p.theta.into(),
            p.point.x.into(),
            p.point.y.into(),
            p.point.z.into(),
            p.residual.into(),
            (*r).into(),
        ]);
        items.push(json!({
            "x_gamma": p.x_gamma,
            "theta": p.theta,
            "point": point_json(&p.point),
            "residual": p.residual,
            "ratio": r,
        }));
    }
    let doc = json!({
        "boundary": slice.epsilon(),
        "alpha": a.alpha,
        "beta": a.beta,
        "gamma": poly.gamma,
        "gamma_prime": poly.gamma_prime,
        "ratio_monotone": poly.ratio_monotone(),
        "points": items,
    });
    Ok(Report::new(doc, table).note(format!("locus points: {}", poly.points.len())))
}

#[derive(Debug, Clone, Subcommand)]
pub enum ViolationsCmd {
    /// Scan orbit representatives for parameters of the symmetric family where
    /// two distinct orbits share a trace.
    Search(SearchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 3.0, value_parser = finite)]
    pub t_min: f64,
    #[arg(long, default_value_t = 10.0, value_parser = finite)]
    pub t_max: f64,
    /// Largest `|p| + |q|` among orbit representatives.
    #[arg(long, default_value_t = 12)]
    pub cap: u64,
    /// Scan points per pair before bisection.
    #[arg(long, default_value_t = DEFAULT_PARAMETER_GRID)]
    pub grid: usize,
}

pub fn violations(cmd: &ViolationsCmd) -> Result<Report> {
    let ViolationsCmd::Search(a) = cmd;
    let found = spectrum::violation_search(a.cap, a.t_min, a.t_max, a.grid)?;
    let mut table = Table::new(&["first", "second", "t", "relative_residual", "equal_slopes"]);
    let mut items = Vec::new();
    for f in &found {
        let slopes: Vec<Slope> = f.equal_slopes.iter().copied().collect();
        table.push(vec![
            f.first.to_string().into(),
            f.second.to_string().into(),
            f.t.into(),
            f.relative_residual.into(),
            slopes.len().into(),
        ]);
        items.push(json!({
            "first": f.first,
            "second": f.second,
            "t": f.t,
            "residual": f.residual,
            "relative_residual": f.relative_residual,
            "orbit_union_size": slopes.len(),
            "equal_slopes": slopes,
        }));
    }
    let doc = json!({
        "t_min": a.t_min,
        "t_max": a.t_max,
        "cap": a.cap,
        "crossings": items,
    });
    Ok(Report::new(doc, table).note(format!("crossings: {}", found.len())))
}

#[derive(Debug, Clone, Subcommand)]
pub enum TwistCmd {
    /// Counting estimates of `ℓ(α)/ℓ(β)` from twist sequences.
    Ratio(RatioArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RatioArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, value_parser = slope_arg, allow_hyphen_values = true)]
    pub alpha: Slope,
    #[arg(long, value_parser = slope_arg, allow_hyphen_values = true)]
    pub beta: Slope,
    /// Curve meeting `α`, twisted along `α`.
    #[arg(long, value_parser = slope_arg, allow_hyphen_values = true)]
    pub alpha0: Slope,
    /// Curve meeting `β`, twisted along `β`.
    #[arg(long, value_parser = slope_arg, allow_hyphen_values = true)]
    pub beta0: Slope,
    /// Estimates for `i = 1..=iters`.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(i64).range(1..=100_000))]
    pub iters: i64,
}

pub fn twist(cmd: &TwistCmd) -> Result<Report> {
    let TwistCmd::Ratio(a) = cmd;
    let point = a.point.resolve()?;
    let mut table = Table::new(&["i", "count", "estimate", "target", "error", "bound", "within_bound"]);
    let mut items = Vec::new();
    let mut all_within = true;
    for i in 1..=a.iters {
        let r = spectrum::ratio_estimate(&point, a.alpha, a.beta, a.alpha0, a.beta0, i)?;
        all_within &= r.within_bound();
        table.push(vec![
            r.i.into(),
            r.count.into(),
            r.estimate.into(),
            r.target.into(),
            r.error().into(),
            r.bound.into(),
            r.within_bound().into(),
        ]);
        items.push(json!({
            "i": r.i,
            "count": r.count,
            "estimate": r.estimate,
            "target": r.target,
            "error": r.error(),
            "bound": r.bound,
            "within_bound": r.within_bound(),
        }));
    }
    let doc = json!({
        "point": point_json(&point),
        "alpha": a.alpha,
        "beta": a.beta,
        "alpha0": a.alpha0,
        "beta0": a.beta0,
        "all_within_bound": all_within,
        "estimates": items,
    });
    Ok(Report::new(doc, table).note(format!("all within bound: {all_within}")))
}

#[derive(Debug, Clone, Subcommand)]
pub enum OrderCmd {
    /// A pair of simple curves whose length order differs between two tori,
    /// and the equal-length point on the segment joining them.
    Reversal(ReversalArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ReversalArgs {
    #[arg(long, value_parser = point_arg)]
    pub point1: FrickePoint,
    #[arg(long, value_parser = point_arg)]
    pub point2: FrickePoint,
    #[command(flatten)]
    pub bound: Bound,
    /// Trace tolerance for the equal-length point on the path.
    #[arg(long, default_value_t = 1e-10, value_parser = positive)]
    pub tol: f64,
}

pub fn order(cmd: &OrderCmd) -> Result<Report> {
    let OrderCmd::Reversal(a) = cmd;
    let l_max = match (a.bound.max_trace, a.bound.max_length) {
        (Some(t), _) => teich_core::fricke::length_from_trace(teich_core::Trace(t))?,
        (None, Some(l)) => Length(l),
        (None, None) => unreachable!("clap enforces one bound"),
    };
    let found = find_order_reversal(&a.point1, &a.point2, l_max)?;
    let mut table = Table::new(&["alpha", "beta", "l1_alpha", "l1_beta", "l2_alpha", "l2_beta", "margin", "s", "residual"]);
    let mut doc = json!({
        "point1": point_json(&a.point1),
        "point2": point_json(&a.point2),
        "max_length": l_max.0,
        "reversal": null,
        "crossing": null,
    });
    let mut notes = vec![];
    if let Some(r) = found {
        let verified = r.verify(&a.point1, &a.point2);
        let path = SlicePath::between(&a.point1, &a.point2)?;
        let crossing = equal_length_on_path(&path, r.alpha, r.beta, a.tol, 1000)?;
        doc["reversal"] = json!({
            "alpha": r.alpha,
            "beta": r.beta,
            "lengths_first": [r.lengths_first.0, r.lengths_first.1],
            "lengths_second": [r.lengths_second.0, r.lengths_second.1],
            "margin": r.margin,
            "verified": verified,
        });
        let (s, residual) = match &crossing {
            Some(c) => {
                doc["crossing"] = json!({"s": c.s, "point": point_json(&c.point), "residual": c.residual});
                (c.s, c.residual)
            }
            None => (f64::NAN, f64::NAN),
        };
        table.push(vec![
            r.alpha.to_string().into(),
            r.beta.to_string().into(),
            r.lengths_first.0.into(),
            r.lengths_first.1.into(),
            r.lengths_second.0.into(),
            r.lengths_second.1.into(),
            r.margin.into(),
            s.into(),
            residual.into(),
        ]);
        notes.push(format!("reversal: {} vs {}", r.alpha, r.beta));
    } else {
        notes.push("reversal: none".to_string());
    }
    let mut report = Report::new(doc, table);
    report.notes = notes;
    Ok(report)
}
