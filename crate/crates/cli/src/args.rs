//! Argument value parsers shared by the subcommands.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use teich_core::parse::{parse_point, parse_slope};
use teich_core::space::leaf_point;
use teich_core::{FrickePoint, Slope, TeichSlice, Trace};

/// `p/q` slopes; non-primitive input is reduced with a warning.
pub fn slope_arg(s: &str) -> Result<Slope, String> {
    let (slope, reduced) = parse_slope(s).map_err(|e| e.to_string())?;
    if reduced {
        eprintln!("warning: slope {} reduced to {slope}", s.trim());
    }
    Ok(slope)
}

/// `x,y,z` trace triples; must be a valid point.
pub fn point_arg(s: &str) -> Result<FrickePoint, String> {
    let p = parse_point(s).map_err(|e| e.to_string())?;
    FrickePoint::checked(p.x, p.y, p.z).map_err(|e| e.to_string())
}

pub fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be positive and finite, got {s}"))
    }
}

pub fn finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be finite, got {s}"))
    }
}

/// A torus given either by traces or by leaf coordinates.
#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    /// Trace triple `x,y,z` of the slopes 1/0, 0/1, 1/1.
    #[arg(long, value_parser = point_arg, allow_hyphen_values = true, conflicts_with_all = ["boundary", "leaf", "theta"])]
    pub point: Option<FrickePoint>,
    /// Boundary length of the slice, used with `--leaf` and `--theta`.
    #[arg(long, value_parser = finite, requires_all = ["leaf", "theta"])]
    pub boundary: Option<f64>,
    /// Trace of the slope 1/0 selecting the leaf.
    #[arg(long, value_parser = finite, requires = "boundary")]
    pub leaf: Option<f64>,
    /// Leaf coordinate.
    #[arg(long, value_parser = finite, allow_hyphen_values = true, requires = "boundary")]
    pub theta: Option<f64>,
}

impl PointArgs {
    pub fn resolve(&self) -> Result<FrickePoint> {
        if let Some(p) = self.point {
            return Ok(p);
        }
        match (self.boundary, self.leaf, self.theta) {
            (Some(eps), Some(x), Some(theta)) => {
                let slice = TeichSlice::new(eps)?;
                Ok(leaf_point(&slice, Trace(x), theta)?)
            }
            _ => bail!(teich_core::Error::domain("give --point, or --boundary with --leaf and --theta")),
        }
    }
}

/// Four-holed-sphere values from a file or an inline list.
#[derive(Debug, Clone, Args)]
pub struct ValuesArgs {
    /// File of `key = value` lines.
    #[arg(long, conflicts_with = "values")]
    pub file: Option<PathBuf>,
    /// Inline `key=value` list separated by commas or semicolons.
    #[arg(long, allow_hyphen_values = true)]
    pub values: Option<String>,
}

impl ValuesArgs {
    pub fn text(&self) -> Result<String> {
        match (&self.file, &self.values) {
            (Some(path), _) => std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())),
            (None, Some(v)) => Ok(v.clone()),
            (None, None) => bail!(teich_core::Error::domain("give --file or --values")),
        }
    }
}
