//! Text formats for slopes, points, exact rationals, four-holed-sphere value
//! files and leaf grids.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};

use crate::curves::Slope;
use crate::error::{Error, Result};
use crate::locus::geometric_grid;
use crate::space::FrickePoint;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// A slope written `p/q` (or a bare integer `p`, meaning `p/1`). Returns
/// whether the input had to be divided by a common factor.
pub fn parse_slope(s: &str) -> Result<(Slope, bool)> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: i64 = p.parse().map_err(|_| perr(format!("bad slope numerator in {s:?}")))?;
    let q: i64 = q.parse().map_err(|_| perr(format!("bad slope denominator in {s:?}")))?;
    Slope::reduced(p, q)
}

fn parse_f64(s: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| perr(format!("bad number {s:?}")))?;
    if !v.is_finite() {
        return Err(perr(format!("number {s:?} is not finite")));
    }
    Ok(v)
}

/// A comma-separated trace triple `x,y,z`. Validity is not checked here.
pub fn parse_point(s: &str) -> Result<FrickePoint> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(perr(format!("expected three comma-separated traces, got {s:?}")));
    }
    Ok(FrickePoint::new(parse_f64(parts[0])?, parse_f64(parts[1])?, parse_f64(parts[2])?))
}

const MAX_EXPONENT: i64 = 1000;

/// An exact rational: `n`, `n/d`, or a decimal such as `-1.25e3`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| perr(format!("bad numerator in {s:?}")))?;
        let d: BigInt = d.trim().parse().map_err(|_| perr(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(perr(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| perr(format!("bad exponent in {s:?}")))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    if exp.abs() > MAX_EXPONENT {
        return Err(perr(format!("exponent out of range in {s:?}")));
    }
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(perr(format!("bad rational {s:?}")));
    }
    let digits: BigInt = format!("0{int}{frac}").parse().expect("ascii digits");
    let ten = BigInt::from(10);
    let scale = exp - frac.len() as i64;
    let mut v = if scale >= 0 {
        BigRational::from_integer(digits * Pow::pow(&ten, scale as u64))
    } else {
        BigRational::new(digits, Pow::pow(&ten, (-scale) as u64))
    };
    if neg {
        v = -v;
    }
    Ok(v)
}

/// Keys accepted in a four-holed-sphere value file.
pub const FHS_KEYS: [&str; 14] = ["a", "b", "c", "d", "x", "xb", "y", "yb", "z", "zb", "f1", "f2", "f3", "f4"];

/// `key = value` entries separated by newlines, commas or semicolons; `#`
/// starts a comment. Values are exact rationals.
pub fn parse_fhs_values(text: &str) -> Result<BTreeMap<String, BigRational>> {
    let mut out = BTreeMap::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        for item in line.split([',', ';']) {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| perr(format!("expected key=value, got {item:?}")))?;
            let k = k.trim().to_ascii_lowercase();
            if !FHS_KEYS.contains(&k.as_str()) {
                return Err(perr(format!("unknown key {k:?}")));
            }
            let v = parse_rational(v)?;
            if out.insert(k.clone(), v).is_some() {
                return Err(perr(format!("duplicate key {k:?}")));
            }
        }
    }
    Ok(out)
}

pub const MAX_GRID_POINTS: usize = 1_000_000;

/// A leaf grid: `geom:LO:HI:N` (`x − 2` geometric), `lin:LO:HI:N`, or an
/// explicit comma list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    let ranged = |rest: &str| -> Result<(f64, f64, usize)> {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(perr(format!("expected LO:HI:N in {s:?}")));
        }
        let n: usize = parts[2].trim().parse().map_err(|_| perr(format!("bad count in {s:?}")))?;
        if n == 0 || n > MAX_GRID_POINTS {
            return Err(perr(format!("grid count must be in 1..={MAX_GRID_POINTS}")));
        }
        Ok((parse_f64(parts[0])?, parse_f64(parts[1])?, n))
    };
    if let Some(rest) = s.strip_prefix("geom:") {
        let (lo, hi, n) = ranged(rest)?;
        return geometric_grid(lo, hi, n);
    }
    if let Some(rest) = s.strip_prefix("lin:") {
        let (lo, hi, n) = ranged(rest)?;
        if !(hi > lo) {
            return Err(perr(format!("empty range in {s:?}")));
        }
        if n == 1 {
            return Ok(vec![lo]);
        }
        // convex combination stays finite even when hi − lo overflows
        return Ok((0..n)
            .map(|i| {
                let s = i as f64 / (n - 1) as f64;
                lo * (1.0 - s) + hi * s
            })
            .collect());
    }
    let v: Vec<f64> = s.split(',').map(parse_f64).collect::<Result<_>>()?;
    if v.len() > MAX_GRID_POINTS {
        return Err(perr("grid too long"));
    }
    Ok(v)
}
