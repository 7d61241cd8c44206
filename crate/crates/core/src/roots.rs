//! Bracketing root finders shared by the leaf, path and polynomial solvers.

/// Bisection on `[lo, hi]` where `f(lo)` and `f(hi)` have opposite signs.
///
/// Stops once the bracket is narrower than `x_tol`, when `|f| <= f_tol`, or
/// when the midpoint can no longer be distinguished from an endpoint.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, x_tol: f64, f_tol: f64) -> f64
where
    F: FnMut(f64) -> f64,
{
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    let f_hi = f(hi);
    if f_hi == 0.0 {
        return hi;
    }
    debug_assert!(f_lo.signum() != f_hi.signum(), "bisect called without a sign change");
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            return mid;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 || f_mid.abs() <= f_tol || (hi - lo).abs() <= x_tol {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
}

/// Scans `n` equal subintervals of `[lo, hi]` and returns the first subinterval
/// on which `f` changes sign.
pub fn first_sign_change<F>(mut f: F, lo: f64, hi: f64, n: usize) -> Option<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let n = n.max(1);
    let step = (hi - lo) / n as f64;
    let mut prev_x = lo;
    let mut prev = f(lo);
    if prev == 0.0 {
        return Some((lo, lo));
    }
    for i in 1..=n {
        let x = if i == n { hi } else { lo + step * i as f64 };
        let v = f(x);
        if v == 0.0 {
            return Some((x, x));
        }
        if v.signum() != prev.signum() && v.is_finite() && prev.is_finite() {
            return Some((prev_x, x));
        }
        prev = v;
        prev_x = x;
    }
    None
}
