//! Independent oracles shared by the integration suites: explicit matrix
//! words, brute-force enumeration and random valid points.

#![allow(dead_code)]

use rand::Rng;
use teich_core::FrickePoint;

pub type M2 = [[f64; 2]; 2];

pub fn mul(a: &M2, b: &M2) -> M2 {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

pub fn inv(a: &M2) -> M2 {
    [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]
}

pub fn tr(a: &M2) -> f64 {
    a[0][0] + a[1][1]
}

/// Generators with traces `x`, `y` and `tr AB = z`: `A` upper triangular,
/// `B` lower triangular (a different normal form from the library's).
pub fn generators(x: f64, y: f64, z: f64) -> (M2, M2) {
    // A = [[λ, 1], [0, 1/λ]], B = [[μ, 0], [c, 1/μ]], tr AB = λμ + c + 1/(λμ)
    let lam = (x + (x * x - 4.0).sqrt()) / 2.0;
    let mu = (y + (y * y - 4.0).sqrt()) / 2.0;
    let c = z - lam * mu - 1.0 / (lam * mu);
    ([[lam, 1.0], [0.0, 1.0 / lam]], [[mu, 0.0], [c, 1.0 / mu]])
}

/// Matrix of the slope `(p, q)`: Stern–Brocot descent between `0/1 ↦ B` and
/// `1/0 ↦ A`, mediants multiplied upper·lower; negative slopes use `B⁻¹`.
pub fn slope_matrix(a: &M2, b: &M2, p: i64, q: i64) -> M2 {
    let (p, q) = if q < 0 || (q == 0 && p < 0) { (-p, -q) } else { (p, q) };
    if p < 0 {
        return slope_matrix(a, &inv(b), -p, q);
    }
    let (mut lo, mut lo_m) = ((0i64, 1i64), *b);
    let (mut hi, mut hi_m) = ((1i64, 0i64), *a);
    loop {
        if (p, q) == lo {
            return lo_m;
        }
        if (p, q) == hi {
            return hi_m;
        }
        let mid = (lo.0 + hi.0, lo.1 + hi.1);
        let mid_m = mul(&hi_m, &lo_m);
        // compare p/q with mid.0/mid.1
        let cmp = (p as i128 * mid.1 as i128).cmp(&(mid.0 as i128 * q as i128));
        match cmp {
            std::cmp::Ordering::Equal => return mid_m,
            std::cmp::Ordering::Less => {
                hi = mid;
                hi_m = mid_m;
            }
            std::cmp::Ordering::Greater => {
                lo = mid;
                lo_m = mid_m;
            }
        }
    }
}

pub fn matrix_trace(point: &FrickePoint, p: i64, q: i64) -> f64 {
    let (a, b) = generators(point.x, point.y, point.z);
    tr(&slope_matrix(&a, &b, p, q))
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Normalized primitive slopes with `|p|, |q| <= n`.
pub fn primitive_box(n: i64) -> Vec<(i64, i64)> {
    let mut out = vec![(1, 0)];
    for q in 1..=n {
        for p in -n..=n {
            if gcd(p, q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

pub fn arccosh(t: f64) -> f64 {
    // ln(t + √(t² − 1)) without squaring t
    t.ln() + (1.0 + ((1.0 - 1.0 / t) * (1.0 + 1.0 / t)).sqrt()).ln()
}

/// Length `2 arccosh(t/2)`.
pub fn length(t: f64) -> f64 {
    2.0 * arccosh(t / 2.0)
}

/// A random valid point with `x, y` in `(2.1, hi)`.
pub fn random_point<R: Rng>(rng: &mut R, hi: f64) -> FrickePoint {
    loop {
        let x = rng.gen_range(2.1..hi);
        let y = rng.gen_range(2.1..hi);
        let disc = x * x * y * y - 4.0 * (x * x + y * y);
        if disc < 0.0 {
            continue;
        }
        let (lo, up) = ((x * y - disc.sqrt()) / 2.0, (x * y + disc.sqrt()) / 2.0);
        let z = rng.gen_range(lo..=up);
        let p = FrickePoint::new(x, y, z);
        if p.is_valid() && z > 2.0 {
            return p;
        }
    }
}

/// A random primitive vector with entries in `[-n, n]`, not normalized.
pub fn random_primitive<R: Rng>(rng: &mut R, n: i64) -> (i64, i64) {
    loop {
        let p = rng.gen_range(-n..=n);
        let q = rng.gen_range(-n..=n);
        if gcd(p, q) == 1 {
            return (p, q);
        }
    }
}

pub fn det(a: (i64, i64), b: (i64, i64)) -> i64 {
    a.0 * b.1 - a.1 * b.0
}
