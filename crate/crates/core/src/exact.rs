//! Small exact-arithmetic helpers on arbitrary-precision rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => Some(Rat::from_integer(s.parse().ok()?)),
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    // numerators/denominators here stay far below 2^53, but go through the
    // generic path anyway so huge intermediates do not silently overflow
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Best rational within `tol` of `x` with denominator bounded by `max_den`
/// (Stern–Brocot walk). Used to report grid points as exact rationals.
pub fn from_f64_bounded(x: f64, max_den: i64) -> Rat {
    let neg = x < 0.0;
    let x = x.abs();
    let (mut a, mut b, mut c, mut d) = (0i64, 1i64, 1i64, 0i64);
    let mut best = (x.round() as i64, 1i64);
    loop {
        let (mn, md) = (a + c, b + d);
        if md > max_den {
            break;
        }
        let v = mn as f64 / md as f64;
        if (v - x).abs() < (best.0 as f64 / best.1 as f64 - x).abs() {
            best = (mn, md);
        }
        if v == x {
            break;
        }
        if v < x {
            a = mn;
            b = md;
        } else {
            c = mn;
            d = md;
        }
    }
    let r = rat(best.0, best.1);
    if neg {
        -r
    } else {
        r
    }
}

pub fn factorial(m: u32) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

pub fn pow(x: &Rat, m: u32) -> Rat {
    let mut out = Rat::one();
    for _ in 0..m {
        out *= x;
    }
    out
}

/// Solves `A x = b` exactly by Gaussian elimination. Returns `None` when `A`
/// is singular.
pub fn solve(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    assert!(a.len() == n && a.iter().all(|r| r.len() == n));
    for col in 0..n {
        // largest magnitude pivot keeps the intermediate fractions small
        let piv = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .max_by(|&r, &s| a[r][col].abs().cmp(&a[s][col].abs()))?;
        a.swap(col, piv);
        b.swap(col, piv);
        let p = a[col][col].clone();
        for row in (col + 1)..n {
            if a[row][col].is_zero() {
                continue;
            }
            let f = &a[row][col] / &p;
            let pivot_row = a[col].clone();
            for (dst, src) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *dst -= &f * src;
            }
            let t = &f * &b[col];
            b[row] -= t;
        }
    }
    let mut x = vec![Rat::zero(); n];
    for row in (0..n).rev() {
        let mut s = b[row].clone();
        for k in (row + 1)..n {
            s -= &a[row][k] * &x[k];
        }
        x[row] = s / &a[row][row];
    }
    Some(x)
}
