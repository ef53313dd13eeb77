//! Scalar types. `Rat` is the only scalar used by the geometric layers:
//! an arbitrary-precision rational kept in lowest terms with a positive
//! denominator (both guaranteed by the representation).

use std::str::FromStr;

use crate::error::{LatError, Result};

pub type Int = num_bigint::BigInt;
pub type Rat = num_rational::BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// `p/q` as an exact rational. Panics on `q = 0`; test/benchmark helper.
pub fn frac(p: i64, q: i64) -> Rat {
    Rat::new(Int::from(p), Int::from(q))
}

pub fn rat_is_int(x: &Rat) -> bool {
    x.is_integer()
}

/// Nonnegative integer power.
pub fn rat_pow(x: &Rat, k: usize) -> Rat {
    num_traits::pow(x.clone(), k)
}

pub fn int_pow(x: &Int, k: usize) -> Int {
    num_traits::pow(x.clone(), k)
}

/// Parses `"p"` or `"p/q"` into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    Rat::from_str(s.trim()).map_err(|_| LatError::Parse(s.to_string()))
}

/// Renders in the same wire format `parse_rat` accepts (`p` or `p/q`).
pub fn format_rat(x: &Rat) -> String {
    x.to_string()
}

/// Nearest integer, ties rounded up: `round(1/2) = 1`, `round(-1/2) = 0`.
/// Used for enumeration centers, where the tie direction is immaterial
/// because both neighbors are explored anyway.
pub fn round_nearest(x: &Rat) -> Int {
    (x + frac(1, 2)).floor().to_integer()
}

/// Nearest integer with exact-half ties resolved toward zero, so a
/// projection coefficient of exactly one half leaves a reduction step
/// unchanged.
pub fn round_half_toward_zero(x: &Rat) -> Int {
    use num_traits::Signed;
    if x.is_negative() {
        (x + frac(1, 2)).floor().to_integer()
    } else {
        (x - frac(1, 2)).ceil().to_integer()
    }
}

/// Least `t ≥ 0` with `t^k ≥ x`, as an integer bound for enumeration radii.
/// Used to turn an irrational root bound into a safe rational one.
pub fn int_root_ceil(x: &Rat, k: usize) -> Int {
    use num_traits::{Signed, Zero};
    assert!(k >= 1);
    if x.is_negative() || x.is_zero() {
        return Int::zero();
    }
    // integer ceiling of x, then k-th root by bisection
    let c = x.ceil().to_integer();
    let mut lo = Int::zero();
    let mut hi = Int::from(1);
    while int_pow(&hi, k) < c {
        hi = &hi * 2;
    }
    while &lo < &hi {
        let mid: Int = (&lo + &hi) / 2;
        if int_pow(&mid, k) >= c {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}
