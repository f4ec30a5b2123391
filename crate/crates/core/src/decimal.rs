//! Decimal rendering of exact rationals, rounding half to even.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::interval::round_half_even;

fn pow10(e: u32) -> BigInt {
    BigInt::from(10u32).pow(e)
}

fn scale10(x: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        x * BigRational::from_integer(pow10(e as u32))
    } else {
        x / BigRational::from_integer(pow10((-e) as u32))
    }
}

/// Renders `x` with at most `sig` significant digits in plain positional
/// notation. Trailing fractional zeros are dropped.
pub fn to_decimal(x: &BigRational, sig: u32) -> String {
    assert!(sig > 0);
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let ax = x.abs();
    // exponent e with 10^e <= ax < 10^(e+1)
    let mut e: i64 = ax.to_integer().to_string().len() as i64 - 1;
    if ax < BigRational::from_integer(1.into()) {
        e = -1;
        while scale10(&ax, -e) < BigRational::from_integer(1.into()) {
            e -= 1;
        }
    }
    let mut shift = sig as i64 - 1 - e;
    let mut digits = round_half_even(&scale10(&ax, shift));
    if digits.to_string().len() as u32 > sig {
        shift -= 1;
        digits = round_half_even(&scale10(&ax, shift));
    }
    let mut s = digits.to_string();
    let body = if shift <= 0 {
        s.push_str(&"0".repeat((-shift) as usize));
        s
    } else {
        let shift = shift as usize;
        if s.len() <= shift {
            s = format!("{}{}", "0".repeat(shift - s.len() + 1), s);
        }
        let (int_part, frac_part) = s.split_at(s.len() - shift);
        let frac = frac_part.trim_end_matches('0');
        if frac.is_empty() {
            int_part.to_string()
        } else {
            format!("{int_part}.{frac}")
        }
    };
    if neg && body.chars().any(|c| c != '0' && c != '.') {
        format!("-{body}")
    } else {
        body
    }
}

/// Renders a rational as `p` or `p/q`.
pub fn to_fraction(x: &BigRational) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
