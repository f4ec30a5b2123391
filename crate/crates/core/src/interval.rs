//! Closed rational intervals used as certified real numbers.
//!
//! Every arithmetic operation returns an interval containing all possible
//! results for operands drawn from the input intervals. A degenerate interval
//! (`lo == hi`) is an exact rational.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedReal {
    lo: BigRational,
    hi: BigRational,
}

impl CertifiedReal {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn exact(x: BigRational) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn from_int(x: impl Into<BigInt>) -> Self {
        Self::exact(BigRational::from_integer(x.into()))
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&BigRational::zero())
    }

    /// Certainly `> 0`.
    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Certainly `< 0`.
    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Certainly `>= 0`.
    pub fn is_nonnegative(&self) -> bool {
        !self.lo.is_negative()
    }

    /// Certainly `<= 0`.
    pub fn is_nonpositive(&self) -> bool {
        !self.hi.is_positive()
    }

    /// Certainly outside `[-eps, eps]`.
    pub fn excludes_ball(&self, eps: &BigRational) -> bool {
        &self.lo > eps || self.hi < -eps.clone()
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self.clone()
        } else {
            Self::new(BigRational::zero(), self.hi.clone().max(-self.lo.clone()))
        }
    }

    pub fn square(&self) -> Self {
        let a = self.abs();
        Self::new(&a.lo * &a.lo, &a.hi * &a.hi)
    }

    /// `None` when the divisor interval contains zero.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        if other.contains_zero() {
            return None;
        }
        let inv = Self::new(other.hi.recip(), other.lo.recip());
        Some(self * &inv)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        let (a, b) = (&self.lo * s, &self.hi * s);
        if s.is_negative() {
            Self { lo: b, hi: a }
        } else {
            Self { lo: a, hi: b }
        }
    }

    /// Hull of two intervals.
    pub fn hull(&self, other: &Self) -> Self {
        Self::new(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
        )
    }

    /// The integer nearest to the midpoint (ties to even).
    pub fn nearest_integer(&self) -> BigInt {
        round_half_even(&self.midpoint())
    }

    /// Lower and upper bounds on `|x - target|` over the interval.
    pub fn distance_bounds(&self, target: &BigRational) -> (BigRational, BigRational) {
        let dl = (&self.lo - target).abs();
        let dh = (&self.hi - target).abs();
        let upper = dl.clone().max(dh.clone());
        let lower = if self.contains(target) {
            BigRational::zero()
        } else {
            dl.min(dh)
        };
        (lower, upper)
    }

    /// Whether some integer lies in the interval.
    pub fn contains_integer(&self) -> bool {
        self.lo.ceil() <= self.hi
    }
}

pub(crate) fn round_half_even(x: &BigRational) -> BigInt {
    let floor = x.floor();
    let frac = x - &floor;
    let half = BigRational::new(1.into(), 2.into());
    let f = floor.to_integer();
    match frac.cmp(&half) {
        std::cmp::Ordering::Less => f,
        std::cmp::Ordering::Greater => f + 1,
        std::cmp::Ordering::Equal => {
            if f.is_even() {
                f
            } else {
                f + 1
            }
        }
    }
}

impl From<BigRational> for CertifiedReal {
    fn from(x: BigRational) -> Self {
        Self::exact(x)
    }
}

impl Neg for CertifiedReal {
    type Output = CertifiedReal;
    fn neg(self) -> CertifiedReal {
        CertifiedReal {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Neg for &CertifiedReal {
    type Output = CertifiedReal;
    fn neg(self) -> CertifiedReal {
        -self.clone()
    }
}

impl Add for &CertifiedReal {
    type Output = CertifiedReal;
    fn add(self, rhs: &CertifiedReal) -> CertifiedReal {
        CertifiedReal {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl Sub for &CertifiedReal {
    type Output = CertifiedReal;
    fn sub(self, rhs: &CertifiedReal) -> CertifiedReal {
        CertifiedReal {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl Mul for &CertifiedReal {
    type Output = CertifiedReal;
    fn mul(self, rhs: &CertifiedReal) -> CertifiedReal {
        if self.is_exact() {
            return rhs.scale(&self.lo);
        }
        if rhs.is_exact() {
            return self.scale(&rhs.lo);
        }
        // Sign cases pick the extreme products directly; rational
        // comparisons cost more than the products themselves.
        let (a, b) = (self, rhs);
        let (lo, hi) = if a.is_nonnegative() {
            if b.is_nonnegative() {
                (&a.lo * &b.lo, &a.hi * &b.hi)
            } else if b.is_nonpositive() {
                (&a.hi * &b.lo, &a.lo * &b.hi)
            } else {
                (&a.hi * &b.lo, &a.hi * &b.hi)
            }
        } else if a.is_nonpositive() {
            if b.is_nonnegative() {
                (&a.lo * &b.hi, &a.hi * &b.lo)
            } else if b.is_nonpositive() {
                (&a.hi * &b.hi, &a.lo * &b.lo)
            } else {
                (&a.lo * &b.hi, &a.lo * &b.lo)
            }
        } else if b.is_nonnegative() {
            (&a.lo * &b.hi, &a.hi * &b.hi)
        } else if b.is_nonpositive() {
            (&a.hi * &b.lo, &a.lo * &b.lo)
        } else {
            let lo = (&a.lo * &b.hi).min(&a.hi * &b.lo);
            let hi = (&a.lo * &b.lo).max(&a.hi * &b.hi);
            (lo, hi)
        };
        CertifiedReal { lo, hi }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CertifiedReal {
            type Output = CertifiedReal;
            fn $m(self, rhs: CertifiedReal) -> CertifiedReal {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CertifiedReal> for CertifiedReal {
            type Output = CertifiedReal;
            fn $m(self, rhs: &CertifiedReal) -> CertifiedReal {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.lo)
        } else {
            write!(
                f,
                "[{}, {}]",
                crate::decimal::to_decimal(&self.lo, 15),
                crate::decimal::to_decimal(&self.hi, 15)
            )
        }
    }
}

impl CertifiedReal {
    pub fn one() -> Self {
        Self::exact(BigRational::one())
    }

    pub fn zero() -> Self {
        Self::exact(BigRational::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn iv(a: (i64, i64), b: (i64, i64)) -> CertifiedReal {
        CertifiedReal::new(rat(a.0, a.1), rat(b.0, b.1))
    }

    #[test]
    fn multiplication_handles_signs() {
        let x = iv((-1, 1), (2, 1));
        let y = iv((-3, 1), (1, 1));
        let p = &x * &y;
        assert_eq!(p, iv((-6, 1), (3, 1)));
    }

    #[test]
    fn multiplication_matches_endpoint_products() {
        let vals = [-3, -1, 0, 2, 5];
        for &a in &vals {
            for &b in &vals {
                for &c in &vals {
                    for &d in &vals {
                        if a > b || c > d {
                            continue;
                        }
                        let p = &iv((a, 1), (b, 1)) * &iv((c, 2), (d, 2));
                        let prods = [a * c, a * d, b * c, b * d];
                        let lo = *prods.iter().min().unwrap();
                        let hi = *prods.iter().max().unwrap();
                        assert_eq!(p, iv((lo, 2), (hi, 2)), "[{a},{b}] * [{c}/2,{d}/2]");
                    }
                }
            }
        }
    }

    #[test]
    fn square_of_straddling_interval_is_nonnegative() {
        let s = iv((-2, 1), (1, 1)).square();
        assert_eq!(s, iv((0, 1), (4, 1)));
    }

    #[test]
    fn division_refuses_zero() {
        assert!(iv((1, 1), (2, 1)).checked_div(&iv((-1, 1), (1, 1))).is_none());
        let q = iv((1, 1), (2, 1)).checked_div(&iv((2, 1), (4, 1))).unwrap();
        assert_eq!(q, iv((1, 4), (1, 1)));
    }

    #[test]
    fn half_even_rounding() {
        assert_eq!(round_half_even(&rat(5, 2)), 2.into());
        assert_eq!(round_half_even(&rat(7, 2)), 4.into());
        assert_eq!(round_half_even(&rat(-5, 2)), (-2).into());
        assert_eq!(round_half_even(&rat(26, 10)), 3.into());
    }

    #[test]
    fn distance_bounds() {
        let x = iv((19, 10), (21, 10));
        let (lo, hi) = x.distance_bounds(&rat(2, 1));
        assert_eq!(lo, rat(0, 1));
        assert_eq!(hi, rat(1, 10));
        assert!(x.contains_integer());
        assert!(!iv((21, 10), (22, 10)).contains_integer());
    }
}
