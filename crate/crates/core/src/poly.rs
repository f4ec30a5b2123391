//! Dense univariate polynomials over the integers and rationals, with just
//! enough machinery for Sturm-sequence root counting.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Integer polynomial, coefficients in ascending degree order. The zero
/// polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `x - r`.
    pub fn linear(r: &BigInt) -> Self {
        Self::new(vec![-r.clone(), BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        // Homogenised Horner: sum c_i p^i q^(d-i) / q^d keeps everything integral.
        let (p, q) = (x.numer(), x.denom());
        if self.is_zero() {
            return BigRational::zero();
        }
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * p + c * &qpow;
            qpow *= q;
        }
        // qpow = q^(d+1) after the loop
        BigRational::new(acc * q, qpow)
    }

    /// Sign of the value at `x` without building the rational.
    pub fn sign_at(&self, x: &BigRational) -> i8 {
        self.sign_at_fraction(x.numer(), x.denom())
    }

    /// Sign of the value at `p / q` for `q > 0`; the fraction need not be reduced.
    pub fn sign_at_fraction(&self, p: &BigInt, q: &BigInt) -> i8 {
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * p + c * &qpow;
            qpow *= q;
        }
        sign(&acc)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(vec![]);
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..len)
                .map(|i| {
                    self.coeffs.get(i).cloned().unwrap_or_default()
                        - other.coeffs.get(i).cloned().unwrap_or_default()
                })
                .collect(),
        )
    }

    /// Divide out the (non-negative) content. Signs of values are unchanged.
    pub fn primitive(&self) -> Self {
        let g = self
            .coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Exact division by a monic divisor; `None` if the remainder is nonzero.
    pub fn div_exact_monic(&self, divisor: &Self) -> Option<Self> {
        assert!(divisor.is_monic());
        let dd = divisor.degree()?;
        let Some(nd) = self.degree() else {
            return Some(self.clone());
        };
        if nd < dd {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let lead = rem[i + dd].clone();
            if lead.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &lead * dc;
            }
            quot[i] = lead;
        }
        rem.iter().all(|c| c.is_zero()).then(|| Self::new(quot))
    }

    /// Pseudo-remainder of `self` by `other`, scaled by a positive factor so
    /// that it has the same sign pattern as the true remainder.
    fn signed_prem(&self, other: &Self) -> Self {
        let od = other.degree().expect("nonzero divisor");
        let lead = other.coeffs[od].clone();
        let mut rem = self.clone();
        while let Some(rd) = rem.degree() {
            if rd < od {
                break;
            }
            // rem <- lead * rem - rem_lead * x^(rd-od) * other
            let rl = rem.coeffs[rd].clone();
            let mut shifted = vec![BigInt::zero(); rd - od];
            shifted.extend(other.coeffs.iter().map(|c| c * &rl));
            let scaled = rem.scale(&lead.abs());
            let shifted = if lead.is_negative() {
                Self::new(shifted).scale(&BigInt::from(-1))
            } else {
                Self::new(shifted)
            };
            rem = scaled.sub(&shifted);
        }
        rem.primitive()
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

pub(crate) fn sign(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Canonical Sturm chain `p, p', -rem(p, p'), ...`, kept primitive.
#[derive(Debug, Clone)]
pub struct SturmChain {
    polys: Vec<IntPoly>,
}

impl SturmChain {
    pub fn new(p: &IntPoly) -> Self {
        let mut polys = vec![p.clone(), p.derivative().primitive()];
        loop {
            let n = polys.len();
            if polys[n - 1].is_zero() {
                polys.pop();
                break;
            }
            let r = polys[n - 2].signed_prem(&polys[n - 1]);
            if r.is_zero() {
                break;
            }
            polys.push(r.scale(&BigInt::from(-1)));
        }
        Self { polys }
    }

    /// True when the last chain element is a nonzero constant, i.e.
    /// `gcd(p, p')` is constant.
    pub fn is_squarefree(&self) -> bool {
        self.polys.last().and_then(IntPoly::degree) == Some(0)
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    fn changes(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Sign variations at `x`.
    pub fn variations_at(&self, x: &BigRational) -> usize {
        Self::changes(self.polys.iter().map(|p| p.sign_at(x)))
    }

    pub fn variations_at_neg_infinity(&self) -> usize {
        Self::changes(self.polys.iter().map(|p| {
            let d = p.degree().unwrap_or(0);
            let lead = sign(p.coeffs.last().unwrap());
            if d % 2 == 0 {
                lead
            } else {
                -lead
            }
        }))
    }

    pub fn variations_at_pos_infinity(&self) -> usize {
        Self::changes(self.polys.iter().map(|p| sign(p.coeffs.last().unwrap())))
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`.
    /// Requires `lo` not to be a root of the chain's first polynomial.
    pub fn count_in(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.variations_at(lo).saturating_sub(self.variations_at(hi))
    }

    /// Number of distinct real roots `<= x`.
    pub fn count_at_most(&self, x: &BigRational) -> usize {
        self.variations_at_neg_infinity()
            .saturating_sub(self.variations_at(x))
    }

    pub fn first(&self) -> &IntPoly {
        &self.polys[0]
    }
}

pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub(crate) fn int_rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}
