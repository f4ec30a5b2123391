//! Closed-form bounds: the valency bound for a given ratio `θ_min <= -αk`,
//! the valency caps used by the enumeration presets, and the clique and
//! independence-number bounds from the smallest eigenvalue.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::array::{derive_parameters, IntersectionArray};
use crate::error::BoundError;
use crate::interval::CertifiedReal;
use crate::poly::int_rat;
use crate::spectral::{one_half, theta_min_at_most};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValencyBound {
    pub diameter: usize,
    pub alpha: BigRational,
    /// `f(D, α)`.
    pub f_value: BigRational,
    /// `κ(D, α) = (f - 1)(f + 2) / 2`.
    pub kappa: BigRational,
    /// Every `q` attaining the maximum in `f`, ascending.
    pub maximizers: Vec<usize>,
}

fn valency_term(d: usize, q: usize, alpha: &BigRational) -> BigRational {
    // 2^e α^(-e) with e = (q+1)(D-q) + 2q
    let e = ((q + 1) * (d - q) + 2 * q) as i32;
    let base = int_rat(2) / alpha;
    int_rat(d as i64 + 1) * num_traits::pow::pow(base, e as usize)
}

/// `f(D, α) = max_q (D+1) 2^((q+1)(D-q)+2q) α^((q+1)(q-D)-2q)` and `κ(D, α)`.
pub fn valency_bound(d: usize, alpha: &BigRational) -> Result<ValencyBound, BoundError> {
    if d < 2 {
        return Err(BoundError::Diameter(d));
    }
    if !alpha.is_positive() || alpha >= &BigRational::one() {
        return Err(BoundError::Alpha);
    }
    let terms: Vec<BigRational> = (1..=d).map(|q| valency_term(d, q, alpha)).collect();
    let f_value = terms.iter().max().unwrap().clone();
    let maximizers = (1..=d).filter(|&q| terms[q - 1] == f_value).collect();
    let kappa = (&f_value - BigRational::one()) * (&f_value + int_rat(2)) / int_rat(2);
    Ok(ValencyBound {
        diameter: d,
        alpha: alpha.clone(),
        f_value,
        kappa,
        maximizers,
    })
}

/// Valency cap for `a_1 = 1`, `θ_min = -k/2`: `2^(2D+1) - 2`, or
/// `2^(2D-2) - 2` when additionally `c_D = k`.
pub fn a1_valency_cap(d: usize, cd_equals_k: bool) -> Result<BigInt, BoundError> {
    if d < 2 {
        return Err(BoundError::Diameter(d));
    }
    let e = if cd_equals_k { 2 * d - 2 } else { 2 * d + 1 };
    Ok(BigInt::from(2).pow(e as u32) - 2)
}

/// Valency cap for non-bipartite, triangle-free arrays of diameter 3 with
/// `θ_min <= -k/2`.
pub const fn diameter3_a1zero_cap() -> u64 {
    64
}

/// Largest clique size `1 + k / (-θ_min)`.
pub fn delsarte_clique_cap(k: u64, theta_min: &CertifiedReal) -> Result<CertifiedReal, BoundError> {
    if k < 2 {
        return Err(BoundError::Domain(format!("valency must be at least 2, got {k}")));
    }
    if !theta_min.is_negative() {
        return Err(BoundError::Domain("smallest eigenvalue must be negative".into()));
    }
    let ratio = CertifiedReal::from_int(k)
        .checked_div(&-theta_min)
        .expect("nonzero divisor");
    Ok(CertifiedReal::one() + ratio)
}

/// Independence number bound `n / (1 + k / (-θ_min))`.
pub fn hoffman_independence_cap(
    n: &BigRational,
    k: u64,
    theta_min: &CertifiedReal,
) -> Result<CertifiedReal, BoundError> {
    if k < 2 || n <= &int_rat(k) {
        return Err(BoundError::Domain(format!(
            "need n > k >= 2, got n = {n}, k = {k}"
        )));
    }
    let clique = delsarte_clique_cap(k, theta_min)?;
    Ok(CertifiedReal::exact(n.clone())
        .checked_div(&clique)
        .expect("clique bound is positive"))
}

/// Necessary condition for a 3-colouring: an independent set of size `n/3`
/// must fit under the independence bound, i.e. `θ_min <= -k/2`.
pub fn three_chromatic_necessary(arr: &IntersectionArray) -> bool {
    theta_min_at_most(arr, &one_half())
}

/// `hoffman_independence_cap >= n/3`, evaluated on a certified `θ_min`.
/// Returns `None` when the interval straddles the threshold.
pub fn hoffman_admits_third(arr: &IntersectionArray, theta_min: &CertifiedReal) -> Option<bool> {
    let n = derive_parameters(arr).n;
    let cap = hoffman_independence_cap(&n, arr.valency(), theta_min).ok()?;
    let third = &n / int_rat(3);
    if cap.lo() >= &third {
        Some(true)
    } else if cap.hi() < &third {
        Some(false)
    } else {
        None
    }
}

impl ValencyBound {
    /// `κ` rounded down, the usable integer valency cap.
    pub fn kappa_floor(&self) -> BigInt {
        self.kappa.floor().to_integer()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::parse_array;
    use crate::poly::rat;
    use crate::spectral::{default_precision, eigenvalues};

    /// Literal evaluation with separate powers of two and of α.
    fn oracle(d: usize, alpha: &BigRational) -> BigRational {
        (1..=d)
            .map(|q| {
                let e2 = ((q + 1) * (d - q) + 2 * q) as i64;
                let ea = (q as i64 + 1) * (q as i64 - d as i64) - 2 * q as i64;
                let two = num_traits::pow::pow(int_rat(2), e2 as usize);
                let a = if ea >= 0 {
                    num_traits::pow::pow(alpha.clone(), ea as usize)
                } else {
                    num_traits::pow::pow(alpha.recip(), (-ea) as usize)
                };
                int_rat(d as i64 + 1) * two * a
            })
            .max()
            .unwrap()
    }

    #[test]
    fn diameter_two_half() {
        let vb = valency_bound(2, &rat(1, 2)).unwrap();
        assert_eq!(vb.f_value, int_rat(768));
        assert_eq!(vb.kappa, int_rat(295295));
        assert_eq!(vb.maximizers, vec![1, 2]);
    }

    #[test]
    fn diameter_three_half_matches_oracle() {
        let vb = valency_bound(3, &rat(1, 2)).unwrap();
        assert_eq!(vb.f_value, oracle(3, &rat(1, 2)));
        assert_eq!(vb.f_value, int_rat(65536));
        assert_eq!(vb.maximizers, vec![2]);
    }

    #[test]
    fn f_decreases_in_alpha() {
        let mut last = None;
        for num in 1..10 {
            let f = valency_bound(2, &rat(num, 10)).unwrap().f_value;
            if let Some(prev) = last {
                assert!(f < prev);
            }
            last = Some(f);
        }
    }

    #[test]
    fn rejects_bad_domain() {
        assert_eq!(valency_bound(1, &rat(1, 2)), Err(BoundError::Diameter(1)));
        assert_eq!(valency_bound(2, &rat(1, 1)), Err(BoundError::Alpha));
        assert_eq!(valency_bound(2, &rat(0, 1)), Err(BoundError::Alpha));
        assert!(a1_valency_cap(1, true).is_err());
    }

    #[test]
    fn a1_caps() {
        assert_eq!(a1_valency_cap(3, true).unwrap(), 14.into());
        assert_eq!(a1_valency_cap(4, true).unwrap(), 62.into());
        assert_eq!(a1_valency_cap(3, false).unwrap(), 126.into());
        for d in 2..12 {
            assert!(a1_valency_cap(d, true).unwrap() < a1_valency_cap(d, false).unwrap());
        }
    }

    #[test]
    fn clique_and_independence_caps() {
        let three = CertifiedReal::from_int(-3);
        assert_eq!(delsarte_clique_cap(6, &three).unwrap().as_exact(), Some(&int_rat(3)));
        let two = CertifiedReal::from_int(-2);
        assert_eq!(delsarte_clique_cap(3, &two).unwrap().as_exact(), Some(&rat(5, 2)));
        let minus_k = CertifiedReal::from_int(-7);
        assert_eq!(delsarte_clique_cap(7, &minus_k).unwrap().as_exact(), Some(&int_rat(2)));

        let h = hoffman_independence_cap(&int_rat(10), 3, &two).unwrap();
        assert_eq!(h.as_exact(), Some(&int_rat(4)));
        let h = hoffman_independence_cap(&int_rat(27), 6, &three).unwrap();
        assert_eq!(h.as_exact(), Some(&int_rat(9)));
        let one = CertifiedReal::from_int(-1);
        let h = hoffman_independence_cap(&int_rat(5), 4, &one).unwrap();
        assert_eq!(h.as_exact(), Some(&int_rat(1)));
        assert!(hoffman_independence_cap(&int_rat(3), 3, &one).is_err());
        assert!(delsarte_clique_cap(3, &CertifiedReal::from_int(1)).is_err());
    }

    #[test]
    fn three_chromatic_examples() {
        assert!(three_chromatic_necessary(&parse_array("6,4,2;1,2,3").unwrap()));
        assert!(three_chromatic_necessary(&parse_array("4,2;1,2").unwrap()));
        assert!(three_chromatic_necessary(&parse_array("7,6,5;1,2,3").unwrap()));
        assert!(!three_chromatic_necessary(&parse_array("7,6;1,1").unwrap()));
    }

    #[test]
    fn hoffman_third_agrees_with_exact_decision() {
        for s in ["6,4,2;1,2,3", "4,2;1,2", "7,6;1,1", "2,1;1,1", "3,2;1,1", "5,4;1,2"] {
            let a = parse_array(s).unwrap();
            let sp = eigenvalues(&a, &default_precision()).unwrap();
            assert_eq!(
                hoffman_admits_third(&a, sp.theta_min().interval()),
                Some(three_chromatic_necessary(&a)),
                "{s}"
            );
        }
    }
}
