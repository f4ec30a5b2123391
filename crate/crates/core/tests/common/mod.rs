//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use drg_core::spectral::{self, eigenvalues};
use drg_core::feasibility::{a1_pattern_index, is_regular_near_polygon};
use drg_core::{
    derive_parameters, run_pipeline, CertifiedReal, CheckId, Constraints, IntersectionArray, Profile,
    Structural,
};
use num_bigint::BigInt;
use num_rational::BigRational;

/// Every `(b, c)` with `b` non-increasing from `k`, `c` non-decreasing from
/// 1, accepted by the array constructor.
pub fn all_arrays(d: usize, k: u64) -> Vec<IntersectionArray> {
    fn rec(d: usize, k: u64, b: &mut Vec<u64>, c: &mut Vec<u64>, out: &mut Vec<IntersectionArray>) {
        if c.len() == d {
            if let Ok(a) = IntersectionArray::new(b.clone(), c.clone()) {
                out.push(a);
            }
            return;
        }
        if b.len() < d {
            let top = *b.last().unwrap();
            for bi in 1..=top {
                b.push(bi);
                rec(d, k, b, c, out);
                b.pop();
            }
            return;
        }
        let low = c.last().copied().unwrap_or(1);
        let high = if c.is_empty() { 1 } else { k };
        for ci in low..=high {
            c.push(ci);
            rec(d, k, b, c, out);
            c.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, k, &mut vec![k], &mut Vec::new(), &mut out);
    out
}

fn int(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

/// `tr(L_1^2)` by multiplying out the tridiagonal matrix.
pub fn trace_of_square(arr: &IntersectionArray) -> BigInt {
    let n = arr.diameter() + 1;
    let mut l = vec![vec![BigInt::from(0); n]; n];
    for i in 0..n {
        l[i][i] = arr.a(i).into();
        if i + 1 < n {
            l[i][i + 1] = arr.b(i).into();
            l[i + 1][i] = arr.c(i + 1).into();
        }
    }
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| &l[i][j] * &l[j][i])
        .sum()
}

fn holds(got: &CertifiedReal, want: &BigRational, exact: bool) -> bool {
    if exact {
        got.as_exact() == Some(want)
    } else {
        got.contains(want)
    }
}

/// Returns a description of the first violated identity.
pub fn identity_violation(arr: &IntersectionArray) -> Option<String> {
    let params = derive_parameters(arr);
    let sp = match eigenvalues(arr, &spectral::default_precision()) {
        Ok(sp) => sp,
        Err(e) => return Some(format!("spectrum: {e}")),
    };
    let d = arr.diameter();
    let k = arr.valency();
    if sp.len() != d + 1 {
        return Some(format!("{} eigenvalues", sp.len()));
    }
    if sp.eigenvalues()[0].exact_integer() != Some(&BigInt::from(k)) {
        return Some("largest eigenvalue is not k".into());
    }
    // k_0 = 1, k_i c_i = k_{i-1} b_{i-1}, n = Σ k_i
    if params.k[0] != int(1) {
        return Some("k_0 != 1".into());
    }
    for i in 1..=d {
        if &params.k[i] * int(arr.c(i)) != &params.k[i - 1] * int(arr.b(i - 1)) {
            return Some(format!("k_{i} recurrence"));
        }
    }
    if params.k.iter().sum::<BigRational>() != params.n {
        return Some("n != sum k_i".into());
    }
    let exact = sp.all_exact();
    let n = params.n.clone();
    let checks = [
        ("sum m", sp.moment(0), n.clone()),
        ("sum m theta", sp.moment(1), int(0)),
        ("sum m theta^2", sp.moment(2), &n * int(k)),
        ("sum theta^2", sp.distinct_square_sum(), int(trace_of_square(arr))),
    ];
    for (what, got, want) in checks {
        if !holds(&got, &want, exact) {
            return Some(format!("{what} = {got}, want {want}"));
        }
    }
    if spectral::trace_square(arr) != trace_of_square(arr) {
        return Some("trace_square".into());
    }
    None
}

/// Generate-then-filter reading of the enumeration constraints. Uses the
/// Sturm-chain decisions on a computed spectrum, not the enumerator's
/// minor-sign shortcuts or its coarse multiplicity screen.
pub fn naive_keeps(cons: &Constraints, arr: &IntersectionArray) -> bool {
    let d = arr.diameter();
    let k = arr.valency();
    if cons.a1.is_some_and(|a1| arr.a(1) != a1) {
        return false;
    }
    if d >= 2 && cons.c2_max.is_some_and(|cap| arr.c(2) > cap) {
        return false;
    }
    if cons.require_cd_equals_k && arr.c(d) != k {
        return false;
    }
    if cons.require_nonbipartite && arr.is_bipartite() {
        return false;
    }
    let sp = eigenvalues(arr, &spectral::default_precision()).unwrap();
    if let Some(rho) = &cons.theta_ratio {
        if !sp.theta_min_at_most(rho) {
            return false;
        }
    }
    let half = BigRational::new(1.into(), 2.into());
    let structural = match cons.structural {
        Structural::None => true,
        Structural::A1Structure => a1_pattern_index(arr).is_some() && sp.theta_min_equals_ratio(&half),
        Structural::NearPolygon => is_regular_near_polygon(arr),
    };
    if !structural {
        return false;
    }
    let report = run_pipeline(arr, &Profile::new(cons.checks.iter().copied(), false), None).unwrap();
    if report.failed().next().is_some() {
        return false;
    }
    if cons.triangle_free_multiplicity && arr.a(1) == 0 {
        let m = report.spectrum.multiplicities().last().unwrap();
        if m.hi() < &BigRational::from_integer(k.into()) {
            return false;
        }
    }
    true
}

pub fn naive_survivors(cons: &Constraints) -> Vec<IntersectionArray> {
    let mut out: Vec<IntersectionArray> = (cons.k_min..=cons.k_max)
        .flat_map(|k| all_arrays(cons.diameter, k))
        .filter(|a| naive_keeps(cons, a))
        .collect();
    out.sort_by(|x, y| x.sort_key().cmp(&y.sort_key()));
    out
}

/// Constraint sets for the completeness comparison: every diameter up to 3
/// and valency up to 12, each pruning rule exercised at least once.
pub fn completeness_cases() -> Vec<(&'static str, Constraints)> {
    let half = BigRational::new(1.into(), 2.into());
    let third = BigRational::new(1.into(), 3.into());
    let integrality = vec![CheckId::KiIntegrality, CheckId::MultiplicityIntegrality];
    let mut cases = Vec::new();
    for d in 1..=3 {
        cases.push(("unconstrained", Constraints::new(d, 1, 12)));
        let mut c = Constraints::new(d, 1, 12);
        c.checks = integrality.clone();
        cases.push(("integrality", c));
    }
    let mut c = Constraints::new(3, 2, 12);
    c.a1 = Some(0);
    c.require_nonbipartite = true;
    c.theta_ratio = Some(half.clone());
    c.triangle_free_multiplicity = true;
    c.checks = integrality.clone();
    cases.push(("triangle-free, theta <= -k/2", c));
    let mut c = Constraints::new(3, 2, 12);
    c.a1 = Some(1);
    c.c2_max = Some(3);
    c.theta_ratio = Some(half.clone());
    c.structural = Structural::A1Structure;
    c.checks = vec![CheckId::KiIntegrality, CheckId::MultiplicityIntegrality, CheckId::A1Structure];
    cases.push(("a1 = 1 structure", c));
    let mut c = Constraints::new(3, 2, 12);
    c.require_cd_equals_k = true;
    c.checks = CheckId::ALL.to_vec();
    cases.push(("c_D = k, all checks", c));
    let mut c = Constraints::new(2, 2, 12);
    c.require_nonbipartite = true;
    c.c2_max = Some(4);
    c.theta_ratio = Some(third);
    c.structural = Structural::NearPolygon;
    c.checks = CheckId::ALL.to_vec();
    cases.push(("near polygon, theta <= -k/3", c));
    let mut c = Constraints::new(3, 2, 12);
    c.theta_ratio = Some(half);
    c.checks = CheckId::ALL.to_vec();
    cases.push(("theta <= -k/2, all checks", c));
    cases
}

/// The classification of non-bipartite arrays with `D <= 4` (`a_1 != 0`
/// when `D = 4`), `k >= 2` and `θ_min <= -k/2`, written out by hand, with
/// `K_{t,t,t}` for `2 <= t <= t_cap`.
pub const CLASSIFIED_SPORADIC: [&str; 34] = [
    "2;1",
    "2,1;1,1",
    "3,2;1,1",
    "5,4;1,2",
    "4,2;1,2",
    "6,4;1,3",
    "10,8;1,5",
    "2,1,1;1,1,1",
    "4,3,3;1,1,2",
    "5,4,2;1,1,4",
    "6,5,1;1,1,6",
    "6,5,2;1,1,3",
    "7,6,5;1,2,3",
    "7,6,6;1,1,2",
    "8,7,5;1,1,4",
    "15,14,12;1,1,9",
    "21,20,16;1,2,12",
    "4,2,1;1,1,4",
    "4,2,2;1,1,2",
    "6,4,2;1,2,3",
    "6,4,4;1,1,3",
    "8,6,1;1,3,8",
    "14,12,8;1,3,7",
    "18,16,16;1,1,9",
    "24,22,20;1,2,12",
    "30,28,24;1,3,15",
    "42,40,32;1,5,21",
    "4,2,2,2;1,1,1,2",
    "6,4,2,1;1,1,4,6",
    "8,6,4,2;1,2,3,4",
    "10,8,8,8;1,1,1,5",
    "10,8,8,2;1,1,4,5",
    "30,28,24,16;1,3,7,15",
    "170,168,160,128;1,5,21,85",
];

pub fn classification_list(t_cap: u64) -> Vec<IntersectionArray> {
    let mut out: Vec<IntersectionArray> = CLASSIFIED_SPORADIC
        .iter()
        .map(|s| drg_core::parse_array(s).unwrap())
        .collect();
    for t in 2..=t_cap {
        out.push(IntersectionArray::new(vec![2 * t, t - 1], vec![1, 2 * t]).unwrap());
    }
    out.sort_by(|x, y| x.sort_key().cmp(&y.sort_key()));
    out
}

/// `D = 3`, `a_1 = 0`, `c_2 = 6` and `θ_min = -k/2` exactly.
pub const C2_SIX_SYNTHETIC: [&str; 5] = [
    "16,15,1;1,6,16",
    "16,15,2;1,6,8",
    "18,17,5;1,6,6",
    "24,23,9;1,6,16",
    "28,27,15;1,6,14",
];
