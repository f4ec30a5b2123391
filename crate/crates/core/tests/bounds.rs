use drg_core::bounds::{a1_valency_cap, delsarte_clique_cap, hoffman_independence_cap, valency_bound};
use drg_core::spectral::{self, eigenvalues};
use drg_core::parse_array;
use num_bigint::BigInt;
use num_rational::BigRational;

fn int(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

/// Largest vertex set on `n <= 32` vertices satisfying `ok` pairwise.
fn largest_set(n: usize, ok: impl Fn(usize, usize) -> bool) -> u32 {
    (0u32..1 << n)
        .filter(|&mask| {
            (0..n).all(|i| mask >> i & 1 == 0 || (i + 1..n).all(|j| mask >> j & 1 == 0 || ok(i, j)))
        })
        .map(u32::count_ones)
        .max()
        .unwrap()
}

#[test]
fn valency_bound_for_strongly_regular_half() {
    // D = 2, α = 1/2: q = 1 and q = 2 both give 3 * 2^4 * 2^4
    let b = valency_bound(2, &BigRational::new(1.into(), 2.into())).unwrap();
    assert_eq!(b.f_value, int(3 * 16 * 16));
    assert_eq!(b.f_value, int(768));
    assert_eq!(b.kappa, int(767 * 770 / 2));
    assert_eq!(b.kappa, int(295_295));
    assert_eq!(b.maximizers, vec![1, 2]);
}

#[test]
fn a1_one_valency_caps() {
    assert_eq!(a1_valency_cap(3, true).unwrap(), BigInt::from(14));
    assert_eq!(a1_valency_cap(4, true).unwrap(), BigInt::from(62));
}

#[test]
fn hoffman_cap_on_petersen_is_attained() {
    let arr = parse_array("3,2;1,1").unwrap();
    let sp = eigenvalues(&arr, &spectral::default_precision()).unwrap();
    let cap = hoffman_independence_cap(&sp.parameters().n, 3, sp.theta_min().interval()).unwrap();
    assert_eq!(cap.as_exact(), Some(&int(4)));

    // Kneser graph K(5,2): disjoint pairs are adjacent
    let pairs: Vec<(usize, usize)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
    let adjacent = |i: usize, j: usize| {
        let (x, y) = (pairs[i], pairs[j]);
        x.0 != y.0 && x.0 != y.1 && x.1 != y.0 && x.1 != y.1
    };
    assert_eq!(largest_set(10, |i, j| !adjacent(i, j)), 4);
}

#[test]
fn delsarte_cap_on_hamming_3_3_is_met_by_lines() {
    let arr = parse_array("6,4,2;1,2,3").unwrap();
    let sp = eigenvalues(&arr, &spectral::default_precision()).unwrap();
    let cap = delsarte_clique_cap(6, sp.theta_min().interval()).unwrap();
    assert_eq!(cap.as_exact(), Some(&int(3)));
    assert_eq!(int(arr.a(1) as i64 + 2), int(3));

    let digits = |x: usize| [x % 3, x / 3 % 3, x / 9];
    let adjacent =
        |i: usize, j: usize| (0..3).filter(|&t| digits(i)[t] != digits(j)[t]).count() == 1;
    // cliques of H(3,3) live in 27 vertices; search from vertex 0's closed
    // neighbourhood, which contains a maximum clique by transitivity
    let nbhd: Vec<usize> = (0..27).filter(|&v| v == 0 || adjacent(0, v)).collect();
    let omega = largest_set(nbhd.len(), |i, j| adjacent(nbhd[i], nbhd[j]));
    assert_eq!(omega, 3);
}
