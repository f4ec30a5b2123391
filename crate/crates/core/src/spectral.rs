//! Spectrum of the intersection matrix `L_1`: characteristic polynomial,
//! certified eigenvalue isolation, standard sequences, Biggs multiplicities
//! and Krein parameters.
//!
//! `L_1` is similar to a symmetric tridiagonal (Jacobi) matrix with
//! off-diagonal entries `sqrt(b_i c_{i+1}) > 0`, so its `D + 1` eigenvalues
//! are real and simple. They are isolated with a Sturm chain of the exact
//! integer characteristic polynomial. Rational roots of a monic integer
//! polynomial are integers, which are found exactly by divisor testing; all
//! other eigenvalues are carried as rational intervals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::array::{derive_parameters, ArrayParameters, IntersectionArray};
use crate::error::SpectralError;
use crate::interval::CertifiedReal;
use crate::poly::{int_rat, rat, IntPoly, SturmChain};

/// Default width of eigenvalue isolating intervals.
pub fn default_precision() -> BigRational {
    rat(1, 1_000_000_000_000)
}

/// Multiplicities within this distance of a positive integer count as integral.
pub fn multiplicity_pass_tolerance() -> BigRational {
    rat(1, 1_000_000)
}

/// Distance from every integer beyond which a multiplicity is non-integral.
pub fn multiplicity_fail_tolerance() -> BigRational {
    rat(1, 1_000)
}

/// Krein parameters inside `[-eps, eps]` are treated as possibly zero.
pub fn krein_epsilon() -> BigRational {
    rat(1, 100_000_000)
}

#[derive(Debug, Clone)]
pub struct SpectralOptions {
    pub precision: BigRational,
    /// Bisection steps allowed per eigenvalue.
    pub max_bisections: usize,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self {
            precision: default_precision(),
            max_bisections: 400,
        }
    }
}

impl SpectralOptions {
    pub fn with_precision(precision: BigRational) -> Self {
        Self {
            precision,
            ..Self::default()
        }
    }
}

/// One eigenvalue of `L_1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eigenvalue {
    interval: CertifiedReal,
    exact_integer: Option<BigInt>,
}

impl Eigenvalue {
    pub fn exact(value: BigInt) -> Self {
        Self {
            interval: CertifiedReal::from_int(value.clone()),
            exact_integer: Some(value),
        }
    }

    /// Isolating interval `[lo, hi]`, degenerate when exact.
    pub fn interval(&self) -> &CertifiedReal {
        &self.interval
    }

    pub fn exact_integer(&self) -> Option<&BigInt> {
        self.exact_integer.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact_integer.is_some()
    }

    pub fn approx(&self) -> f64 {
        self.interval.to_f64()
    }
}

/// Eigenvalues in strictly decreasing order with their Biggs multiplicities.
#[derive(Debug, Clone)]
pub struct Spectrum {
    eigenvalues: Vec<Eigenvalue>,
    multiplicities: Vec<CertifiedReal>,
    char_poly: IntPoly,
    chain: SturmChain,
    params: ArrayParameters,
    arr: IntersectionArray,
    precision: BigRational,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> &[Eigenvalue] {
        &self.eigenvalues
    }

    pub fn multiplicities(&self) -> &[CertifiedReal] {
        &self.multiplicities
    }

    pub fn char_poly(&self) -> &IntPoly {
        &self.char_poly
    }

    pub fn parameters(&self) -> &ArrayParameters {
        &self.params
    }

    pub fn array(&self) -> &IntersectionArray {
        &self.arr
    }

    pub fn precision(&self) -> &BigRational {
        &self.precision
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Smallest eigenvalue `θ_D`.
    pub fn theta_min(&self) -> &Eigenvalue {
        self.eigenvalues.last().unwrap()
    }

    /// Second largest eigenvalue `θ_1`, absent for `D = 0`.
    pub fn theta_1(&self) -> Option<&Eigenvalue> {
        self.eigenvalues.get(1)
    }

    pub fn all_exact(&self) -> bool {
        self.eigenvalues.iter().all(Eigenvalue::is_exact)
    }

    /// `Σ m_i θ_i^p` over the spectrum.
    pub fn moment(&self, p: u32) -> CertifiedReal {
        self.eigenvalues
            .iter()
            .zip(&self.multiplicities)
            .fold(CertifiedReal::zero(), |acc, (ev, m)| {
                let mut term = m.clone();
                for _ in 0..p {
                    term = &term * ev.interval();
                }
                acc + term
            })
    }

    /// `Σ θ_i^2` over the distinct eigenvalues.
    pub fn distinct_square_sum(&self) -> CertifiedReal {
        self.eigenvalues
            .iter()
            .fold(CertifiedReal::zero(), |acc, ev| acc + ev.interval().square())
    }

    /// Tightens every non-exact eigenvalue to width `<= precision` by further
    /// bisection; new intervals are nested in the old ones.
    pub fn refine(&self, opts: &SpectralOptions) -> Result<Spectrum, SpectralError> {
        if !opts.precision.is_positive() {
            return Err(SpectralError::BadPrecision);
        }
        let eigenvalues = self
            .eigenvalues
            .iter()
            .map(|ev| {
                if ev.is_exact() {
                    Ok(ev.clone())
                } else {
                    let (lo, hi) = bisect_to(
                        &self.chain,
                        ev.interval.lo().clone(),
                        ev.interval.hi().clone(),
                        opts,
                    )?;
                    Ok(Eigenvalue {
                        interval: CertifiedReal::new(lo, hi),
                        exact_integer: None,
                    })
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.with_eigenvalues(eigenvalues, opts.precision.clone()))
    }

    fn with_eigenvalues(&self, eigenvalues: Vec<Eigenvalue>, precision: BigRational) -> Spectrum {
        let multiplicities = eigenvalues
            .iter()
            .map(|ev| multiplicity_with(&self.arr, &self.params, ev))
            .collect();
        Spectrum {
            eigenvalues,
            multiplicities,
            char_poly: self.char_poly.clone(),
            chain: self.chain.clone(),
            params: self.params.clone(),
            arr: self.arr.clone(),
            precision,
        }
    }
}

/// `det(xI - L_1)` via the three-term recurrence of leading principal minors.
pub fn char_poly(arr: &IntersectionArray) -> IntPoly {
    let d = arr.diameter();
    let x = IntPoly::from_i64(&[0, 1]);
    let mut prev = IntPoly::from_i64(&[1]);
    let mut cur = x.clone(); // a_0 = 0
    for j in 1..=d {
        let shifted = x.sub(&IntPoly::new(vec![BigInt::from(arr.a(j))]));
        let off = BigInt::from(arr.b(j - 1)) * BigInt::from(arr.c(j));
        let next = shifted.mul(&cur).sub(&prev.scale(&off));
        prev = cur;
        cur = next;
    }
    cur
}

fn integer_roots(p: &IntPoly, bound: u64) -> Vec<BigInt> {
    let c0 = p.coeffs().first().cloned().unwrap_or_default();
    let mut roots = Vec::new();
    if c0.is_zero() {
        roots.push(BigInt::zero());
    }
    for d in 1..=bound {
        let d = BigInt::from(d);
        if !c0.is_zero() && !(&c0 % &d).is_zero() {
            continue;
        }
        for cand in [d.clone(), -d.clone()] {
            if p.eval_int(&cand).is_zero() {
                roots.push(cand);
            }
        }
    }
    roots
}

/// Bisect `(lo, hi]` (containing exactly one root) down to width `<= precision`.
fn bisect_to(
    chain: &SturmChain,
    mut lo: BigRational,
    mut hi: BigRational,
    opts: &SpectralOptions,
) -> Result<(BigRational, BigRational), SpectralError> {
    // One simple root and no root at either end, so the sign of p alone
    // locates it. Every bisection point is a non-integer, hence never a root
    // of the monic integer polynomial. Endpoints are kept as numerators over
    // a shared denominator to avoid normalising at every step.
    let p = chain.first();
    let mut den = lo.denom().lcm(hi.denom());
    let mut a = lo.numer() * (&den / lo.denom());
    let mut b = hi.numer() * (&den / hi.denom());
    let lo_sign = p.sign_at_fraction(&a, &den);
    let (eps_num, eps_den) = (opts.precision.numer(), opts.precision.denom());
    let mut steps = 0;
    while (&b - &a) * eps_den > eps_num * &den {
        if steps == opts.max_bisections {
            return Err(SpectralError::PrecisionNotReached {
                precision: opts.precision.to_string(),
                cap: opts.max_bisections,
            });
        }
        let mid = &a + &b;
        den <<= 1;
        if p.sign_at_fraction(&mid, &den) == lo_sign {
            a = mid;
            b <<= 1;
        } else {
            b = mid;
            a <<= 1;
        }
        steps += 1;
    }
    lo = BigRational::new(a, den.clone());
    hi = BigRational::new(b, den);
    Ok((lo, hi))
}

fn isolate(
    chain: &SturmChain,
    lo: BigRational,
    hi: BigRational,
    count: usize,
    out: &mut Vec<(BigRational, BigRational)>,
    depth: usize,
    cap: usize,
) -> Result<(), SpectralError> {
    match count {
        0 => Ok(()),
        1 => {
            out.push((lo, hi));
            Ok(())
        }
        _ => {
            if depth == cap {
                return Err(SpectralError::PrecisionNotReached {
                    precision: "isolation".into(),
                    cap,
                });
            }
            let mid = (&lo + &hi) / int_rat(2);
            let left = chain.count_in(&lo, &mid);
            // right half first so the output is in decreasing order
            isolate(chain, mid.clone(), hi, count - left, out, depth + 1, cap)?;
            isolate(chain, lo, mid, left, out, depth + 1, cap)
        }
    }
}

pub fn eigenvalues(
    arr: &IntersectionArray,
    precision: &BigRational,
) -> Result<Spectrum, SpectralError> {
    eigenvalues_with(arr, &SpectralOptions::with_precision(precision.clone()))
}

pub fn eigenvalues_with(
    arr: &IntersectionArray,
    opts: &SpectralOptions,
) -> Result<Spectrum, SpectralError> {
    if !opts.precision.is_positive() {
        return Err(SpectralError::BadPrecision);
    }
    let p = char_poly(arr);
    let chain = SturmChain::new(&p);
    if !chain.is_squarefree() {
        return Err(SpectralError::NotSquarefree);
    }
    let k = arr.valency();
    // All eigenvalues lie in [-k, k]. Endpoints -k-1/3 and k+2/3 make every
    // bisection point a non-integer rational, hence never a root.
    let lo = int_rat(-(k as i64)) - rat(1, 3);
    let hi = int_rat(k as i64) + rat(2, 3);
    let total = chain.count_in(&lo, &hi);
    debug_assert_eq!(total, arr.diameter() + 1);
    let mut brackets = Vec::with_capacity(total);
    isolate(&chain, lo, hi, total, &mut brackets, 0, opts.max_bisections)?;
    let int_roots = integer_roots(&p, k);
    let eigenvalues = brackets
        .into_iter()
        .map(|(lo, hi)| {
            let hit = int_roots
                .iter()
                .find(|r| {
                    let r = int_rat((*r).clone());
                    lo < r && r <= hi
                })
                .cloned();
            match hit {
                Some(r) => Ok(Eigenvalue::exact(r)),
                None => {
                    let (lo, hi) = bisect_to(&chain, lo, hi, opts)?;
                    Ok(Eigenvalue {
                        interval: CertifiedReal::new(lo, hi),
                        exact_integer: None,
                    })
                }
            }
        })
        .collect::<Result<Vec<_>, SpectralError>>()?;
    let params = derive_parameters(arr);
    let multiplicities = eigenvalues
        .iter()
        .map(|ev| multiplicity_with(arr, &params, ev))
        .collect();
    Ok(Spectrum {
        eigenvalues,
        multiplicities,
        char_poly: p,
        chain,
        params,
        arr: arr.clone(),
        precision: opts.precision.clone(),
    })
}

/// `u_0(θ), ..., u_D(θ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardSequence {
    pub u: Vec<CertifiedReal>,
}

impl StandardSequence {
    /// `(-1)^i u_i > 0` for every `i`, certified.
    pub fn alternates(&self) -> bool {
        self.u.iter().enumerate().all(|(i, ui)| {
            if i % 2 == 0 {
                ui.is_positive()
            } else {
                ui.is_negative()
            }
        })
    }

    /// Residual of `c_i u_{i-1} + a_i u_i + b_i u_{i+1} - θ u_i` for `1 <= i <= D`
    /// (with `u_{D+1} = 0`). Each interval contains zero for a genuine
    /// eigenvalue and recurrence positions `i < D`.
    pub fn residuals(&self, arr: &IntersectionArray, theta: &CertifiedReal) -> Vec<CertifiedReal> {
        let d = arr.diameter();
        (1..=d)
            .map(|i| {
                let next = self.u.get(i + 1).cloned().unwrap_or_else(CertifiedReal::zero);
                self.u[i - 1].scale(&int_rat(arr.c(i)))
                    + self.u[i].scale(&int_rat(arr.a(i)))
                    + next.scale(&int_rat(arr.b(i)))
                    - theta * &self.u[i]
            })
            .collect()
    }
}

pub fn standard_sequence(arr: &IntersectionArray, theta: &Eigenvalue) -> StandardSequence {
    sequence_for(arr, theta.interval())
}

/// Forward recurrence `u_{i+1} = ((θ - a_i) u_i - c_i u_{i-1}) / b_i` for an
/// arbitrary certified `θ`.
pub fn sequence_for(arr: &IntersectionArray, theta: &CertifiedReal) -> StandardSequence {
    let d = arr.diameter();
    let k = int_rat(arr.valency());
    let mut u = Vec::with_capacity(d + 1);
    u.push(CertifiedReal::one());
    u.push(theta.scale(&k.recip()));
    for i in 1..d {
        let t = (theta - &CertifiedReal::from_int(arr.a(i))) * &u[i];
        let t = t - u[i - 1].scale(&int_rat(arr.c(i)));
        u.push(t.scale(&int_rat(arr.b(i)).recip()));
    }
    u.truncate(d + 1);
    StandardSequence { u }
}

/// Biggs' formula `m(θ) = n / Σ k_i u_i(θ)^2`.
pub fn multiplicity(arr: &IntersectionArray, theta: &Eigenvalue) -> CertifiedReal {
    multiplicity_with(arr, &derive_parameters(arr), theta)
}

fn multiplicity_with(
    arr: &IntersectionArray,
    params: &ArrayParameters,
    theta: &Eigenvalue,
) -> CertifiedReal {
    let seq = ScaledSequence::new(arr, theta);
    let (q, w) = (&seq.q, &seq.w);
    let d = arr.diameter();
    let (b_prod, c_prod) = prefix_products(arr);
    let q2 = q * q;
    let mut q_pow = vec![BigInt::one()];
    for i in 1..=d {
        q_pow.push(&q_pow[i - 1] * &q2);
    }
    // Σ k_i u_i^2 = S / M, and k_i u_i^2 = W_i^2 / (Q^{2i} B_i C_i).
    let (mut s_lo, mut s_hi) = (BigInt::zero(), BigInt::zero());
    for (i, wi) in w.iter().enumerate() {
        let factor = &q_pow[d - i] * (&b_prod[d] / &b_prod[i]) * (&c_prod[d] / &c_prod[i]);
        let (a, b) = wi.square();
        s_lo += a * &factor;
        s_hi += b * &factor;
    }
    // m = n M / S with M = Q^{2D} b_0..b_{D-1} c_1..c_D.
    let big_m = &q_pow[d] * &b_prod[d] * &c_prod[d];
    let num = params.n.numer() * &big_m;
    let den = params.n.denom();
    if theta.is_exact() {
        return CertifiedReal::new(
            BigRational::new(num.clone(), den * s_hi),
            BigRational::new(num, den * s_lo),
        );
    }
    // Round outward onto a dyadic grid well below the eigenvalue width, so
    // later sums and products do not carry the full quotient. Finer θ gives a
    // finer grid, and the grids nest, so refinement still only narrows.
    dyadic_hull(&num, &num, &(den * s_hi), 2 * q.bits() + 16)
        .hull(&dyadic_hull(&num, &num, &(den * s_lo), 2 * q.bits() + 16))
}

/// Smallest interval on the `2^-bits` grid containing `[lo / den, hi / den]`.
fn dyadic_hull(lo: &BigInt, hi: &BigInt, den: &BigInt, bits: u64) -> CertifiedReal {
    let grid = BigInt::one() << bits;
    let floor = (lo << bits).div_floor(den);
    let ceil = -(-(hi << bits)).div_floor(den);
    CertifiedReal::new(BigRational::new(floor, grid.clone()), BigRational::new(ceil, grid))
}

/// The standard sequence of a certified `θ = [P_lo, P_hi] / Q` as integer
/// numerators: `u_i = W_i / (Q^i B_i)` with `B_i = b_0..b_{i-1}`. Scaling by
/// a positive constant commutes with interval operations, so this is the
/// same enclosure as running `sequence_for` in rationals, without a gcd per
/// operation.
struct ScaledSequence {
    q: BigInt,
    w: Vec<IntInterval>,
}

impl ScaledSequence {
    fn new(arr: &IntersectionArray, theta: &Eigenvalue) -> Self {
        let (lo, hi) = (theta.interval().lo(), theta.interval().hi());
        let q = lo.denom().lcm(hi.denom());
        let p = IntInterval::new(lo.numer() * (&q / lo.denom()), hi.numer() * (&q / hi.denom()));
        let d = arr.diameter();
        let mut w = Vec::with_capacity(d + 1);
        w.push(IntInterval::point(BigInt::one()));
        w.push(p.clone());
        let q2 = &q * &q;
        for i in 1..d {
            // W_{i+1} = (P - a_i Q) W_i - c_i b_{i-1} Q^2 W_{i-1}
            let shifted = p.offset(&-(BigInt::from(arr.a(i)) * &q));
            let back = w[i - 1].scale(&(BigInt::from(arr.c(i) * arr.b(i - 1)) * &q2));
            w.push(shifted.mul(&w[i]).sub(&back));
        }
        w.truncate(d + 1);
        Self { q, w }
    }
}

/// `B_i = b_0..b_{i-1}` and `C_i = c_1..c_i` for `i = 0..=D`.
fn prefix_products(arr: &IntersectionArray) -> (Vec<BigInt>, Vec<BigInt>) {
    let d = arr.diameter();
    let mut b_prod = vec![BigInt::one()];
    let mut c_prod = vec![BigInt::one()];
    for i in 1..=d {
        b_prod.push(&b_prod[i - 1] * BigInt::from(arr.b(i - 1)));
        c_prod.push(&c_prod[i - 1] * BigInt::from(arr.c(i)));
    }
    (b_prod, c_prod)
}

/// Closed integer interval, used internally where rational normalisation
/// would dominate the cost.
#[derive(Debug, Clone)]
struct IntInterval {
    lo: BigInt,
    hi: BigInt,
}

impl IntInterval {
    fn new(lo: BigInt, hi: BigInt) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    fn point(x: BigInt) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    fn offset(&self, t: &BigInt) -> Self {
        Self::new(&self.lo + t, &self.hi + t)
    }

    fn scale(&self, s: &BigInt) -> Self {
        debug_assert!(!s.is_negative());
        Self::new(&self.lo * s, &self.hi * s)
    }

    fn sub(&self, other: &Self) -> Self {
        Self::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    fn mul(&self, other: &Self) -> Self {
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Self::new(lo, hi)
    }

    /// Bounds of `x^2` over the interval.
    fn square(&self) -> (BigInt, BigInt) {
        let (a, b) = (self.lo.abs(), self.hi.abs());
        let top = a.clone().max(b.clone());
        let bottom = if self.lo.is_negative() && self.hi.is_positive() {
            BigInt::zero()
        } else {
            a.min(b)
        };
        (&bottom * &bottom, &top * &top)
    }
}

/// Krein parameters `q_{ij}^h`, indexed as `q[i][j][h]`.
#[derive(Debug, Clone)]
pub struct KreinTensor {
    q: Vec<Vec<Vec<CertifiedReal>>>,
}

impl KreinTensor {
    pub fn get(&self, i: usize, j: usize, h: usize) -> &CertifiedReal {
        &self.q[i][j][h]
    }

    pub fn size(&self) -> usize {
        self.q.len()
    }

    /// All entries `(i, j, h, q)` with `i <= j`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &CertifiedReal)> {
        let n = self.q.len();
        (0..n).flat_map(move |i| {
            (i..n).flat_map(move |j| (0..n).map(move |h| (i, j, h, &self.q[i][j][h])))
        })
    }
}

/// `q_{ij}^h = (m_i m_j / n) Σ_l k_l u_l(θ_i) u_l(θ_j) u_l(θ_h)`.
pub fn krein(spectrum: &Spectrum) -> KreinTensor {
    let arr = spectrum.array();
    let params = spectrum.parameters();
    let size = spectrum.len();
    let d = arr.diameter();
    let seqs: Vec<ScaledSequence> = spectrum
        .eigenvalues()
        .iter()
        .map(|ev| ScaledSequence::new(arr, ev))
        .collect();
    let (b_prod, c_prod) = prefix_products(arr);
    // k_l u_l(θ_i) u_l(θ_j) u_l(θ_h) = W W W / ((Q_i Q_j Q_h)^l B_l^2 C_l);
    // the sum over l is taken over the common denominator at l = D.
    let tail: Vec<BigInt> = (0..=d)
        .map(|l| {
            let bl = &b_prod[d] / &b_prod[l];
            &bl * &bl * (&c_prod[d] / &c_prod[l])
        })
        .collect();
    let base = &b_prod[d] * &b_prod[d] * &c_prod[d];
    // Multiplicities as integer intervals over their own denominators.
    let m: Vec<(IntInterval, BigInt)> = spectrum
        .multiplicities()
        .iter()
        .map(|x| {
            let den = x.lo().denom().lcm(x.hi().denom());
            let lo = x.lo().numer() * (&den / x.lo().denom());
            let hi = x.hi().numer() * (&den / x.hi().denom());
            (IntInterval::new(lo, hi), den)
        })
        .collect();
    let (n_num, n_den) = (params.n.numer(), params.n.denom());
    let mut q = vec![vec![vec![CertifiedReal::zero(); size]; size]; size];
    for i in 0..size {
        for j in i..size {
            let pair: Vec<IntInterval> =
                (0..=d).map(|l| seqs[i].w[l].mul(&seqs[j].w[l])).collect();
            let qij = &seqs[i].q * &seqs[j].q;
            let mij = m[i].0.mul(&m[j].0);
            let mij_den = &m[i].1 * &m[j].1;
            for h in 0..size {
                let val = if i == 0 {
                    if j == h {
                        CertifiedReal::one()
                    } else {
                        CertifiedReal::zero()
                    }
                } else {
                    let qqq = &qij * &seqs[h].q;
                    let mut pow = vec![BigInt::one()];
                    for l in 1..=d {
                        pow.push(&pow[l - 1] * &qqq);
                    }
                    let (mut s_lo, mut s_hi) = (BigInt::zero(), BigInt::zero());
                    for l in 0..=d {
                        let t = pair[l].mul(&seqs[h].w[l]);
                        let factor = &pow[d - l] * &tail[l];
                        s_lo += &t.lo * &factor;
                        s_hi += &t.hi * &factor;
                    }
                    // (m_i m_j) * (S / den) / n, all scalings positive
                    let prod = mij.mul(&IntInterval::new(s_lo, s_hi));
                    let den = &pow[d] * &base * &mij_den * n_num;
                    CertifiedReal::new(
                        BigRational::new(prod.lo * n_den, den.clone()),
                        BigRational::new(prod.hi * n_den, den),
                    )
                };
                q[j][i][h] = val.clone();
                q[i][j][h] = val;
            }
        }
    }
    KreinTensor { q }
}

/// `tr(L_1^2) = Σ a_i^2 + 2 Σ b_i c_{i+1}`.
pub fn trace_square(arr: &IntersectionArray) -> BigInt {
    let d = arr.diameter();
    let diag: BigInt = (0..=d).map(|i| BigInt::from(arr.a(i)).pow(2)).sum();
    let off: BigInt = (0..d)
        .map(|i| BigInt::from(arr.b(i)) * BigInt::from(arr.c(i + 1)))
        .sum();
    diag + off * 2
}

/// Eigenvalues of `L_1` below `x`, and whether `x` is one, from the signs of
/// the leading principal minors of `q L_1 - p I` where `x = p/q`. Returns
/// `None` on `i128` overflow or a zero interior minor; callers fall back to
/// the Sturm chain.
fn tridiagonal_count(arr: &IntersectionArray, x: &BigRational) -> Option<(usize, bool)> {
    let p = x.numer().to_i128()?;
    let q = x.denom().to_i128()?;
    let d = arr.diameter();
    let (mut prev, mut cur) = (0i128, 1i128);
    let mut changes = 0;
    for i in 0..=d {
        let diag = q.checked_mul(arr.a(i) as i128)?.checked_sub(p)?;
        let off = if i == 0 {
            0
        } else {
            (q * q).checked_mul(arr.b(i - 1) as i128 * arr.c(i) as i128)?
        };
        let next = diag
            .checked_mul(cur)?
            .checked_sub(off.checked_mul(prev)?)?;
        if next == 0 {
            return (i == d).then_some((changes, true));
        }
        if (next < 0) != (cur < 0) {
            changes += 1;
        }
        (prev, cur) = (cur, next);
    }
    Some((changes, false))
}

/// Exact decision of `θ_min <= -ρ k`.
pub fn theta_min_at_most(arr: &IntersectionArray, ratio: &BigRational) -> bool {
    let x = -(ratio * int_rat(arr.valency()));
    if let Some((below, at)) = tridiagonal_count(arr, &x) {
        return below >= 1 || at;
    }
    SturmChain::new(&char_poly(arr)).count_at_most(&x) >= 1
}

/// Exact decision of `θ_min == x` for rational `x`.
pub fn theta_min_equals(arr: &IntersectionArray, x: &BigRational) -> bool {
    if let Some((below, at)) = tridiagonal_count(arr, x) {
        return below == 0 && at;
    }
    let p = char_poly(arr);
    if !p.eval(x).is_zero() {
        return false;
    }
    SturmChain::new(&p).count_at_most(x) == 1
}

impl Spectrum {
    /// Whether `θ_min <= -ρ k`, decided exactly on the polynomial.
    pub fn theta_min_at_most(&self, ratio: &BigRational) -> bool {
        let x = -(ratio * int_rat(self.arr.valency()));
        self.chain.count_at_most(&x) >= 1
    }

    /// Number of eigenvalues `<= x`, exact.
    pub fn count_at_most(&self, x: &BigRational) -> usize {
        self.chain.count_at_most(x)
    }

    /// Whether the rational `x` is an eigenvalue.
    pub fn is_eigenvalue(&self, x: &BigRational) -> bool {
        self.char_poly.eval(x).is_zero()
    }

    /// Whether `θ_min == -ρ k` exactly.
    pub fn theta_min_equals_ratio(&self, ratio: &BigRational) -> bool {
        let x = -(ratio * int_rat(self.arr.valency()));
        self.char_poly.eval(&x).is_zero() && self.chain.count_at_most(&x) == 1
    }
}

pub(crate) fn one_half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}
