//! Named feasibility checks and the pipeline that runs them.
//!
//! Every check returns `pass`, `fail`, `skip` or `borderline`. `fail` is only
//! emitted for certified violations; anything that rests on insufficient
//! precision is `borderline` and the pipeline retries it at higher precision.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::array::{derive_parameters, ArrayParameters, IntersectionArray};
use crate::catalog::{Catalog, CatalogEntry};
use crate::decimal::{to_decimal, to_fraction};
use crate::error::SpectralError;
use crate::interval::CertifiedReal;
use crate::poly::{int_rat, rat};
use crate::spectral::{
    eigenvalues_with, krein, krein_epsilon, multiplicity_fail_tolerance,
    multiplicity_pass_tolerance, one_half, standard_sequence, KreinTensor, SpectralOptions,
    Spectrum,
};

/// Stable check identifiers, in registry order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckId {
    Monotonicity,
    KiIntegrality,
    MultiplicityIntegrality,
    DelsarteClique,
    TripartiteExclusion,
    C2Bound,
    KrsCondition,
    A1Structure,
    NearPolygon,
    KreinNonnegative,
    AbsoluteBound,
}

impl CheckId {
    pub const ALL: [CheckId; 11] = [
        CheckId::Monotonicity,
        CheckId::KiIntegrality,
        CheckId::MultiplicityIntegrality,
        CheckId::DelsarteClique,
        CheckId::TripartiteExclusion,
        CheckId::C2Bound,
        CheckId::KrsCondition,
        CheckId::A1Structure,
        CheckId::NearPolygon,
        CheckId::KreinNonnegative,
        CheckId::AbsoluteBound,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::Monotonicity => "monotonicity",
            CheckId::KiIntegrality => "ki-integrality",
            CheckId::MultiplicityIntegrality => "multiplicity-integrality",
            CheckId::DelsarteClique => "delsarte-clique",
            CheckId::TripartiteExclusion => "tripartite-exclusion",
            CheckId::C2Bound => "c2-bound",
            CheckId::KrsCondition => "krs-condition",
            CheckId::A1Structure => "a1-structure",
            CheckId::NearPolygon => "near-polygon",
            CheckId::KreinNonnegative => "krein-nonnegative",
            CheckId::AbsoluteBound => "absolute-bound",
        }
    }

    fn needs_krein(self) -> bool {
        matches!(self, CheckId::KreinNonnegative | CheckId::AbsoluteBound)
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown check id {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Skip,
    Borderline,
    Fail,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Skip => "skip",
            CheckStatus::Borderline => "borderline",
            CheckStatus::Fail => "fail",
        }
    }
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: CheckId,
    pub status: CheckStatus,
    pub detail: String,
}

impl CheckResult {
    fn new(id: CheckId, status: CheckStatus, detail: impl Into<String>) -> Self {
        Self {
            id,
            status,
            detail: detail.into(),
        }
    }

    fn pass(id: CheckId, detail: impl Into<String>) -> Self {
        Self::new(id, CheckStatus::Pass, detail)
    }

    fn fail(id: CheckId, detail: impl Into<String>) -> Self {
        Self::new(id, CheckStatus::Fail, detail)
    }

    fn skip(id: CheckId, detail: impl Into<String>) -> Self {
        Self::new(id, CheckStatus::Skip, detail)
    }

    fn borderline(id: CheckId, detail: impl Into<String>) -> Self {
        Self::new(id, CheckStatus::Borderline, detail)
    }

    pub fn is_fail(&self) -> bool {
        self.status == CheckStatus::Fail
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Infeasible,
    FeasibleUnknownExistence,
    KnownGraph,
    KnownNonexistent,
    /// Some check stayed borderline after precision escalation.
    Undetermined,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Infeasible => "infeasible",
            Verdict::FeasibleUnknownExistence => "feasible-unknown-existence",
            Verdict::KnownGraph => "known-graph",
            Verdict::KnownNonexistent => "known-nonexistent",
            Verdict::Undetermined => "undetermined",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which checks to run and whether to stop at the first failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    checks: Vec<CheckId>,
    pub fast: bool,
}

impl Profile {
    /// Runs `checks` in registry order regardless of the order given.
    pub fn new(checks: impl IntoIterator<Item = CheckId>, fast: bool) -> Self {
        let mut checks: Vec<CheckId> = checks.into_iter().collect();
        checks.sort();
        checks.dedup();
        Self { checks, fast }
    }

    pub fn full() -> Self {
        Self::new(CheckId::ALL, false)
    }

    /// Integrality only.
    pub fn basic() -> Self {
        Self::new(
            [
                CheckId::Monotonicity,
                CheckId::KiIntegrality,
                CheckId::MultiplicityIntegrality,
            ],
            false,
        )
    }

    /// All checks, stopping at the first failure.
    pub fn fast() -> Self {
        Self::new(CheckId::ALL, true)
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "full" => Some(Self::full()),
            "basic" => Some(Self::basic()),
            "fast" => Some(Self::fast()),
            _ => None,
        }
    }

    pub fn checks(&self) -> &[CheckId] {
        &self.checks
    }
}

impl Default for Profile {
    fn default() -> Self {
        Self::full()
    }
}

#[derive(Debug, Clone)]
pub struct FeasibilityReport {
    pub array: IntersectionArray,
    pub parameters: ArrayParameters,
    pub spectrum: Spectrum,
    pub checks: Vec<CheckResult>,
    pub verdict: Verdict,
    pub catalog: Option<CatalogEntry>,
}

impl FeasibilityReport {
    pub fn failed(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.is_fail())
    }

    pub fn result(&self, id: CheckId) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }
}

// ---------------------------------------------------------------------------
// rendering helpers

fn show(x: &CertifiedReal) -> String {
    match x.as_exact() {
        Some(v) => to_fraction(v),
        None => format!("~{}", to_decimal(&x.midpoint(), 12)),
    }
}

fn show_rat(x: &BigRational) -> String {
    to_fraction(x)
}

fn half_k(arr: &IntersectionArray) -> BigRational {
    int_rat(arr.valency()) * one_half()
}

// ---------------------------------------------------------------------------
// integrality of a certified real

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Integrality {
    Integer(BigInt),
    NonIntegral,
    Borderline,
}

/// Classifies a multiplicity: within the pass tolerance of a positive
/// integer, certainly at least the fail tolerance from every integer (or
/// below one), or in between.
pub(crate) fn integrality(m: &CertifiedReal) -> Integrality {
    if let Some(v) = m.as_exact() {
        return if v.is_integer() && v.is_positive() {
            Integrality::Integer(v.to_integer())
        } else {
            Integrality::NonIntegral
        };
    }
    if m.hi() < &BigRational::one() {
        return Integrality::NonIntegral;
    }
    let nearest = m.nearest_integer();
    let (_, upper) = m.distance_bounds(&int_rat(nearest.clone()));
    if nearest.is_positive() && upper <= multiplicity_pass_tolerance() {
        return Integrality::Integer(nearest);
    }
    if !m.contains_integer() {
        let below = m.lo() - m.lo().floor();
        let above = m.hi().ceil() - m.hi();
        if below.min(above) >= multiplicity_fail_tolerance() {
            return Integrality::NonIntegral;
        }
    }
    Integrality::Borderline
}

/// The integer a multiplicity interval certifies under the pass tolerance.
pub fn certified_integer(m: &CertifiedReal) -> Option<BigInt> {
    match integrality(m) {
        Integrality::Integer(v) => Some(v),
        _ => None,
    }
}

/// Cheap exact screen: whether some multiplicity is already certified
/// non-integral at `precision`. Refinement only narrows the intervals, so a
/// `true` here means the multiplicity check fails at any finer precision.
pub(crate) fn multiplicity_screen_fails(
    arr: &IntersectionArray,
    precision: BigRational,
) -> Result<bool, SpectralError> {
    let sp = eigenvalues_with(arr, &SpectralOptions::with_precision(precision))?;
    Ok(sp
        .multiplicities()
        .iter()
        .any(|m| integrality(m) == Integrality::NonIntegral))
}

// ---------------------------------------------------------------------------
// individual checks

/// Always passes for a validated array; kept so reports list the invariant.
pub fn check_monotonicity(arr: &IntersectionArray) -> CheckResult {
    let _ = arr;
    CheckResult::pass(
        CheckId::Monotonicity,
        "c non-decreasing, b non-increasing, all a_i >= 0",
    )
}

pub fn check_ki_integrality(params: &ArrayParameters) -> CheckResult {
    let id = CheckId::KiIntegrality;
    let ks: Vec<String> = params.k.iter().map(show_rat).collect();
    match params.k.iter().position(|ki| !ki.is_integer()) {
        None => CheckResult::pass(id, format!("k_i = ({})", ks.join(", "))),
        Some(i) => CheckResult::fail(
            id,
            format!("k_{i} = {} is not an integer; k_i = ({})", ks[i], ks.join(", ")),
        ),
    }
}

pub fn check_multiplicity_integrality(spectrum: &Spectrum) -> CheckResult {
    let id = CheckId::MultiplicityIntegrality;
    let ms = spectrum.multiplicities();
    let shown: Vec<String> = ms.iter().map(show).collect();
    let mut borderline = Vec::new();
    for (i, m) in ms.iter().enumerate() {
        match integrality(m) {
            Integrality::Integer(_) => {}
            Integrality::NonIntegral => {
                return CheckResult::fail(
                    id,
                    format!(
                        "m(theta_{i}) = {} is not a positive integer; m = ({})",
                        shown[i],
                        shown.join(", ")
                    ),
                )
            }
            Integrality::Borderline => borderline.push(i),
        }
    }
    if let Some(&i) = borderline.first() {
        return CheckResult::borderline(
            id,
            format!(
                "m(theta_{i}) = {} in {} is neither certified integral nor certified non-integral",
                shown[i], ms[i]
            ),
        );
    }
    CheckResult::pass(id, format!("m = ({})", shown.join(", ")))
}

/// Size of a clique guaranteed by the parameters: an edge, or a triangle
/// when `a_1 >= 1`.
fn guaranteed_clique(arr: &IntersectionArray) -> u64 {
    if arr.a(1) == 0 {
        2
    } else {
        3
    }
}

pub fn check_delsarte(arr: &IntersectionArray, spectrum: &Spectrum) -> CheckResult {
    let id = CheckId::DelsarteClique;
    if arr.diameter() < 2 {
        return CheckResult::skip(id, "needs diameter >= 2");
    }
    let k = arr.valency();
    let omega = guaranteed_clique(arr);
    let theta = spectrum.theta_min().interval();
    // ω <= 1 + k/(-θ)  <=>  θ >= -k/(ω-1)
    let threshold = -rat(k as i64, omega as i64 - 1);
    let below = spectrum.count_at_most(&threshold) - usize::from(spectrum.is_eigenvalue(&threshold));
    let cap = CertifiedReal::one()
        + CertifiedReal::from_int(k)
            .checked_div(&-theta)
            .expect("theta_min < 0");
    let what = if omega == 2 { "edge" } else { "triangle" };
    if below > 0 {
        CheckResult::fail(
            id,
            format!(
                "{what} needs clique size {omega} <= 1 + k/(-theta_min) = {}, violated",
                show(&cap)
            ),
        )
    } else if spectrum.is_eigenvalue(&threshold) && spectrum.count_at_most(&threshold) == 1 {
        CheckResult::pass(
            id,
            format!("{omega} = 1 + k/(-theta_min) = {}: every {what} is a Delsarte clique", show(&cap)),
        )
    } else {
        CheckResult::pass(id, format!("{omega} <= 1 + k/(-theta_min) = {}", show(&cap)))
    }
}

pub fn check_tripartite_exclusion(arr: &IntersectionArray, spectrum: &Spectrum) -> CheckResult {
    let id = CheckId::TripartiteExclusion;
    if !spectrum.theta_min_at_most(&one_half()) {
        return CheckResult::skip(id, "needs theta_min <= -k/2");
    }
    let (a1, d) = (arr.a(1), arr.diameter());
    if a1 >= 2 && d >= 3 {
        CheckResult::fail(
            id,
            format!("a_1 = {a1} >= 2 forces a complete tripartite graph of diameter 2, but D = {d}"),
        )
    } else {
        CheckResult::pass(id, format!("a_1 = {a1}, D = {d}"))
    }
}

pub fn check_c2_bound(arr: &IntersectionArray, spectrum: &Spectrum) -> CheckResult {
    let id = CheckId::C2Bound;
    if arr.diameter() < 3 {
        return CheckResult::skip(id, "needs diameter >= 3");
    }
    if arr.is_bipartite() {
        return CheckResult::skip(id, "needs a non-bipartite array");
    }
    if !spectrum.theta_min_at_most(&one_half()) {
        return CheckResult::skip(id, "needs theta_min <= -k/2");
    }
    let (a1, c2) = (arr.a(1), arr.c(2));
    if a1 >= 2 {
        CheckResult::fail(id, format!("a_1 = {a1} > 1"))
    } else if c2 > 5 + a1 {
        CheckResult::fail(id, format!("c_2 = {c2} > 5 + a_1 = {}", 5 + a1))
    } else {
        CheckResult::pass(id, format!("a_1 = {a1} <= 1 and c_2 = {c2} <= {}", 5 + a1))
    }
}

fn sign_status(x: &CertifiedReal) -> CheckStatus {
    if x.is_nonnegative() {
        CheckStatus::Pass
    } else if x.is_negative() {
        CheckStatus::Fail
    } else {
        CheckStatus::Borderline
    }
}

/// Both induced-`K_{r,s}` inequalities at eigenvalue `index`, in the
/// division-free forms
/// `(r+s)(1-u_2) + 2rs(u_1+u_2) >= 0` and `(r+s)(1-u_2) - 2rs(u_1-u_2) >= 0`,
/// plus `(θ_1+1+b_1)(r+s) >= 2rs(θ_1+1)` when `index` is 1.
pub fn check_krs_condition(
    arr: &IntersectionArray,
    spectrum: &Spectrum,
    index: usize,
    r: u64,
    s: u64,
) -> CheckResult {
    let id = CheckId::KrsCondition;
    if arr.diameter() < 2 {
        return CheckResult::skip(id, "needs diameter >= 2");
    }
    if r == 0 || s == 0 {
        return CheckResult::skip(id, "needs r, s >= 1");
    }
    let Some(ev) = spectrum.eigenvalues().get(index) else {
        return CheckResult::skip(id, format!("no eigenvalue theta_{index}"));
    };
    let k = int_rat(arr.valency());
    let theta = ev.interval();
    if theta.as_exact().is_some_and(|t| t == &k || t == &-k.clone()) {
        return CheckResult::skip(id, "theta = +-k");
    }
    let u = standard_sequence(arr, ev).u;
    let (u1, u2) = (&u[1], &u[2]);
    let rs = int_rat(r + s);
    let two_rs = int_rat(2 * r * s);
    let one_minus = (CertifiedReal::one() - u2).scale(&rs);
    let e1 = &one_minus + &(u1 + u2).scale(&two_rs);
    let e2 = &one_minus - &(u1 - u2).scale(&two_rs);
    let mut parts = vec![
        (format!("(r+s)(1-u_2) + 2rs(u_1+u_2) = {}", show(&e1)), sign_status(&e1)),
        (format!("(r+s)(1-u_2) - 2rs(u_1-u_2) = {}", show(&e2)), sign_status(&e2)),
    ];
    if index == 1 {
        let t1 = theta + &CertifiedReal::one();
        if t1.is_positive() {
            let lhs = (&t1 + &CertifiedReal::from_int(arr.b(1))).scale(&rs);
            let diff = &lhs - &t1.scale(&two_rs);
            parts.push((
                format!("(theta_1+1+b_1)(r+s) - 2rs(theta_1+1) = {}", show(&diff)),
                sign_status(&diff),
            ));
        }
    }
    let status = parts.iter().map(|(_, s)| *s).max().unwrap();
    let detail = format!(
        "K_{{{r},{s}}} at theta_{index} = {} (u_1 = {}, u_2 = {}): {}",
        show(theta),
        show(u1),
        show(u2),
        parts
            .iter()
            .map(|(t, s)| format!("{t} [{s}]"))
            .collect::<Vec<_>>()
            .join("; ")
    );
    CheckResult::new(id, status, detail)
}

/// Registry form: `(r, s) = (2, c_2)` at every eigenvalue other than `±k`.
/// Requires `a_1 <= 1`, which makes every μ-graph a coclique so that two
/// vertices at distance 2 with their common neighbours induce `K_{2,c_2}`.
pub fn check_krs(arr: &IntersectionArray, spectrum: &Spectrum) -> CheckResult {
    let id = CheckId::KrsCondition;
    if arr.diameter() < 2 {
        return CheckResult::skip(id, "needs diameter >= 2");
    }
    if arr.a(1) > 1 {
        return CheckResult::skip(id, format!("a_1 = {} > 1: mu-graphs need not be cocliques", arr.a(1)));
    }
    let c2 = arr.c(2);
    let results: Vec<CheckResult> = (1..spectrum.len())
        .map(|i| check_krs_condition(arr, spectrum, i, 2, c2))
        .filter(|r| r.status != CheckStatus::Skip)
        .collect();
    let worst = results.iter().map(|r| r.status).max().unwrap_or(CheckStatus::Skip);
    match worst {
        CheckStatus::Pass => CheckResult::pass(
            id,
            format!("K_{{2,{c2}}} inequalities hold at all {} non-trivial eigenvalues", results.len()),
        ),
        CheckStatus::Skip => CheckResult::skip(id, "no eigenvalue other than +-k"),
        status => {
            let first = results.iter().find(|r| r.status == status).unwrap();
            CheckResult::new(id, status, first.detail.clone())
        }
    }
}

/// The `i` of the `a_1 = 1`, `θ_min = -k/2` pattern: `a_j = c_j` for
/// `j < i`, `a_i = k/2`, `a_j = b_j` for `j > i`. Smallest such `i`.
pub fn a1_pattern_index(arr: &IntersectionArray) -> Option<usize> {
    let k = arr.valency();
    if k % 2 != 0 {
        return None;
    }
    let d = arr.diameter();
    (2..=d).find(|&i| {
        (1..i).all(|j| arr.a(j) == arr.c(j))
            && arr.a(i) == k / 2
            && (i + 1..=d).all(|j| arr.a(j) == arr.b(j))
    })
}

/// `c_i a_1 = a_i` for every `i`.
pub fn is_regular_near_polygon(arr: &IntersectionArray) -> bool {
    let a1 = arr.a(1);
    (1..=arr.diameter()).all(|i| arr.c(i) * a1 == arr.a(i))
}

fn a1_hypothesis(arr: &IntersectionArray, spectrum: &Spectrum) -> Result<(), String> {
    if arr.diameter() < 2 {
        return Err("needs diameter >= 2".into());
    }
    if arr.a(1) != 1 {
        return Err(format!("needs a_1 = 1, got {}", arr.a(1)));
    }
    if !spectrum.theta_min_equals_ratio(&one_half()) {
        return Err("needs theta_min = -k/2 exactly".into());
    }
    Ok(())
}

pub fn check_a1_structure(arr: &IntersectionArray, spectrum: &Spectrum) -> CheckResult {
    let id = CheckId::A1Structure;
    if let Err(why) = a1_hypothesis(arr, spectrum) {
        return CheckResult::skip(id, why);
    }
    let near = if is_regular_near_polygon(arr) {
        "regular near 2D-gon: yes"
    } else {
        "regular near 2D-gon: no"
    };
    let a: Vec<String> = (0..=arr.diameter()).map(|i| arr.a(i).to_string()).collect();
    match a1_pattern_index(arr) {
        Some(i) => CheckResult::pass(
            id,
            format!("pattern holds with i = {i}, a = ({}); {near}", a.join(", ")),
        ),
        None => CheckResult::fail(
            id,
            format!(
                "no i in [2, D] with a_j = c_j (j < i), a_i = k/2 = {}, a_j = b_j (j > i); a = ({})",
                arr.valency() / 2,
                a.join(", ")
            ),
        ),
    }
}

/// When `a_1 = 1`, `θ_min = -k/2` and `a_D = k/2` the graph is a regular near
/// `2D`-gon with lines of size 3; then `c_i = a_i` and `c_2 ∈ {1, 2, 3, 5}`.
pub fn check_near_polygon(arr: &IntersectionArray, spectrum: &Spectrum) -> CheckResult {
    let id = CheckId::NearPolygon;
    if let Err(why) = a1_hypothesis(arr, spectrum) {
        return CheckResult::skip(id, why);
    }
    let d = arr.diameter();
    let k = arr.valency();
    if int_rat(arr.a(d)) != half_k(arr) {
        return CheckResult::skip(id, format!("needs a_D = k/2, got a_{d} = {}", arr.a(d)));
    }
    if let Some(i) = (1..=d).find(|&i| arr.c(i) != arr.a(i)) {
        return CheckResult::fail(
            id,
            format!("c_{i} a_1 = {} != a_{i} = {}", arr.c(i), arr.a(i)),
        );
    }
    let c2 = arr.c(2);
    if ![1, 2, 3, 5].contains(&c2) {
        return CheckResult::fail(id, format!("c_2 = {c2} not in {{1, 2, 3, 5}}"));
    }
    CheckResult::pass(
        id,
        format!("regular near {}-gon of order (2, {}), c_2 = {c2}", 2 * d, k / 2 - 1),
    )
}

pub fn check_krein_nonnegative(tensor: &KreinTensor) -> CheckResult {
    check_krein_nonnegative_with(tensor, &krein_epsilon())
}

pub fn check_krein_nonnegative_with(tensor: &KreinTensor, eps: &BigRational) -> CheckResult {
    let id = CheckId::KreinNonnegative;
    let neg_eps = -eps.clone();
    let mut borderline = None;
    for (i, j, h, q) in tensor.entries() {
        if q.hi() < &neg_eps {
            return CheckResult::fail(id, format!("q_{{{i}{j}}}^{h} = {} < 0", show(q)));
        }
        if borderline.is_none() && q.lo() < &neg_eps {
            borderline = Some((i, j, h, q.clone()));
        }
    }
    match borderline {
        Some((i, j, h, q)) => CheckResult::borderline(
            id,
            format!("q_{{{i}{j}}}^{h} in {q} straddles -{}", to_decimal(eps, 3)),
        ),
        None => CheckResult::pass(id, format!("all {} Krein parameters >= 0", tensor.entries().count())),
    }
}

pub fn check_absolute_bound(spectrum: &Spectrum, tensor: &KreinTensor) -> CheckResult {
    check_absolute_bound_with(spectrum, tensor, &krein_epsilon())
}

/// `Σ_{h : q_ij^h != 0} m_h <= m_i m_j` (or `m_i (m_i + 1) / 2` on the
/// diagonal). A Krein parameter counts as nonzero only when its interval
/// excludes `[-ε, ε]`.
pub fn check_absolute_bound_with(
    spectrum: &Spectrum,
    tensor: &KreinTensor,
    eps: &BigRational,
) -> CheckResult {
    let id = CheckId::AbsoluteBound;
    let ms: Vec<CertifiedReal> = spectrum
        .multiplicities()
        .iter()
        .map(|m| match integrality(m) {
            Integrality::Integer(v) => CertifiedReal::from_int(v),
            _ => m.clone(),
        })
        .collect();
    let size = ms.len();
    let mut borderline = None;
    for i in 1..size {
        for j in i..size {
            let support: Vec<usize> = (0..size)
                .filter(|&h| tensor.get(i, j, h).excludes_ball(eps))
                .collect();
            let sum = support
                .iter()
                .fold(CertifiedReal::zero(), |acc, &h| acc + &ms[h]);
            let bound = if i == j {
                (&ms[i] * &(&ms[i] + &CertifiedReal::one())).scale(&one_half())
            } else {
                &ms[i] * &ms[j]
            };
            let text = || {
                format!(
                    "sum of m_h over nonzero q_{{{i}{j}}}^h (h in {:?}) = {} vs {} = {}",
                    support,
                    show(&sum),
                    if i == j { "m_i(m_i+1)/2" } else { "m_i m_j" },
                    show(&bound)
                )
            };
            let diff = &bound - &sum;
            match sign_status(&diff) {
                CheckStatus::Fail => return CheckResult::fail(id, text()),
                CheckStatus::Borderline if borderline.is_none() => borderline = Some(text()),
                _ => {}
            }
        }
    }
    match borderline {
        Some(text) => CheckResult::borderline(id, text),
        None => CheckResult::pass(id, format!("holds for all {} pairs", (size - 1) * size / 2)),
    }
}

// ---------------------------------------------------------------------------
// pipeline

/// How many times a borderline result triggers a refinement, each one
/// squaring the precision.
const ESCALATIONS: usize = 3;

struct Context<'a> {
    arr: &'a IntersectionArray,
    params: &'a ArrayParameters,
    spectrum: Spectrum,
    krein: Option<KreinTensor>,
}

impl Context<'_> {
    fn run(&mut self, id: CheckId) -> CheckResult {
        if id.needs_krein() && self.krein.is_none() {
            self.krein = Some(krein(&self.spectrum));
        }
        let (arr, sp) = (self.arr, &self.spectrum);
        match id {
            CheckId::Monotonicity => check_monotonicity(arr),
            CheckId::KiIntegrality => check_ki_integrality(self.params),
            CheckId::MultiplicityIntegrality => check_multiplicity_integrality(sp),
            CheckId::DelsarteClique => check_delsarte(arr, sp),
            CheckId::TripartiteExclusion => check_tripartite_exclusion(arr, sp),
            CheckId::C2Bound => check_c2_bound(arr, sp),
            CheckId::KrsCondition => check_krs(arr, sp),
            CheckId::A1Structure => check_a1_structure(arr, sp),
            CheckId::NearPolygon => check_near_polygon(arr, sp),
            CheckId::KreinNonnegative => check_krein_nonnegative(self.krein.as_ref().unwrap()),
            CheckId::AbsoluteBound => check_absolute_bound(sp, self.krein.as_ref().unwrap()),
        }
    }

    fn refine(&mut self, precision: BigRational) -> Result<(), SpectralError> {
        let opts = SpectralOptions::with_precision(precision);
        self.spectrum = self.spectrum.refine(&opts)?;
        self.krein = None;
        Ok(())
    }
}

pub fn run_pipeline(
    arr: &IntersectionArray,
    profile: &Profile,
    catalog: Option<&Catalog>,
) -> Result<FeasibilityReport, SpectralError> {
    run_pipeline_with(arr, profile, catalog, &SpectralOptions::default())
}

/// Runs the selected checks in registry order. Borderline results are
/// retried at squared precision; a multiplicity that still excludes every
/// integer after the last refinement is a certified failure.
pub fn run_pipeline_with(
    arr: &IntersectionArray,
    profile: &Profile,
    catalog: Option<&Catalog>,
    opts: &SpectralOptions,
) -> Result<FeasibilityReport, SpectralError> {
    let params = derive_parameters(arr);
    let spectrum = eigenvalues_with(arr, opts)?;
    let mut ctx = Context {
        arr,
        params: &params,
        spectrum,
        krein: None,
    };
    let mut checks = Vec::with_capacity(profile.checks.len());
    for &id in &profile.checks {
        let mut result = ctx.run(id);
        let mut precision = ctx.spectrum.precision().clone();
        let mut rounds = 0;
        while result.status == CheckStatus::Borderline && rounds < ESCALATIONS {
            precision = &precision * &precision;
            ctx.refine(precision.clone())?;
            result = ctx.run(id);
            rounds += 1;
        }
        if result.status == CheckStatus::Borderline && id == CheckId::MultiplicityIntegrality {
            if let Some((i, m)) = ctx
                .spectrum
                .multiplicities()
                .iter()
                .enumerate()
                .find(|(_, m)| !m.contains_integer())
            {
                result = CheckResult::fail(
                    id,
                    format!("m(theta_{i}) in {m} contains no integer after refinement"),
                );
            }
        }
        let stop = profile.fast && result.is_fail();
        checks.push(result);
        if stop {
            break;
        }
    }
    let spectrum = ctx.spectrum;
    let entry = catalog.and_then(|c| c.lookup(arr));
    let verdict = if checks.iter().any(CheckResult::is_fail) {
        Verdict::Infeasible
    } else if checks.iter().any(|c| c.status == CheckStatus::Borderline) {
        Verdict::Undetermined
    } else {
        match &entry {
            Some(e) if e.status.is_known_graph() => Verdict::KnownGraph,
            Some(e) if e.status == crate::catalog::Status::Nonexistent => Verdict::KnownNonexistent,
            _ => Verdict::FeasibleUnknownExistence,
        }
    };
    Ok(FeasibilityReport {
        array: arr.clone(),
        parameters: params,
        spectrum,
        checks,
        verdict,
        catalog: entry,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::parse_array;
    use crate::spectral::default_precision;
    use crate::spectral::eigenvalues;

    fn arr(s: &str) -> IntersectionArray {
        parse_array(s).unwrap()
    }

    fn spectrum_of(s: &str) -> (IntersectionArray, Spectrum) {
        let a = arr(s);
        let sp = eigenvalues(&a, &default_precision()).unwrap();
        (a, sp)
    }

    fn status(r: CheckResult) -> CheckStatus {
        r.status
    }

    #[test]
    fn ids_round_trip_in_registry_order() {
        for (i, id) in CheckId::ALL.iter().enumerate() {
            assert_eq!(id.as_str().parse::<CheckId>().unwrap(), *id);
            if i > 0 {
                assert!(CheckId::ALL[i - 1] < *id);
            }
        }
        let p = Profile::new([CheckId::AbsoluteBound, CheckId::KiIntegrality], false);
        assert_eq!(p.checks(), &[CheckId::KiIntegrality, CheckId::AbsoluteBound]);
    }

    #[test]
    fn ki_integrality_examples() {
        for (s, want) in [
            ("3,2;1,1", CheckStatus::Pass),
            ("3,2;1,2", CheckStatus::Pass),
            ("4,3;1,3", CheckStatus::Pass),
            ("4,2;1,3", CheckStatus::Fail),
            ("2;1", CheckStatus::Pass),
        ] {
            let r = check_ki_integrality(&derive_parameters(&arr(s)));
            assert_eq!(r.status, want, "{s}: {}", r.detail);
        }
    }

    #[test]
    fn multiplicity_integrality_examples() {
        for (s, want) in [
            ("2,1;1,1", CheckStatus::Pass),
            ("3,2;1,1", CheckStatus::Pass),
            ("5,4,3;1,1,2", CheckStatus::Pass),
            ("5,4,2;1,1,2", CheckStatus::Fail),
            ("3,2;1,2", CheckStatus::Fail),
        ] {
            let (_, sp) = spectrum_of(s);
            let r = check_multiplicity_integrality(&sp);
            assert_eq!(r.status, want, "{s}: {}", r.detail);
        }
    }

    #[test]
    fn integrality_policy() {
        let near = |lo: (i64, i64), hi: (i64, i64)| {
            integrality(&CertifiedReal::new(rat(lo.0, lo.1), rat(hi.0, hi.1)))
        };
        assert_eq!(near((4999999, 1000000), (5000001, 1000000)), Integrality::Integer(5.into()));
        assert_eq!(near((51, 10), (52, 10)), Integrality::NonIntegral);
        assert_eq!(near((50001, 10000), (50002, 10000)), Integrality::Borderline);
        assert_eq!(near((1, 10), (2, 10)), Integrality::NonIntegral);
    }

    #[test]
    fn krein_and_absolute_bound() {
        for s in ["3,2;1,1", "6,4,2;1,2,3"] {
            let (_, sp) = spectrum_of(s);
            let q = krein(&sp);
            assert_eq!(status(check_krein_nonnegative(&q)), CheckStatus::Pass, "{s}");
            assert_eq!(status(check_absolute_bound(&sp, &q)), CheckStatus::Pass, "{s}");
        }
        for s in ["10,8,3;1,2,10", "12,10,3;1,3,12"] {
            let (_, sp) = spectrum_of(s);
            let q = krein(&sp);
            let r = check_absolute_bound(&sp, &q);
            assert_eq!(r.status, CheckStatus::Fail, "{s}");
            assert!(r.detail.contains("= 63 vs m_i(m_i+1)/2 = 28"), "{}", r.detail);
        }
    }

    #[test]
    fn absolute_bound_monotone_in_epsilon() {
        for s in ["3,2;1,1", "10,8,3;1,2,10", "2,1;1,1", "7,6,6;1,1,2", "4,2,2;1,1,2"] {
            let (_, sp) = spectrum_of(s);
            let q = krein(&sp);
            let mut seen_fail = false;
            for e in [rat(1, 10), rat(1, 1000), rat(1, 100_000_000), rat(1, 10i64.pow(15))] {
                let failed = check_absolute_bound_with(&sp, &q, &e).is_fail();
                assert!(!seen_fail || failed, "{s}");
                seen_fail |= failed;
            }
        }
    }

    #[test]
    fn c2_bound_examples() {
        let (a, sp) = spectrum_of("21,20,16;1,2,12");
        assert_eq!(status(check_c2_bound(&a, &sp)), CheckStatus::Pass);
        let (a, sp) = spectrum_of("30,28,24;1,3,15");
        assert_eq!(status(check_c2_bound(&a, &sp)), CheckStatus::Pass);
        let (a, sp) = spectrum_of("3,2;1,1");
        assert_eq!(status(check_c2_bound(&a, &sp)), CheckStatus::Skip);
    }

    #[test]
    fn delsarte_examples() {
        let (a, sp) = spectrum_of("6,4,2;1,2,3");
        let r = check_delsarte(&a, &sp);
        assert_eq!(r.status, CheckStatus::Pass);
        assert!(r.detail.contains("Delsarte clique"), "{}", r.detail);
        let (a, sp) = spectrum_of("3,2;1,1");
        let r = check_delsarte(&a, &sp);
        assert_eq!(r.status, CheckStatus::Pass);
        assert!(r.detail.contains("5/2"));
        // a triangle with theta_min < -k/2
        let (a, sp) = spectrum_of("4,2;1,4");
        assert!(sp.theta_min_at_most(&rat(3, 4)));
        assert_eq!(status(check_delsarte(&a, &sp)), CheckStatus::Fail);
        // K_{t,t,t}: triangles are Delsarte cliques
        for t in 2..6u64 {
            let (a, sp) = spectrum_of(&format!("{},{};1,{}", 2 * t, t - 1, 2 * t));
            assert_eq!(status(check_delsarte(&a, &sp)), CheckStatus::Pass);
        }
    }

    #[test]
    fn tripartite_examples() {
        let (a, sp) = spectrum_of("4,1;1,4");
        assert_eq!(status(check_tripartite_exclusion(&a, &sp)), CheckStatus::Pass);
        let (a, sp) = spectrum_of("4,2,2;1,1,2");
        assert_eq!(status(check_tripartite_exclusion(&a, &sp)), CheckStatus::Pass);
        let (a, sp) = spectrum_of("7,6;1,1");
        assert_eq!(status(check_tripartite_exclusion(&a, &sp)), CheckStatus::Skip);
    }

    #[test]
    fn a1_structure_examples() {
        let (a, sp) = spectrum_of("4,2,1;1,1,4");
        let r = check_a1_structure(&a, &sp);
        assert_eq!(r.status, CheckStatus::Pass);
        assert!(r.detail.contains("i = 2"));
        let (a, sp) = spectrum_of("6,4,2,1;1,1,4,6");
        let r = check_a1_structure(&a, &sp);
        assert_eq!(r.status, CheckStatus::Pass);
        assert!(r.detail.contains("i = 2"));
        let (a, sp) = spectrum_of("6,4,4;1,1,3");
        let r = check_a1_structure(&a, &sp);
        assert_eq!(r.status, CheckStatus::Pass);
        assert!(r.detail.contains("near 2D-gon: yes"));
        assert_eq!(status(check_near_polygon(&a, &sp)), CheckStatus::Pass);
        let (a, sp) = spectrum_of("3,2;1,1");
        assert_eq!(status(check_a1_structure(&a, &sp)), CheckStatus::Skip);
    }

    #[test]
    fn krs_condition_cases() {
        // a_1 = 1, theta_min = -k/2 gives 3/2 - c_2/4 for the first form
        let (a, sp) = spectrum_of("6,4,2;1,2,3");
        let r = check_krs_condition(&a, &sp, 3, 2, 6);
        assert_eq!(r.status, CheckStatus::Pass, "{}", r.detail);
        let r = check_krs_condition(&a, &sp, 3, 2, 7);
        assert_eq!(r.status, CheckStatus::Fail, "{}", r.detail);
        // (r, s) = (1, 1) never fails
        for s in ["3,2;1,1", "2,1;1,1", "5,4,2;1,1,2", "4,3,2;1,2,4", "6,5,4;1,2,3"] {
            let (a, sp) = spectrum_of(s);
            for i in 1..sp.len() {
                assert_ne!(check_krs_condition(&a, &sp, i, 1, 1).status, CheckStatus::Fail, "{s}");
            }
        }
    }

    #[test]
    fn pipeline_examples() {
        let cat = Catalog::embedded();
        let a = arr("15,14,12;1,1,9");
        let r = run_pipeline(&a, &Profile::full(), None).unwrap();
        assert_eq!(r.verdict, Verdict::FeasibleUnknownExistence);
        let r = run_pipeline(&a, &Profile::full(), Some(&cat)).unwrap();
        assert_eq!(r.verdict, Verdict::KnownGraph);
        assert!(r.catalog.unwrap().name.contains("truncated Witt"));

        let r = run_pipeline(&arr("10,8,3;1,2,10"), &Profile::full(), Some(&cat)).unwrap();
        assert_eq!(r.verdict, Verdict::Infeasible);
        let failed: Vec<CheckId> = r.failed().map(|c| c.id).collect();
        // q_33^3 = -7/8 as well
        assert_eq!(failed, vec![CheckId::KreinNonnegative, CheckId::AbsoluteBound]);

        let r = run_pipeline(&arr("5,4,3;1,1,2"), &Profile::full(), Some(&cat)).unwrap();
        assert_eq!(r.failed().count(), 0);
        assert_eq!(r.verdict, Verdict::KnownNonexistent);
    }

    #[test]
    fn fast_profile_stops_at_first_failure() {
        let r = run_pipeline(&arr("4,2;1,3"), &Profile::fast(), None).unwrap();
        assert_eq!(r.checks.last().unwrap().id, CheckId::KiIntegrality);
        assert_eq!(r.verdict, Verdict::Infeasible);
        let full = run_pipeline(&arr("4,2;1,3"), &Profile::full(), None).unwrap();
        assert_eq!(full.checks.len(), CheckId::ALL.len());
    }

    #[test]
    fn pipeline_is_deterministic() {
        let a = arr("7,6,6;1,1,2");
        let x = run_pipeline(&a, &Profile::full(), None).unwrap();
        let y = run_pipeline(&a, &Profile::full(), None).unwrap();
        assert_eq!(x.checks, y.checks);
        assert!(x.failed().next().is_none(), "{:?}", x.checks);
    }
}
