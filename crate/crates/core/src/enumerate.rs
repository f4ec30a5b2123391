//! Exhaustive generation of intersection arrays under constraints.
//!
//! The generator walks every valid array of the requested diameter and
//! valency range, choosing `c_i` then `b_i` position by position. Cheap
//! necessary conditions cut whole subtrees; the full-array rules and the
//! selected feasibility checks run on the leaves.
//!
//! Counting: each leaf of the search tree is either a pruned prefix, a full
//! array rejected by a rule, or a survivor. `generated` counts leaves, so
//! `generated == surviving + Σ pruned` holds by construction.

pub mod preset;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::array::IntersectionArray;
use crate::catalog::Catalog;
use crate::error::EnumerateError;
use crate::array::derive_parameters;
use crate::feasibility::{
    multiplicity_screen_fails, run_pipeline_with, CheckId, FeasibilityReport, Profile,
};
use crate::spectral::{theta_min_at_most, theta_min_equals, SpectralOptions};

/// Generation-time structural requirement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Structural {
    #[default]
    None,
    /// `a_1 = 1`, `θ_min = -k/2` and the `a_j = c_j / a_i = k/2 / a_j = b_j`
    /// pattern.
    A1Structure,
    /// `c_i a_1 = a_i` for every `i`.
    NearPolygon,
}

impl Structural {
    pub fn as_str(self) -> &'static str {
        match self {
            Structural::None => "none",
            Structural::A1Structure => "a1-structure",
            Structural::NearPolygon => "near-polygon",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraints {
    pub diameter: usize,
    pub k_min: u64,
    pub k_max: u64,
    pub a1: Option<u64>,
    pub c2_max: Option<u64>,
    /// Keep only arrays with `θ_min <= -ρ k`.
    pub theta_ratio: Option<BigRational>,
    pub require_nonbipartite: bool,
    pub require_cd_equals_k: bool,
    pub structural: Structural,
    /// For `a_1 = 0`, keep only arrays with `m(θ_min) >= k`. The images of
    /// the `k` neighbours of a vertex in the `θ`-eigenspace have Gram matrix
    /// `(1 - u_2) I + u_2 J`, which is nonsingular for `θ ∉ {0, ±k}`.
    pub triangle_free_multiplicity: bool,
    pub checks: Vec<CheckId>,
}

impl Constraints {
    pub fn new(diameter: usize, k_min: u64, k_max: u64) -> Self {
        Self {
            diameter,
            k_min,
            k_max,
            a1: None,
            c2_max: None,
            theta_ratio: None,
            require_nonbipartite: false,
            require_cd_equals_k: false,
            structural: Structural::None,
            triangle_free_multiplicity: false,
            checks: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), EnumerateError> {
        let bad = |m: &str| Err(EnumerateError::InvalidConstraints(m.into()));
        if self.diameter == 0 {
            return bad("diameter must be at least 1");
        }
        if self.k_min < 1 || self.k_min > self.k_max {
            return bad("need 1 <= k_min <= k_max");
        }
        if let Some(r) = &self.theta_ratio {
            if !r.is_positive() || r > &BigRational::one() {
                return bad("theta ratio must lie in (0, 1]");
            }
        }
        Ok(())
    }

    fn tracks_ki(&self) -> bool {
        self.checks.contains(&CheckId::KiIntegrality)
    }
}

/// A named reason for discarding a candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    A1,
    C2Max,
    CdEqualsK,
    Structural(Structural),
    Nonbipartite,
    ThetaRatio,
    TriangleFreeMultiplicity,
    Check(CheckId),
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::A1 => "a1",
            Rule::C2Max => "c2-max",
            Rule::CdEqualsK => "cd-equals-k",
            Rule::Structural(s) => s.as_str(),
            Rule::Nonbipartite => "nonbipartite",
            Rule::ThetaRatio => "theta-ratio",
            Rule::TriangleFreeMultiplicity => "triangle-free-multiplicity",
            Rule::Check(id) => id.as_str(),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Counts {
    pub generated: u64,
    pub surviving: u64,
    pub pruned: BTreeMap<Rule, u64>,
}

impl Counts {
    fn prune(&mut self, rule: Rule, n: u64) {
        if n > 0 {
            self.generated += n;
            *self.pruned.entry(rule).or_default() += n;
        }
    }

    fn merge(&mut self, other: Counts) {
        self.generated += other.generated;
        self.surviving += other.surviving;
        for (r, n) in other.pruned {
            *self.pruned.entry(r).or_default() += n;
        }
    }

    pub fn pruned_total(&self) -> u64 {
        self.pruned.values().sum()
    }
}

#[derive(Debug, Clone)]
pub struct EnumerationResult {
    pub constraints: Constraints,
    /// Survivors, sorted by `(D, k, b, c)`.
    pub reports: Vec<FeasibilityReport>,
    pub counts: Counts,
}

impl EnumerationResult {
    pub fn arrays(&self) -> Vec<IntersectionArray> {
        self.reports.iter().map(|r| r.array.clone()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct EnumerateOptions<'a> {
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Ceiling on generated leaves.
    pub max_candidates: u64,
    pub catalog: Option<&'a Catalog>,
    pub spectral: SpectralOptions,
}

impl Default for EnumerateOptions<'_> {
    fn default() -> Self {
        Self {
            jobs: None,
            max_candidates: 50_000_000,
            catalog: None,
            spectral: SpectralOptions::default(),
        }
    }
}

/// Precision of the multiplicity screen run before the full pipeline.
fn screen_precision() -> BigRational {
    BigRational::new(1.into(), (1u64 << 11).into())
}

const BEFORE: u8 = 1;
const AFTER: u8 = 2;

struct Walker<'a> {
    cons: &'a Constraints,
    opts: &'a EnumerateOptions<'a>,
    profile: Profile,
    k: u64,
    /// `b_1` fixed by the task, when `D >= 2`.
    b1: Option<u64>,
    b: Vec<u64>,
    c: Vec<u64>,
    counts: Counts,
    out: Vec<FeasibilityReport>,
    budget: &'a AtomicU64,
    abort: &'a AtomicBool,
    error: Option<EnumerateError>,
}

impl Walker<'_> {
    fn charge(&mut self, n: u64) -> bool {
        if self.abort.load(Ordering::Relaxed) {
            return false;
        }
        let used = self.budget.fetch_add(n, Ordering::Relaxed) + n;
        if used > self.opts.max_candidates {
            self.abort.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn prune(&mut self, rule: Rule, n: u64) -> bool {
        self.counts.prune(rule, n);
        self.charge(n)
    }

    /// Structural state after fixing position `j` with `a_j`.
    fn step_structure(&self, state: u8, j: usize, a_j: u64, b_j: u64, c_j: u64) -> u8 {
        match self.cons.structural {
            Structural::None => state,
            Structural::A1Structure => {
                let mut next = 0;
                if state & BEFORE != 0 {
                    if a_j == c_j {
                        next |= BEFORE;
                    }
                    if j >= 2 && 2 * a_j == self.k {
                        next |= AFTER;
                    }
                }
                if state & AFTER != 0 && a_j == b_j {
                    next |= AFTER;
                }
                next
            }
            Structural::NearPolygon => {
                let a1 = if j == 1 { a_j } else { self.k - self.b[1] - 1 };
                if c_j * a1 == a_j {
                    state
                } else {
                    0
                }
            }
        }
    }

    /// Position `i` (1-based): choose `c_i`, then `b_i`. `ki` is `k_{i-1}`
    /// when tracked.
    fn walk(&mut self, i: usize, ki_prev: Option<u128>, state: u8) -> bool {
        let d = self.cons.diameter;
        let k = self.k;
        let c_lo = if i == 1 { 1 } else { self.c[i - 2] };
        let c_hi = if i == 1 { 1 } else { k };
        let b_prev = if i == 1 { k } else { self.b[i - 1] };
        for ci in c_lo..=c_hi {
            if i == 2 {
                if let Some(cap) = self.cons.c2_max {
                    if ci > cap {
                        if !self.prune(Rule::C2Max, c_hi - ci + 1) {
                            return false;
                        }
                        break;
                    }
                }
            }
            if i == d && self.cons.require_cd_equals_k && ci != k {
                if !self.prune(Rule::CdEqualsK, 1) {
                    return false;
                }
                continue;
            }
            // k_i = k_{i-1} b_{i-1} / c_i
            let ki = match ki_prev {
                Some(prev) if self.cons.tracks_ki() => {
                    let num = prev.checked_mul(b_prev as u128);
                    match num {
                        Some(num) if num % ci as u128 != 0 => {
                            if !self.prune(Rule::Check(CheckId::KiIntegrality), 1) {
                                return false;
                            }
                            continue;
                        }
                        Some(num) => Some(num / ci as u128),
                        None => None,
                    }
                }
                _ => None,
            };
            self.c.push(ci);
            let ok = if i == d {
                let a_d = k - ci;
                let st = self.step_structure(state, i, a_d, 0, ci);
                self.finish_position(st)
            } else {
                self.choose_b(i, ci, ki, state)
            };
            self.c.pop();
            if !ok {
                return false;
            }
        }
        true
    }

    fn choose_b(&mut self, i: usize, ci: u64, ki: Option<u128>, state: u8) -> bool {
        let k = self.k;
        let b_hi = self.b[i - 1].min(k - ci);
        let b_lo = 1;
        let (b_lo, b_hi) = match (i, self.b1) {
            (1, Some(b1)) if b1 <= b_hi => (b1, b1),
            (1, Some(_)) => return true,
            _ => (b_lo, b_hi),
        };
        for bi in (b_lo..=b_hi).rev() {
            if i == 1 {
                if let Some(a1) = self.cons.a1 {
                    if k - bi - 1 != a1 {
                        if !self.prune(Rule::A1, 1) {
                            return false;
                        }
                        continue;
                    }
                }
            }
            let ai = k - bi - ci;
            let st = self.step_structure(state, i, ai, bi, ci);
            if st == 0 {
                if !self.prune(Rule::Structural(self.cons.structural), 1) {
                    return false;
                }
                continue;
            }
            self.b.push(bi);
            let ok = self.walk(i + 1, ki, st);
            self.b.pop();
            if !ok {
                return false;
            }
        }
        true
    }

    fn finish_position(&mut self, state: u8) -> bool {
        let structural_ok = match self.cons.structural {
            Structural::None => true,
            Structural::A1Structure => state & AFTER != 0,
            Structural::NearPolygon => state != 0,
        };
        if !structural_ok {
            return self.prune(Rule::Structural(self.cons.structural), 1);
        }
        let arr = IntersectionArray::new(self.b.clone(), self.c.clone())
            .expect("generator only emits valid arrays");
        match self.judge(&arr) {
            Ok(Some(report)) => {
                self.counts.generated += 1;
                self.counts.surviving += 1;
                self.out.push(report);
                self.charge(1)
            }
            Ok(None) => true,
            Err(e) => {
                self.error = Some(e);
                self.abort.store(true, Ordering::Relaxed);
                false
            }
        }
    }

    /// The coarse screen may only reject what the pipeline would reject
    /// first: multiplicity integrality must be selected and every earlier
    /// registry check must pass.
    fn screens_multiplicities(&self, arr: &IntersectionArray) -> bool {
        self.profile.checks().contains(&CheckId::MultiplicityIntegrality)
            && (self.cons.tracks_ki() || derive_parameters(arr).ki_integral())
    }

    /// Full-array rules; pruned arrays are counted here.
    fn judge(&mut self, arr: &IntersectionArray) -> Result<Option<FeasibilityReport>, EnumerateError> {
        let cons = self.cons;
        let reject = |w: &mut Self, rule| {
            w.prune(rule, 1);
            Ok(None)
        };
        if cons.require_nonbipartite && arr.is_bipartite() {
            return reject(self, Rule::Nonbipartite);
        }
        if let Some(rho) = &cons.theta_ratio {
            if !theta_min_at_most(arr, rho) {
                return reject(self, Rule::ThetaRatio);
            }
        }
        if cons.structural == Structural::A1Structure {
            let half = -BigRational::new((arr.valency() as i64).into(), 2.into());
            if !theta_min_equals(arr, &half) {
                return reject(self, Rule::Structural(Structural::A1Structure));
            }
        }
        if self.screens_multiplicities(arr) && multiplicity_screen_fails(arr, screen_precision())? {
            return reject(self, Rule::Check(CheckId::MultiplicityIntegrality));
        }
        let report = run_pipeline_with(arr, &self.profile, self.opts.catalog, &self.opts.spectral)?;
        if let Some(failed) = report.failed().next() {
            return reject(self, Rule::Check(failed.id));
        }
        if cons.triangle_free_multiplicity && arr.a(1) == 0 {
            let k = BigRational::from_integer(arr.valency().into());
            let m = report.spectrum.multiplicities().last().expect("nonempty spectrum");
            if m.hi() < &k {
                return reject(self, Rule::TriangleFreeMultiplicity);
            }
        }
        Ok(Some(report))
    }
}

fn run_task(
    cons: &Constraints,
    opts: &EnumerateOptions<'_>,
    k: u64,
    b1: Option<u64>,
    budget: &AtomicU64,
    abort: &AtomicBool,
) -> (Vec<FeasibilityReport>, Counts, Option<EnumerateError>) {
    let mut w = Walker {
        cons,
        opts,
        profile: Profile::new(cons.checks.iter().copied(), true),
        k,
        b1,
        b: vec![k],
        c: Vec::new(),
        counts: Counts::default(),
        out: Vec::new(),
        budget,
        abort,
        error: None,
    };
    w.walk(1, Some(1), BEFORE);
    (w.out, w.counts, w.error)
}

pub fn enumerate(cons: &Constraints) -> Result<EnumerationResult, EnumerateError> {
    enumerate_with(cons, &EnumerateOptions::default())
}

pub fn enumerate_with(
    cons: &Constraints,
    opts: &EnumerateOptions<'_>,
) -> Result<EnumerationResult, EnumerateError> {
    cons.validate()?;
    let mut tasks: Vec<(u64, Option<u64>)> = Vec::new();
    for k in cons.k_min..=cons.k_max {
        if cons.diameter == 1 {
            tasks.push((k, None));
        } else {
            tasks.extend((1..k).rev().map(|b1| (k, Some(b1))));
        }
    }
    let budget = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let work = || {
        tasks
            .par_iter()
            .map(|&(k, b1)| run_task(cons, opts, k, b1, &budget, &abort))
            .collect::<Vec<_>>()
    };
    let parts = match opts.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| EnumerateError::InvalidConstraints(e.to_string()))?
            .install(work),
        None => work(),
    };
    let mut reports = Vec::new();
    let mut counts = Counts::default();
    for (out, c, err) in parts {
        if let Some(e) = err {
            return Err(e);
        }
        reports.extend(out);
        counts.merge(c);
    }
    if abort.load(Ordering::Relaxed) {
        return Err(EnumerateError::ResourceCap {
            cap: opts.max_candidates,
        });
    }
    reports.sort_by(|x, y| x.array.sort_key().cmp(&y.array.sort_key()));
    Ok(EnumerationResult {
        constraints: cons.clone(),
        reports,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::parse_array;
    use crate::poly::rat;

    fn names(r: &EnumerationResult) -> Vec<String> {
        r.reports.iter().map(|x| x.array.to_string()).collect()
    }

    #[test]
    fn small_diameter_two() {
        let r = enumerate(&Constraints::new(2, 1, 3)).unwrap();
        let got = names(&r);
        assert!(got.contains(&"2,1;1,1".to_string()));
        assert!(got.contains(&"3,2;1,1".to_string()));
        assert_eq!(r.counts.generated, r.counts.surviving + r.counts.pruned_total());
        for s in &got {
            parse_array(s).unwrap();
        }
    }

    #[test]
    fn counts_balance_with_prunes() {
        let mut c = Constraints::new(3, 2, 12);
        c.a1 = Some(0);
        c.c2_max = Some(3);
        c.theta_ratio = Some(rat(1, 2));
        c.require_nonbipartite = true;
        c.checks = vec![CheckId::KiIntegrality, CheckId::MultiplicityIntegrality];
        let r = enumerate(&c).unwrap();
        assert_eq!(r.counts.generated, r.counts.surviving + r.counts.pruned_total());
        assert_eq!(r.counts.surviving as usize, r.reports.len());
        assert!(r.reports.iter().all(|x| x.failed().next().is_none()));
        assert!(r.counts.pruned.contains_key(&Rule::Check(CheckId::KiIntegrality)));
    }

    #[test]
    fn output_independent_of_jobs() {
        let mut c = Constraints::new(3, 2, 10);
        c.checks = vec![CheckId::KiIntegrality, CheckId::MultiplicityIntegrality];
        let one = enumerate_with(&c, &EnumerateOptions { jobs: Some(1), ..Default::default() }).unwrap();
        let four = enumerate_with(&c, &EnumerateOptions { jobs: Some(4), ..Default::default() }).unwrap();
        assert_eq!(names(&one), names(&four));
        assert_eq!(one.counts, four.counts);
    }

    #[test]
    fn resource_cap_is_reported() {
        let c = Constraints::new(3, 2, 30);
        let err = enumerate_with(&c, &EnumerateOptions { max_candidates: 100, ..Default::default() })
            .unwrap_err();
        assert_eq!(err, EnumerateError::ResourceCap { cap: 100 });
    }

    #[test]
    fn rejects_bad_constraints() {
        let mut c = Constraints::new(2, 5, 4);
        assert!(enumerate(&c).is_err());
        c.k_max = 6;
        c.theta_ratio = Some(rat(3, 2));
        assert!(enumerate(&c).is_err());
    }
}
