//! Named reproduction presets.
//!
//! Each preset runs one or more constrained enumerations, then a final stage
//! that decides which survivors make the published list. Every valency cap
//! comes from a function in [`crate::bounds`] and the notes say which.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::{enumerate_with, Constraints, Counts, EnumerateOptions, EnumerationResult, Structural};
use crate::array::{parse_array, IntersectionArray};
use crate::bounds::{a1_valency_cap, diameter3_a1zero_cap};
use crate::catalog::{Catalog, Family, ListFilter, Status};
use crate::error::EnumerateError;
use crate::feasibility::{run_pipeline_with, CheckId, FeasibilityReport, Profile, Verdict};
use crate::spectral::{one_half, theta_min_at_most};

pub const PRESETS: [&str; 4] = ["thm-7.2", "thm-6.4", "prop-4.1", "thm-1.2"];

/// Largest valency a diameter-2 array with `θ_1 = 1` and `θ_min <= -k/2`
/// can have. Such an array has `θ_min = -s` with `s ∈ {k/2, (k+1)/2}`, and
/// integrality of the multiplicities forces `(s + 1) | 12`, so `s <= 11`.
pub const DIAMETER2_THETA1_ONE_CAP: u64 = 22;

/// Largest valency of a diameter-1 array with `θ_min = -1 <= -k/2`, plus
/// slack so the ratio rule is exercised.
const DIAMETER1_K_MAX: u64 = 4;

#[derive(Debug, Clone, Default)]
pub struct PresetOptions<'a> {
    /// Largest `t` kept from the infinite `K_{t,t,t}` family.
    pub t_cap: Option<u64>,
    pub enumerate: EnumerateOptions<'a>,
}

/// A survivor dropped by the final stage, with the reason.
#[derive(Debug, Clone)]
pub struct Elimination {
    pub array: IntersectionArray,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct PresetResult {
    pub name: &'static str,
    pub t_cap: Option<u64>,
    /// The enumerations behind the preset, in the order they ran.
    pub runs: Vec<EnumerationResult>,
    /// Arrays that passed generation, sorted by `(D, k, b, c)`.
    pub survivors: Vec<FeasibilityReport>,
    /// Arrays in the reproduced list, sorted.
    pub final_reports: Vec<FeasibilityReport>,
    pub eliminated: Vec<Elimination>,
    pub notes: Vec<String>,
}

impl PresetResult {
    pub fn counts(&self) -> Counts {
        let mut total = Counts::default();
        for r in &self.runs {
            total.merge(r.counts.clone());
        }
        total
    }

    pub fn survivor_arrays(&self) -> Vec<IntersectionArray> {
        self.survivors.iter().map(|r| r.array.clone()).collect()
    }

    pub fn final_arrays(&self) -> Vec<IntersectionArray> {
        self.final_reports.iter().map(|r| r.array.clone()).collect()
    }

    /// Differences from `golden`, one line each; empty on a match.
    pub fn diff(&self, golden: &Golden) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(want) = &golden.survivors {
            diff_section("survivors", want, &self.survivor_arrays(), &mut out);
        }
        if let Some(want) = &golden.final_arrays {
            diff_section("final", want, &self.final_arrays(), &mut out);
        }
        out
    }
}

fn diff_section(
    section: &str,
    want: &[IntersectionArray],
    got: &[IntersectionArray],
    out: &mut Vec<String>,
) {
    let want_set: BTreeSet<String> = want.iter().map(|a| a.to_string()).collect();
    let got_set: BTreeSet<String> = got.iter().map(|a| a.to_string()).collect();
    for a in want {
        if !got_set.contains(&a.to_string()) {
            out.push(format!("[{section}] - {a}"));
        }
    }
    for a in got {
        if !want_set.contains(&a.to_string()) {
            out.push(format!("[{section}] + {a}"));
        }
    }
    if out.is_empty() && want.len() != got.len() {
        out.push(format!("[{section}] expected {} arrays, got {}", want.len(), got.len()));
    }
}

/// Expected output of a preset. Family lines expand up to the t-cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Golden {
    pub survivors: Option<Vec<IntersectionArray>>,
    pub final_arrays: Option<Vec<IntersectionArray>>,
}

impl Golden {
    pub fn parse(name: &str, text: &str, t_cap: Option<u64>) -> Result<Self, EnumerateError> {
        let err = |line: usize, message: String| EnumerateError::Golden {
            name: name.to_string(),
            line,
            message,
        };
        let mut survivors = None;
        let mut final_arrays = None;
        let mut current: Option<&mut Vec<IntersectionArray>> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match line {
                "[survivors]" => {
                    current = Some(survivors.insert(Vec::new()));
                    continue;
                }
                "[final]" => {
                    current = Some(final_arrays.insert(Vec::new()));
                    continue;
                }
                _ => {}
            }
            let Some(list) = current.as_deref_mut() else {
                return Err(err(idx + 1, "entry outside a section".into()));
            };
            if line.contains('[') {
                let fam =
                    Family::parse(line).ok_or_else(|| err(idx + 1, format!("bad family {line:?}")))?;
                let cap = t_cap.ok_or_else(|| err(idx + 1, "family line needs a t-cap".into()))?;
                let cap = i64::try_from(cap).unwrap_or(i64::MAX);
                list.extend((fam.min_parameter()..=cap).filter_map(|t| fam.instantiate(t)));
            } else {
                list.push(parse_array(line).map_err(|e| err(idx + 1, e.to_string()))?);
            }
        }
        for list in [&mut survivors, &mut final_arrays].into_iter().flatten() {
            list.sort_by(|x, y| x.sort_key().cmp(&y.sort_key()));
        }
        Ok(Self {
            survivors,
            final_arrays,
        })
    }

    /// The embedded expectation for a preset.
    pub fn embedded(name: &str, t_cap: Option<u64>) -> Result<Self, EnumerateError> {
        let text = golden_text(name).ok_or_else(|| EnumerateError::UnknownPreset(name.into()))?;
        Self::parse(name, text, t_cap)
    }
}

pub fn golden_text(name: &str) -> Option<&'static str> {
    match name {
        "thm-7.2" => Some(include_str!("../../data/golden/thm-7.2.txt")),
        "thm-6.4" => Some(include_str!("../../data/golden/thm-6.4.txt")),
        "prop-4.1" => Some(include_str!("../../data/golden/prop-4.1.txt")),
        "thm-1.2" => Some(include_str!("../../data/golden/thm-1.2.txt")),
        _ => None,
    }
}

pub fn preset(name: &str, opts: &PresetOptions<'_>) -> Result<PresetResult, EnumerateError> {
    let embedded;
    let catalog = match opts.enumerate.catalog {
        Some(c) => c,
        None => {
            embedded = Catalog::embedded();
            &embedded
        }
    };
    let eopts = EnumerateOptions {
        catalog: Some(catalog),
        ..opts.enumerate.clone()
    };
    let t_cap = || opts.t_cap.ok_or_else(|| EnumerateError::MissingTCap(name.to_string()));
    match name {
        "thm-7.2" => thm_7_2(&eopts),
        "thm-6.4" => thm_6_4(&eopts),
        "prop-4.1" => prop_4_1(t_cap()?, &eopts),
        "thm-1.2" => thm_1_2(t_cap()?, &eopts),
        _ => Err(EnumerateError::UnknownPreset(name.to_string())),
    }
}

fn sort_reports(v: &mut [FeasibilityReport]) {
    v.sort_by(|x, y| x.array.sort_key().cmp(&y.array.sort_key()));
}

fn rerun(
    arr: &IntersectionArray,
    profile: &Profile,
    opts: &EnumerateOptions<'_>,
) -> Result<FeasibilityReport, EnumerateError> {
    Ok(run_pipeline_with(arr, profile, opts.catalog, &opts.spectral)?)
}

fn first_failure(report: &FeasibilityReport) -> Option<String> {
    report
        .failed()
        .next()
        .map(|f| format!("check {} failed: {}", f.id, f.detail))
}

fn integrality_checks() -> Vec<CheckId> {
    vec![CheckId::KiIntegrality, CheckId::MultiplicityIntegrality]
}

fn cap_u64(v: BigInt) -> u64 {
    v.to_u64().expect("valency caps fit in u64")
}

pub fn thm_7_2_constraints() -> Constraints {
    let mut c = Constraints::new(3, 2, diameter3_a1zero_cap());
    c.a1 = Some(0);
    c.c2_max = Some(5);
    c.theta_ratio = Some(one_half());
    c.require_nonbipartite = true;
    c.triangle_free_multiplicity = true;
    c.checks = integrality_checks();
    c
}

fn thm_7_2(opts: &EnumerateOptions<'_>) -> Result<PresetResult, EnumerateError> {
    let run = enumerate_with(&thm_7_2_constraints(), opts)?;
    let survivors = run.reports.clone();
    let mut final_reports = Vec::new();
    let mut eliminated = Vec::new();
    for s in &survivors {
        let report = rerun(&s.array, &Profile::full(), opts)?;
        if let Some(reason) = first_failure(&report) {
            eliminated.push(Elimination {
                array: s.array.clone(),
                reason,
            });
        } else if report.verdict == Verdict::KnownNonexistent {
            let source = report.catalog.as_ref().map_or("", |e| e.source.as_str());
            eliminated.push(Elimination {
                array: s.array.clone(),
                reason: format!("catalog: nonexistent ({source})"),
            });
        } else {
            final_reports.push(report);
        }
    }
    Ok(PresetResult {
        name: "thm-7.2",
        t_cap: None,
        runs: vec![run],
        survivors,
        final_reports,
        eliminated,
        notes: vec![
            format!(
                "k <= {}: diameter-3 valency cap for a_1 = 0, theta_min <= -k/2",
                diameter3_a1zero_cap()
            ),
            "c_2 <= 5: c_2 bound for a_1 = 0 and theta_min <= -k/2".into(),
            "m(theta_min) >= k: triangle-free multiplicity bound".into(),
            "final list: full pipeline, then catalog nonexistence".into(),
        ],
    })
}

/// The two enumerations of the `a_1 = 1`, `c_D = k` search.
pub fn thm_6_4_constraints() -> Vec<Constraints> {
    [3usize, 4]
        .into_iter()
        .map(|d| {
            let cap = cap_u64(a1_valency_cap(d, true).expect("d >= 2"));
            let mut c = Constraints::new(d, 2, cap);
            c.a1 = Some(1);
            c.c2_max = Some(6);
            c.theta_ratio = Some(one_half());
            c.require_nonbipartite = true;
            c.require_cd_equals_k = true;
            c.structural = Structural::A1Structure;
            c.checks = integrality_checks();
            c
        })
        .collect()
}

fn thm_6_4(opts: &EnumerateOptions<'_>) -> Result<PresetResult, EnumerateError> {
    let mut runs = Vec::new();
    let mut survivors = Vec::new();
    for cons in thm_6_4_constraints() {
        let run = enumerate_with(&cons, opts)?;
        survivors.extend(run.reports.iter().cloned());
        runs.push(run);
    }
    sort_reports(&mut survivors);
    let profile = Profile::new(
        [
            CheckId::KiIntegrality,
            CheckId::MultiplicityIntegrality,
            CheckId::AbsoluteBound,
        ],
        false,
    );
    let mut final_reports = Vec::new();
    let mut eliminated = Vec::new();
    for s in &survivors {
        let report = rerun(&s.array, &profile, opts)?;
        match first_failure(&report) {
            Some(reason) => eliminated.push(Elimination {
                array: s.array.clone(),
                reason,
            }),
            None => final_reports.push(report),
        }
    }
    let cap3 = a1_valency_cap(3, true).expect("d >= 2");
    let cap4 = a1_valency_cap(4, true).expect("d >= 2");
    Ok(PresetResult {
        name: "thm-6.4",
        t_cap: None,
        runs,
        survivors,
        final_reports,
        eliminated,
        notes: vec![
            format!("k <= {cap3} (D = 3) and k <= {cap4} (D = 4): a_1 = 1 valency cap with c_D = k"),
            "c_2 <= 6: krs condition at theta_min = -k/2".into(),
            "generation enforces the a_1 = 1 pattern and theta_min = -k/2 exactly".into(),
            "final list: absolute bound".into(),
        ],
    })
}

pub fn prop_4_1_constraints(t_cap: u64) -> Constraints {
    let k_max = (2 * t_cap).max(DIAMETER2_THETA1_ONE_CAP);
    let mut c = Constraints::new(2, 2, k_max);
    c.theta_ratio = Some(one_half());
    c.require_nonbipartite = true;
    c.checks = CheckId::ALL.to_vec();
    c
}

/// `t` when `arr` is `{2t, t-1; 1, 2t}`.
fn tripartite_parameter(arr: &IntersectionArray) -> Option<u64> {
    let k = arr.valency();
    (arr.diameter() == 2 && k % 2 == 0 && arr.c(2) == k && arr.b(1) + 1 == k / 2).then_some(k / 2)
}

/// Diameter-2 rules applied to enumeration survivors.
fn diameter2_rule(report: &FeasibilityReport, t_cap: u64) -> Option<String> {
    let arr = &report.array;
    let sp = &report.spectrum;
    if sp.all_exact() {
        let theta1 = sp.theta_1()?.exact_integer()?.clone();
        let theta_min = sp.theta_min().exact_integer()?.clone();
        let c2_minus_k = BigInt::from(arr.c(2)) - BigInt::from(arr.valency());
        if c2_minus_k != &theta1 * &theta_min {
            return Some(format!(
                "second-eigenvalue: c_2 - k = {c2_minus_k} but theta_1 theta_min = {}",
                &theta1 * &theta_min
            ));
        }
        if !(theta1.is_zero() || theta1.is_one()) {
            return Some(format!("second-eigenvalue: theta_1 = {theta1} is not 0 or 1"));
        }
    } else if !(arr.b(1) == arr.c(2) && 2 * arr.c(2) == arr.valency()) {
        return Some("conference-form: irrational spectrum but not {2t,t;1,t}".into());
    }
    match tripartite_parameter(arr) {
        Some(t) if t > t_cap => Some(format!("t-cap: K_{{{t},{t},{t}}} beyond t = {t_cap}")),
        _ => None,
    }
}

fn prop_4_1(t_cap: u64, opts: &EnumerateOptions<'_>) -> Result<PresetResult, EnumerateError> {
    let cons = prop_4_1_constraints(t_cap);
    let run = enumerate_with(&cons, opts)?;
    let survivors = run.reports.clone();
    let mut final_reports = Vec::new();
    let mut eliminated = Vec::new();
    for s in &survivors {
        match diameter2_rule(s, t_cap) {
            Some(reason) => eliminated.push(Elimination {
                array: s.array.clone(),
                reason,
            }),
            None => final_reports.push(rerun(&s.array, &Profile::full(), opts)?),
        }
    }
    Ok(PresetResult {
        name: "prop-4.1",
        t_cap: Some(t_cap),
        runs: vec![run],
        survivors,
        final_reports,
        eliminated,
        notes: vec![
            format!(
                "k <= {}: max(2 t-cap, {DIAMETER2_THETA1_ONE_CAP}); theta_1 = 0 gives K_{{t,t,t}} (k = 2t), \
                 theta_1 = 1 needs (s+1) | 12",
                cons.k_max
            ),
            "non-catalog survivors are reported as feasible-unknown-existence; completeness rests on \
             Seidel's classification"
                .into(),
        ],
    })
}

pub fn diameter1_constraints() -> Constraints {
    let mut c = Constraints::new(1, 2, DIAMETER1_K_MAX);
    c.theta_ratio = Some(one_half());
    c.require_nonbipartite = true;
    c.checks = CheckId::ALL.to_vec();
    c
}

/// Catalog arrays of diameter 3 or 4 with `a_1 = 1` and `a_D = k/2`: the
/// regular near polygons, which the `c_D = k` search does not cover.
fn near_polygons(catalog: &Catalog, t_cap: u64) -> Vec<IntersectionArray> {
    let filter = ListFilter {
        family_cap: Some(t_cap as i64),
        ..ListFilter::default()
    };
    catalog
        .list(&filter)
        .into_iter()
        .filter(|e| e.status != Status::Nonexistent)
        .map(|e| e.array)
        .filter(|a| {
            let d = a.diameter();
            (3..=4).contains(&d) && a.a(1) == 1 && 2 * a.a(d) == a.valency()
        })
        .collect()
}

/// The catalog's classification slice: non-bipartite arrays with
/// `D <= 4`, `k >= 2`, `a_1 != 0` when `D = 4`, `θ_min <= -k/2` and a status
/// other than nonexistent. Families expand up to `t_cap`.
pub fn classification_slice(catalog: &Catalog, t_cap: u64) -> Vec<IntersectionArray> {
    let filter = ListFilter {
        family_cap: Some(t_cap as i64),
        ..ListFilter::default()
    };
    catalog
        .list(&filter)
        .into_iter()
        .filter(|e| e.status != Status::Nonexistent)
        .map(|e| e.array)
        .filter(|a| {
            let d = a.diameter();
            d <= 4
                && a.valency() >= 2
                && !a.is_bipartite()
                && !(d == 4 && a.a(1) == 0)
                && theta_min_at_most(a, &one_half())
        })
        .collect()
}

fn thm_1_2(t_cap: u64, opts: &EnumerateOptions<'_>) -> Result<PresetResult, EnumerateError> {
    let d1 = enumerate_with(&diameter1_constraints(), opts)?;
    let mut runs = vec![d1.clone()];
    let mut final_reports = d1.reports.clone();
    let mut eliminated = Vec::new();
    for part in [prop_4_1(t_cap, opts)?, thm_7_2(opts)?, thm_6_4(opts)?] {
        runs.extend(part.runs);
        final_reports.extend(part.final_reports);
        eliminated.extend(part.eliminated);
    }
    let catalog = opts.catalog.expect("preset always supplies a catalog");
    let mut notes = vec![
        format!("diameter 1: k <= {DIAMETER1_K_MAX}, theta_min = -1 <= -k/2 forces k = 2"),
        "diameter 2: prop-4.1; diameter 3, a_1 = 0: thm-7.2; a_1 = 1, c_D = k: thm-6.4".into(),
        "a_1 >= 2 with D >= 3 is impossible (K_{t,t,t} has diameter 2)".into(),
    ];
    let mut polygons = 0;
    for arr in near_polygons(catalog, t_cap) {
        let report = rerun(&arr, &Profile::full(), opts)?;
        if let Some(reason) = first_failure(&report) {
            eliminated.push(Elimination { array: arr, reason });
        } else if !theta_min_at_most(&arr, &one_half()) {
            eliminated.push(Elimination {
                array: arr,
                reason: "theta-ratio: theta_min > -k/2".into(),
            });
        } else {
            polygons += 1;
            final_reports.push(report);
        }
    }
    notes.push(format!(
        "a_1 = 1, a_D = k/2: {polygons} regular near polygons taken from catalog data"
    ));
    sort_reports(&mut final_reports);
    final_reports.dedup_by(|x, y| x.array == y.array);
    let slice = classification_slice(catalog, t_cap);
    let got: Vec<IntersectionArray> = final_reports.iter().map(|r| r.array.clone()).collect();
    notes.push(if got == slice {
        format!("matches the catalog classification slice ({} arrays)", slice.len())
    } else {
        format!(
            "differs from the catalog classification slice ({} vs {} arrays)",
            got.len(),
            slice.len()
        )
    });
    Ok(PresetResult {
        name: "thm-1.2",
        t_cap: Some(t_cap),
        runs,
        survivors: final_reports.clone(),
        final_reports,
        eliminated,
        notes,
    })
}
