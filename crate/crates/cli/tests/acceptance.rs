//! One line per acceptance criterion. Runs without the libtest harness so the
//! lines are always printed.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use drg_core::bounds::{a1_valency_cap, delsarte_clique_cap, hoffman_independence_cap, valency_bound};
use drg_core::feasibility::{check_c2_bound, check_krs_condition};
use drg_core::spectral::{self, eigenvalues, theta_min_at_most, theta_min_equals};
use drg_core::{
    enumerate, parse_array, run_pipeline, CertifiedReal, CheckStatus, Constraints, Profile, Spectrum,
    Verdict,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::Value;

#[path = "../../core/tests/common/mod.rs"]
mod common;

/// Named sub-results of one criterion.
struct Outcome {
    parts: Vec<(String, bool)>,
    /// Parts that cannot hold as literally stated; reported, not fatal.
    unattainable: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { parts: Vec::new(), unattainable: Vec::new() }
    }

    fn check(&mut self, what: impl Into<String>, ok: bool) -> &mut Self {
        self.parts.push((what.into(), ok));
        self
    }

    fn passed(&self) -> bool {
        self.parts.iter().all(|p| p.1)
    }

    fn fatal(&self) -> bool {
        self.parts.iter().any(|(what, ok)| !ok && !self.unattainable.contains(what))
    }
}

fn reproduce(preset: &str) -> (Value, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_drg"))
        .args(["--json", "reproduce", preset])
        .output()
        .expect("run drg");
    let elapsed = start.elapsed();
    let doc = serde_json::from_slice(&out.stdout).expect("reproduce emits JSON");
    (doc, elapsed)
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .into_iter()
        .flatten()
        .map(|x| x.as_str().or_else(|| x["array"].as_str()).unwrap_or_default().to_string())
        .collect()
}

fn triangle_free_reproduction() -> Outcome {
    let (doc, elapsed) = reproduce("thm-7.2");
    let survivors = strings(&doc["survivors"]);
    let finals = strings(&doc["final"]);
    let eliminated = strings(&doc["eliminated"]);
    let literal = "5,4,2;1,1,2";
    let mut o = Outcome::new();
    o.check("12 survivors", survivors.len() == 12)
        .check("10 after catalog filtering", finals.len() == 10)
        .check("golden match", doc["golden"]["matches"] == true)
        .check(format!("runtime {:.1}s <= 60s", elapsed.as_secs_f64()), elapsed <= Duration::from_secs(60))
        .check(
            "13,12,10;1,3,4 found then dropped",
            survivors.iter().any(|s| s == "13,12,10;1,3,4") && eliminated.iter().any(|s| s == "13,12,10;1,3,4"),
        )
        .check(format!("{literal} among survivors"), survivors.iter().any(|s| s == literal));
    // The literal array has irrational multiplicities; the extra survivor is 5,4,3;1,1,2.
    let arr = parse_array(literal).unwrap();
    let sp = eigenvalues(&arr, &spectral::default_precision()).unwrap();
    let integral = sp.multiplicities().iter().all(|m| m.as_exact().is_some_and(|x| x.is_integer()));
    if !integral {
        o.unattainable.push(format!("{literal} among survivors"));
    }
    o
}

fn a1_one_reproduction() -> Outcome {
    let (doc, elapsed) = reproduce("thm-6.4");
    let mut finals = strings(&doc["final"]);
    finals.sort();
    let reasons: Vec<(String, String)> = doc["eliminated"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|e| (e["array"].as_str().unwrap().to_string(), e["reason"].as_str().unwrap().to_string()))
        .collect();
    let by_absolute_bound = |a: &str| reasons.iter().any(|(x, r)| x == a && r.contains("absolute-bound"));
    let mut o = Outcome::new();
    o.check("5 survivors", strings(&doc["survivors"]).len() == 5)
        .check("3 final arrays", finals == ["4,2,1;1,1,4", "6,4,2,1;1,1,4,6", "8,6,1;1,3,8"])
        .check("absolute bound drops 10,8,3;1,2,10", by_absolute_bound("10,8,3;1,2,10"))
        .check("absolute bound drops 12,10,3;1,3,12", by_absolute_bound("12,10,3;1,3,12"))
        .check("golden match", doc["golden"]["matches"] == true)
        .check(format!("runtime {:.1}s <= 300s", elapsed.as_secs_f64()), elapsed <= Duration::from_secs(300));
    o
}

fn spectrum(s: &str) -> Spectrum {
    eigenvalues(&parse_array(s).unwrap(), &spectral::default_precision()).unwrap()
}

fn close(x: &CertifiedReal, want: f64) -> bool {
    let (lo, hi) = (x.lo().to_f64().unwrap(), x.hi().to_f64().unwrap());
    (lo - want).abs() <= 1e-9 && (hi - want).abs() <= 1e-9
}

fn matches_spectrum(s: &str, want: &[(f64, f64)]) -> bool {
    let sp = spectrum(s);
    sp.len() == want.len()
        && sp
            .eigenvalues()
            .iter()
            .zip(sp.multiplicities())
            .zip(want)
            .all(|((ev, m), &(t, mult))| close(ev.interval(), t) && close(m, mult))
}

fn spectral_goldens() -> Outcome {
    let r5 = 5f64.sqrt();
    let sp = spectrum("10,8,3;1,2,10");
    let mut o = Outcome::new();
    o.check("Petersen", matches_spectrum("3,2;1,1", &[(3.0, 1.0), (1.0, 5.0), (-2.0, 4.0)]))
        .check(
            "H(3,3)",
            matches_spectrum("6,4,2;1,2,3", &[(6.0, 1.0), (3.0, 6.0), (0.0, 12.0), (-3.0, 8.0)]),
        )
        .check(
            "pentagon",
            matches_spectrum("2,1;1,1", &[(2.0, 1.0), ((r5 - 1.0) / 2.0, 2.0), (-(r5 + 1.0) / 2.0, 2.0)]),
        )
        .check("10,8,3;1,2,10 has n = 63", sp.parameters().n_integer() == Some(BigInt::from(63)))
        .check("theta_min = -5", sp.theta_min().exact_integer() == Some(&BigInt::from(-5)))
        .check(
            "m(theta_min) = 7",
            sp.multiplicities().last().and_then(|m| m.as_exact()) == Some(&BigRational::from_integer(7.into())),
        );
    o
}

fn identity_suite() -> Outcome {
    let mut total = 0;
    let mut violations = Vec::new();
    let mut generator_agrees = true;
    for d in 1..=4 {
        for k in 1..=10 {
            let arrays = common::all_arrays(d, k);
            generator_agrees &= enumerate(&Constraints::new(d, k, k)).unwrap().arrays() == arrays;
            violations.extend(arrays.iter().filter_map(|a| common::identity_violation(a).map(|w| format!("{a}: {w}"))));
            total += arrays.len();
        }
    }
    let mut o = Outcome::new();
    o.check(format!("{total} arrays generated"), total > 0)
        .check("enumerator lists the same arrays", generator_agrees)
        .check(format!("{} violations", violations.len()), violations.is_empty());
    o
}

fn completeness() -> Outcome {
    let mut o = Outcome::new();
    for (name, cons) in common::completeness_cases() {
        let pruned = enumerate(&cons).unwrap().arrays();
        let naive = common::naive_survivors(&cons);
        o.check(format!("D = {} {name}: {} arrays", cons.diameter, naive.len()), pruned == naive);
    }
    o
}

fn bound_values() -> Outcome {
    let int = |x: i64| BigRational::from_integer(x.into());
    let vb = valency_bound(2, &BigRational::new(1.into(), 2.into())).unwrap();
    let petersen = spectrum("3,2;1,1");
    let hoffman = hoffman_independence_cap(&petersen.parameters().n, 3, petersen.theta_min().interval()).unwrap();
    let hamming = spectrum("6,4,2;1,2,3");
    let delsarte = delsarte_clique_cap(6, hamming.theta_min().interval()).unwrap();
    let a1 = parse_array("6,4,2;1,2,3").unwrap().a(1) as i64;
    let mut o = Outcome::new();
    o.check("a1 cap D = 3 is 14", a1_valency_cap(3, true).ok() == Some(BigInt::from(14)))
        .check("a1 cap D = 4 is 62", a1_valency_cap(4, true).ok() == Some(BigInt::from(62)))
        .check("f = 768", vb.f_value == int(768))
        .check("kappa = 295295", vb.kappa == int(295_295))
        .check("Hoffman on Petersen = 4", hoffman.as_exact() == Some(&int(4)))
        .check("Delsarte on H(3,3) = 3 = a_1 + 2", delsarte.as_exact() == Some(&int(3)) && a1 + 2 == 3);
    o
}

fn classification_pass_through() -> Outcome {
    let half = BigRational::new(1.into(), 2.into());
    let list = common::classification_list(5);
    let mut failed = Vec::new();
    let mut above = Vec::new();
    for arr in &list {
        let report = run_pipeline(arr, &Profile::full(), None).unwrap();
        if report.failed().next().is_some() || report.verdict == Verdict::Undetermined {
            failed.push(arr.to_string());
        }
        if !theta_min_at_most(arr, &half) {
            above.push(arr.to_string());
        }
    }
    let per_diameter = [1, 2, 3, 4].map(|d| list.iter().filter(|a| a.diameter() == d).count());
    let mut o = Outcome::new();
    o.check(format!("{} arrays, per diameter {per_diameter:?}", list.len()), per_diameter.iter().all(|&c| c > 0))
        .check(format!("zero failed checks (exceptions {failed:?})"), failed.is_empty())
        .check(format!("theta_min <= -k/2 (exceptions {above:?})"), above.is_empty());
    o
}

fn c2_cross_check() -> Outcome {
    let mut o = Outcome::new();
    let mut bad = Vec::new();
    for arr in common::classification_list(5).into_iter().filter(|a| a.diameter() >= 3) {
        let sp = eigenvalues(&arr, &spectral::default_precision()).unwrap();
        if check_krs_condition(&arr, &sp, sp.len() - 1, 2, arr.c(2)).status != CheckStatus::Pass {
            bad.push(arr.to_string());
        }
    }
    o.check(format!("K_(2,c_2) holds at theta_min (exceptions {bad:?})"), bad.is_empty());
    for s in common::C2_SIX_SYNTHETIC {
        let arr = parse_array(s).unwrap();
        let theta = BigRational::from_integer(BigInt::from(-(arr.valency() as i64) / 2));
        let sp = eigenvalues(&arr, &spectral::default_precision()).unwrap();
        let shape = arr.a(1) == 0 && arr.c(2) == 6 && theta_min_equals(&arr, &theta);
        let c2 = check_c2_bound(&arr, &sp).status == CheckStatus::Fail;
        let krs = check_krs_condition(&arr, &sp, sp.len() - 1, 2, 6).status == CheckStatus::Fail;
        o.check(format!("{s} rejected by both"), shape && c2 && krs);
    }
    o
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("triangle-free reproduction", triangle_free_reproduction),
        ("a_1 = 1 reproduction", a1_one_reproduction),
        ("spectral golden values", spectral_goldens),
        ("trace and orthogonality identities", identity_suite),
        ("enumeration completeness", completeness),
        ("bound values", bound_values),
        ("classification pass-through", classification_pass_through),
        ("c_2 bound cross-check", c2_cross_check),
    ];
    let mut fatal = false;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let status = if o.passed() { "PASS" } else { "FAIL" };
        println!("criterion {} {name}: {status}", i + 1);
        for (what, ok) in &o.parts {
            let mark = match (ok, o.unattainable.contains(what)) {
                (true, _) => "ok",
                (false, true) => "unattainable",
                (false, false) => "FAILED",
            };
            println!("    {mark:<12} {what}");
        }
        fatal |= o.fatal();
    }
    if fatal {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
