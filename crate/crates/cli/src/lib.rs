//! The `drg` command line. [`run`] takes arguments and writers so tests can
//! drive it in-process; `main` only wires it to the process.

pub mod args;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::Parser;
use drg_core::bounds::{
    a1_valency_cap, delsarte_clique_cap, hoffman_admits_third, hoffman_independence_cap,
    three_chromatic_necessary, valency_bound,
};
use drg_core::catalog::ListFilter;
use drg_core::decimal::{to_decimal, to_fraction};
use drg_core::spectral::{default_precision, eigenvalues_with};
use drg_core::{
    enumerate_with, parse_array, preset, run_pipeline_with, Catalog, CertifiedReal, CheckId,
    Constraints, EnumerateError, EnumerateOptions, Golden, IntersectionArray, PresetOptions,
    Profile, SpectralOptions, Status, Structural, Verdict,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::json;

use args::{BoundCommand, CatalogCommand, Cli, Command, GlobalOpts, StructuralArg};
use report::{
    CatalogEntryDoc, ConstraintsDoc, CountsDoc, EnumerationDocument, ReportDocument,
    ReproduceDocument, SCHEMA_VERSION,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BORDERLINE: i32 = 3;

/// Parses `p/q`, integers, decimals and scientific notation exactly.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    if t.contains('/') {
        return BigRational::from_str(t).map_err(|_| anyhow!("bad rational {text:?}"));
    }
    let (mantissa, exp) = match t.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().with_context(|| format!("bad exponent in {text:?}"))?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        bail!("bad number {text:?}");
    }
    let joined = format!("{int_part}{frac_part}");
    let num: BigInt = joined.parse().unwrap_or_else(|_| BigInt::zero());
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(num);
    if scale >= 0 {
        value *= BigRational::from_integer(ten.pow(scale as u32));
    } else {
        value /= BigRational::from_integer(ten.pow((-scale) as u32));
    }
    Ok(if neg { -value } else { value })
}

fn load_catalog(g: &GlobalOpts) -> Result<Catalog> {
    match &g.catalog {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading catalog {}", path.display()))?;
            Catalog::parse(&text).with_context(|| format!("parsing catalog {}", path.display()))
        }
        None => Ok(Catalog::embedded()),
    }
}

fn spectral_options(g: &GlobalOpts) -> Result<SpectralOptions> {
    let precision = match &g.precision {
        Some(p) => parse_rational(p)?,
        None => default_precision(),
    };
    if !precision.is_positive() {
        bail!("precision must be positive");
    }
    Ok(SpectralOptions::with_precision(precision))
}

fn array_arg(text: &str) -> Result<IntersectionArray> {
    parse_array(text).with_context(|| format!("invalid array {text:?}"))
}

fn emit_json<T: Serialize>(out: &mut dyn Write, doc: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, doc)?;
    writeln!(out)?;
    Ok(())
}

/// Runs one invocation and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let g = &cli.global;
    match &cli.command {
        Command::Check(a) => cmd_check(g, &a.array, &a.profile, a.no_catalog, out),
        Command::Enumerate(a) => cmd_enumerate(g, a, out),
        Command::Reproduce(a) => cmd_reproduce(g, &a.preset, a.t_cap, out),
        Command::Bound(b) => cmd_bound(g, b, out),
        Command::Catalog(c) => cmd_catalog(g, c, out),
    }
}

fn verdict_exit(v: Verdict) -> i32 {
    match v {
        Verdict::FeasibleUnknownExistence | Verdict::KnownGraph => EXIT_OK,
        Verdict::Infeasible | Verdict::KnownNonexistent => EXIT_FAIL,
        Verdict::Undetermined => EXIT_BORDERLINE,
    }
}

fn cmd_check(
    g: &GlobalOpts,
    literal: &str,
    profile: &str,
    no_catalog: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let arr = array_arg(literal)?;
    let profile = Profile::by_name(profile)
        .ok_or_else(|| anyhow!("unknown profile {profile:?} (expected full, basic or fast)"))?;
    let opts = spectral_options(g)?;
    let catalog = if no_catalog { None } else { Some(load_catalog(g)?) };
    let report = run_pipeline_with(&arr, &profile, catalog.as_ref(), &opts)?;
    let doc = ReportDocument::new(&report);
    if g.json {
        emit_json(out, &doc)?;
    } else {
        write!(out, "{}", doc.text())?;
    }
    Ok(verdict_exit(report.verdict))
}

fn parse_checks(text: &str) -> Result<Vec<CheckId>> {
    if text.trim() == "all" {
        return Ok(CheckId::ALL.to_vec());
    }
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| CheckId::from_str(s).map_err(|_| anyhow!("unknown check id {s:?}")))
        .collect()
}

fn cmd_enumerate(g: &GlobalOpts, a: &args::EnumerateArgs, out: &mut dyn Write) -> Result<i32> {
    let mut cons = Constraints::new(a.diameter, a.k_min, a.k_max);
    cons.a1 = a.a1;
    cons.c2_max = a.c2_max;
    cons.theta_ratio = a.theta_ratio.as_deref().map(parse_rational).transpose()?;
    cons.require_nonbipartite = a.nonbipartite;
    cons.require_cd_equals_k = a.cd_equals_k;
    cons.structural = match a.structural {
        StructuralArg::None => Structural::None,
        StructuralArg::A1Structure => Structural::A1Structure,
        StructuralArg::NearPolygon => Structural::NearPolygon,
    };
    cons.triangle_free_multiplicity = a.triangle_free_multiplicity;
    cons.checks = parse_checks(&a.checks)?;
    let catalog = load_catalog(g)?;
    let opts = EnumerateOptions {
        jobs: g.jobs,
        max_candidates: a.max_candidates,
        catalog: Some(&catalog),
        spectral: spectral_options(g)?,
    };
    let result = match enumerate_with(&cons, &opts) {
        Ok(r) => r,
        Err(e @ EnumerateError::ResourceCap { .. }) => {
            return Err(anyhow!(e).context("enumeration stopped"));
        }
        Err(e) => return Err(e.into()),
    };
    let doc = EnumerationDocument {
        schema_version: SCHEMA_VERSION,
        constraints: ConstraintsDoc::from(&result.constraints),
        arrays: result.reports.iter().map(ReportDocument::new).collect(),
        counts: CountsDoc::from(&result.counts),
    };
    if g.json {
        emit_json(out, &doc)?;
    } else {
        write!(out, "{}", doc.text())?;
    }
    Ok(EXIT_OK)
}

fn cmd_reproduce(
    g: &GlobalOpts,
    name: &str,
    t_cap: Option<u64>,
    out: &mut dyn Write,
) -> Result<i32> {
    let catalog = load_catalog(g)?;
    let opts = PresetOptions {
        t_cap,
        enumerate: EnumerateOptions {
            jobs: g.jobs,
            catalog: Some(&catalog),
            spectral: spectral_options(g)?,
            ..EnumerateOptions::default()
        },
    };
    let result = preset(name, &opts)?;
    let golden = Golden::embedded(name, t_cap)?;
    let diff = result.diff(&golden);
    let doc = ReproduceDocument::new(&result, diff);
    if g.json {
        emit_json(out, &doc)?;
    } else {
        write!(out, "{}", doc.text())?;
    }
    Ok(if doc.golden.matches { EXIT_OK } else { EXIT_FAIL })
}

/// Fraction and decimal of a certified value; intervals show the midpoint.
fn certified_json(x: &CertifiedReal) -> serde_json::Value {
    match x.as_exact() {
        Some(v) => json!({ "exact": true, "fraction": to_fraction(v), "decimal": to_decimal(v, 12) }),
        None => json!({
            "exact": false,
            "decimal": to_decimal(&x.midpoint(), 12),
            "lo": to_fraction(x.lo()),
            "hi": to_fraction(x.hi()),
        }),
    }
}

fn certified_text(x: &CertifiedReal) -> String {
    match x.as_exact() {
        Some(v) => format!("{} ({})", to_fraction(v), to_decimal(v, 12)),
        None => format!("~{}", to_decimal(&x.midpoint(), 12)),
    }
}

fn rational_json(x: &BigRational) -> serde_json::Value {
    json!({ "fraction": to_fraction(x), "decimal": to_decimal(x, 12) })
}

fn rational_text(x: &BigRational) -> String {
    format!("{} ({})", to_fraction(x), to_decimal(x, 12))
}

fn cmd_bound(g: &GlobalOpts, b: &BoundCommand, out: &mut dyn Write) -> Result<i32> {
    let (doc, text) = match b {
        BoundCommand::Valency { diameter, alpha } => {
            let alpha = parse_rational(alpha)?;
            let vb = valency_bound(*diameter, &alpha)?;
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "bound": "valency",
                "diameter": diameter,
                "alpha": to_fraction(&alpha),
                "f": rational_json(&vb.f_value),
                "kappa": rational_json(&vb.kappa),
                "kappa_floor": vb.kappa_floor().to_string(),
                "maximizers": vb.maximizers,
            });
            let text = format!(
                "f({diameter}, {}) = {}\nkappa = {}\nmaximizing q: {:?}\n",
                to_fraction(&alpha),
                rational_text(&vb.f_value),
                rational_text(&vb.kappa),
                vb.maximizers
            );
            (doc, text)
        }
        BoundCommand::A1Cap {
            diameter,
            cd_equals_k,
        } => {
            let cap = a1_valency_cap(*diameter, *cd_equals_k)?;
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "bound": "a1-cap",
                "diameter": diameter,
                "cd_equals_k": cd_equals_k,
                "cap": cap.to_string(),
            });
            (doc, format!("k <= {cap}\n"))
        }
        BoundCommand::Delsarte { array } => {
            let arr = array_arg(array)?;
            let sp = eigenvalues_with(&arr, &spectral_options(g)?)?;
            let theta = sp.theta_min().interval().clone();
            let cap = delsarte_clique_cap(arr.valency(), &theta)?;
            let target = BigRational::from_integer((arr.a(1) + 2).into());
            let equality = cap.as_exact() == Some(&target);
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "bound": "delsarte",
                "array": arr.to_string(),
                "theta_min": certified_json(&theta),
                "cap": certified_json(&cap),
                "a1_plus_2": arr.a(1) + 2,
                "equality": equality,
            });
            let mut text = format!(
                "theta_min = {}\nclique size <= {}\n",
                certified_text(&theta),
                certified_text(&cap)
            );
            if equality {
                text.push_str(&format!(
                    "equality: a_1 + 2 = {}, cliques of that size are Delsarte cliques\n",
                    arr.a(1) + 2
                ));
            }
            (doc, text)
        }
        BoundCommand::Hoffman { array } => {
            let arr = array_arg(array)?;
            let sp = eigenvalues_with(&arr, &spectral_options(g)?)?;
            let theta = sp.theta_min().interval().clone();
            let n = sp.parameters().n.clone();
            let cap = hoffman_independence_cap(&n, arr.valency(), &theta)?;
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "bound": "hoffman",
                "array": arr.to_string(),
                "n": to_fraction(&n),
                "theta_min": certified_json(&theta),
                "cap": certified_json(&cap),
            });
            let text = format!(
                "theta_min = {}\nindependence number <= {}\n",
                certified_text(&theta),
                certified_text(&cap)
            );
            (doc, text)
        }
        BoundCommand::Chromatic { array } => {
            let arr = array_arg(array)?;
            let sp = eigenvalues_with(&arr, &spectral_options(g)?)?;
            let necessary = three_chromatic_necessary(&arr);
            let admits = hoffman_admits_third(&arr, sp.theta_min().interval());
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "bound": "chromatic",
                "array": arr.to_string(),
                "theta_min_at_most_half_k": necessary,
                "hoffman_admits_third": admits,
            });
            let admits_text = match admits {
                Some(true) => "yes",
                Some(false) => "no",
                None => "undetermined",
            };
            let text = format!(
                "theta_min <= -k/2: {}\nindependence bound >= n/3: {admits_text}\n3-colouring {}\n",
                if necessary { "yes" } else { "no" },
                if necessary { "not excluded" } else { "excluded" }
            );
            (doc, text)
        }
    };
    if g.json {
        emit_json(out, &doc)?;
    } else {
        write!(out, "{text}")?;
    }
    Ok(EXIT_OK)
}

fn cmd_catalog(g: &GlobalOpts, c: &CatalogCommand, out: &mut dyn Write) -> Result<i32> {
    let catalog = load_catalog(g)?;
    match c {
        CatalogCommand::List {
            diameter,
            status,
            t_cap,
        } => {
            let status = status
                .as_deref()
                .map(|s| Status::from_str(s).map_err(|e| anyhow!(e)))
                .transpose()?;
            let filter = ListFilter {
                diameter: *diameter,
                status,
                family_cap: Some(*t_cap),
            };
            let entries: Vec<CatalogEntryDoc> =
                catalog.list(&filter).iter().map(CatalogEntryDoc::from).collect();
            if g.json {
                emit_json(
                    out,
                    &json!({ "schema_version": SCHEMA_VERSION, "records": entries }),
                )?;
            } else {
                for e in &entries {
                    writeln!(out, "{}", e.line())?;
                }
            }
            Ok(EXIT_OK)
        }
        CatalogCommand::Lookup { array } => {
            let arr = array_arg(array)?;
            let hit = catalog.lookup(&arr).map(|e| CatalogEntryDoc::from(&e));
            if g.json {
                emit_json(out, &json!({ "schema_version": SCHEMA_VERSION, "record": hit }))?;
            } else {
                match &hit {
                    Some(e) => writeln!(out, "{}", e.line())?,
                    None => writeln!(out, "{arr}: not in catalog")?,
                }
            }
            Ok(if hit.is_some() { EXIT_OK } else { EXIT_FAIL })
        }
        CatalogCommand::Dump => {
            write!(out, "{}", catalog.render())?;
            Ok(EXIT_OK)
        }
    }
}
