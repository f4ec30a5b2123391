//! Serializable documents and their text renderings. Text is produced from
//! the same document as JSON so the two never disagree.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use drg_core::decimal::{to_decimal, to_fraction};
use drg_core::enumerate::preset::{Elimination, PresetResult};
use drg_core::{
    certified_integer, CatalogEntry, CheckId, CheckStatus, Constraints, Counts, FeasibilityReport,
    Status, Verdict,
};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";
const DIGITS: u32 = 12;

fn big_value(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) => Value::from(x),
        None => Value::from(v.to_string()),
    }
}

fn value_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenvalueDoc {
    pub value: String,
    pub exact: bool,
    pub multiplicity: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckDoc {
    pub id: CheckId,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogDoc {
    pub name: String,
    pub status: Status,
    pub source: String,
}

impl From<&CatalogEntry> for CatalogDoc {
    fn from(e: &CatalogEntry) -> Self {
        Self {
            name: e.name.clone(),
            status: e.status,
            source: e.source.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub schema_version: &'static str,
    pub array: String,
    pub n: Value,
    pub valency: u64,
    pub spectrum: Vec<EigenvalueDoc>,
    pub checks: Vec<CheckDoc>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub catalog: Option<CatalogDoc>,
}

impl ReportDocument {
    pub fn new(r: &FeasibilityReport) -> Self {
        let n = match r.parameters.n_integer() {
            Some(n) => big_value(&n),
            None => Value::from(to_fraction(&r.parameters.n)),
        };
        let spectrum = r
            .spectrum
            .eigenvalues()
            .iter()
            .zip(r.spectrum.multiplicities())
            .map(|(ev, m)| EigenvalueDoc {
                value: match ev.exact_integer() {
                    Some(v) => v.to_string(),
                    None => to_decimal(&ev.interval().midpoint(), DIGITS),
                },
                exact: ev.is_exact(),
                multiplicity: match certified_integer(m) {
                    Some(v) => big_value(&v),
                    None => Value::from(to_decimal(&m.midpoint(), DIGITS)),
                },
            })
            .collect();
        let checks = r
            .checks
            .iter()
            .map(|c| CheckDoc {
                id: c.id,
                status: c.status,
                detail: c.detail.clone(),
            })
            .collect();
        Self {
            schema_version: SCHEMA_VERSION,
            array: r.array.to_string(),
            n,
            valency: r.array.valency(),
            spectrum,
            checks,
            verdict: r.verdict,
            catalog: r.catalog.as_ref().map(CatalogDoc::from),
        }
    }

    pub fn spectrum_text(&self) -> String {
        self.spectrum
            .iter()
            .map(|e| {
                let tilde = if e.exact { "" } else { "~" };
                format!("{tilde}{}^{}", e.value, value_text(&e.multiplicity))
            })
            .collect::<Vec<_>>()
            .join(", ")
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "array     {}", self.array);
        let _ = writeln!(s, "n         {}", value_text(&self.n));
        let _ = writeln!(s, "valency   {}", self.valency);
        let _ = writeln!(s, "spectrum  {}", self.spectrum_text());
        let _ = writeln!(s, "checks");
        for c in &self.checks {
            let _ = writeln!(s, "  {:<26} {:<10} {}", c.id.as_str(), c.status.as_str(), c.detail);
        }
        let _ = writeln!(s, "verdict   {}", self.verdict);
        if let Some(c) = &self.catalog {
            let _ = writeln!(s, "catalog   {} ({}; {})", c.name, c.status, c.source);
        }
        s
    }

    /// One summary line for list outputs.
    pub fn line(&self) -> String {
        let name = self.catalog.as_ref().map_or("", |c| c.name.as_str());
        format!("{:<24} {:<27} {}", self.array, self.verdict.as_str(), name)
            .trim_end()
            .to_string()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CountsDoc {
    pub generated: u64,
    pub surviving: u64,
    pub pruned: BTreeMap<String, u64>,
}

impl From<&Counts> for CountsDoc {
    fn from(c: &Counts) -> Self {
        Self {
            generated: c.generated,
            surviving: c.surviving,
            pruned: c.pruned.iter().map(|(r, n)| (r.to_string(), *n)).collect(),
        }
    }
}

impl CountsDoc {
    fn text(&self, s: &mut String) {
        let _ = writeln!(s, "generated {}, surviving {}", self.generated, self.surviving);
        for (rule, n) in &self.pruned {
            let _ = writeln!(s, "  pruned {rule:<26} {n}");
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstraintsDoc {
    pub diameter: usize,
    pub k_min: u64,
    pub k_max: u64,
    pub a1: Option<u64>,
    pub c2_max: Option<u64>,
    pub theta_ratio: Option<String>,
    pub require_nonbipartite: bool,
    pub require_cd_equals_k: bool,
    pub structural: &'static str,
    pub triangle_free_multiplicity: bool,
    pub checks: Vec<CheckId>,
}

impl From<&Constraints> for ConstraintsDoc {
    fn from(c: &Constraints) -> Self {
        Self {
            diameter: c.diameter,
            k_min: c.k_min,
            k_max: c.k_max,
            a1: c.a1,
            c2_max: c.c2_max,
            theta_ratio: c.theta_ratio.as_ref().map(to_fraction),
            require_nonbipartite: c.require_nonbipartite,
            require_cd_equals_k: c.require_cd_equals_k,
            structural: c.structural.as_str(),
            triangle_free_multiplicity: c.triangle_free_multiplicity,
            checks: c.checks.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EnumerationDocument {
    pub schema_version: &'static str,
    pub constraints: ConstraintsDoc,
    pub arrays: Vec<ReportDocument>,
    pub counts: CountsDoc,
}

impl EnumerationDocument {
    pub fn text(&self) -> String {
        let mut s = String::new();
        for a in &self.arrays {
            let _ = writeln!(s, "{}", a.line());
        }
        self.counts.text(&mut s);
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EliminationDoc {
    pub array: String,
    pub reason: String,
}

impl From<&Elimination> for EliminationDoc {
    fn from(e: &Elimination) -> Self {
        Self {
            array: e.array.to_string(),
            reason: e.reason.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GoldenDoc {
    pub matches: bool,
    pub diff: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproduceDocument {
    pub schema_version: &'static str,
    pub preset: &'static str,
    pub t_cap: Option<u64>,
    pub survivors: Vec<String>,
    #[serde(rename = "final")]
    pub final_reports: Vec<ReportDocument>,
    pub eliminated: Vec<EliminationDoc>,
    pub notes: Vec<String>,
    pub counts: CountsDoc,
    pub golden: GoldenDoc,
}

impl ReproduceDocument {
    pub fn new(r: &PresetResult, diff: Vec<String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            preset: r.name,
            t_cap: r.t_cap,
            survivors: r.survivors.iter().map(|x| x.array.to_string()).collect(),
            final_reports: r.final_reports.iter().map(ReportDocument::new).collect(),
            eliminated: r.eliminated.iter().map(EliminationDoc::from).collect(),
            notes: r.notes.clone(),
            counts: CountsDoc::from(&r.counts()),
            golden: GoldenDoc {
                matches: diff.is_empty(),
                diff,
            },
        }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "preset {}", self.preset);
        if let Some(t) = self.t_cap {
            let _ = write!(s, " (t-cap {t})");
        }
        s.push('\n');
        let _ = writeln!(s, "survivors ({})", self.survivors.len());
        for a in &self.survivors {
            let _ = writeln!(s, "  {a}");
        }
        let _ = writeln!(s, "final ({})", self.final_reports.len());
        for r in &self.final_reports {
            let _ = writeln!(s, "  {}", r.line());
        }
        if !self.eliminated.is_empty() {
            let _ = writeln!(s, "eliminated");
            for e in &self.eliminated {
                let _ = writeln!(s, "  {:<24} {}", e.array, e.reason);
            }
        }
        let _ = writeln!(s, "notes");
        for n in &self.notes {
            let _ = writeln!(s, "  {n}");
        }
        self.counts.text(&mut s);
        if self.golden.matches {
            let _ = writeln!(s, "golden: match");
        } else {
            let _ = writeln!(s, "golden: mismatch");
            for d in &self.golden.diff {
                let _ = writeln!(s, "  {d}");
            }
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntryDoc {
    pub array: String,
    pub status: Status,
    pub name: String,
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

impl From<&CatalogEntry> for CatalogEntryDoc {
    fn from(e: &CatalogEntry) -> Self {
        Self {
            array: e.array.to_string(),
            status: e.status,
            name: e.name.clone(),
            source: e.source.clone(),
            notes: e.notes.clone(),
        }
    }
}

impl CatalogEntryDoc {
    pub fn line(&self) -> String {
        format!("{:<24} {:<26} {} [{}]", self.array, self.status.as_str(), self.name, self.source)
    }
}
