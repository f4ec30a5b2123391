//! Curated existence and nonexistence data keyed by intersection array.
//!
//! The catalog is a plain-text file, one record per line:
//!
//! ```text
//! array | status | name | source [| notes]
//! ```
//!
//! Lines starting with `#` are comments. The array field is an array literal
//! or a one-parameter family such as `2t,t-1;1,2t [t>=2]`, whose entries are
//! linear terms in `t`. Parsing then rendering reproduces the file exactly
//! when it is written in this canonical form.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::array::{parse_array, IntersectionArray};
use crate::error::CatalogError;

/// Embedded default catalog.
pub const DEFAULT_CATALOG: &str = include_str!("../data/catalog.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    ExistsUnique,
    Exists,
    ExistsPossiblyNonunique,
    Nonexistent,
    ExistenceOpen,
}

impl Status {
    pub const ALL: [Status; 5] = [
        Status::ExistsUnique,
        Status::Exists,
        Status::ExistsPossiblyNonunique,
        Status::Nonexistent,
        Status::ExistenceOpen,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Status::ExistsUnique => "exists-unique",
            Status::Exists => "exists",
            Status::ExistsPossiblyNonunique => "exists-possibly-nonunique",
            Status::Nonexistent => "nonexistent",
            Status::ExistenceOpen => "existence-open",
        }
    }

    /// A graph with this array is known to exist.
    pub fn is_known_graph(self) -> bool {
        matches!(
            self,
            Status::ExistsUnique | Status::Exists | Status::ExistsPossiblyNonunique
        )
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Status {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Status::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| format!("unknown status {s:?}"))
    }
}

/// `coef * t + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Linear {
    coef: i64,
    offset: i64,
}

impl Linear {
    fn parse(tok: &str, var: char) -> Option<Linear> {
        if tok.is_empty() {
            return None;
        }
        let Some(pos) = tok.find(var) else {
            return tok.parse().ok().map(|offset| Linear { coef: 0, offset });
        };
        let coef = match &tok[..pos] {
            "" => 1,
            "-" => -1,
            c => c.parse().ok()?,
        };
        let rest = &tok[pos + var.len_utf8()..];
        let offset = if rest.is_empty() {
            0
        } else {
            let (sign, digits) = rest.split_at(1);
            let v: i64 = digits.parse().ok()?;
            match sign {
                "+" => v,
                "-" => -v,
                _ => return None,
            }
        };
        Some(Linear { coef, offset })
    }

    fn eval(self, t: i64) -> i64 {
        self.coef * t + self.offset
    }

    fn render(self, var: char) -> String {
        if self.coef == 0 {
            return self.offset.to_string();
        }
        let mut s = match self.coef {
            1 => String::new(),
            -1 => "-".to_string(),
            c => c.to_string(),
        };
        s.push(var);
        match self.offset.cmp(&0) {
            std::cmp::Ordering::Greater => s.push_str(&format!("+{}", self.offset)),
            std::cmp::Ordering::Less => s.push_str(&self.offset.to_string()),
            std::cmp::Ordering::Equal => {}
        }
        s
    }
}

/// A one-parameter family of arrays of fixed diameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    var: char,
    b: Vec<Linear>,
    c: Vec<Linear>,
    min: i64,
}

impl Family {
    pub fn parse(text: &str) -> Option<Family> {
        let (body, range) = text.split_once(" [")?;
        let range = range.strip_suffix(']')?;
        let (var_s, min_s) = range.split_once(">=")?;
        let mut chars = var_s.chars();
        let var = chars.next()?;
        if chars.next().is_some() || !var.is_ascii_lowercase() {
            return None;
        }
        let min: i64 = min_s.parse().ok()?;
        let (bs, cs) = body.split_once(';')?;
        let parse_seq = |s: &str| -> Option<Vec<Linear>> {
            s.split(',').map(|tok| Linear::parse(tok, var)).collect()
        };
        let b = parse_seq(bs)?;
        let c = parse_seq(cs)?;
        if b.len() != c.len() || b.iter().chain(&c).all(|l| l.coef == 0) {
            return None;
        }
        Some(Family { var, b, c, min })
    }

    pub fn diameter(&self) -> usize {
        self.b.len()
    }

    pub fn min_parameter(&self) -> i64 {
        self.min
    }

    /// The member for parameter `t`, if it is a valid array.
    pub fn instantiate(&self, t: i64) -> Option<IntersectionArray> {
        if t < self.min {
            return None;
        }
        let conv = |xs: &[Linear]| -> Option<Vec<u64>> {
            xs.iter().map(|l| u64::try_from(l.eval(t)).ok()).collect()
        };
        IntersectionArray::new(conv(&self.b)?, conv(&self.c)?).ok()
    }

    /// The parameter `t` for which this family produces `arr`.
    pub fn parameter_of(&self, arr: &IntersectionArray) -> Option<i64> {
        if arr.diameter() != self.diameter() {
            return None;
        }
        let pairs = self
            .b
            .iter()
            .zip(arr.b_seq())
            .chain(self.c.iter().zip(arr.c_seq()));
        let mut t = None;
        for (l, &v) in pairs.clone() {
            if l.coef != 0 {
                let num = v as i64 - l.offset;
                if num % l.coef != 0 {
                    return None;
                }
                t = Some(num / l.coef);
                break;
            }
        }
        let t = t?;
        (t >= self.min && pairs.into_iter().all(|(l, &v)| l.eval(t) == v as i64)).then_some(t)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[Linear]| {
            xs.iter()
                .map(|l| l.render(self.var))
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "{};{} [{}>={}]",
            join(&self.b),
            join(&self.c),
            self.var,
            self.min
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogKey {
    Array(IntersectionArray),
    Family(Family),
}

impl fmt::Display for CatalogKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogKey::Array(a) => write!(f, "{a}"),
            CatalogKey::Family(fam) => write!(f, "{fam}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogRecord {
    pub key: CatalogKey,
    pub status: Status,
    pub name: String,
    pub source: String,
    pub notes: Option<String>,
}

impl fmt::Display for CatalogRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} | {} | {} | {}",
            self.key, self.status, self.name, self.source
        )?;
        if let Some(n) = &self.notes {
            write!(f, " | {n}")?;
        }
        Ok(())
    }
}

/// A record matched against (or instantiated for) a concrete array.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub array: IntersectionArray,
    pub status: Status,
    pub name: String,
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    /// Family parameter when the match came from a family record.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameter: Option<i64>,
}

impl CatalogEntry {
    fn from_record(rec: &CatalogRecord, array: IntersectionArray, parameter: Option<i64>) -> Self {
        let name = match parameter {
            Some(t) => substitute(&rec.name, t),
            None => rec.name.clone(),
        };
        Self {
            array,
            status: rec.status,
            name,
            source: rec.source.clone(),
            notes: rec.notes.clone(),
            parameter,
        }
    }
}

/// Replace a lone `t` inside `_{...}` subscripts with its value.
fn substitute(name: &str, t: i64) -> String {
    let mut out = String::with_capacity(name.len());
    let mut depth = 0usize;
    let chars: Vec<char> = name.chars().collect();
    for (i, &ch) in chars.iter().enumerate() {
        match ch {
            '{' => depth += 1,
            '}' => depth = depth.saturating_sub(1),
            _ => {}
        }
        let lone = ch == 't'
            && depth > 0
            && !chars.get(i.wrapping_sub(1)).is_some_and(|c| c.is_alphanumeric())
            && !chars.get(i + 1).is_some_and(|c| c.is_alphanumeric());
        if lone {
            out.push_str(&t.to_string());
        } else {
            out.push(ch);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Line {
    Text(String),
    Record(CatalogRecord),
}

/// Which records to list.
#[derive(Debug, Clone, Default)]
pub struct ListFilter {
    pub diameter: Option<usize>,
    pub status: Option<Status>,
    /// Families are instantiated for parameters up to this value.
    pub family_cap: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    lines: Vec<Line>,
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Self, CatalogError> {
        let mut lines = Vec::new();
        let mut seen: Vec<(usize, IntersectionArray)> = Vec::new();
        let mut families: Vec<Family> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                lines.push(Line::Text(raw.to_string()));
                continue;
            }
            let err = |message: String| CatalogError::Parse {
                line: lineno,
                message,
            };
            let fields: Vec<&str> = raw.split(" | ").collect();
            if !(4..=5).contains(&fields.len()) {
                return Err(err(format!("expected 4 or 5 fields, found {}", fields.len())));
            }
            let key = if fields[0].contains('[') {
                CatalogKey::Family(
                    Family::parse(fields[0])
                        .ok_or_else(|| err(format!("bad family {:?}", fields[0])))?,
                )
            } else {
                CatalogKey::Array(parse_array(fields[0]).map_err(|e| err(e.to_string()))?)
            };
            let status: Status = fields[1].parse().map_err(err)?;
            if fields[2].is_empty() {
                return Err(err("empty name".into()));
            }
            if fields[3].is_empty() {
                return Err(err("empty source".into()));
            }
            let rec = CatalogRecord {
                key,
                status,
                name: fields[2].to_string(),
                source: fields[3].to_string(),
                notes: fields.get(4).map(|s| s.to_string()),
            };
            match &rec.key {
                CatalogKey::Array(a) => {
                    if seen.iter().any(|(_, b)| b == a)
                        || families.iter().any(|f| f.parameter_of(a).is_some())
                    {
                        return Err(CatalogError::Duplicate {
                            line: lineno,
                            array: a.to_string(),
                        });
                    }
                    seen.push((lineno, a.clone()));
                }
                CatalogKey::Family(f) => {
                    if let Some((_, a)) = seen.iter().find(|(_, a)| f.parameter_of(a).is_some()) {
                        return Err(CatalogError::Duplicate {
                            line: lineno,
                            array: a.to_string(),
                        });
                    }
                    families.push(f.clone());
                }
            }
            lines.push(Line::Record(rec));
        }
        Ok(Self { lines })
    }

    pub fn embedded() -> Self {
        Self::parse(DEFAULT_CATALOG).expect("embedded catalog is well-formed")
    }

    pub fn records(&self) -> impl Iterator<Item = &CatalogRecord> {
        self.lines.iter().filter_map(|l| match l {
            Line::Record(r) => Some(r),
            Line::Text(_) => None,
        })
    }

    /// Canonical text; equals the input for canonical files.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            match l {
                Line::Text(t) => out.push_str(t),
                Line::Record(r) => out.push_str(&r.to_string()),
            }
            out.push('\n');
        }
        out
    }

    pub fn lookup(&self, arr: &IntersectionArray) -> Option<CatalogEntry> {
        self.records().find_map(|rec| match &rec.key {
            CatalogKey::Array(a) if a == arr => {
                Some(CatalogEntry::from_record(rec, arr.clone(), None))
            }
            CatalogKey::Family(f) => f
                .parameter_of(arr)
                .map(|t| CatalogEntry::from_record(rec, arr.clone(), Some(t))),
            _ => None,
        })
    }

    /// Matching entries ordered by diameter, then array.
    pub fn list(&self, filter: &ListFilter) -> Vec<CatalogEntry> {
        let cap = filter.family_cap.unwrap_or(5);
        let mut out: Vec<CatalogEntry> = self
            .records()
            .filter(|r| filter.status.map_or(true, |s| r.status == s))
            .flat_map(|rec| match &rec.key {
                CatalogKey::Array(a) => vec![CatalogEntry::from_record(rec, a.clone(), None)],
                CatalogKey::Family(f) => (f.min_parameter()..=cap)
                    .filter_map(|t| {
                        f.instantiate(t)
                            .map(|a| CatalogEntry::from_record(rec, a, Some(t)))
                    })
                    .collect(),
            })
            .filter(|e| filter.diameter.map_or(true, |d| e.array.diameter() == d))
            .collect();
        out.sort_by(|x, y| x.array.sort_key().cmp(&y.array.sort_key()));
        out
    }
}

impl Default for Catalog {
    fn default() -> Self {
        Self::embedded()
    }
}
