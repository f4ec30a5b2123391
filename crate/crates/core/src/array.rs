//! Intersection arrays and the combinatorial parameters derived from them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ArrayError;

/// The intersection array `{b_0, ..., b_{D-1}; c_1, ..., c_D}` of a putative
/// distance-regular graph.
///
/// Construction always validates: every entry is positive, `c_1 = 1`, the
/// `c` sequence is non-decreasing, the `b` sequence is non-increasing and
/// every `a_i = k - b_i - c_i` is non-negative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct IntersectionArray {
    b: Vec<u64>,
    c: Vec<u64>,
}

impl IntersectionArray {
    pub fn new(b: Vec<u64>, c: Vec<u64>) -> Result<Self, ArrayError> {
        if b.is_empty() || c.is_empty() {
            return Err(ArrayError::Empty);
        }
        if b.len() != c.len() {
            return Err(ArrayError::LengthMismatch {
                b_len: b.len(),
                c_len: c.len(),
            });
        }
        if let Some(i) = b.iter().position(|&x| x == 0) {
            return Err(ArrayError::NonPositive { name: "b", index: i });
        }
        if let Some(i) = c.iter().position(|&x| x == 0) {
            return Err(ArrayError::NonPositive {
                name: "c",
                index: i + 1,
            });
        }
        if c[0] != 1 {
            return Err(ArrayError::FirstCNotOne(c[0]));
        }
        for i in 1..c.len() {
            if c[i] < c[i - 1] {
                return Err(ArrayError::CNotMonotone { index: i + 1 });
            }
        }
        for i in 1..b.len() {
            if b[i] > b[i - 1] {
                return Err(ArrayError::BNotMonotone { index: i });
            }
        }
        let k = b[0];
        let d = b.len();
        for i in 1..=d {
            let bi = if i < d { b[i] } else { 0 };
            if bi + c[i - 1] > k {
                return Err(ArrayError::NegativeA { index: i });
            }
        }
        Ok(Self { b, c })
    }

    /// Diameter `D`.
    pub fn diameter(&self) -> usize {
        self.b.len()
    }

    /// Valency `k = b_0`.
    pub fn valency(&self) -> u64 {
        self.b[0]
    }

    /// `b_i` for `0 <= i <= D`, with `b_D = 0`.
    pub fn b(&self, i: usize) -> u64 {
        self.b.get(i).copied().unwrap_or(0)
    }

    /// `c_i` for `0 <= i <= D`, with `c_0 = 0`.
    pub fn c(&self, i: usize) -> u64 {
        if i == 0 {
            0
        } else {
            self.c[i - 1]
        }
    }

    /// `a_i = k - b_i - c_i` for `0 <= i <= D`.
    pub fn a(&self, i: usize) -> u64 {
        self.valency() - self.b(i) - self.c(i)
    }

    pub fn b_seq(&self) -> &[u64] {
        &self.b
    }

    pub fn c_seq(&self) -> &[u64] {
        &self.c
    }

    /// All `a_i = 0`.
    pub fn is_bipartite(&self) -> bool {
        (0..=self.diameter()).all(|i| self.a(i) == 0)
    }

    /// Lexicographic key (D, k, b, c) used for deterministic ordering.
    pub fn sort_key(&self) -> (usize, u64, &[u64], &[u64]) {
        (self.diameter(), self.valency(), &self.b, &self.c)
    }
}

impl fmt::Display for IntersectionArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[u64]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{};{}", join(&self.b), join(&self.c))
    }
}

impl FromStr for IntersectionArray {
    type Err = ArrayError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_array(s)
    }
}

impl TryFrom<String> for IntersectionArray {
    type Error = ArrayError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        parse_array(&s)
    }
}

impl From<IntersectionArray> for String {
    fn from(a: IntersectionArray) -> String {
        a.to_string()
    }
}

/// Parses `"b0,...,b_{D-1};c1,...,c_D"`. Whitespace anywhere is ignored and a
/// single pair of enclosing braces is tolerated.
pub fn parse_array(text: &str) -> Result<IntersectionArray, ArrayError> {
    let compact: String = text.chars().filter(|ch| !ch.is_whitespace()).collect();
    let body = compact
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .unwrap_or(&compact);
    let (bs, cs) = body
        .split_once(';')
        .ok_or_else(|| ArrayError::Syntax(format!("missing ';' in {text:?}")))?;
    let field = |part: &str, name: &str| -> Result<Vec<u64>, ArrayError> {
        if part.is_empty() {
            return Err(ArrayError::Syntax(format!("empty {name} sequence")));
        }
        part.split(',')
            .map(|tok| {
                if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
                    Err(ArrayError::Syntax(format!("bad entry {tok:?} in {name} sequence")))
                } else {
                    tok.parse::<u64>()
                        .map_err(|e| ArrayError::Syntax(format!("entry {tok:?}: {e}")))
                }
            })
            .collect()
    };
    let b = field(bs, "b")?;
    let c = field(cs, "c")?;
    IntersectionArray::new(b, c)
}

/// Inverse of [`parse_array`].
pub fn format_array(arr: &IntersectionArray) -> String {
    arr.to_string()
}

/// Quantities derived from an intersection array with exact arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrayParameters {
    /// `k_0, ..., k_D`, possibly non-integral.
    pub k: Vec<BigRational>,
    /// `a_0, ..., a_D`.
    pub a: Vec<u64>,
    /// `n = k_0 + ... + k_D`.
    pub n: BigRational,
    pub bipartite: bool,
}

impl ArrayParameters {
    /// Vertex count as an integer, if it is one.
    pub fn n_integer(&self) -> Option<BigInt> {
        self.n.is_integer().then(|| self.n.to_integer())
    }

    pub fn ki_integral(&self) -> bool {
        self.k.iter().all(|ki| ki.is_integer())
    }
}

pub fn derive_parameters(arr: &IntersectionArray) -> ArrayParameters {
    let d = arr.diameter();
    let mut k = Vec::with_capacity(d + 1);
    k.push(BigRational::one());
    for i in 0..d {
        let next = &k[i] * BigRational::from_integer(arr.b(i).into())
            / BigRational::from_integer(arr.c(i + 1).into());
        k.push(next);
    }
    let n = k.iter().fold(BigRational::zero(), |acc, x| acc + x);
    let a: Vec<u64> = (0..=d).map(|i| arr.a(i)).collect();
    let bipartite = a.iter().all(|&x| x == 0);
    ArrayParameters { k, a, n, bipartite }
}
