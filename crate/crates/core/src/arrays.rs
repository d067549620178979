//! Intersection arrays and the parameters derived from them.
//!
//! An array `{b0,...,b(D-1); c1,...,cD}` is stored as two vectors of
//! machine integers; everything computed from it (shell sizes, vertex
//! count) uses arbitrary precision so that divisibility tests are exact.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bigjson;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrayError {
    #[error("malformed intersection array: {0}")]
    Parse(String),
    #[error("invalid intersection array: {0}")]
    Invalid(String),
    #[error("k_{index} = k_{prev} * b_{prev} / c_{index} is not an integer", prev = .index - 1)]
    NonIntegralShell { index: usize },
    #[error("array has diameter {d}, expected 2")]
    NotDiameterTwo { d: usize },
    #[error("inconsistent SRG parameters: k(k-lambda-1) = {lhs} but (v-k-1)mu = {rhs}")]
    InconsistentSrg { lhs: u128, rhs: u128 },
}

/// Which of the optional structural checks to run when validating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationOptions {
    /// Require `b` nonincreasing and `c` nondecreasing.
    pub monotonicity: bool,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self { monotonicity: true }
    }
}

/// A validated intersection array of a non-complete distance-regular graph.
///
/// Invariants: `D >= 2`, `c1 = 1`, all listed entries positive, every
/// `a_i = k - b_i - c_i` nonnegative, and (unless disabled) `b` is
/// nonincreasing while `c` is nondecreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawArray", into = "RawArray")]
pub struct IntersectionArray {
    b: Vec<u64>,
    c: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawArray {
    d: usize,
    b: Vec<u64>,
    c: Vec<u64>,
}

impl TryFrom<RawArray> for IntersectionArray {
    type Error = ArrayError;

    fn try_from(raw: RawArray) -> Result<Self, Self::Error> {
        if raw.d != raw.b.len() {
            return Err(ArrayError::Invalid(format!(
                "field d = {} disagrees with {} entries in b",
                raw.d,
                raw.b.len()
            )));
        }
        IntersectionArray::new(raw.b, raw.c)
    }
}

impl From<IntersectionArray> for RawArray {
    fn from(arr: IntersectionArray) -> Self {
        RawArray {
            d: arr.d(),
            b: arr.b,
            c: arr.c,
        }
    }
}

impl IntersectionArray {
    /// Builds and validates with the default checks.
    pub fn new(b: Vec<u64>, c: Vec<u64>) -> Result<Self, ArrayError> {
        Self::with_options(b, c, ValidationOptions::default())
    }

    pub fn with_options(
        b: Vec<u64>,
        c: Vec<u64>,
        opts: ValidationOptions,
    ) -> Result<Self, ArrayError> {
        let arr = IntersectionArray { b, c };
        arr.validate(opts)?;
        Ok(arr)
    }

    /// Builds an array from valency `k` and the rows `(c_i, a_i, b_i)` for
    /// `i = 1..=D`. The last row must have `b_D = 0`; every row must sum to
    /// `k`.
    pub fn from_rows(k: u64, rows: &[(u64, u64, u64)]) -> Result<Self, ArrayError> {
        let Some(&(_, _, b_last)) = rows.last() else {
            return Err(ArrayError::Invalid("no rows".into()));
        };
        if b_last != 0 {
            return Err(ArrayError::Invalid(format!("b_D = {b_last}, expected 0")));
        }
        for (i, &(c, a, b)) in rows.iter().enumerate() {
            if c + a + b != k {
                return Err(ArrayError::Invalid(format!(
                    "row {} sums to {}, expected k = {k}",
                    i + 1,
                    c + a + b
                )));
            }
        }
        let mut b = Vec::with_capacity(rows.len());
        b.push(k);
        b.extend(rows[..rows.len() - 1].iter().map(|r| r.2));
        let c = rows.iter().map(|r| r.0).collect();
        Self::new(b, c)
    }

    fn validate(&self, opts: ValidationOptions) -> Result<(), ArrayError> {
        let invalid = |msg: String| Err(ArrayError::Invalid(msg));
        if self.b.len() != self.c.len() {
            return invalid(format!(
                "halves have different lengths ({} vs {})",
                self.b.len(),
                self.c.len()
            ));
        }
        let d = self.b.len();
        if d < 2 {
            return invalid(format!("diameter {d} < 2 (complete graphs are excluded)"));
        }
        if let Some(i) = self.b.iter().position(|&x| x == 0) {
            return invalid(format!("b_{i} = 0 before the diameter"));
        }
        if let Some(i) = self.c.iter().position(|&x| x == 0) {
            return invalid(format!("c_{} = 0", i + 1));
        }
        if self.c[0] != 1 {
            return invalid(format!("c_1 = {}, expected 1", self.c[0]));
        }
        let k = self.k();
        for i in 1..=d {
            let used = self.b(i).checked_add(self.c(i));
            if used.is_none_or(|u| u > k) {
                return invalid(format!(
                    "a_{i} = {k} - {} - {} is negative",
                    self.b(i),
                    self.c(i)
                ));
            }
        }
        if opts.monotonicity {
            if let Some(i) = (1..d).find(|&i| self.b[i] > self.b[i - 1]) {
                return invalid(format!("b_{} > b_{} (b must be nonincreasing)", i, i - 1));
            }
            if let Some(i) = (1..d).find(|&i| self.c[i] < self.c[i - 1]) {
                return invalid(format!("c_{} < c_{} (c must be nondecreasing)", i + 1, i));
            }
        }
        Ok(())
    }

    /// Diameter.
    pub fn d(&self) -> usize {
        self.b.len()
    }

    /// Valency `b0`.
    pub fn k(&self) -> u64 {
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
        self.k() - self.b(i) - self.c(i)
    }

    pub fn b_slice(&self) -> &[u64] {
        &self.b
    }

    pub fn c_slice(&self) -> &[u64] {
        &self.c
    }

    /// The row `(c_i, a_i, b_i)`.
    pub fn row(&self, i: usize) -> (u64, u64, u64) {
        (self.c(i), self.a(i), self.b(i))
    }

    /// Shell sizes, vertex count and head.
    pub fn derive(&self) -> Result<DerivedParams, ArrayError> {
        let d = self.d();
        let mut k_shell: Vec<BigUint> = Vec::with_capacity(d + 1);
        k_shell.push(BigUint::one());
        for i in 1..=d {
            let num = &k_shell[i - 1] * BigUint::from(self.b(i - 1));
            let (q, r) = num.div_rem(&BigUint::from(self.c(i)));
            if !r.is_zero() {
                return Err(ArrayError::NonIntegralShell { index: i });
            }
            k_shell.push(q);
        }
        let v = k_shell.iter().sum();
        Ok(DerivedParams {
            a: (0..=d).map(|i| self.a(i)).collect(),
            k_shell,
            v,
            head: self.head(),
        })
    }

    /// Number of `1 <= j <= D-1` with `(c_j, a_j, b_j) = (c_1, a_1, b_1)`.
    pub fn head(&self) -> usize {
        let first = self.row(1);
        (1..self.d()).filter(|&j| self.row(j) == first).count()
    }
}

impl fmt::Display for IntersectionArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[u64]| xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{{{};{}}}", join(&self.b), join(&self.c))
    }
}

impl FromStr for IntersectionArray {
    type Err = ArrayError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_array(s)
    }
}

/// Parses `{b0,...,b(D-1);c1,...,cD}` (whitespace ignored) and validates it
/// with the default checks.
pub fn parse_array(text: &str) -> Result<IntersectionArray, ArrayError> {
    parse_array_with(text, ValidationOptions::default())
}

pub fn parse_array_with(
    text: &str,
    opts: ValidationOptions,
) -> Result<IntersectionArray, ArrayError> {
    let compact: String = text.chars().filter(|ch| !ch.is_whitespace()).collect();
    let inner = compact
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| ArrayError::Parse(format!("expected braces around {text:?}")))?;
    let (left, right) = inner
        .split_once(';')
        .ok_or_else(|| ArrayError::Parse("missing ';' between b and c".into()))?;
    if right.contains(';') {
        return Err(ArrayError::Parse("more than one ';'".into()));
    }
    let b = parse_list(left, "b")?;
    let c = parse_list(right, "c")?;
    if b.len() != c.len() {
        return Err(ArrayError::Parse(format!(
            "halves have different lengths ({} vs {})",
            b.len(),
            c.len()
        )));
    }
    IntersectionArray::with_options(b, c, opts)
}

fn parse_list(s: &str, name: &str) -> Result<Vec<u64>, ArrayError> {
    if s.is_empty() {
        return Err(ArrayError::Parse(format!("empty {name} half")));
    }
    s.split(',')
        .map(|tok| {
            if tok.is_empty() || !tok.bytes().all(|ch| ch.is_ascii_digit()) {
                return Err(ArrayError::Parse(format!("bad entry {tok:?} in {name}")));
            }
            tok.parse::<u64>()
                .map_err(|e| ArrayError::Parse(format!("entry {tok:?} in {name}: {e}")))
        })
        .collect()
}

/// Combinatorial parameters derived from an array.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivedParams {
    /// `a_0..=a_D`.
    pub a: Vec<u64>,
    /// Shell sizes `k_0..=k_D`.
    #[serde(serialize_with = "bigjson::uint_seq")]
    pub k_shell: Vec<BigUint>,
    #[serde(serialize_with = "bigjson::uint")]
    pub v: BigUint,
    pub head: usize,
}

/// Parameters `(v, k, lambda, mu)` of a strongly regular graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrgParams {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
}

impl fmt::Display for SrgParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.v, self.k, self.lambda, self.mu)
    }
}

/// SRG parameters of a diameter-2 array.
pub fn srg_of(arr: &IntersectionArray) -> Result<SrgParams, ArrayError> {
    if arr.d() != 2 {
        return Err(ArrayError::NotDiameterTwo { d: arr.d() });
    }
    let derived = arr.derive()?;
    let v = u64::try_from(&derived.v)
        .map_err(|_| ArrayError::Invalid("vertex count exceeds 64 bits".into()))?;
    Ok(SrgParams {
        v,
        k: arr.k(),
        lambda: arr.a(1),
        mu: arr.c(2),
    })
}

/// The diameter-2 array `{k, k-lambda-1; 1, mu}` of an SRG.
pub fn srg_to_array(p: SrgParams) -> Result<IntersectionArray, ArrayError> {
    if p.mu == 0 {
        return Err(ArrayError::Invalid("mu must be positive".into()));
    }
    if p.k == 0 || p.lambda + 1 >= p.k || p.k + 1 >= p.v {
        return Err(ArrayError::Invalid(format!(
            "{p} does not describe a connected non-complete SRG"
        )));
    }
    let b1 = p.k - p.lambda - 1;
    let lhs = u128::from(p.k) * u128::from(b1);
    let rhs = u128::from(p.v - p.k - 1) * u128::from(p.mu);
    if lhs != rhs {
        return Err(ArrayError::InconsistentSrg { lhs, rhs });
    }
    IntersectionArray::new(vec![p.k, b1], vec![1, p.mu])
}
