//! The parametrised families of geometric distance-regular graphs with
//! smallest eigenvalue -3, the cases that survive inside the 4-claw
//! window, and the generators/matchers between arrays and cases.
//!
//! Case labels are `gdrg-i` .. `gdrg-xii` (the full classification) and
//! `maincor-i` .. `maincor-xi` (the in-window subset). Each in-window case
//! is a full case with a tightened parameter range.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::arrays::{ArrayError, IntersectionArray};
use crate::claws::window_condition;
use crate::exec::Execution;
use crate::geometry::{check_bounds, solve_tau_psi};
use crate::spectrum::is_theta_min_minus3;

pub type Params = BTreeMap<String, u64>;

const ROMAN: [&str; 12] = [
    "i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi", "xii",
];

/// The cubic graphs of case `gdrg-i`, in the order used by `index`.
pub const CUBIC: [(&str, &str); 8] = [
    ("K_{3,3}", "{3,2;1,3}"),
    ("H(3,2)", "{3,2,1;1,2,3}"),
    ("Heawood graph", "{3,2,2;1,1,3}"),
    ("Pappus graph", "{3,2,2,1;1,1,2,3}"),
    ("Desargues graph", "{3,2,2,1,1;1,1,2,2,3}"),
    ("Tutte's 8-cage", "{3,2,2,2;1,1,1,3}"),
    ("Tutte's 12-cage", "{3,2,2,2,2,2;1,1,1,1,1,3}"),
    ("Foster graph", "{3,2,2,2,2,1,1,1;1,1,1,1,2,2,2,3}"),
];

/// `(D, s)` of the generalised 2D-gons of order `(s, 2)` in `gdrg-iv`.
pub const POLYGONS: [(u64, u64); 3] = [(2, 2), (2, 4), (3, 8)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    Gdrg,
    Maincor,
}

impl Theorem {
    pub fn cases(self) -> usize {
        match self {
            Theorem::Gdrg => 12,
            Theorem::Maincor => 11,
        }
    }

    fn prefix(self) -> &'static str {
        match self {
            Theorem::Gdrg => "gdrg",
            Theorem::Maincor => "maincor",
        }
    }
}

/// A case of one of the two classifications; `index` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CaseId {
    pub theorem: Theorem,
    pub index: usize,
}

impl CaseId {
    pub fn gdrg(index: usize) -> CaseId {
        assert!((1..=12).contains(&index));
        CaseId {
            theorem: Theorem::Gdrg,
            index,
        }
    }

    pub fn maincor(index: usize) -> CaseId {
        assert!((1..=11).contains(&index));
        CaseId {
            theorem: Theorem::Maincor,
            index,
        }
    }

    pub fn all(theorem: Theorem) -> impl Iterator<Item = CaseId> {
        (1..=theorem.cases()).map(move |index| CaseId { theorem, index })
    }

    pub fn label(self) -> String {
        format!("{}-{}", self.theorem.prefix(), ROMAN[self.index - 1])
    }

    /// The full case behind this one (identity for `gdrg-*`).
    pub fn base(self) -> CaseId {
        match self.theorem {
            Theorem::Gdrg => self,
            Theorem::Maincor => CaseId::gdrg(match self.index {
                1 => 2,
                2 => 3,
                3 => 4,
                n => n + 1,
            }),
        }
    }

    /// Extra constraint of an in-window case, on top of the base range.
    fn tightened(self, p: &Params) -> Result<(), String> {
        if self.theorem == Theorem::Gdrg {
            return Ok(());
        }
        let alpha = p.get("alpha").copied().unwrap_or(0);
        let need = |ok: bool, what: &str| if ok { Ok(()) } else { Err(what.to_string()) };
        match self.index {
            1 => need(alpha >= 36, "alpha >= 36"),
            2 => need(alpha >= 24, "alpha >= 24"),
            3 => need(
                p.get("D") == Some(&3) && p.get("s") == Some(&8),
                "(D,s) = (3,8)",
            ),
            6 => need(alpha >= 20, "alpha >= 20"),
            7 => need(alpha >= 6, "alpha >= 6"),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for CaseId {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<CaseId, FamilyError> {
        let unknown = || FamilyError::UnknownCase(s.to_string());
        let (prefix, roman) = s.split_once('-').ok_or_else(unknown)?;
        let theorem = match prefix {
            "gdrg" => Theorem::Gdrg,
            "maincor" => Theorem::Maincor,
            _ => return Err(unknown()),
        };
        let index = ROMAN.iter().position(|&r| r == roman).ok_or_else(unknown)? + 1;
        if index > theorem.cases() {
            return Err(unknown());
        }
        Ok(CaseId { theorem, index })
    }
}

impl Serialize for CaseId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("unknown case label {0:?}")]
    UnknownCase(String),
    #[error("{case}: missing parameter {name}")]
    MissingParam { case: String, name: &'static str },
    #[error("{case}: unexpected parameter {name}")]
    UnexpectedParam { case: String, name: String },
    #[error("{case}: parameter out of range, need {need}")]
    ParamOutOfRange { case: String, need: String },
    #[error("{case}: template does not give a valid array: {source}")]
    Template {
        case: String,
        #[source]
        source: ArrayError,
    },
}

/// One case instance: which case, with which parameters, and its array.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyCase {
    pub theorem: Theorem,
    #[serde(rename = "case")]
    pub case: CaseId,
    pub params: Params,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub array: IntersectionArray,
}

fn params(pairs: &[(&str, u64)]) -> Params {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

fn names(case: usize) -> &'static [&'static str] {
    match case {
        1 => &["index"],
        2 | 3 | 7 => &["alpha"],
        4 => &["D", "s"],
        5 | 6 | 9 => &[],
        8 => &["alpha", "beta"],
        10 | 11 => &["alpha", "beta", "h"],
        12 => &["D", "alpha", "beta", "h"],
        _ => unreachable!(),
    }
}

fn get(case: CaseId, p: &Params, name: &'static str) -> Result<u64, FamilyError> {
    p.get(name).copied().ok_or(FamilyError::MissingParam {
        case: case.label(),
        name,
    })
}

/// The array of the generalised 2D-gon of order `(s, t)`:
/// `k = s(t+1)`, `b_i = st`, `c_i = 1` below `D`, `c_D = t+1`.
pub fn gen_2d_gon(d: usize, s: u64, t: u64) -> Result<IntersectionArray, ArrayError> {
    if d < 2 || s == 0 || t == 0 {
        return Err(ArrayError::Invalid(format!(
            "generalised 2D-gon needs D >= 2 and s, t >= 1 (got D={d}, s={s}, t={t})"
        )));
    }
    let mut b = vec![s * (t + 1)];
    b.extend(std::iter::repeat_n(s * t, d - 1));
    let mut c = vec![1; d];
    c[d - 1] = t + 1;
    IntersectionArray::new(b, c)
}

fn johnson3(alpha: u64) -> Result<IntersectionArray, ArrayError> {
    let b = (0..3).map(|i| (3 - i) * (alpha - 3 - i)).collect();
    let c = (1..=3).map(|i| i * i).collect();
    IntersectionArray::new(b, c)
}

/// Rows `(c, a, b)` shared by cases x, xi, xii: `h` copies of
/// `(1, alpha, 2 alpha + 2)`.
fn head_rows(h: u64, alpha: u64) -> Vec<(u64, u64, u64)> {
    vec![(1, alpha, 2 * alpha + 2); h as usize]
}

/// Checks ranges of the full case and returns the template array.
fn generate_base(
    case: CaseId,
    p: &Params,
) -> Result<(IntersectionArray, Option<String>), FamilyError> {
    let label = case.label();
    let out_of_range = |need: &str| FamilyError::ParamOutOfRange {
        case: label.clone(),
        need: need.to_string(),
    };
    let check = |ok: bool, need: &str| if ok { Ok(()) } else { Err(out_of_range(need)) };
    let template = |r: Result<IntersectionArray, ArrayError>| {
        r.map_err(|source| FamilyError::Template {
            case: label.clone(),
            source,
        })
    };
    let n = case.base().index;
    let arr = match n {
        1 => {
            let index = get(case, p, "index")?;
            check((1..=8).contains(&index), "1 <= index <= 8")?;
            let (name, text) = CUBIC[index as usize - 1];
            let arr = template(text.parse())?;
            return Ok((arr, Some(name.to_string())));
        }
        2 => {
            let alpha = get(case, p, "alpha")?;
            check(
                alpha >= 6 && alpha % 3 != 1,
                "alpha >= 6, alpha = 0,2 (mod 3)",
            )?;
            template(IntersectionArray::new(
                vec![3 * alpha - 9, 2 * alpha - 10],
                vec![1, 9],
            ))?
        }
        3 => {
            let alpha = get(case, p, "alpha")?;
            check(alpha >= 4, "alpha >= 4")?;
            template(IntersectionArray::new(
                vec![3 * alpha - 3, 2 * alpha - 4],
                vec![1, 6],
            ))?
        }
        4 => {
            let d = get(case, p, "D")?;
            let s = get(case, p, "s")?;
            check(POLYGONS.contains(&(d, s)), "(D,s) in {(2,2),(2,4),(3,8)}")?;
            template(gen_2d_gon(d as usize, s, 2))?
        }
        5 => template("{6,4,4;1,1,3}".parse())?,
        6 => template("{12,8,8,8;1,1,1,3}".parse())?,
        7 => {
            let alpha = get(case, p, "alpha")?;
            check(alpha >= 6, "alpha >= 6")?;
            template(johnson3(alpha))?
        }
        8 => {
            let alpha = get(case, p, "alpha")?;
            let beta = get(case, p, "beta")?;
            check(alpha >= beta && beta >= 1, "alpha >= beta >= 1")?;
            template(IntersectionArray::new(
                vec![3 * alpha + 3, 2 * alpha + 2, alpha + 2 - beta],
                vec![1, 2, 3 * beta],
            ))?
        }
        9 => template("{6,4,2,1;1,1,4,6}".parse())?,
        10 | 11 => {
            let alpha = get(case, p, "alpha")?;
            let beta = get(case, p, "beta")?;
            let h = get(case, p, "h")?;
            check(alpha >= beta && beta >= 2, "alpha >= beta >= 2")?;
            let mut rows = head_rows(h, alpha);
            if n == 10 {
                check(h >= 2, "D = h+2 >= 4")?;
                rows.push((2, 2 * alpha + beta - 1, alpha - beta + 2));
            } else {
                check(h >= 1, "D = h+2 >= 3")?;
                rows.push((1, alpha + 2 * beta - 2, 2 * alpha - 2 * beta + 4));
            }
            rows.push((3 * beta, 3 * alpha - 3 * beta + 3, 0));
            template(IntersectionArray::from_rows(3 * alpha + 3, &rows))?
        }
        12 => {
            let alpha = get(case, p, "alpha")?;
            let beta = get(case, p, "beta")?;
            let h = get(case, p, "h")?;
            let d = get(case, p, "D")?;
            check(
                (beta == 2 || beta == 3) && alpha >= beta,
                "alpha >= beta, beta in {2,3}",
            )?;
            check(h >= 1 && d >= h + 3, "h >= 1, D >= h+3")?;
            let mut rows = head_rows(h, alpha);
            rows.push((1, alpha + 2, 2 * alpha));
            for _ in h + 2..=d - 2 {
                rows.push((4, 2 * alpha - 1, alpha));
            }
            rows.push((4, 2 * alpha + beta - 3, alpha - beta + 2));
            rows.push((3 * beta, 3 * alpha - 3 * beta + 3, 0));
            template(IntersectionArray::from_rows(3 * alpha + 3, &rows))?
        }
        _ => unreachable!(),
    };
    let name = match n {
        2 => Some(format!("S_3({})", p["alpha"] - 3)),
        3 => Some(format!("LS_3({})", p["alpha"])),
        4 => Some(format!(
            "generalized {}-gon of order ({},2)",
            2 * p["D"],
            p["s"]
        )),
        5 => Some("generalized hexagon of order (2,2)".to_string()),
        6 => Some("generalized octagon of order (4,2)".to_string()),
        7 => Some(format!("J({},3)", p["alpha"])),
        9 => Some("halved Foster graph".to_string()),
        _ => None,
    };
    Ok((arr, name))
}

/// Generates the instance of `case` with parameters `p`.
pub fn gen_case(case: CaseId, p: &Params) -> Result<FamilyCase, FamilyError> {
    let allowed = names(case.base().index);
    if let Some(extra) = p.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(FamilyError::UnexpectedParam {
            case: case.label(),
            name: extra.clone(),
        });
    }
    let (array, name) = generate_base(case, p)?;
    case.tightened(p)
        .map_err(|need| FamilyError::ParamOutOfRange {
            case: case.label(),
            need,
        })?;
    Ok(FamilyCase {
        theorem: case.theorem,
        case,
        params: p.clone(),
        name,
        array,
    })
}

/// Generates by label. Besides the case labels, `gen2Dgon` takes `D`, `s`
/// and `t` and emits the generalised 2D-gon template.
pub fn gen_family(label: &str, p: &Params) -> Result<IntersectionArray, FamilyError> {
    if label == "gen2Dgon" {
        let case = || "gen2Dgon".to_string();
        for k in p.keys() {
            if !["D", "s", "t"].contains(&k.as_str()) {
                return Err(FamilyError::UnexpectedParam {
                    case: case(),
                    name: k.clone(),
                });
            }
        }
        let need = |name| {
            p.get(name)
                .copied()
                .ok_or(FamilyError::MissingParam { case: case(), name })
        };
        let (d, s, t) = (need("D")?, need("s")?, need("t")?);
        return gen_2d_gon(d as usize, s, t).map_err(|source| FamilyError::Template {
            case: case(),
            source,
        });
    }
    let case: CaseId = label.parse()?;
    gen_case(case, p).map(|fc| fc.array)
}

/// Parameter tuples of the full case `n` that could produce `arr`.
fn candidates(n: usize, arr: &IntersectionArray) -> Vec<Params> {
    let k = arr.k();
    let d = arr.d() as u64;
    let a1 = arr.a(1);
    let c_last = arr.c(arr.d());
    match n {
        1 => (1..=8).map(|i| params(&[("index", i)])).collect(),
        2 if k.is_multiple_of(3) => vec![params(&[("alpha", k / 3 + 3)])],
        3 if k.is_multiple_of(3) => vec![params(&[("alpha", k / 3 + 1)])],
        4 if k.is_multiple_of(3) => vec![params(&[("D", d), ("s", k / 3)])],
        5 | 6 | 9 => vec![Params::new()],
        7 if k.is_multiple_of(3) => vec![params(&[("alpha", k / 3 + 3)])],
        8 | 10 | 11 | 12 if k == 3 * a1 + 3 && c_last.is_multiple_of(3) => {
            let (alpha, beta, h) = (a1, c_last / 3, arr.head() as u64);
            match n {
                8 => vec![params(&[("alpha", alpha), ("beta", beta)])],
                10 | 11 => vec![params(&[("alpha", alpha), ("beta", beta), ("h", h)])],
                _ => vec![params(&[
                    ("D", d),
                    ("alpha", alpha),
                    ("beta", beta),
                    ("h", h),
                ])],
            }
        }
        _ => Vec::new(),
    }
}

fn matches(case: CaseId, arr: &IntersectionArray) -> Vec<FamilyCase> {
    candidates(case.base().index, arr)
        .into_iter()
        .filter_map(|p| gen_case(case, &p).ok())
        .filter(|fc| fc.array == *arr)
        .collect()
}

fn match_all(theorem: Theorem, arr: &IntersectionArray) -> Vec<FamilyCase> {
    CaseId::all(theorem).flat_map(|c| matches(c, arr)).collect()
}

/// Every full case whose template reproduces `arr` with in-range
/// parameters. Empty when -3 is not the smallest eigenvalue.
pub fn classify_gdrg(arr: &IntersectionArray) -> Vec<FamilyCase> {
    if !is_theta_min_minus3(arr) {
        return Vec::new();
    }
    match_all(Theorem::Gdrg, arr)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MainCorOutcome {
    /// The window inequality fails; nothing is claimed.
    NotInWindow,
    Matched {
        cases: Vec<FamilyCase>,
    },
    /// In the window, but no graph can have this array: a graph here is
    /// geometric with smallest eigenvalue -3, and the array is not.
    Excluded {
        reason: String,
    },
    /// In the window, geometric with smallest eigenvalue -3, yet no case
    /// matches. Should be unreachable.
    ClassificationGap,
}

impl MainCorOutcome {
    pub fn is_gap(&self) -> bool {
        matches!(self, MainCorOutcome::ClassificationGap)
    }
}

pub fn classify_maincor(arr: &IntersectionArray) -> MainCorOutcome {
    if !window_condition(arr).satisfied {
        return MainCorOutcome::NotInWindow;
    }
    let cases = match_all(Theorem::Maincor, arr);
    if !cases.is_empty() {
        return MainCorOutcome::Matched { cases };
    }
    if !is_theta_min_minus3(arr) {
        return MainCorOutcome::Excluded {
            reason: "smallest eigenvalue is not -3".to_string(),
        };
    }
    match solve_tau_psi(arr) {
        Err(e) => MainCorOutcome::Excluded {
            reason: format!("no consistent tau/psi: {e}"),
        },
        Ok(gp) => {
            let violated = check_bounds(&gp, arr);
            if let Some(v) = violated.first() {
                MainCorOutcome::Excluded {
                    reason: format!("geometric bound {} fails: {}", v.constraint, v.detail),
                }
            } else {
                MainCorOutcome::ClassificationGap
            }
        }
    }
}

/// Parameter tuples of `case` with `k <= max_k` and `D <= max_d`, in
/// lexicographic order.
pub fn case_params(case: CaseId, max_k: u64, max_d: u64) -> Vec<Params> {
    let mut out = Vec::new();
    // k = 3 alpha + 3 for the cases built on (1, alpha, 2 alpha + 2)
    let alpha_max = (max_k / 3).saturating_sub(1);
    match case.base().index {
        1 => out.extend((1..=8).map(|i| params(&[("index", i)]))),
        2 | 7 => out.extend((6..=max_k / 3 + 3).map(|a| params(&[("alpha", a)]))),
        3 => out.extend((4..=max_k / 3 + 1).map(|a| params(&[("alpha", a)]))),
        4 => out.extend(POLYGONS.iter().map(|&(d, s)| params(&[("D", d), ("s", s)]))),
        5 | 6 | 9 => out.push(Params::new()),
        8 => {
            for a in 1..=alpha_max {
                out.extend((1..=a).map(|b| params(&[("alpha", a), ("beta", b)])));
            }
        }
        n @ (10 | 11) => {
            let h_min = if n == 10 { 2 } else { 1 };
            for a in 2..=alpha_max {
                for b in 2..=a {
                    for h in h_min..=max_d.saturating_sub(2) {
                        out.push(params(&[("alpha", a), ("beta", b), ("h", h)]));
                    }
                }
            }
        }
        12 => {
            for d in 4..=max_d {
                for a in 2..=alpha_max {
                    for b in 2..=a.min(3) {
                        for h in 1..=d - 3 {
                            out.push(params(&[("D", d), ("alpha", a), ("beta", b), ("h", h)]));
                        }
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    out.sort();
    out
}

/// Instances of one case with `k <= max_k` and `D <= max_d`.
pub fn enumerate_case(case: CaseId, max_k: u64, max_d: u64) -> Vec<FamilyCase> {
    case_params(case, max_k, max_d)
        .iter()
        .filter_map(|p| gen_case(case, p).ok())
        .filter(|fc| fc.array.k() <= max_k && fc.array.d() as u64 <= max_d)
        .collect()
}

/// Why a generated instance failed to be geometric with smallest
/// eigenvalue -3.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejected {
    pub instance: FamilyCase,
    pub reason: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Enumeration {
    pub cases: Vec<FamilyCase>,
    pub rejected: Vec<Rejected>,
}

/// Checks a generated instance: smallest eigenvalue -3, consistent
/// `tau`/`psi` reproducing the array, all geometric bounds, and the
/// classifier finding it again.
pub fn validate(fc: &FamilyCase) -> Result<(), String> {
    let arr = &fc.array;
    if !is_theta_min_minus3(arr) {
        return Err("smallest eigenvalue is not -3".into());
    }
    let gp = solve_tau_psi(arr).map_err(|e| e.to_string())?;
    if gp.reconstruct().as_ref() != Some(arr) {
        return Err("tau/psi do not reproduce the array".into());
    }
    if let Some(v) = check_bounds(&gp, arr).first() {
        return Err(format!("{}: {}", v.constraint, v.detail));
    }
    let found = match fc.theorem {
        Theorem::Gdrg => classify_gdrg(arr),
        Theorem::Maincor => match classify_maincor(arr) {
            MainCorOutcome::Matched { cases } => cases,
            other => return Err(format!("main classification gives {other:?}")),
        },
    };
    if !found
        .iter()
        .any(|f| f.case == fc.case && f.params == fc.params)
    {
        return Err("classifier does not recover the instance".into());
    }
    Ok(())
}

fn sweep(
    cases: impl Iterator<Item = CaseId>,
    max_k: u64,
    max_d: u64,
    exec: Execution,
) -> Enumeration {
    let instances: Vec<FamilyCase> = cases
        .flat_map(|c| enumerate_case(c, max_k, max_d))
        .collect();
    let checks = exec.map_slice(&instances, validate);
    let mut out = Enumeration::default();
    for (instance, check) in instances.into_iter().zip(checks) {
        match check {
            Ok(()) => out.cases.push(instance),
            Err(reason) => out.rejected.push(Rejected { instance, reason }),
        }
    }
    out
}

/// All instances of the full classification with `k <= max_k` and
/// `D <= max_d`, ordered by case then parameters, each validated.
pub fn enumerate_families(max_k: u64, max_d: u64, exec: Execution) -> Enumeration {
    sweep(CaseId::all(Theorem::Gdrg), max_k, max_d, exec)
}

/// Like [`enumerate_families`] for a single case label.
pub fn enumerate_label(case: CaseId, max_k: u64, max_d: u64, exec: Execution) -> Enumeration {
    sweep(std::iter::once(case), max_k, max_d, exec)
}
