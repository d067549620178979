//! Certified eigenvalues of an intersection array.
//!
//! The distinct eigenvalues of a distance-regular graph are the eigenvalues
//! of the tridiagonal matrix
//!
//! ```text
//!        | 0   b0                |
//!        | c1  a1  b1            |
//!   L1 = |     c2  a2  b2        |
//!        |         ..  ..  ..    |
//!        |             cD  aD    |
//! ```
//!
//! We never diagonalise `L1` numerically. The characteristic polynomial is
//! built exactly from the three-term recurrence on leading principal
//! minors, integer roots are extracted by the rational root test (the
//! polynomial is monic, so rational roots are integers dividing the
//! constant term, and Gershgorin confines them to `[-k, k]`), and the
//! remaining roots are isolated with a Sturm chain. Decisions such as
//! "is -3 the smallest eigenvalue" are made by exact evaluation and root
//! counting only.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arrays::IntersectionArray;
use crate::bigjson;
use crate::poly::{
    isolate_roots, refine_root, Bound, BudgetExceeded, IntPoly, RatPoly, SturmChain,
};

/// Bisection steps allowed per root, for isolation and for each refinement.
pub const REFINEMENT_BUDGET: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("expected {expected} distinct real eigenvalues, found {found}")]
    RootCountMismatch { expected: usize, found: usize },
    #[error("largest eigenvalue is not k = {k}")]
    NotPerron { k: u64 },
    #[error("multiplicity of eigenvalue {eigenvalue} is {value}, not a positive integer")]
    InfeasibleMultiplicity { eigenvalue: String, value: String },
    #[error("multiplicity of eigenvalue {eigenvalue} could not be enclosed tightly enough")]
    MultiplicityUndetermined { eigenvalue: String },
    #[error("spectral identity {0} violated")]
    IdentityViolated(&'static str),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rat_u(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Approximate decimal value, for display only.
pub fn approx(x: &BigRational) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

/// Closed interval with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Integers contained in the interval.
    pub fn integers(&self) -> impl Iterator<Item = BigInt> {
        let first = self.lo.ceil().to_integer();
        let last = self.hi.floor().to_integer();
        num_iter_range(first, last)
    }

    pub fn add(&self, other: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn mul(&self, other: &RatInterval) -> RatInterval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        RatInterval::new(lo, hi)
    }
}

fn num_iter_range(first: BigInt, last: BigInt) -> impl Iterator<Item = BigInt> {
    let mut cur = first;
    std::iter::from_fn(move || {
        if cur > last {
            None
        } else {
            let out = cur.clone();
            cur += 1;
            Some(out)
        }
    })
}

/// `det(xI - L1)`, monic of degree `D + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPoly(pub IntPoly);

impl CharPoly {
    pub fn poly(&self) -> &IntPoly {
        &self.0
    }

    pub fn eval(&self, x: i64) -> BigInt {
        self.0.eval(&BigInt::from(x))
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for CharPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        bigjson::int_seq(self.0.coeffs(), s)
    }
}

/// Characteristic polynomial of `L1`, from the recurrence
/// `p_i = (x - a_i) p_{i-1} - b_{i-1} c_i p_{i-2}`.
pub fn char_poly(arr: &IntersectionArray) -> CharPoly {
    let mut prev = IntPoly::one();
    let mut cur = IntPoly::linear(&BigInt::from(arr.a(0)));
    for i in 1..=arr.d() {
        let shifted = cur.mul(&IntPoly::linear(&BigInt::from(arr.a(i))));
        let coupling = BigInt::from(arr.b(i - 1)) * BigInt::from(arr.c(i));
        let next = shifted.sub(&prev.scale(&coupling));
        prev = cur;
        cur = next;
    }
    CharPoly(cur)
}

/// A certified eigenvalue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Root {
    /// Known exactly. Always an integer here, since `L1`'s characteristic
    /// polynomial is monic.
    Rational(BigRational),
    /// The unique root of the polynomial in the open interval `(lo, hi)`.
    Interval { lo: BigRational, hi: BigRational },
}

impl Root {
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Root::Rational(r) => Some(r),
            Root::Interval { .. } => None,
        }
    }

    /// Closed enclosure of the root.
    pub fn enclosure(&self) -> RatInterval {
        match self {
            Root::Rational(r) => RatInterval::point(r.clone()),
            Root::Interval { lo, hi } => RatInterval::new(lo.clone(), hi.clone()),
        }
    }

    /// Midpoint, for display and for numerical comparison.
    pub fn approx(&self) -> f64 {
        match self {
            Root::Rational(r) => approx(r),
            Root::Interval { lo, hi } => approx(&((lo + hi) / rat(2))),
        }
    }

    fn sort_key(&self) -> &BigRational {
        match self {
            Root::Rational(r) => r,
            Root::Interval { lo, .. } => lo,
        }
    }

    pub fn is_exactly(&self, value: i64) -> bool {
        self.as_rational() == Some(&rat(value))
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Root::Rational(r) => write!(f, "{r}"),
            Root::Interval { .. } => write!(f, "~{:.12}", self.approx()),
        }
    }
}

impl Serialize for Root {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Root::Rational(r) => {
                let mut st = s.serialize_struct("Root", 2)?;
                st.serialize_field("type", "rational")?;
                st.serialize_field("value", &r.to_string())?;
                st.end()
            }
            Root::Interval { lo, hi } => {
                let mut st = s.serialize_struct("Root", 3)?;
                st.serialize_field("type", "interval")?;
                st.serialize_field("lo", &lo.to_string())?;
                st.serialize_field("hi", &hi.to_string())?;
                st.end()
            }
        }
    }
}

/// The `D + 1` certified eigenvalues of an array, ascending.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub char_poly: CharPoly,
    pub roots: Vec<Root>,
    pub theta_min: Root,
    /// Characteristic polynomial with the integer roots divided out; all
    /// interval roots are roots of this polynomial.
    #[serde(skip)]
    irrational_part: RatPoly,
}

impl SpectrumReport {
    pub fn largest(&self) -> &Root {
        self.roots.last().expect("spectrum is never empty")
    }

    pub fn all_rational(&self) -> bool {
        self.roots.iter().all(|r| r.as_rational().is_some())
    }

    /// Shrinks an interval root to width below `width`.
    fn refine(&self, root: &Root, width: &BigRational) -> Result<Root, SpectrumError> {
        match root {
            Root::Rational(_) => Ok(root.clone()),
            Root::Interval { lo, hi } => {
                let (lo, hi) = refine_root(
                    &self.irrational_part,
                    (lo.clone(), hi.clone()),
                    width,
                    REFINEMENT_BUDGET,
                )?;
                Ok(Root::Interval { lo, hi })
            }
        }
    }
}

/// Computes and certifies the eigenvalues of `L1`.
pub fn eigenvalues(arr: &IntersectionArray) -> Result<SpectrumReport, SpectrumError> {
    let p = char_poly(arr);
    let k = arr.k();
    let expected = arr.d() + 1;

    let mut rest = p.0.clone();
    let mut roots = Vec::new();
    let bound = i64::try_from(k).expect("valency fits in i64");
    for r in -bound..=bound {
        let r = BigInt::from(r);
        let constant = rest.coeffs().first().cloned().unwrap_or_default();
        let candidate = if r.is_zero() {
            constant.is_zero()
        } else {
            constant.is_multiple_of(&r)
        };
        if !candidate {
            continue;
        }
        if let Some(q) = rest.div_linear(&r) {
            roots.push(Root::Rational(BigRational::from_integer(r)));
            rest = q;
        }
    }

    let irrational_part = rest.to_rational();
    let remaining = rest.degree().unwrap_or(0);
    if remaining > 0 {
        let chain = SturmChain::new(&irrational_part);
        let real = chain.count_roots(&Bound::NegInfinity, &Bound::PosInfinity);
        if real != remaining || roots.len() + real != expected {
            return Err(SpectrumError::RootCountMismatch {
                expected,
                found: roots.len() + real,
            });
        }
        // All eigenvalues of L1 lie in [-k, k] (row sums are k).
        let limit = rat(bound + 1);
        let isolated = isolate_roots(&chain, -limit.clone(), limit, REFINEMENT_BUDGET)?;
        if isolated.len() != real {
            return Err(SpectrumError::RootCountMismatch {
                expected,
                found: roots.len() + isolated.len(),
            });
        }
        let width = BigRational::new(BigInt::one(), BigInt::from(10u64).pow(12));
        for interval in isolated {
            let (lo, hi) = refine_root(&irrational_part, interval, &width, REFINEMENT_BUDGET)?;
            roots.push(Root::Interval { lo, hi });
        }
    }
    if roots.len() != expected {
        return Err(SpectrumError::RootCountMismatch {
            expected,
            found: roots.len(),
        });
    }
    roots.sort_by(|x, y| x.sort_key().cmp(y.sort_key()));
    if !roots.last().unwrap().is_exactly(bound) {
        return Err(SpectrumError::NotPerron { k });
    }
    let theta_min = roots[0].clone();
    Ok(SpectrumReport {
        char_poly: p,
        roots,
        theta_min,
        irrational_part,
    })
}

/// True iff -3 is an eigenvalue of `L1` and no eigenvalue lies below it.
/// Decided by exact evaluation and a Sturm count; no floating point.
pub fn is_theta_min_minus3(arr: &IntersectionArray) -> bool {
    is_theta_min(arr, -3)
}

/// Leading principal minors `p_0(x), ..., p_{D+1}(x)` of `xI - L1`
/// evaluated at an integer.
pub fn leading_minors_at(arr: &IntersectionArray, x: i64) -> Vec<BigInt> {
    let x = BigInt::from(x);
    let mut out = Vec::with_capacity(arr.d() + 2);
    out.push(BigInt::one());
    out.push(&x - BigInt::from(arr.a(0)));
    for i in 1..=arr.d() {
        let coupling = BigInt::from(arr.b(i - 1)) * BigInt::from(arr.c(i));
        let next = (&x - BigInt::from(arr.a(i))) * &out[i] - coupling * &out[i - 1];
        out.push(next);
    }
    out
}

/// True iff `theta` is exactly the smallest eigenvalue of `L1`.
///
/// `L1` is similar to a symmetric tridiagonal matrix with the same leading
/// minors. `theta` is its least eigenvalue iff `det(xI - L1)` vanishes at
/// `theta` and the leading `D x D` block minus `theta I` is positive
/// definite, i.e. `(-1)^j p_j(theta) > 0` for `j = 1..=D` (strict
/// interlacing puts every other eigenvalue above the block's spectrum).
pub fn is_theta_min(arr: &IntersectionArray, theta: i64) -> bool {
    let minors = leading_minors_at(arr, theta);
    let (last, block) = minors.split_last().expect("at least two minors");
    last.is_zero()
        && block.iter().enumerate().skip(1).all(|(j, m)| {
            if j % 2 == 0 {
                m.is_positive()
            } else {
                m.is_negative()
            }
        })
}

/// The same decision through a Sturm count on the deflated
/// characteristic polynomial.
pub fn is_theta_min_by_sturm(arr: &IntersectionArray, theta: i64) -> bool {
    let p = char_poly(arr);
    let theta = BigInt::from(theta);
    let Some(q) = p.0.div_linear(&theta) else {
        return false;
    };
    if q.eval(&theta).is_zero() {
        // repeated root; cannot happen for a valid array
        return false;
    }
    if q.degree().unwrap_or(0) == 0 {
        return true;
    }
    let chain = SturmChain::new(&q.to_rational());
    let below = chain.count_roots(
        &Bound::NegInfinity,
        &Bound::At(BigRational::from_integer(theta)),
    );
    below == 0
}

/// A multiplicity, exact for rational eigenvalues and enclosed otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Multiplicity {
    Exact(BigRational),
    /// Certified enclosure of width below 1/4 containing an integer.
    Bounds(RatInterval),
}

impl Multiplicity {
    pub fn enclosure(&self) -> RatInterval {
        match self {
            Multiplicity::Exact(m) => RatInterval::point(m.clone()),
            Multiplicity::Bounds(iv) => iv.clone(),
        }
    }

    /// The integer value, when exact or when the enclosure pins one integer.
    pub fn integer(&self) -> Option<BigInt> {
        match self {
            Multiplicity::Exact(m) => m.is_integer().then(|| m.to_integer()),
            Multiplicity::Bounds(iv) => {
                let ints: Vec<_> = iv.integers().collect();
                (ints.len() == 1).then(|| ints[0].clone())
            }
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Exact(m) => write!(f, "{m}"),
            Multiplicity::Bounds(iv) => write!(f, "~{:.6}", approx(&((&iv.lo + &iv.hi) / rat(2)))),
        }
    }
}

impl Serialize for Multiplicity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Exact(m) => {
                let mut st = s.serialize_struct("Multiplicity", 2)?;
                st.serialize_field("type", "rational")?;
                st.serialize_field("value", &m.to_string())?;
                st.end()
            }
            Multiplicity::Bounds(iv) => {
                let mut st = s.serialize_struct("Multiplicity", 3)?;
                st.serialize_field("type", "interval")?;
                st.serialize_field("lo", &iv.lo.to_string())?;
                st.serialize_field("hi", &iv.hi.to_string())?;
                st.end()
            }
        }
    }
}

/// Shell sizes as rationals; defined even when the array is infeasible.
fn rational_shells(arr: &IntersectionArray) -> Vec<BigRational> {
    let mut k = vec![BigRational::one()];
    for i in 1..=arr.d() {
        let next = &k[i - 1] * rat_u(arr.b(i - 1)) / rat_u(arr.c(i));
        k.push(next);
    }
    k
}

/// The polynomial `S(x) = sum_i k_i u_i(x)^2`, where `u_i` is the standard
/// sequence `u_0 = 1`, `u_1 = x/k`,
/// `c_i u_{i-1} + a_i u_i + b_i u_{i+1} = x u_i`. The multiplicity of an
/// eigenvalue `theta` is `v / S(theta)`.
fn norm_polynomial(arr: &IntersectionArray) -> RatPoly {
    let x = RatPoly::new(vec![BigRational::zero(), BigRational::one()]);
    let mut u: Vec<RatPoly> = vec![RatPoly::new(vec![BigRational::one()])];
    u.push(scale(&x, &(BigRational::one() / rat_u(arr.k()))));
    for i in 1..arr.d() {
        let shifted = sub(&mul(&x, &u[i]), &scale(&u[i], &rat_u(arr.a(i))));
        let next = sub(&shifted, &scale(&u[i - 1], &rat_u(arr.c(i))));
        u.push(scale(&next, &(BigRational::one() / rat_u(arr.b(i)))));
    }
    let shells = rational_shells(arr);
    u.iter()
        .zip(&shells)
        .fold(RatPoly::new(Vec::new()), |acc, (ui, ki)| {
            add(&acc, &scale(&mul(ui, ui), ki))
        })
}

fn scale(p: &RatPoly, s: &BigRational) -> RatPoly {
    RatPoly::new(p.coeffs().iter().map(|c| c * s).collect())
}

fn add(p: &RatPoly, q: &RatPoly) -> RatPoly {
    let n = p.coeffs().len().max(q.coeffs().len());
    let zero = BigRational::zero();
    RatPoly::new(
        (0..n)
            .map(|i| p.coeffs().get(i).unwrap_or(&zero) + q.coeffs().get(i).unwrap_or(&zero))
            .collect(),
    )
}

fn sub(p: &RatPoly, q: &RatPoly) -> RatPoly {
    add(p, &scale(q, &rat(-1)))
}

fn mul(p: &RatPoly, q: &RatPoly) -> RatPoly {
    if p.is_zero() || q.is_zero() {
        return RatPoly::new(Vec::new());
    }
    let mut out = vec![BigRational::zero(); p.coeffs().len() + q.coeffs().len() - 1];
    for (i, a) in p.coeffs().iter().enumerate() {
        for (j, b) in q.coeffs().iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    RatPoly::new(out)
}

/// Encloses `p(x)` for `x` in `iv` by the mean value form
/// `p(mid) +- r * sum_j j |p_j| R^(j-1)` with `R = max(|lo|, |hi|)`.
fn enclose(p: &RatPoly, iv: &RatInterval) -> RatInterval {
    let mid = (&iv.lo + &iv.hi) / rat(2);
    let radius = (&iv.hi - &iv.lo) / rat(2);
    let reach = iv.lo.abs().max(iv.hi.abs());
    let mut slope = BigRational::zero();
    let mut power = BigRational::one();
    for (j, c) in p.coeffs().iter().enumerate().skip(1) {
        slope += c.abs() * rat(j as i64) * &power;
        power *= &reach;
    }
    let centre = p.eval(&mid);
    let spread = slope * radius;
    RatInterval::new(&centre - &spread, centre + spread)
}

/// Multiplicities `m_j = v / sum_i k_i u_i(theta_j)^2`, in the order of
/// `report.roots`.
///
/// Exact for rational eigenvalues. For irrational ones the eigenvalue is
/// refined until the multiplicity enclosure is narrower than 1/4. Fails
/// with [`SpectrumError::InfeasibleMultiplicity`] when a multiplicity is
/// certainly not a positive integer.
pub fn multiplicities(
    arr: &IntersectionArray,
    report: &SpectrumReport,
) -> Result<Vec<Multiplicity>, SpectrumError> {
    let mults = raw_multiplicities(arr, report)?;
    for (root, m) in report.roots.iter().zip(&mults) {
        let positive_integer = match m {
            Multiplicity::Exact(x) => x.is_integer() && x.is_positive(),
            Multiplicity::Bounds(iv) => iv.integers().any(|n| n.is_positive()),
        };
        if !positive_integer {
            return Err(SpectrumError::InfeasibleMultiplicity {
                eigenvalue: root.to_string(),
                value: m.to_string(),
            });
        }
    }
    Ok(mults)
}

/// Multiplicities without the integrality screen.
pub fn raw_multiplicities(
    arr: &IntersectionArray,
    report: &SpectrumReport,
) -> Result<Vec<Multiplicity>, SpectrumError> {
    let norm = norm_polynomial(arr);
    let v: BigRational = rational_shells(arr).iter().sum();
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    let mut out = Vec::with_capacity(report.roots.len());
    for root in &report.roots {
        match root {
            Root::Rational(theta) => out.push(Multiplicity::Exact(&v / norm.eval(theta))),
            Root::Interval { lo, hi } => {
                let mut width = hi - lo;
                let mut current = root.clone();
                let mut found = None;
                for _ in 0..REFINEMENT_BUDGET {
                    let s = enclose(&norm, &current.enclosure());
                    if s.lo.is_positive() {
                        let m = RatInterval::new(&v / &s.hi, &v / &s.lo);
                        if m.width() < quarter {
                            found = Some(m);
                            break;
                        }
                    }
                    width /= rat(1 << 20);
                    current = report.refine(&current, &width)?;
                }
                let m = found.ok_or_else(|| SpectrumError::MultiplicityUndetermined {
                    eigenvalue: root.to_string(),
                })?;
                out.push(Multiplicity::Bounds(m));
            }
        }
    }
    check_identities(arr, report, &out)?;
    Ok(out)
}

/// Checks `sum m = v`, `sum m theta = 0` and `sum m theta^2 = v k`, exactly
/// or by interval containment.
pub fn check_identities(
    arr: &IntersectionArray,
    report: &SpectrumReport,
    mults: &[Multiplicity],
) -> Result<(), SpectrumError> {
    let v: BigRational = rational_shells(arr).iter().sum();
    let vk = &v * rat_u(arr.k());
    let zero = RatInterval::point(BigRational::zero());
    let mut sum_m = zero.clone();
    let mut sum_mt = zero.clone();
    let mut sum_mt2 = zero;
    for (root, m) in report.roots.iter().zip(mults) {
        let t = root.enclosure();
        let m = m.enclosure();
        let mt = m.mul(&t);
        sum_m = sum_m.add(&m);
        sum_mt2 = sum_mt2.add(&mt.mul(&t));
        sum_mt = sum_mt.add(&mt);
    }
    if !sum_m.contains(&v) {
        return Err(SpectrumError::IdentityViolated("sum m = v"));
    }
    if !sum_mt.contains(&BigRational::zero()) {
        return Err(SpectrumError::IdentityViolated("sum m*theta = 0"));
    }
    if !sum_mt2.contains(&vk) {
        return Err(SpectrumError::IdentityViolated("sum m*theta^2 = v*k"));
    }
    Ok(())
}

/// Result of the Delsarte clique bound `1 - k / theta_min`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DelsarteBound {
    Rational {
        value: BigRational,
        integral: bool,
    },
    /// `theta_min` is irrational, so the bound is too (never integral).
    Irrational {
        lo: BigRational,
        hi: BigRational,
    },
}

impl DelsarteBound {
    /// `1 - k/theta` for a negative rational `theta`.
    pub fn from_theta(k: u64, theta: &BigRational) -> DelsarteBound {
        let value = BigRational::one() - rat_u(k) / theta;
        let integral = value.is_integer();
        DelsarteBound::Rational { value, integral }
    }

    pub fn integral_size(&self) -> Option<u64> {
        match self {
            DelsarteBound::Rational {
                value,
                integral: true,
            } => value.to_integer().to_u64(),
            _ => None,
        }
    }

    /// An integral bound that could be the clique size of a geometric
    /// graph. `theta_min = -1` gives `1 + k`, i.e. a complete graph, which
    /// is excluded.
    pub fn admits_geometric(&self, k: u64) -> bool {
        self.integral_size().is_some_and(|s| s >= 2 && s < k + 1)
    }
}

impl fmt::Display for DelsarteBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DelsarteBound::Rational {
                value,
                integral: true,
            } => write!(f, "{value}"),
            DelsarteBound::Rational {
                value,
                integral: false,
            } => {
                write!(f, "{value} (not integral)")
            }
            DelsarteBound::Irrational { lo, hi } => {
                write!(f, "in ({:.6}, {:.6}) (irrational)", approx(lo), approx(hi))
            }
        }
    }
}

impl Serialize for DelsarteBound {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            DelsarteBound::Rational { value, integral } => {
                let mut st = s.serialize_struct("DelsarteBound", 3)?;
                st.serialize_field("type", "rational")?;
                st.serialize_field("value", &value.to_string())?;
                st.serialize_field("integral", integral)?;
                st.end()
            }
            DelsarteBound::Irrational { lo, hi } => {
                let mut st = s.serialize_struct("DelsarteBound", 3)?;
                st.serialize_field("type", "interval")?;
                st.serialize_field("lo", &lo.to_string())?;
                st.serialize_field("hi", &hi.to_string())?;
                st.end()
            }
        }
    }
}

/// Delsarte bound of the array from its certified smallest eigenvalue.
pub fn delsarte_bound(report: &SpectrumReport, k: u64) -> DelsarteBound {
    match &report.theta_min {
        Root::Rational(theta) => DelsarteBound::from_theta(k, theta),
        Root::Interval { lo, hi } => {
            // theta < 0, so 1 - k/theta is increasing in theta.
            let one = BigRational::one();
            DelsarteBound::Irrational {
                lo: &one - rat_u(k) / lo,
                hi: one - rat_u(k) / hi,
            }
        }
    }
}

impl PartialOrd for Root {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.sort_key().cmp(other.sort_key()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrays::parse_array;

    fn arr(s: &str) -> IntersectionArray {
        parse_array(s).unwrap()
    }

    #[test]
    fn minor_signs_agree_with_sturm_count() {
        let known = crate::classify::enumerate_case(crate::classify::CaseId::gdrg(10), 40, 6)
            .into_iter()
            .chain(crate::classify::enumerate_case(
                crate::classify::CaseId::gdrg(12),
                40,
                7,
            ))
            .map(|f| f.array);
        let mut fixed: Vec<IntersectionArray> = [
            "{6,4,2;1,2,3}",
            "{4,3,2,1;1,2,3,4}",
            "{3,2,2;1,1,3}",
            "{55,36,11;1,4,45}",
            "{4,2;1,4}",
            "{12,5;1,4}",
        ]
        .iter()
        .map(|s| arr(s))
        .collect();
        fixed.extend(known);
        for a in &fixed {
            for theta in -6..=0 {
                assert_eq!(
                    is_theta_min(a, theta),
                    is_theta_min_by_sturm(a, theta),
                    "{a} at {theta}"
                );
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn minor_signs_match_sturm_on_random_arrays(
            k in 2u64..30,
            mut bs in proptest::collection::vec(1u64..30, 1..5),
            mut cs in proptest::collection::vec(1u64..30, 1..5),
            theta in -8i64..=0,
        ) {
            let d = bs.len().min(cs.len());
            bs.truncate(d);
            cs.truncate(d);
            bs.sort_unstable_by(|x, y| y.cmp(x));
            cs.sort_unstable();
            let mut b = vec![k];
            b.extend(bs.iter().copied());
            let mut c = cs.clone();
            c.push(k);
            c[0] = 1;
            c.sort_unstable();
            if let Ok(a) = IntersectionArray::new(b, c) {
                proptest::prop_assert_eq!(is_theta_min(&a, theta), is_theta_min_by_sturm(&a, theta));
            }
        }
    }

    fn ints(report: &SpectrumReport) -> Vec<i64> {
        report
            .roots
            .iter()
            .map(|r| r.as_rational().unwrap().to_integer().to_i64().unwrap())
            .collect()
    }

    /// Oracle: determinant of the explicit 3x3 matrix x I - L1 by cofactor
    /// expansion, evaluated at many integer points.
    fn det3(m: [[i64; 3]; 3], x: i64) -> i64 {
        let a = |i: usize, j: usize| if i == j { x - m[i][j] } else { -m[i][j] };
        a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
            - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
            + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
    }

    #[test]
    fn char_poly_of_gq22_matches_determinant() {
        let p = char_poly(&arr("{6,4;1,3}"));
        assert_eq!(p.poly(), &IntPoly::from_i64(&[18, -15, -4, 1]));
        let m = [[0, 6, 0], [1, 1, 4], [0, 3, 3]];
        for x in -10..=10 {
            assert_eq!(p.eval(x), BigInt::from(det3(m, x)), "x = {x}");
        }
        let k33 = char_poly(&arr("{3,2;1,3}"));
        let m = [[0, 3, 0], [1, 0, 2], [0, 3, 0]];
        for x in -10..=10 {
            assert_eq!(k33.eval(x), BigInt::from(det3(m, x)));
        }
    }

    #[test]
    fn integer_spectra() {
        assert_eq!(
            ints(&eigenvalues(&arr("{6,4;1,3}")).unwrap()),
            vec![-3, 1, 6]
        );
        assert_eq!(
            ints(&eigenvalues(&arr("{3,2;1,3}")).unwrap()),
            vec![-3, 0, 3]
        );
        assert_eq!(
            ints(&eigenvalues(&arr("{6,4,2;1,2,3}")).unwrap()),
            vec![-3, 0, 3, 6]
        );
    }

    #[test]
    fn heawood_has_two_irrational_roots() {
        let a = arr("{3,2,2;1,1,3}");
        let p = char_poly(&a);
        // (x^2 - 9)(x^2 - 2), checked by polynomial division.
        let x2m9 = IntPoly::from_i64(&[-9, 0, 1]);
        let x2m2 = IntPoly::from_i64(&[-2, 0, 1]);
        assert_eq!(p.poly(), &x2m9.mul(&x2m2));
        let rep = eigenvalues(&a).unwrap();
        assert_eq!(rep.roots.len(), 4);
        assert!(rep.roots[0].is_exactly(-3));
        assert!(rep.roots[3].is_exactly(3));
        for (root, expect) in rep.roots[1..3].iter().zip([-2f64.sqrt(), 2f64.sqrt()]) {
            let Root::Interval { lo, hi } = root else {
                panic!("expected an isolated root, got {root:?}")
            };
            assert!((hi - lo) < BigRational::new(BigInt::one(), BigInt::from(10u64).pow(12)));
            assert!((approx(lo) - expect).abs() < 1e-11);
        }
    }

    #[test]
    fn theta_min_decisions() {
        assert!(is_theta_min_minus3(&arr("{6,4,2;1,2,3}")));
        assert!(is_theta_min_minus3(&arr("{6,4,4;1,1,3}")));
        assert!(!is_theta_min_minus3(&arr("{55,36,11;1,4,45}")));
        // C5
        assert!(!is_theta_min_minus3(&arr("{2,1;1,1}")));
        // H(4,2): spectrum 4, 2, 0, -2, -4.
        let h42 = arr("{4,3,2,1;1,2,3,4}");
        assert!(!char_poly(&h42).eval(-3).is_zero());
        assert!(!is_theta_min_minus3(&h42));
        // J(8,2) (triangular graph T(8)): spectrum 12, 4, -2, so -3 is not
        // an eigenvalue; J(6,3) has -3 as its minimum.
        assert!(!is_theta_min_minus3(&arr("{12,5;1,4}")));
        assert!(is_theta_min(&h42, -4));
        let rep = eigenvalues(&arr("{55,36,11;1,4,45}")).unwrap();
        assert!(!rep.theta_min.is_exactly(-3));
        assert!(!char_poly(&arr("{55,36,11;1,4,45}")).eval(-3).is_zero());
    }

    #[test]
    fn gq22_multiplicities() {
        // Oracle: 1 + f + g = 15 and 6 + f - 3g = 0 give f = 9, g = 5.
        let (f, g) = {
            let mut sol = None;
            for f in 0..=15i64 {
                let g = 14 - f;
                if 6 + f - 3 * g == 0 {
                    sol = Some((f, g));
                }
            }
            sol.unwrap()
        };
        let a = arr("{6,4;1,3}");
        let rep = eigenvalues(&a).unwrap();
        let m = multiplicities(&a, &rep).unwrap();
        let exact: Vec<_> = m.iter().map(|x| x.integer().unwrap()).collect();
        assert_eq!(exact, vec![BigInt::from(g), BigInt::from(f), BigInt::one()]);
    }

    #[test]
    fn hamming_and_heawood_multiplicities() {
        let a = arr("{6,4,2;1,2,3}");
        let rep = eigenvalues(&a).unwrap();
        let m = multiplicities(&a, &rep).unwrap();
        let exact: Vec<_> = m.iter().map(|x| x.integer().unwrap()).collect();
        let expect: Vec<BigInt> = [8, 12, 6, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(exact, expect);

        let a = arr("{3,2,2;1,1,3}");
        let rep = eigenvalues(&a).unwrap();
        let m = multiplicities(&a, &rep).unwrap();
        let vals: Vec<_> = m.iter().map(|x| x.integer().unwrap()).collect();
        let expect: Vec<BigInt> = [1, 6, 6, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(vals, expect);
        assert!(matches!(m[1], Multiplicity::Bounds(_)));
    }

    #[test]
    fn perron_multiplicity_is_one() {
        for s in [
            "{55,36,11;1,4,45}",
            "{9,4,1;1,4,9}",
            "{3,2,2,2,2,1,1,1;1,1,1,1,2,2,2,3}",
            "{45,30,7;1,2,27}",
        ] {
            let a = arr(s);
            let rep = eigenvalues(&a).unwrap();
            let m = raw_multiplicities(&a, &rep).unwrap();
            assert_eq!(
                m.last().unwrap(),
                &Multiplicity::Exact(BigRational::one()),
                "{s}"
            );
        }
    }

    #[test]
    fn infeasible_multiplicity_reported() {
        // {4,2;1,4}: eigenvalues -3, 0, 4 with multiplicities 4/3, 14/3, 1
        // (sympy, frozen).
        let a = arr("{4,2;1,4}");
        let rep = eigenvalues(&a).unwrap();
        assert_eq!(ints(&rep), vec![-3, 0, 4]);
        let raw = raw_multiplicities(&a, &rep).unwrap();
        let third =
            |n: i64| Multiplicity::Exact(BigRational::new(BigInt::from(n), BigInt::from(3)));
        assert_eq!(raw, vec![third(4), third(14), third(3)]);
        let err = multiplicities(&a, &rep).unwrap_err();
        assert!(
            matches!(&err, SpectrumError::InfeasibleMultiplicity { eigenvalue, .. } if eigenvalue == "-3"),
            "{err}"
        );
    }

    #[test]
    fn delsarte_bounds() {
        let b = DelsarteBound::from_theta(6, &rat(-3));
        assert_eq!(b.integral_size(), Some(3));
        let a = arr("{9,4,1;1,4,9}");
        let rep = eigenvalues(&a).unwrap();
        assert!(rep.theta_min.is_exactly(-3));
        assert_eq!(delsarte_bound(&rep, 9).integral_size(), Some(4));
        let complete = DelsarteBound::from_theta(7, &rat(-1));
        assert_eq!(complete.integral_size(), Some(8));
        assert!(!complete.admits_geometric(7));
        let heawood = eigenvalues(&arr("{3,2,2;1,1,3}")).unwrap();
        assert_eq!(delsarte_bound(&heawood, 3).integral_size(), Some(2));
        let c5 = eigenvalues(&arr("{2,1;1,1}")).unwrap();
        assert!(matches!(
            delsarte_bound(&c5, 2),
            DelsarteBound::Irrational { .. }
        ));
    }

    #[test]
    fn json_shapes() {
        let rep = eigenvalues(&arr("{3,2,2;1,1,3}")).unwrap();
        let j = serde_json::to_value(&rep).unwrap();
        assert_eq!(j["char_poly"], serde_json::json!([18, 0, -11, 0, 1]));
        assert_eq!(
            j["roots"][0],
            serde_json::json!({"type": "rational", "value": "-3"})
        );
        assert_eq!(j["roots"][1]["type"], "interval");
        assert!(j["roots"][1]["lo"].as_str().unwrap().contains('/'));
    }
}
