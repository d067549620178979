//! Dense univariate polynomials with integer or rational coefficients and
//! Sturm chains over the rationals.
//!
//! Coefficients are stored constant term first. These are only as general
//! as the spectrum code needs: evaluation, synthetic division by a linear
//! factor, derivative, Euclidean remainder and sign-variation counting.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Integer polynomial, constant term first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn one() -> Self {
        Self::new(vec![BigInt::one()])
    }

    /// `x - r`.
    pub fn linear(r: &BigInt) -> Self {
        Self::new(vec![-r, BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * x + BigRational::from_integer(c.clone())
            })
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        let out = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&zero) - other.coeffs.get(i).unwrap_or(&zero))
            .collect();
        IntPoly::new(out)
    }

    pub fn scale(&self, s: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Divides by `x - r` by synthetic division; returns the quotient when
    /// the remainder is zero.
    pub fn div_linear(&self, r: &BigInt) -> Option<IntPoly> {
        let n = self.coeffs.len();
        if n < 2 {
            return None;
        }
        let mut quotient = vec![BigInt::zero(); n - 1];
        let mut carry = BigInt::zero();
        for i in (0..n).rev() {
            let value = &self.coeffs[i] + &carry * r;
            if i == 0 {
                return value.is_zero().then(|| IntPoly::new(quotient));
            }
            quotient[i - 1] = value.clone();
            carry = value;
        }
        unreachable!()
    }

    pub fn to_rational(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Rational polynomial, constant term first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Euclidean remainder of `self` by `divisor` (nonzero).
    pub fn rem(&self, divisor: &RatPoly) -> RatPoly {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let factor = &r[top] / &lead;
            if !factor.is_zero() {
                let shift = top - dd;
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    r[shift + j] -= &factor * dc;
                }
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        RatPoly::new(r)
    }

    /// Divides every coefficient by the absolute value of the leading one.
    /// Signs at every point are preserved.
    fn normalized(self) -> RatPoly {
        match self.coeffs.last() {
            None => self,
            Some(lead) => {
                let scale = lead.abs();
                RatPoly::new(self.coeffs.iter().map(|c| c / &scale).collect())
            }
        }
    }

    fn sign_at_neg_infinity(&self) -> i8 {
        match (self.coeffs.last(), self.degree()) {
            (Some(lead), Some(d)) => {
                let s = if lead.is_positive() { 1 } else { -1 };
                if d % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
            _ => 0,
        }
    }

    fn sign_at_pos_infinity(&self) -> i8 {
        match self.coeffs.last() {
            Some(lead) if lead.is_positive() => 1,
            Some(_) => -1,
            None => 0,
        }
    }
}

/// A point on the extended real line with rational finite part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    NegInfinity,
    At(BigRational),
    PosInfinity,
}

/// Sturm chain `p, p', -rem(p, p'), ...` of a polynomial.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<RatPoly>,
}

impl SturmChain {
    pub fn new(p: &RatPoly) -> Self {
        let mut chain = Vec::new();
        if p.is_zero() {
            return Self { chain };
        }
        chain.push(p.clone().normalized());
        let d = p.derivative().normalized();
        if d.is_zero() {
            return Self { chain };
        }
        chain.push(d);
        loop {
            let n = chain.len();
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            let neg = RatPoly::new(r.coeffs.iter().map(|c| -c).collect()).normalized();
            chain.push(neg);
        }
        Self { chain }
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// Number of sign changes in the chain evaluated at `at` (zeros skipped).
    pub fn variations(&self, at: &Bound) -> usize {
        let signs = self.chain.iter().map(|p| match at {
            Bound::NegInfinity => p.sign_at_neg_infinity(),
            Bound::PosInfinity => p.sign_at_pos_infinity(),
            Bound::At(x) => match p.eval(x).cmp(&BigRational::zero()) {
                Ordering::Less => -1,
                Ordering::Equal => 0,
                Ordering::Greater => 1,
            },
        });
        let mut last = 0i8;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Number of distinct real roots in the open interval `(lo, hi)`.
    /// Finite endpoints must not be roots of the polynomial.
    pub fn count_roots(&self, lo: &Bound, hi: &Bound) -> usize {
        debug_assert!(
            [lo, hi].iter().all(|b| match b {
                Bound::At(x) => !self.chain[0].eval(x).is_zero(),
                _ => true,
            }),
            "Sturm endpoints must not be roots"
        );
        self.variations(lo).saturating_sub(self.variations(hi))
    }

    /// The polynomial the chain was built from (normalised).
    pub fn base(&self) -> &RatPoly {
        &self.chain[0]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("root isolation did not converge within {budget} bisection steps")]
pub struct BudgetExceeded {
    pub budget: usize,
}

/// Isolates the real roots of `p` lying in `(lo, hi)` into disjoint open
/// intervals with rational endpoints, each containing exactly one root,
/// in ascending order.
///
/// `p` must have no rational roots, so that no dyadic midpoint is ever a
/// root. `budget` caps the number of bisection steps spent on each root.
pub fn isolate_roots(
    chain: &SturmChain,
    lo: BigRational,
    hi: BigRational,
    budget: usize,
) -> Result<Vec<(BigRational, BigRational)>, BudgetExceeded> {
    let two = BigRational::from_integer(BigInt::from(2));
    let mut out = Vec::new();
    let total = chain.count_roots(&Bound::At(lo.clone()), &Bound::At(hi.clone()));
    let mut stack = vec![(lo, hi, total, 0usize)];
    while let Some((a, b, count, depth)) = stack.pop() {
        match count {
            0 => continue,
            1 => out.push((a, b)),
            _ => {
                if depth >= budget {
                    return Err(BudgetExceeded { budget });
                }
                let mid = (&a + &b) / &two;
                let left = chain.count_roots(&Bound::At(a.clone()), &Bound::At(mid.clone()));
                // Push right first so the left half pops first.
                stack.push((mid.clone(), b, count - left, depth + 1));
                stack.push((a, mid, left, depth + 1));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Shrinks an isolating interval of a simple root of `p` by bisection until
/// its width is below `width`. The polynomial must change sign across the
/// interval and have no rational roots.
pub fn refine_root(
    p: &RatPoly,
    interval: (BigRational, BigRational),
    width: &BigRational,
    budget: usize,
) -> Result<(BigRational, BigRational), BudgetExceeded> {
    let two = BigRational::from_integer(BigInt::from(2));
    let (mut a, mut b) = interval;
    let mut sign_a = p.eval(&a).is_positive();
    let mut steps = 0;
    while &(&b - &a) >= width {
        if steps >= budget {
            return Err(BudgetExceeded { budget });
        }
        steps += 1;
        let mid = (&a + &b) / &two;
        let sign_mid = p.eval(&mid).is_positive();
        if sign_mid == sign_a {
            a = mid;
            sign_a = sign_mid;
        } else {
            b = mid;
        }
    }
    Ok((a, b))
}
