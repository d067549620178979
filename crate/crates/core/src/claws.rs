//! The 4-claw window `max{3, 8(a1+1)/3} < k < 4 a1 + 10 - 6 c2` and the
//! nonexistence engine built on it.
//!
//! A graph with a 4-claw satisfies `c2 >= (4 a1 + 10 - k)/6` (count the
//! common neighbours of the centre with each leaf by inclusion-exclusion).
//! A graph with `k > max{3, 8(a1+1)/3}` and no 4-claw is geometric with
//! smallest eigenvalue -3. So an array with `k` above the lower bound,
//! `a1 >= 1`, smallest eigenvalue different from -3 and `c2` below the
//! 4-claw bound cannot be realised.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::arrays::IntersectionArray;
use crate::spectrum::is_theta_min_minus3;

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn whole(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn signed(x: u64) -> i64 {
    i64::try_from(x).expect("array entries fit in i64")
}

/// `max{3, 8(a1+1)/3}`.
pub fn lower_bound(arr: &IntersectionArray) -> BigRational {
    let eight_thirds = ratio(8 * (signed(arr.a(1)) + 1), 3);
    eight_thirds.max(whole(3))
}

/// `4 a1 + 10 - 6 c2` (may be negative).
pub fn upper_bound(arr: &IntersectionArray) -> i64 {
    4 * signed(arr.a(1)) + 10 - 6 * signed(arr.c(2))
}

/// `k > max{3, 8(a1+1)/3}`, exactly.
pub fn above_lower_bound(arr: &IntersectionArray) -> bool {
    whole(signed(arr.k())) > lower_bound(arr)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Window {
    pub satisfied: bool,
    #[serde(serialize_with = "crate::bigjson::rational")]
    pub lower: BigRational,
    pub upper: i64,
}

/// Evaluates the window with strict exact comparisons.
pub fn window_condition(arr: &IntersectionArray) -> Window {
    let lower = lower_bound(arr);
    let upper = upper_bound(arr);
    let k = signed(arr.k());
    Window {
        satisfied: whole(k) > lower && k < upper,
        lower,
        upper,
    }
}

/// `(4 a1 + 10 - k) / 6`, the least `c2` of a graph containing a 4-claw.
pub fn mu_bound(arr: &IntersectionArray) -> BigRational {
    ratio(4 * signed(arr.a(1)) + 10 - signed(arr.k()), 6)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Nonexistent,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Premise {
    pub name: &'static str,
    pub value: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClawVerdict {
    pub verdict: Verdict,
    pub premises: Vec<Premise>,
    pub window_satisfied: bool,
    #[serde(serialize_with = "crate::bigjson::rational")]
    pub lower_bound: BigRational,
    pub upper_bound: i64,
    #[serde(serialize_with = "crate::bigjson::rational")]
    pub mu_bound: BigRational,
}

impl ClawVerdict {
    pub fn premise(&self, name: &str) -> Option<&Premise> {
        self.premises.iter().find(|p| p.name == name)
    }
}

pub const PREMISE_VALENCY: &str = "k > max{3, 8(a1+1)/3}";
pub const PREMISE_A1: &str = "a1 >= 1";
pub const PREMISE_THETA: &str = "theta_min != -3";
pub const PREMISE_MU: &str = "c2 < (4a1+10-k)/6";

/// Runs the four-premise rule-out. `Nonexistent` iff every premise holds.
pub fn ruleout(arr: &IntersectionArray) -> ClawVerdict {
    let k = arr.k();
    let a1 = arr.a(1);
    let c2 = arr.c(2);
    let window = window_condition(arr);
    let mu = mu_bound(arr);

    let valency = whole(signed(k)) > window.lower;
    let minus3 = is_theta_min_minus3(arr);
    let below_mu = whole(signed(c2)) < mu;
    let premises = vec![
        Premise {
            name: PREMISE_VALENCY,
            value: format!("k = {k}, bound = {}", window.lower),
            holds: valency,
        },
        Premise {
            name: PREMISE_A1,
            value: format!("a1 = {a1}"),
            holds: a1 >= 1,
        },
        Premise {
            name: PREMISE_THETA,
            value: if minus3 {
                "theta_min = -3".to_string()
            } else {
                let p = crate::spectrum::char_poly(arr).eval(-3);
                if p.is_zero() {
                    // -3 is an eigenvalue but not the least one
                    match crate::spectrum::eigenvalues(arr) {
                        Ok(s) => format!("p(-3) = 0, theta_min = {}", s.theta_min),
                        Err(_) => "p(-3) = 0, theta_min < -3".to_string(),
                    }
                } else {
                    format!("p(-3) = {p}")
                }
            },
            holds: !minus3,
        },
        Premise {
            name: PREMISE_MU,
            value: format!("c2 = {c2}, bound = {mu}"),
            holds: below_mu,
        },
    ];
    let verdict = if premises.iter().all(|p| p.holds) {
        Verdict::Nonexistent
    } else {
        Verdict::Inconclusive
    };
    debug_assert!(!(minus3 && verdict == Verdict::Nonexistent));
    ClawVerdict {
        verdict,
        premises,
        window_satisfied: window.satisfied,
        lower_bound: window.lower,
        upper_bound: window.upper,
        mu_bound: mu,
    }
}

/// The seven arrays ruled out by the 4-claw argument, with their labels.
pub const TABLE_SEVEN: [(&str, &str); 7] = [
    ("i", "{55,36,11;1,4,45}"),
    ("ii", "{56,36,9;1,3,48}"),
    ("iii", "{65,44,11;1,4,55}"),
    ("iv", "{81,56,24,1;1,3,56,81}"),
    ("v", "{117,80,32,1;1,4,80,117}"),
    ("vi", "{117,80,30,1;1,6,80,117}"),
    ("vii", "{189,128,45,1;1,9,128,189}"),
];

pub fn table_seven() -> Vec<(&'static str, IntersectionArray)> {
    TABLE_SEVEN
        .iter()
        .map(|&(label, text)| {
            (
                label,
                crate::arrays::parse_array(text).expect("built-in array is valid"),
            )
        })
        .collect()
}
