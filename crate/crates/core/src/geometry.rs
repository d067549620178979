//! Geometric parameters `tau_i`, `psi_i` of a putative geometric
//! distance-regular graph with smallest eigenvalue -3.
//!
//! For a geometric graph with Delsarte cliques of size `1 + k/3` the array
//! satisfies
//!
//! ```text
//!   c_i = tau_i * psi_{i-1}                     (1 <= i <= D)
//!   b_i = (3 - tau_i) * (1 + k/3 - psi_i)       (1 <= i <= D-1)
//!   tau_D = 3,  psi_0 = 1
//! ```
//!
//! Read left to right each equation has one unknown, so the parameters are
//! determined by the array (or the array is inconsistent with any such
//! geometry, and the failing step is reported).

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arrays::IntersectionArray;
use crate::spectrum::is_theta_min_minus3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("smallest eigenvalue is not -3")]
    NotMinusThree,
    #[error("k = {k} is not divisible by 3, so the Delsarte clique size 1 + k/3 is not integral")]
    NonIntegralCliqueSize { k: u64 },
    #[error("step {step}: {what}")]
    NonDivisible { step: usize, what: String },
    #[error("step {step}: {what}")]
    OutOfRange { step: usize, what: String },
    #[error("tau_D = {tau_d}, expected 3")]
    TauDNotThree { tau_d: u64 },
    #[error("local structure identity fails: {0}")]
    LocalIdentity(String),
}

impl GeometryError {
    /// Index at which the left-to-right solve broke down (0 for failed
    /// preconditions).
    pub fn step(&self) -> usize {
        match self {
            GeometryError::NonDivisible { step, .. } | GeometryError::OutOfRange { step, .. } => {
                *step
            }
            _ => 0,
        }
    }
}

/// Serialises a solve failure as `{inconsistent_at, reason}`.
pub struct Inconsistency<'a>(pub &'a GeometryError);

impl Serialize for Inconsistency<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Inconsistency", 2)?;
        st.serialize_field("inconsistent_at", &self.0.step())?;
        st.serialize_field("reason", &self.0.to_string())?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeometricParams {
    /// `tau_1..=tau_D`.
    pub tau: Vec<u64>,
    /// `psi_0..=psi_{D-1}`.
    pub psi: Vec<u64>,
    /// Delsarte clique size `1 + k/3`.
    pub clique_size: u64,
}

impl GeometricParams {
    pub fn tau(&self, i: usize) -> u64 {
        self.tau[i - 1]
    }

    pub fn psi(&self, i: usize) -> u64 {
        self.psi[i]
    }

    /// Recomputes the array from the parameters.
    pub fn reconstruct(&self) -> Option<IntersectionArray> {
        let d = self.tau.len();
        let k = 3 * (self.clique_size - 1);
        let mut b = vec![k];
        for i in 1..d {
            b.push((3 - self.tau(i)) * (self.clique_size.checked_sub(self.psi(i))?));
        }
        let c = (1..=d).map(|i| self.tau(i) * self.psi(i - 1)).collect();
        IntersectionArray::new(b, c).ok()
    }
}

/// Solves for `tau` and `psi` left to right. Requires `theta_min = -3`
/// exactly and `3 | k`.
pub fn solve_tau_psi(arr: &IntersectionArray) -> Result<GeometricParams, GeometryError> {
    if !is_theta_min_minus3(arr) {
        return Err(GeometryError::NotMinusThree);
    }
    solve_unchecked(arr)
}

/// The solve without the eigenvalue precondition.
pub fn solve_unchecked(arr: &IntersectionArray) -> Result<GeometricParams, GeometryError> {
    let k = arr.k();
    if !k.is_multiple_of(3) {
        return Err(GeometryError::NonIntegralCliqueSize { k });
    }
    let clique_size = 1 + k / 3;
    let d = arr.d();
    let mut tau = Vec::with_capacity(d);
    let mut psi = vec![1u64];
    for i in 1..=d {
        let c = arr.c(i);
        let prev = psi[i - 1];
        if !c.is_multiple_of(prev) {
            return Err(GeometryError::NonDivisible {
                step: i,
                what: format!("tau_{i} = c_{i} / psi_{} = {c}/{prev}", i - 1),
            });
        }
        let t = c / prev;
        if !(1..=3).contains(&t) {
            return Err(GeometryError::OutOfRange {
                step: i,
                what: format!("tau_{i} = {t} outside 1..=3"),
            });
        }
        tau.push(t);
        if i == d {
            break;
        }
        if t == 3 {
            return Err(GeometryError::OutOfRange {
                step: i,
                what: format!("tau_{i} = 3 before the diameter forces b_{i} = 0"),
            });
        }
        let b = arr.b(i);
        let free = 3 - t;
        if !b.is_multiple_of(free) {
            return Err(GeometryError::NonDivisible {
                step: i,
                what: format!("b_{i} = {b} is not divisible by 3 - tau_{i} = {free}"),
            });
        }
        let q = b / free;
        if q >= clique_size {
            return Err(GeometryError::OutOfRange {
                step: i,
                what: format!("psi_{i} = {clique_size} - {q} is not positive"),
            });
        }
        psi.push(clique_size - q);
    }
    let tau_d = *tau.last().unwrap();
    if tau_d != 3 {
        return Err(GeometryError::TauDNotThree { tau_d });
    }
    Ok(GeometricParams {
        tau,
        psi,
        clique_size,
    })
}

/// A violated necessary condition on solved parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub constraint: &'static str,
    pub detail: String,
}

/// Necessary conditions `psi_1 <= tau_2 <= 3`, `psi_1^2 <= c_2 <= 9`,
/// `c_D = 3 psi_{D-1}` and `c_D >= 3`, plus the per-index ranges.
pub fn check_bounds(gp: &GeometricParams, arr: &IntersectionArray) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut fail =
        |constraint: &'static str, detail: String| out.push(Violation { constraint, detail });
    let d = arr.d();
    if gp.tau.len() != d || gp.psi.len() != d {
        fail(
            "shape",
            format!(
                "expected {d} taus and {d} psis, got {} and {}",
                gp.tau.len(),
                gp.psi.len()
            ),
        );
        return out;
    }
    let psi1 = gp.psi(1);
    let tau2 = gp.tau(2);
    let c2 = arr.c(2);
    if psi1 > tau2 {
        fail("psi_1 <= tau_2", format!("{psi1} > {tau2}"));
    }
    if tau2 > 3 {
        fail("tau_2 <= 3", format!("tau_2 = {tau2}"));
    }
    if psi1 * psi1 > c2 {
        fail("psi_1^2 <= c_2", format!("{} > {c2}", psi1 * psi1));
    }
    if c2 > 9 {
        fail("c_2 <= 9", format!("c_2 = {c2}"));
    }
    let cd = arr.c(d);
    if cd != 3 * gp.psi(d - 1) {
        fail(
            "c_D = 3 psi_{D-1}",
            format!("{cd} != 3 * {}", gp.psi(d - 1)),
        );
    }
    if cd < 3 {
        fail("c_D >= 3", format!("c_D = {cd}"));
    }
    if let Some(t) = gp.tau.iter().find(|t| !(1..=3).contains(*t)) {
        fail("1 <= tau_i <= 3", format!("tau = {t}"));
    }
    if let Some(p) = gp.psi.iter().find(|&&p| p == 0 || p + 1 > gp.clique_size) {
        fail("1 <= psi_i <= clique_size - 1", format!("psi = {p}"));
    }
    if gp.tau(d) != 3 {
        fail("tau_D = 3", format!("tau_D = {}", gp.tau(d)));
    }
    out
}

/// Local graph shape forced by `psi_1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LocalKind {
    /// `psi_1 = 1`: locally a disjoint union of three cliques of size
    /// `a_1 + 1`, so `k = 3(a_1 + 1)`.
    ThreeCliques,
    /// `psi_1 = 2`: `b_1 = 2(k - 3)/3`.
    TwoPerClique,
    /// `psi_1 = 3`: `c_2 = 9`.
    ThreePerClique,
}

/// Classifies by `psi_1` and checks the identity that goes with it.
pub fn local_structure_kind(
    gp: &GeometricParams,
    arr: &IntersectionArray,
) -> Result<LocalKind, GeometryError> {
    let k = arr.k();
    match gp.psi(1) {
        1 => {
            if k != 3 * (arr.a(1) + 1) {
                return Err(GeometryError::LocalIdentity(format!(
                    "k = {k} != 3(a_1 + 1) = {}",
                    3 * (arr.a(1) + 1)
                )));
            }
            Ok(LocalKind::ThreeCliques)
        }
        2 => {
            if 3 * arr.b(1) != 2 * (k - 3) {
                return Err(GeometryError::LocalIdentity(format!(
                    "b_1 = {} != 2(k - 3)/3",
                    arr.b(1)
                )));
            }
            Ok(LocalKind::TwoPerClique)
        }
        3 => {
            if arr.c(2) != 9 {
                return Err(GeometryError::LocalIdentity(format!(
                    "c_2 = {} != 9",
                    arr.c(2)
                )));
            }
            Ok(LocalKind::ThreePerClique)
        }
        other => Err(GeometryError::OutOfRange {
            step: 1,
            what: format!("psi_1 = {other} outside 1..=3"),
        }),
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
    fn hamming_3_3() {
        let a = arr("{6,4,2;1,2,3}");
        let gp = solve_tau_psi(&a).unwrap();
        assert_eq!(gp.tau, vec![1, 2, 3]);
        assert_eq!(gp.psi, vec![1, 1, 1]);
        assert_eq!(gp.clique_size, 3);
        assert!(check_bounds(&gp, &a).is_empty());
        assert_eq!(local_structure_kind(&gp, &a), Ok(LocalKind::ThreeCliques));
    }

    #[test]
    fn latin_square_and_steiner() {
        let ls = arr("{9,4;1,6}");
        let gp = solve_tau_psi(&ls).unwrap();
        assert_eq!((gp.tau.clone(), gp.psi.clone()), (vec![1, 3], vec![1, 2]));
        assert_eq!(local_structure_kind(&gp, &ls), Ok(LocalKind::TwoPerClique));
        assert!(check_bounds(&gp, &ls).is_empty());

        let st = arr("{9,2;1,9}");
        let gp = solve_tau_psi(&st).unwrap();
        assert_eq!((gp.tau.clone(), gp.psi.clone()), (vec![1, 3], vec![1, 3]));
        assert_eq!(
            local_structure_kind(&gp, &st),
            Ok(LocalKind::ThreePerClique)
        );
        assert!(check_bounds(&gp, &st).is_empty());
    }

    #[test]
    fn halved_foster() {
        let a = arr("{6,4,2,1;1,1,4,6}");
        let gp = solve_tau_psi(&a).unwrap();
        assert_eq!(gp.tau, vec![1, 1, 2, 3]);
        assert_eq!(gp.psi, vec![1, 1, 2, 2]);
        for i in 1..=4 {
            assert_eq!(a.c(i), gp.tau(i) * gp.psi(i - 1));
        }
        assert_eq!(gp.reconstruct().unwrap(), a);
    }

    #[test]
    fn diameter_two_has_tau_d_three() {
        for s in ["{6,4;1,3}", "{12,8;1,3}", "{9,4;1,6}", "{9,2;1,9}"] {
            let gp = solve_tau_psi(&arr(s)).unwrap();
            assert_eq!(gp.tau(2), 3, "{s}");
        }
    }

    #[test]
    fn hypothetical_violation() {
        let a = arr("{9,4;1,6}");
        let gp = GeometricParams {
            tau: vec![1, 2],
            psi: vec![1, 3],
            clique_size: 4,
        };
        let v = check_bounds(&gp, &a);
        assert!(v.iter().any(|x| x.constraint == "psi_1^2 <= c_2"), "{v:?}");
        assert!(v.iter().any(|x| x.constraint == "psi_1 <= tau_2"));
    }

    #[test]
    fn failures_carry_the_step() {
        assert_eq!(
            solve_tau_psi(&arr("{55,36,11;1,4,45}")),
            Err(GeometryError::NotMinusThree)
        );
        // tau_2 = c_2 / psi_1 = 4
        let e = solve_unchecked(&arr("{6,4;1,4}")).unwrap_err();
        assert!(
            matches!(e, GeometryError::OutOfRange { step: 2, .. }),
            "{e}"
        );
        let e = solve_unchecked(&arr("{6,3;1,2}")).unwrap_err();
        assert!(
            matches!(e, GeometryError::NonDivisible { step: 1, .. }),
            "{e}"
        );
        let e = solve_unchecked(&arr("{6,4,2;1,2,2}")).unwrap_err();
        assert_eq!(e, GeometryError::TauDNotThree { tau_d: 2 });
        let e = solve_unchecked(&arr("{5,4;1,2}")).unwrap_err();
        assert_eq!(e, GeometryError::NonIntegralCliqueSize { k: 5 });
        let j = serde_json::to_value(Inconsistency(&e)).unwrap();
        assert_eq!(j["inconsistent_at"], 0);
    }

    #[test]
    fn table_seven_fails_precondition() {
        for s in [
            "{55,36,11;1,4,45}",
            "{56,36,9;1,3,48}",
            "{65,44,11;1,4,55}",
            "{81,56,24,1;1,3,56,81}",
            "{117,80,32,1;1,4,80,117}",
            "{117,80,30,1;1,6,80,117}",
            "{189,128,45,1;1,9,128,189}",
        ] {
            assert_eq!(
                solve_tau_psi(&arr(s)),
                Err(GeometryError::NotMinusThree),
                "{s}"
            );
        }
    }
}
