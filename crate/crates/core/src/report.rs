//! The composed analysis behind the command-line tool: one array through
//! every stage, or one graph through the verification chain.
//!
//! Reports serialise deterministically (struct field order, no clocks
//! unless timing is requested) and render to text from the same data.

use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::arrays::{DerivedParams, IntersectionArray};
use crate::classify::{classify_gdrg, classify_maincor, FamilyCase, MainCorOutcome};
use crate::claws::{
    above_lower_bound, ruleout, table_seven, window_condition, ClawVerdict, Verdict, Window,
};
use crate::exec::Execution;
use crate::geometry::{check_bounds, local_structure_kind, solve_unchecked, LocalKind, Violation};
use crate::graphs::{
    check_drg, delsarte_cover, find_claw, local_check, verify_lines, ClawWitness, CliqueCover,
    Graph, GraphError, LocalReport,
};
use crate::spectrum::{
    check_identities, delsarte_bound, eigenvalues, is_theta_min_minus3, raw_multiplicities,
    DelsarteBound, Multiplicity, Root, SpectrumError, SpectrumReport,
};

/// A stage result: the value, or `{"error": ...}`.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Outcome<T> {
    Ok(T),
    Err { error: String },
}

impl<T> Outcome<T> {
    fn from_result<E: fmt::Display>(r: Result<T, E>) -> Outcome<T> {
        match r {
            Ok(v) => Outcome::Ok(v),
            Err(e) => Outcome::Err {
                error: e.to_string(),
            },
        }
    }

    pub fn ok(&self) -> Option<&T> {
        match self {
            Outcome::Ok(v) => Some(v),
            Outcome::Err { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiplicitySection {
    pub values: Vec<Multiplicity>,
    /// Every multiplicity is a positive integer and the trace identities
    /// hold.
    pub feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub problem: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum GeometrySection {
    Solved {
        tau: Vec<u64>,
        psi: Vec<u64>,
        clique_size: u64,
        theta_min_is_minus3: bool,
        violations: Vec<Violation>,
        #[serde(skip_serializing_if = "Option::is_none")]
        local_kind: Option<LocalKind>,
        #[serde(skip_serializing_if = "Option::is_none")]
        local_error: Option<String>,
    },
    Inconsistent {
        inconsistent_at: usize,
        reason: String,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub gdrg: Vec<FamilyCase>,
    pub maincor: MainCorOutcome,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub total_us: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub input: String,
    pub array: IntersectionArray,
    pub derived: DerivedParams,
    pub spectrum: Outcome<SpectrumReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplicities: Option<MultiplicitySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delsarte: Option<DelsarteBound>,
    pub geometry: GeometrySection,
    pub window: Window,
    pub ruleout: ClawVerdict,
    pub classification: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl Report {
    /// Internal states that contradict the classification theorems or
    /// the certified-root guarantees.
    pub fn anomalies(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.classification.maincor.is_gap() {
            out.push(format!(
                "{} lies in the 4-claw window but matches no case",
                self.array
            ));
        }
        if let Outcome::Err { error } = &self.spectrum {
            out.push(format!("spectrum: {error}"));
        }
        let minus3 = matches!(
            self.geometry,
            GeometrySection::Solved {
                theta_min_is_minus3: true,
                ..
            }
        );
        if minus3 && self.ruleout.verdict == Verdict::Nonexistent {
            out.push("rule-out fired although theta_min = -3".into());
        }
        out
    }
}

/// Runs derive, spectrum, geometry, claws and classification on `arr`.
/// Fails only when the shell sizes are not integral.
pub fn analyze(
    input: &str,
    arr: &IntersectionArray,
    timing: bool,
) -> Result<Report, crate::ArrayError> {
    let start = Instant::now();
    let derived = arr.derive()?;
    let spectrum = eigenvalues(arr);
    let (multiplicities, delsarte) = match &spectrum {
        Ok(report) => (
            Some(multiplicity_section(arr, report)),
            Some(delsarte_bound(report, arr.k())),
        ),
        Err(_) => (None, None),
    };
    let minus3 = is_theta_min_minus3(arr);
    let geometry = match solve_unchecked(arr) {
        Ok(gp) => {
            let violations = check_bounds(&gp, arr);
            let (local_kind, local_error) = match local_structure_kind(&gp, arr) {
                Ok(kind) => (Some(kind), None),
                Err(e) => (None, Some(e.to_string())),
            };
            GeometrySection::Solved {
                tau: gp.tau,
                psi: gp.psi,
                clique_size: gp.clique_size,
                theta_min_is_minus3: minus3,
                violations,
                local_kind,
                local_error,
            }
        }
        Err(e) => GeometrySection::Inconsistent {
            inconsistent_at: e.step(),
            reason: e.to_string(),
        },
    };
    Ok(Report {
        input: input.to_string(),
        array: arr.clone(),
        derived,
        spectrum: Outcome::from_result(spectrum),
        multiplicities,
        delsarte,
        geometry,
        window: window_condition(arr),
        ruleout: ruleout(arr),
        classification: Classification {
            gdrg: classify_gdrg(arr),
            maincor: classify_maincor(arr),
        },
        timing: timing.then(|| Timing {
            total_us: start.elapsed().as_micros(),
        }),
    })
}

fn multiplicity_section(arr: &IntersectionArray, report: &SpectrumReport) -> MultiplicitySection {
    let values = match raw_multiplicities(arr, report) {
        Ok(v) => v,
        Err(e) => {
            return MultiplicitySection {
                values: Vec::new(),
                feasible: false,
                problem: Some(e.to_string()),
            }
        }
    };
    let problem = match crate::spectrum::multiplicities(arr, report)
        .and_then(|m| check_identities(arr, report, &m))
    {
        Ok(()) => None,
        Err(e) => Some(e.to_string()),
    };
    MultiplicitySection {
        values,
        feasible: problem.is_none(),
        problem,
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn params_text(fc: &FamilyCase) -> String {
    let p: Vec<String> = fc.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let mut s = fc.case.label();
    if !p.is_empty() {
        s += &format!(" ({})", p.join(", "));
    }
    if let Some(name) = &fc.name {
        s += &format!(" {name}");
    }
    s
}

fn write_ruleout(f: &mut fmt::Formatter<'_>, v: &ClawVerdict) -> fmt::Result {
    let verdict = match v.verdict {
        Verdict::Nonexistent => "nonexistent",
        Verdict::Inconclusive => "inconclusive",
    };
    writeln!(f, "rule-out        {verdict}")?;
    for p in &v.premises {
        let mark = if p.holds { "x" } else { " " };
        writeln!(f, "  [{mark}] {:<24} {}", p.name, p.value)?;
    }
    Ok(())
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = &self.derived;
        writeln!(f, "array           {}", self.array)?;
        writeln!(f, "vertices        {}", d.v)?;
        writeln!(f, "shells          {}", join(&d.k_shell))?;
        writeln!(f, "a_i             {}", join(&d.a))?;
        writeln!(f, "head            {}", d.head)?;
        match &self.spectrum {
            Outcome::Ok(s) => {
                writeln!(f, "char poly       {}", s.char_poly)?;
                writeln!(f, "eigenvalues     {}", join(&s.roots))?;
                writeln!(f, "theta_min       {}", s.theta_min)?;
            }
            Outcome::Err { error } => writeln!(f, "eigenvalues     error: {error}")?,
        }
        if let Some(m) = &self.multiplicities {
            write!(f, "multiplicities  {}", join(&m.values))?;
            match &m.problem {
                None => writeln!(f)?,
                Some(p) => writeln!(f, "  (infeasible: {p})")?,
            }
        }
        if let Some(b) = &self.delsarte {
            writeln!(f, "delsarte bound  {b}")?;
        }
        match &self.geometry {
            GeometrySection::Solved {
                tau,
                psi,
                clique_size,
                theta_min_is_minus3,
                violations,
                local_kind,
                local_error,
            } => {
                write!(
                    f,
                    "geometry        tau = ({}), psi = ({}), clique size {clique_size}",
                    join(tau),
                    join(psi)
                )?;
                if !theta_min_is_minus3 {
                    write!(f, " [theta_min != -3]")?;
                }
                writeln!(f)?;
                for v in violations {
                    writeln!(f, "  violated      {}: {}", v.constraint, v.detail)?;
                }
                if let Some(k) = local_kind {
                    writeln!(f, "  local         {k:?}")?;
                }
                if let Some(e) = local_error {
                    writeln!(f, "  local         {e}")?;
                }
            }
            GeometrySection::Inconsistent {
                inconsistent_at,
                reason,
            } => {
                writeln!(
                    f,
                    "geometry        inconsistent at step {inconsistent_at}: {reason}"
                )?;
            }
        }
        let w = &self.window;
        writeln!(
            f,
            "window          {} ({} < k < {})",
            if w.satisfied {
                "satisfied"
            } else {
                "not satisfied"
            },
            w.lower,
            w.upper
        )?;
        write_ruleout(f, &self.ruleout)?;
        if self.classification.gdrg.is_empty() {
            writeln!(f, "gdrg            none")?;
        }
        for fc in &self.classification.gdrg {
            writeln!(f, "gdrg            {}", params_text(fc))?;
        }
        match &self.classification.maincor {
            MainCorOutcome::NotInWindow => writeln!(f, "maincor         not in window")?,
            MainCorOutcome::Matched { cases } => {
                for fc in cases {
                    writeln!(f, "maincor         {}", params_text(fc))?;
                }
            }
            MainCorOutcome::Excluded { reason } => {
                writeln!(f, "maincor         excluded: {reason}")?
            }
            MainCorOutcome::ClassificationGap => writeln!(f, "maincor         CLASSIFICATION GAP")?,
        }
        if let Some(t) = &self.timing {
            writeln!(f, "time            {} us", t.total_us)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Table7Row {
    pub label: &'static str,
    pub array: IntersectionArray,
    #[serde(flatten)]
    pub verdict: ClawVerdict,
}

pub fn table7() -> Vec<Table7Row> {
    table_seven()
        .into_iter()
        .map(|(label, array)| {
            let verdict = ruleout(&array);
            Table7Row {
                label,
                array,
                verdict,
            }
        })
        .collect()
}

impl fmt::Display for Table7Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "({}) {}", self.label, self.array)?;
        write_ruleout(f, &self.verdict)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphReport {
    pub vertices: usize,
    pub edges: usize,
    pub array: IntersectionArray,
    pub theta_min: Outcome<Root>,
    pub claw4: Option<ClawWitness>,
    pub cover: Outcome<CliqueCover>,
    pub lines: Outcome<CliqueCover>,
    pub local: LocalReport,
    pub classification: Classification,
    /// With `k > max{3, 8(a1+1)/3}`: whether "no 4-claw" agrees with
    /// "Delsarte cover exists and theta_min = -3".
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claw_geometry_agree: Option<bool>,
}

impl GraphReport {
    pub fn anomalies(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.claw_geometry_agree == Some(false) {
            out.push("4-claw freeness disagrees with the Delsarte cover".into());
        }
        if self.classification.maincor.is_gap() {
            out.push(format!(
                "{} lies in the 4-claw window but matches no case",
                self.array
            ));
        }
        out
    }
}

/// Verifies distance-regularity and then runs the claw, cover, line and
/// classification checks.
pub fn verify_graph(g: &Graph, exec: Execution) -> Result<GraphReport, GraphError> {
    let array = check_drg(g, exec)?;
    let theta_min = eigenvalues(&array).map(|s| s.theta_min);
    let minus3 = is_theta_min_minus3(&array);
    let claw4 = find_claw(g, 4, exec);
    let cover = delsarte_cover(g, &array, exec);
    let lines = verify_lines(g, &array, exec);
    let claw_geometry_agree =
        above_lower_bound(&array).then(|| claw4.is_none() == (cover.is_ok() && minus3));
    Ok(GraphReport {
        vertices: g.n(),
        edges: g.edge_count(),
        theta_min: Outcome::from_result(theta_min.map_err(|e: SpectrumError| e)),
        claw4,
        cover: Outcome::from_result(cover),
        lines: Outcome::from_result(lines),
        local: local_check(g, exec),
        classification: Classification {
            gdrg: classify_gdrg(&array),
            maincor: classify_maincor(&array),
        },
        claw_geometry_agree,
        array,
    })
}

impl fmt::Display for GraphReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "graph           {} vertices, {} edges",
            self.vertices, self.edges
        )?;
        writeln!(f, "array           {}", self.array)?;
        match &self.theta_min {
            Outcome::Ok(t) => writeln!(f, "theta_min       {t}")?,
            Outcome::Err { error } => writeln!(f, "theta_min       error: {error}")?,
        }
        match &self.claw4 {
            None => writeln!(f, "4-claw          none")?,
            Some(w) => writeln!(
                f,
                "4-claw          center {} leaves {:?}",
                w.center, w.leaves
            )?,
        }
        for (name, c) in [("cover", &self.cover), ("lines", &self.lines)] {
            match c {
                Outcome::Ok(c) => writeln!(
                    f,
                    "{name:<16}{} cliques of size {}, {} per vertex",
                    c.cliques.len(),
                    c.clique_size,
                    c.uniform_count()
                        .map_or("non-uniform".to_string(), |n| n.to_string())
                )?,
                Outcome::Err { error } => writeln!(f, "{name:<16}{error}")?,
            }
        }
        writeln!(
            f,
            "local graph     components {:?}{}{}",
            self.local.shape.components,
            if self.local.shape.disjoint_cliques {
                ", disjoint cliques"
            } else {
                ""
            },
            if self.local.uniform {
                ""
            } else {
                ", not uniform"
            }
        )?;
        if self.classification.gdrg.is_empty() {
            writeln!(f, "gdrg            none")?;
        }
        for fc in &self.classification.gdrg {
            writeln!(f, "gdrg            {}", params_text(fc))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrays::parse_array;
    use crate::graphs::hamming;

    #[test]
    fn analyze_hamming() {
        let a = parse_array("{6,4,2;1,2,3}").unwrap();
        let r = analyze("{6,4,2;1,2,3}", &a, false).unwrap();
        assert!(r.spectrum.ok().unwrap().theta_min.is_exactly(-3));
        match &r.geometry {
            GeometrySection::Solved {
                tau,
                psi,
                violations,
                ..
            } => {
                assert_eq!(tau, &[1, 2, 3]);
                assert_eq!(psi, &[1, 1, 1]);
                assert!(violations.is_empty());
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(r.classification.gdrg[0].case.label(), "gdrg-viii");
        assert!(r.anomalies().is_empty());
        let j1 = serde_json::to_string(&r).unwrap();
        let j2 = serde_json::to_string(&analyze("{6,4,2;1,2,3}", &a, false).unwrap()).unwrap();
        assert_eq!(j1, j2);
        assert!(!j1.contains("timing"));
        let text = r.to_string();
        assert!(text.contains("gdrg-viii (alpha=1, beta=1)"));
    }

    #[test]
    fn analyze_ruled_out() {
        let a = parse_array("{55,36,11;1,4,45}").unwrap();
        let r = analyze("x", &a, true).unwrap();
        assert_eq!(r.ruleout.verdict, Verdict::Nonexistent);
        assert!(matches!(
            r.geometry,
            GeometrySection::Solved {
                theta_min_is_minus3: false,
                ..
            } | GeometrySection::Inconsistent { .. }
        ));
        assert!(r.timing.is_some());
        assert!(r.anomalies().is_empty());
    }

    #[test]
    fn table7_rows() {
        let rows = table7();
        assert_eq!(rows.len(), 7);
        assert!(rows
            .iter()
            .all(|r| r.verdict.verdict == Verdict::Nonexistent));
        let j = serde_json::to_value(&rows[6]).unwrap();
        assert_eq!(j["mu_bound"], "61/6");
        assert_eq!(j["verdict"], "nonexistent");
    }

    #[test]
    fn graph_report() {
        let g = hamming(3, 3).unwrap();
        let r = verify_graph(&g, Execution::Sequential).unwrap();
        assert_eq!(r.array.to_string(), "{6,4,2;1,2,3}");
        assert!(r.claw4.is_none());
        assert!(r.cover.ok().is_some());
        assert!(r.lines.ok().is_some());
        assert_eq!(r.claw_geometry_agree, Some(true));
        let par = verify_graph(&g, Execution::Parallel).unwrap();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            serde_json::to_string(&par).unwrap()
        );
    }
}
