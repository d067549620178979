//! End-to-end acceptance checks. Each test prints one `PASS`/`FAIL` line
//! (visible with `--nocapture`) and fails if its criterion does not hold.

use std::time::{Duration, Instant};

use geodrg::arrays::parse_array;
use geodrg::classify::{
    classify_gdrg, classify_maincor, enumerate_case, gen_case, validate, CaseId, Params,
};
use geodrg::claws::{ruleout, table_seven, window_condition, PREMISE_THETA};
use geodrg::geometry::solve_tau_psi;
use geodrg::graphs::{
    self, check_drg, delsarte_cover, find_claw, halved_graph, verify_lines, Graph, NamedLcf,
};
use geodrg::spectrum::{char_poly, eigenvalues, is_theta_min_by_sturm, is_theta_min_minus3};
use geodrg::{Execution, IntersectionArray, MainCorOutcome, Theorem, Verdict};
use nalgebra::DMatrix;
use num_traits::ToPrimitive;

const EXEC: Execution = Execution::Parallel;
/// Matching tolerance between floating eigenvalues and certified enclosures.
const SPECTRAL_TOL: f64 = 1e-9;
/// Floating eigenvalues closer than this are taken as one distinct value.
const CLUSTER_GAP: f64 = 1e-6;
const MAX_K: u64 = 150;
const MAX_D: u64 = 10;

fn arr(s: &str) -> IntersectionArray {
    parse_array(s).unwrap()
}

fn params(p: &[(&str, u64)]) -> Params {
    p.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

/// Collects failures so that every sub-check is reported, then prints the
/// verdict line and panics on failure.
struct Check {
    name: &'static str,
    failures: Vec<String>,
    start: Instant,
}

impl Check {
    fn new(name: &'static str) -> Check {
        Check {
            name,
            failures: Vec::new(),
            start: Instant::now(),
        }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn within(&mut self, limit: Duration, since: Instant, what: &str) {
        let took = since.elapsed();
        self.expect(took < limit, || {
            format!("{what} took {took:?}, limit {limit:?}")
        });
    }

    fn finish(self) {
        let took = self.start.elapsed();
        if self.failures.is_empty() {
            println!("PASS {} ({took:.2?})", self.name);
        } else {
            println!("FAIL {} ({took:.2?})", self.name);
            for f in &self.failures {
                println!("     {f}");
            }
            panic!(
                "{}: {} failure(s)\n{}",
                self.name,
                self.failures.len(),
                self.failures.join("\n")
            );
        }
    }
}

#[test]
fn table_seven_reproduced() {
    let mut c = Check::new("table seven: all rows nonexistent");
    let t = Instant::now();
    let rows = table_seven();
    c.expect(rows.len() == 7, || format!("{} rows", rows.len()));
    for (label, a) in rows {
        let v = ruleout(&a);
        c.expect(v.verdict == Verdict::Nonexistent, || {
            format!("row {label}: {:?}", v.verdict)
        });
        for p in &v.premises {
            c.expect(p.holds, || {
                format!("row {label}: premise {} fails ({})", p.name, p.value)
            });
        }
        let p3 = char_poly(&a).eval(-3);
        c.expect(p3 != 0.into(), || format!("row {label}: p(-3) = 0"));
        c.expect(
            v.premise(PREMISE_THETA)
                .is_some_and(|p| p.value.starts_with(&format!("p(-3) = {p3}"))),
            || format!("row {label}: theta premise does not show p(-3)"),
        );
        let k = a.k() as i64;
        let a1 = a.a(1) as i64;
        c.expect(3 * k > 8 * (a1 + 1), || {
            format!("row {label}: k not above 8(a1+1)/3")
        });
        c.expect(6 * (a.c(2) as i64) < 4 * a1 + 10 - k, || {
            format!("row {label}: c2 bound")
        });
    }
    c.within(Duration::from_secs(1), t, "table seven");
    c.finish();
}

#[test]
fn known_good_control() {
    let mut c = Check::new("control {45,30,7;1,2,27}");
    let a = arr("{45,30,7;1,2,27}");
    c.expect(ruleout(&a).verdict == Verdict::Inconclusive, || {
        "not inconclusive".into()
    });
    let spec = eigenvalues(&a).unwrap();
    c.expect(spec.theta_min.is_exactly(-3), || {
        format!("theta_min = {}", spec.theta_min)
    });
    let g = classify_gdrg(&a);
    c.expect(
        g.iter().any(|f| {
            f.case == CaseId::gdrg(8) && f.params == params(&[("alpha", 14), ("beta", 9)])
        }),
        || {
            format!(
                "classified as {:?}",
                g.iter().map(|f| (f.case, &f.params)).collect::<Vec<_>>()
            )
        },
    );
    c.finish();
}

/// Closed-form arrays of the Hamming and Johnson graphs.
fn hamming_array(d: u64, q: u64) -> IntersectionArray {
    let b = (0..d).map(|i| (d - i) * (q - 1)).collect();
    let c = (1..=d).collect();
    IntersectionArray::new(b, c).unwrap()
}

fn johnson_array(n: u64, e: u64) -> IntersectionArray {
    let b = (0..e).map(|i| (e - i) * (n - e - i)).collect();
    let c = (1..=e).map(|i| i * i).collect();
    IntersectionArray::new(b, c).unwrap()
}

fn witness_pipeline(c: &mut Check, name: &str, g: &Graph, want: &IntersectionArray, size: usize) {
    match check_drg(g, EXEC) {
        Ok(a) => c.expect(&a == want, || format!("{name}: array {a}, expected {want}")),
        Err(e) => {
            c.failures.push(format!("{name}: {e}"));
            return;
        }
    }
    let claw = find_claw(g, 4, EXEC);
    c.expect(claw.is_none(), || format!("{name}: 4-claw {claw:?}"));
    match delsarte_cover(g, want, EXEC) {
        Ok(cover) => {
            c.expect(cover.clique_size == size, || {
                format!("{name}: clique size {}, expected {size}", cover.clique_size)
            });
            c.expect(cover.uniform_count() == Some(3), || {
                format!("{name}: per-vertex count {:?}", cover.uniform_count())
            });
        }
        Err(e) => c.failures.push(format!("{name}: delsarte cover: {e}")),
    }
    match verify_lines(g, want, EXEC) {
        Ok(lines) => c.expect(lines.uniform_count() == Some(3), || {
            format!("{name}: lines not 3 per vertex")
        }),
        Err(e) => c.failures.push(format!("{name}: verify_lines: {e}")),
    }
}

#[test]
fn witness_pipeline_hamming_and_johnson() {
    let mut c = Check::new("witness pipeline H(3,q), J(n,3)");
    let t = Instant::now();
    for q in 3..=5 {
        let g = graphs::hamming(3, q).unwrap();
        witness_pipeline(
            &mut c,
            &format!("H(3,{q})"),
            &g,
            &hamming_array(3, q as u64),
            q,
        );
    }
    for n in 6..=8 {
        let g = graphs::johnson(n, 3).unwrap();
        witness_pipeline(
            &mut c,
            &format!("J({n},3)"),
            &g,
            &johnson_array(n as u64, 3),
            n - 2,
        );
    }
    c.within(Duration::from_secs(30), t, "witness pipeline");
    c.finish();
}

#[test]
fn hamming_4_2_negative_control() {
    let mut c = Check::new("H(4,2): 4-claw and theta_min = -4");
    let g = graphs::hamming(4, 2).unwrap();
    c.expect(find_claw(&g, 4, EXEC).is_some(), || "no 4-claw".into());
    let a = check_drg(&g, EXEC).unwrap();
    let spec = eigenvalues(&a).unwrap();
    c.expect(spec.theta_min.is_exactly(-4), || {
        format!("theta_min = {}", spec.theta_min)
    });
    c.expect(!is_theta_min_minus3(&a), || "theta_min = -3".into());
    c.finish();
}

fn cubic_witnesses() -> Vec<(String, Graph)> {
    let mut out = vec![
        ("K33".to_string(), graphs::complete_bipartite(3, 3).unwrap()),
        ("H(3,2)".to_string(), graphs::hamming(3, 2).unwrap()),
    ];
    for l in NamedLcf::ALL {
        let (shifts, repeats) = l.shifts();
        out.push((l.name().to_string(), graphs::lcf(shifts, repeats).unwrap()));
    }
    out
}

#[test]
fn cubic_table() {
    let mut c = Check::new("cubic witnesses match gdrg-i");
    let mut seen = Vec::new();
    for (name, g) in cubic_witnesses() {
        let t = Instant::now();
        let a = match check_drg(&g, EXEC) {
            Ok(a) => a,
            Err(e) => {
                c.failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        if name == "foster" {
            c.within(Duration::from_secs(5), t, "foster verification");
        }
        c.expect(is_theta_min_by_sturm(&a, -3), || {
            format!("{name}: theta_min != -3")
        });
        let cases = classify_gdrg(&a);
        c.expect(cases.iter().any(|f| f.case == CaseId::gdrg(1)), || {
            format!("{name}: {a} not gdrg-i")
        });
        seen.push(a);
    }
    let want: Vec<IntersectionArray> = (1..=8)
        .map(|i| {
            gen_case(CaseId::gdrg(1), &params(&[("index", i)]))
                .unwrap()
                .array
        })
        .collect();
    c.expect(seen == want, || format!("arrays {seen:?}"));
    c.finish();
}

#[test]
fn halved_foster_end_to_end() {
    let mut c = Check::new("halved Foster graph");
    let (shifts, repeats) = NamedLcf::Foster.shifts();
    let foster = graphs::lcf(shifts, repeats).unwrap();
    let h = halved_graph(&foster, 0, EXEC).unwrap();
    let a = check_drg(&h, EXEC).unwrap();
    c.expect(a == arr("{6,4,2,1;1,1,4,6}"), || format!("array {a}"));
    match solve_tau_psi(&a) {
        Ok(gp) => {
            c.expect(gp.tau == [1, 1, 2, 3], || format!("tau {:?}", gp.tau));
            c.expect(gp.psi == [1, 1, 2, 2], || format!("psi {:?}", gp.psi));
        }
        Err(e) => c.failures.push(e.to_string()),
    }
    let cases = classify_gdrg(&a);
    c.expect(cases.iter().any(|f| f.case == CaseId::gdrg(9)), || {
        "not gdrg-ix".into()
    });
    c.finish();
}

#[test]
fn family_round_trip() {
    let mut c = Check::new("family round trip, k <= 150");
    let mut total = 0;
    for theorem in [Theorem::Gdrg, Theorem::Maincor] {
        for case in CaseId::all(theorem) {
            let instances = enumerate_case(case, MAX_K, MAX_D);
            c.expect(!instances.is_empty(), || format!("{case}: no instances"));
            let results = EXEC.map_slice(&instances, validate);
            for (fc, r) in instances.iter().zip(results) {
                total += 1;
                if let Err(e) = r {
                    c.failures.push(format!("{} {}: {e}", fc.case, fc.array));
                }
            }
        }
    }
    println!("     {total} instances checked");
    c.finish();
}

#[test]
fn viii_integral_spectra() {
    let mut c = Check::new("gdrg-viii spectra integral, 1 <= beta <= alpha <= 20");
    let mut irrational = Vec::new();
    for alpha in 1..=20 {
        for beta in 1..=alpha {
            let fc = gen_case(
                CaseId::gdrg(8),
                &params(&[("alpha", alpha), ("beta", beta)]),
            )
            .unwrap();
            let spec = eigenvalues(&fc.array).unwrap();
            let integers = spec
                .roots
                .iter()
                .filter(|r| r.as_rational().is_some())
                .count();
            if integers != fc.array.d() + 1 {
                irrational.push(format!("({alpha},{beta}) {}", fc.array));
            }
        }
    }
    let n = irrational.len();
    c.expect(n == 0, || {
        format!(
            "{n} of 210 arrays have irrational roots, e.g. {}",
            irrational[..n.min(5)].join(", ")
        )
    });
    c.finish();
}

#[test]
fn window_sharpness() {
    let mut c = Check::new("window sharpness");
    let j20 = johnson_array(20, 3);
    c.expect(window_condition(&j20).satisfied, || {
        "J(20,3) not in window".into()
    });
    match classify_maincor(&j20) {
        MainCorOutcome::Matched { cases } => c
            .expect(cases.iter().any(|f| f.case == CaseId::maincor(6)), || {
                "J(20,3) not maincor-vi".into()
            }),
        other => c.failures.push(format!("J(20,3): {other:?}")),
    }
    let j19 = johnson_array(19, 3);
    c.expect(j19.k() * 3 == 8 * (j19.a(1) + 1), || {
        "J(19,3) is not a tie".into()
    });
    c.expect(
        classify_maincor(&j19) == MainCorOutcome::NotInWindow,
        || "J(19,3) in window".into(),
    );
    let edge = |case: CaseId, alpha: u64| {
        let a = gen_case(case.base(), &params(&[("alpha", alpha)]))
            .unwrap()
            .array;
        (window_condition(&a).satisfied, classify_maincor(&a))
    };
    for (case, inside) in [(CaseId::maincor(2), 24), (CaseId::maincor(1), 36)] {
        let (w, m) = edge(case, inside);
        c.expect(w, || format!("{case} alpha={inside} outside window"));
        c.expect(
            matches!(&m, MainCorOutcome::Matched { cases } if cases.iter().any(|f| f.case == case)),
            || format!("{case} alpha={inside}: {m:?}"),
        );
        let (w, m) = edge(case, inside - 1);
        c.expect(!w, || format!("{case} alpha={} inside window", inside - 1));
        c.expect(m == MainCorOutcome::NotInWindow, || {
            format!("{case} alpha={}: {m:?}", inside - 1)
        });
    }
    c.finish();
}

#[test]
fn distance_three_graph_parameters() {
    let mut c = Check::new("{55,36,11;1,4,45}: v = 672, k3 = 121");
    let d = arr("{55,36,11;1,4,45}").derive().unwrap();
    c.expect(d.v.to_u64() == Some(672), || format!("v = {}", d.v));
    c.expect(d.k_shell[3].to_u64() == Some(121), || {
        format!("k3 = {}", d.k_shell[3])
    });
    c.finish();
}

fn distinct_eigenvalues(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let m = DMatrix::from_fn(n, n, |i, j| if g.adjacent(i, j) { 1.0 } else { 0.0 });
    let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for x in ev {
        match clusters.last_mut() {
            Some(cl) if x - cl.last().unwrap() < CLUSTER_GAP => cl.push(x),
            _ => clusters.push(vec![x]),
        }
    }
    clusters
        .iter()
        .map(|cl| cl.iter().sum::<f64>() / cl.len() as f64)
        .collect()
}

#[test]
fn spectral_oracle() {
    let mut c = Check::new("dense eigenvalues match certified L1 roots");
    let mut witnesses = cubic_witnesses();
    for q in 3..=5 {
        witnesses.push((format!("H(3,{q})"), graphs::hamming(3, q).unwrap()));
    }
    for n in 6..=8 {
        witnesses.push((format!("J({n},3)"), graphs::johnson(n, 3).unwrap()));
    }
    witnesses.push(("H(4,2)".into(), graphs::hamming(4, 2).unwrap()));
    witnesses.push(("Kneser(6,2)".into(), graphs::kneser_6_2().unwrap()));
    let (shifts, repeats) = NamedLcf::Foster.shifts();
    let foster = graphs::lcf(shifts, repeats).unwrap();
    witnesses.push((
        "halved Foster".into(),
        halved_graph(&foster, 0, EXEC).unwrap(),
    ));

    for (name, g) in witnesses.iter().filter(|(_, g)| g.n() <= 130) {
        let a = check_drg(g, EXEC).unwrap();
        let roots = eigenvalues(&a).unwrap().roots;
        let dense = distinct_eigenvalues(g);
        if dense.len() != roots.len() {
            c.failures.push(format!(
                "{name}: {} distinct eigenvalues, {} roots",
                dense.len(),
                roots.len()
            ));
            continue;
        }
        for (x, r) in dense.iter().zip(&roots) {
            let e = r.enclosure();
            let lo = e.lo.to_f64().unwrap() - SPECTRAL_TOL;
            let hi = e.hi.to_f64().unwrap() + SPECTRAL_TOL;
            c.expect(lo <= *x && *x <= hi, || {
                format!("{name}: {x} outside [{lo}, {hi}] ({r})")
            });
        }
    }
    c.finish();
}
