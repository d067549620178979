use std::io::Write;
use std::process::{Command, Output, Stdio};

fn geodrg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geodrg"))
        .args(args)
        .output()
        .unwrap()
}

fn geodrg_stdin(args: &[&str], input: &[u8], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_geodrg"));
    cmd.args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    if let Some(t) = threads {
        cmd.env("DRG_THREADS", t);
    }
    let mut child = cmd.spawn().unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_hamming() {
    let out = geodrg(&["analyze", "{6,4,2;1,2,3}", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    assert_eq!(j["derived"]["v"], 27);
    assert_eq!(j["spectrum"]["theta_min"]["value"], "-3");
    assert_eq!(j["ruleout"]["verdict"], "inconclusive");
    assert_eq!(j["classification"]["gdrg"][0]["case"], "gdrg-viii");
}

#[test]
fn analyze_ruled_out_array() {
    let out = geodrg(&["analyze", "{55,36,11;1,4,45}", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    assert_eq!(j["ruleout"]["verdict"], "nonexistent");
    assert_eq!(j["window"]["satisfied"], true);
    assert_eq!(j["classification"]["maincor"]["status"], "excluded");
}

#[test]
fn infeasible_array_exits_2() {
    let out = geodrg(&["analyze", "{3,2;1,4}"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let out = geodrg(&["classify", "{1,2,3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table7_json() {
    let out = geodrg(&["ruleout", "--table7", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    let rows = j.as_array().unwrap();
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r["verdict"] == "nonexistent"));
    assert_eq!(rows[6]["label"], "vii");
    assert_eq!(rows[6]["mu_bound"], "61/6");
}

#[test]
fn classify_text() {
    let out = geodrg(&["classify", "{9,4;1,6}"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("gdrg-iii alpha=4"), "{text}");
}

#[test]
fn families_small() {
    let out = geodrg(&["families", "--all", "--max-k", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out).as_array().unwrap().len(), 8);
    let out = geodrg(&[
        "families",
        "--case",
        "maincor-vi",
        "--max-k",
        "60",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let cases = json(&out);
    assert!(cases
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["case"] == "maincor-vi"));
    let out = geodrg(&["families", "--case", "gdrg-xiii", "--max-k", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn build_then_verify() {
    let built = geodrg(&["graph", "build", "hamming", "3", "3"]);
    assert_eq!(built.status.code(), Some(0));
    let out = geodrg_stdin(&["graph", "verify", "-", "--json"], &built.stdout, None);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let j = json(&out);
    assert_eq!(j["vertices"], 27);
    assert_eq!(j["claw4"], serde_json::Value::Null);
    assert_eq!(j["claw_geometry_agree"], true);
}

#[test]
fn halved_foster() {
    let dir = tempfile::tempdir().unwrap();
    let foster = dir.path().join("foster.txt");
    let halved = dir.path().join("halved.txt");
    let f = foster.to_str().unwrap();
    let h = halved.to_str().unwrap();
    assert_eq!(
        geodrg(&["graph", "build", "lcf", "foster", "--out", f])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        geodrg(&["graph", "halve", f, "0", "--out", h])
            .status
            .code(),
        Some(0)
    );
    let out = geodrg(&["graph", "verify", h, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    assert_eq!(j["vertices"], 45);
    assert_eq!(j["classification"]["gdrg"][0]["case"], "gdrg-ix");
}

#[test]
fn non_drg_and_missing_file() {
    let path4 = b"p graph 4 3\ne 0 1\ne 1 2\ne 2 3\n";
    let out = geodrg_stdin(&["graph", "verify", "-"], path4, None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not distance-regular"));
    let out = geodrg_stdin(&["graph", "verify", "-"], b"4 3\n0 1\n", None);
    assert_eq!(out.status.code(), Some(2));
    let out = geodrg(&["graph", "verify", "/definitely/not/here.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_independent_of_thread_count() {
    let built = geodrg(&["graph", "build", "johnson", "7", "3"]).stdout;
    let one = geodrg_stdin(&["graph", "verify", "-", "--json"], &built, Some("1"));
    let four = geodrg_stdin(&["graph", "verify", "-", "--json"], &built, Some("4"));
    let seq = geodrg_stdin(
        &["--sequential", "graph", "verify", "-", "--json"],
        &built,
        None,
    );
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, seq.stdout);
    assert_eq!(one.status.code(), four.status.code());
}
