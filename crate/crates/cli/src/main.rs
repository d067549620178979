//! `geodrg`: analyse intersection arrays and verify small distance-regular
//! graphs.
//!
//! Exit codes: 0 success, 2 bad input, 3 anomaly (a result that
//! contradicts the classification or a table row that fails to reproduce).

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use geodrg::arrays::{parse_array_with, ValidationOptions};
use geodrg::classify::{self, CaseId, Enumeration, MainCorOutcome};
use geodrg::claws::{ruleout, Verdict};
use geodrg::graphs::{self, Graph, GraphKind, NamedLcf};
use geodrg::report::{self, Classification};
use geodrg::{exec, Execution, IntersectionArray};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "geodrg",
    version,
    about = "Geometric distance-regular graphs with smallest eigenvalue -3"
)]
struct Cli {
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis of one intersection array.
    Analyze {
        array: String,
        #[command(flatten)]
        input: InputOpts,
        #[arg(long)]
        json: bool,
        /// Include wall-clock timing in the report.
        #[arg(long)]
        timing: bool,
    },
    /// The 4-claw nonexistence test, for one array or the built-in table.
    Ruleout {
        #[arg(required_unless_present = "table7", conflicts_with = "table7")]
        array: Option<String>,
        #[arg(long)]
        table7: bool,
        #[command(flatten)]
        input: InputOpts,
        #[arg(long)]
        json: bool,
    },
    /// Match an array against both classifications.
    Classify {
        array: String,
        #[command(flatten)]
        input: InputOpts,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate family instances.
    Families {
        #[arg(long, required_unless_present = "all", conflicts_with = "all")]
        case: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        max_k: u64,
        /// Diameter cap for the families that are infinite in D.
        #[arg(long, default_value_t = 10)]
        max_d: u64,
        #[arg(long)]
        json: bool,
    },
    /// Build, transform and verify concrete graphs.
    #[command(subcommand)]
    Graph(GraphCommand),
}

#[derive(Args)]
struct InputOpts {
    /// Accept arrays with increasing b or decreasing c.
    #[arg(long)]
    no_monotonicity: bool,
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Construct a graph and write it as an edge list.
    Build {
        /// hamming D Q | johnson N E | complete-bipartite A B | kneser-6-2 |
        /// lcf NAME | lcf SHIFTS REPEATS (SHIFTS comma separated, bracketed if the
        /// first is negative)
        #[arg(required = true, num_args = 1..)]
        spec: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Halved graph on one side of a bipartite graph.
    Halve {
        /// Edge-list file, or - for stdin.
        input: String,
        #[arg(default_value_t = 0)]
        side: u8,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance-i graph.
    Distance {
        input: String,
        i: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance-regularity, claws, Delsarte cover, lines and classification.
    Verify {
        input: String,
        #[arg(long)]
        json: bool,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Failure {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }

    fn anomaly(message: impl ToString) -> Failure {
        Failure {
            code: 3,
            message: message.to_string(),
        }
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("DRG_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = exec::configure_threads(n) {
                    eprintln!("geodrg: DRG_THREADS: {e}");
                }
            }
            _ => {
                eprintln!("geodrg: DRG_THREADS must be a positive integer, got {threads:?}");
                return ExitCode::from(2);
            }
        }
    }
    let policy = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match run(cli.command, policy) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("geodrg: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command, policy: Execution) -> CliResult {
    match command {
        Command::Analyze {
            array,
            input,
            json,
            timing,
        } => {
            let arr = parse(&array, &input)?;
            let r = report::analyze(&array, &arr, timing).map_err(Failure::input)?;
            emit(&r, json)?;
            anomalies(r.anomalies())
        }
        Command::Ruleout {
            array: Some(text),
            input,
            json,
            ..
        } => {
            let arr = parse(&text, &input)?;
            let v = ruleout(&arr);
            if json {
                print_json(&v)
            } else {
                print_text(&report::Table7Row {
                    label: "input",
                    array: arr,
                    verdict: v,
                })
            }
        }
        Command::Ruleout { json, .. } => {
            let rows = report::table7();
            if json {
                print_json(&rows)?;
            } else {
                for row in &rows {
                    print_text(row)?;
                }
            }
            let failed: Vec<_> = rows
                .iter()
                .filter(|r| r.verdict.verdict != Verdict::Nonexistent)
                .map(|r| r.label)
                .collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::anomaly(format!(
                    "rows not ruled out: {}",
                    failed.join(", ")
                )))
            }
        }
        Command::Classify { array, input, json } => {
            let arr = parse(&array, &input)?;
            let c = ClassifyOutput {
                array: arr.clone(),
                classification: Classification {
                    gdrg: classify::classify_gdrg(&arr),
                    maincor: classify::classify_maincor(&arr),
                },
            };
            if json {
                print_json(&c)?;
            } else {
                let mut text = String::new();
                for fc in &c.classification.gdrg {
                    text += &format!("{} {}\n", fc.case, params_line(&fc.params));
                }
                match &c.classification.maincor {
                    MainCorOutcome::NotInWindow => text += "maincor: not in window\n",
                    MainCorOutcome::Matched { cases } => {
                        for fc in cases {
                            text += &format!("{} {}\n", fc.case, params_line(&fc.params));
                        }
                    }
                    MainCorOutcome::Excluded { reason } => {
                        text += &format!("maincor: excluded, {reason}\n")
                    }
                    MainCorOutcome::ClassificationGap => text += "maincor: CLASSIFICATION GAP\n",
                }
                if c.classification.gdrg.is_empty() {
                    text.insert_str(0, "gdrg: none\n");
                }
                write_out(&text)?;
            }
            if c.classification.maincor.is_gap() {
                return Err(Failure::anomaly(format!(
                    "{arr} is in the window but matches no case"
                )));
            }
            Ok(())
        }
        Command::Families {
            case,
            all: _,
            max_k,
            max_d,
            json,
        } => {
            if max_k < 3 {
                return Err(Failure::input("--max-k must be at least 3"));
            }
            let e: Enumeration = match case {
                Some(label) => {
                    let case: CaseId = label.parse().map_err(Failure::input)?;
                    classify::enumerate_label(case, max_k, max_d, policy)
                }
                None => classify::enumerate_families(max_k, max_d, policy),
            };
            if json {
                print_json(&e.cases)?;
            } else {
                let mut text = String::new();
                for fc in &e.cases {
                    text += &format!(
                        "{:<12} {:<32} {}\n",
                        fc.case.label(),
                        params_line(&fc.params),
                        fc.array
                    );
                }
                write_out(&text)?;
            }
            if e.rejected.is_empty() {
                Ok(())
            } else {
                for r in &e.rejected {
                    eprintln!(
                        "rejected {} {}: {}",
                        r.instance.case, r.instance.array, r.reason
                    );
                }
                Err(Failure::anomaly(format!(
                    "{} generated instances failed validation",
                    e.rejected.len()
                )))
            }
        }
        Command::Graph(g) => run_graph(g, policy),
    }
}

#[derive(Serialize)]
struct ClassifyOutput {
    array: IntersectionArray,
    #[serde(flatten)]
    classification: Classification,
}

fn run_graph(command: GraphCommand, policy: Execution) -> CliResult {
    match command {
        GraphCommand::Build { spec, out } => {
            let kind = graph_kind(&spec)?;
            let g = graphs::build(&kind).map_err(Failure::input)?;
            write_graph(&g, out)
        }
        GraphCommand::Halve { input, side, out } => {
            let g = load_graph(&input)?;
            let h = graphs::halved_graph(&g, side, policy).map_err(Failure::input)?;
            write_graph(&h, out)
        }
        GraphCommand::Distance { input, i, out } => {
            let g = load_graph(&input)?;
            let h = graphs::distance_graph(&g, i, policy).map_err(Failure::input)?;
            write_graph(&h, out)
        }
        GraphCommand::Verify { input, json } => {
            let g = load_graph(&input)?;
            let r = report::verify_graph(&g, policy).map_err(Failure::input)?;
            emit(&r, json)?;
            anomalies(r.anomalies())
        }
    }
}

fn graph_kind(spec: &[String]) -> Result<GraphKind, Failure> {
    let num = |s: &String| -> Result<usize, Failure> {
        s.parse()
            .map_err(|_| Failure::input(format!("expected a nonnegative integer, got {s:?}")))
    };
    let args: Vec<&str> = spec.iter().map(String::as_str).collect();
    Ok(match args.as_slice() {
        ["hamming", _, _] => GraphKind::Hamming {
            d: num(&spec[1])?,
            q: num(&spec[2])?,
        },
        ["johnson", _, _] => GraphKind::Johnson {
            n: num(&spec[1])?,
            e: num(&spec[2])?,
        },
        ["complete-bipartite" | "complete_bipartite", _, _] => GraphKind::CompleteBipartite {
            a: num(&spec[1])?,
            b: num(&spec[2])?,
        },
        ["kneser-6-2" | "kneser_6_2"] => GraphKind::Kneser62,
        ["lcf", name] => match NamedLcf::from_name(name) {
            Some(g) => GraphKind::Named(g),
            None => {
                let names: Vec<_> = NamedLcf::ALL.iter().map(|g| g.name()).collect();
                return Err(Failure::input(format!(
                    "unknown LCF graph {name:?}; known: {}",
                    names.join(", ")
                )));
            }
        },
        ["lcf", shifts, _] => {
            let shifts = shifts
                .trim_matches(|c| c == '[' || c == ']')
                .split(',')
                .map(|s| s.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::input(format!("bad LCF shift list: {e}")))?;
            GraphKind::Lcf {
                shifts,
                repeats: num(&spec[2])?,
            }
        }
        _ => {
            return Err(Failure::input(format!(
                "unrecognised graph kind {:?}",
                spec.join(" ")
            )))
        }
    })
}

fn load_graph(input: &str) -> Result<Graph, Failure> {
    if input == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::input(format!("stdin: {e}")))?;
        graphs::parse_edgelist(&text).map_err(|e| Failure::input(format!("stdin: {e}")))
    } else {
        graphs::from_edgelist(input.as_ref()).map_err(Failure::input)
    }
}

fn write_graph(g: &Graph, out: Option<PathBuf>) -> CliResult {
    match out {
        Some(path) => std::fs::write(&path, g.to_edgelist())
            .map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => write_out(&g.to_edgelist()),
    }
}

fn parse(text: &str, opts: &InputOpts) -> Result<IntersectionArray, Failure> {
    let options = ValidationOptions {
        monotonicity: !opts.no_monotonicity,
    };
    parse_array_with(text, options).map_err(Failure::input)
}

fn params_line(p: &classify::Params) -> String {
    p.iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn anomalies(list: Vec<String>) -> CliResult {
    if list.is_empty() {
        Ok(())
    } else {
        Err(Failure::anomaly(list.join("; ")))
    }
}

fn emit<T: Serialize + std::fmt::Display>(value: &T, json: bool) -> CliResult {
    if json {
        print_json(value)
    } else {
        print_text(value)
    }
}

fn print_json<T: Serialize + ?Sized>(value: &T) -> CliResult {
    let text = serde_json::to_string_pretty(value).map_err(Failure::anomaly)?;
    write_out(&(text + "\n"))
}

fn print_text<T: std::fmt::Display>(value: &T) -> CliResult {
    write_out(&value.to_string())
}

fn write_out(text: &str) -> CliResult {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Ok(()) => Ok(()),
        // closed pipe: the reader has what it wanted
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(Failure::input(format!("stdout: {e}"))),
    }
}
