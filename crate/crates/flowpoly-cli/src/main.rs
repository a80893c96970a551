//! Command line front end: reads a graph description from a JSON file (or
//! stdin), runs the requested pipeline from the flowpoly library, and prints
//! a report to stdout.
//!
//! Reports are JSON by default (`--format text` switches to a plain
//! rendering). Output is deterministic: identical invocations print identical
//! bytes regardless of `--jobs`. Errors go to stderr as a JSON object with an
//! `error` field, and the exit code classifies them: 0 success, 1 a
//! verification or cross-method failure, 2 bad input, 3 a resource cap,
//! 4 an internal invariant violation.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flowpoly::counting::{
    integral_flow_all, integral_flow_poly, local_flow_polys, modular_flow_all, modular_flow_poly,
    tutte_specializations, verify, IntegralMethod, MethodReport, ModularMethod,
};
use flowpoly::flowspace::{lift_modular_flow, FlowVector};
use flowpoly::multigraph::MultiGraph;
use flowpoly::orientation::{
    enumerate_orientations, eulerian_classes, totally_cyclic_orientations, Orientation,
};
use flowpoly::{Caps, Error};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "flowpoly",
    version,
    about = "Exact flow polynomials, orientation censuses, and identity checks for multigraphs"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads for the parallel pipelines (0 picks the default).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Largest edge count the enumerating pipelines accept.
    #[arg(long, global = true, env = "FLOWPOLY_MAX_EDGES", default_value_t = 20)]
    max_edges: usize,

    /// Largest number of flows a single enumeration may visit.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    max_enumeration: u128,

    /// Largest number of edge subsets a subset pipeline may visit.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    max_subsets: u128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Structural summary: components, ranks, bridges, spanning forest.
    Info {
        /// Graph JSON file, or `-` for stdin.
        graph: PathBuf,
    },
    /// Tutte polynomial with its orientation-counting specializations.
    Tutte { graph: PathBuf },
    /// Modular flow polynomial by one method or all four.
    Modular {
        graph: PathBuf,
        /// tutte, subset, interp, charpoly, or all.
        #[arg(long, default_value = "all")]
        method: String,
    },
    /// Nowhere-zero integer flow polynomial by one method or both.
    Integral {
        graph: PathBuf,
        /// sum-orientations, interp, or all.
        #[arg(long, default_value = "all")]
        method: String,
    },
    /// Open and closed counting polynomials of one orientation.
    Local {
        graph: PathBuf,
        /// Orientation bits, one character per edge: 0 keeps the listed
        /// direction, 1 reverses it.
        #[arg(long)]
        orientation: String,
    },
    /// Orientation census, optionally restricted or grouped into classes.
    Orientations {
        graph: PathBuf,
        /// List only totally cyclic orientations.
        #[arg(long)]
        totally_cyclic: bool,
        /// Group the census into Eulerian equivalence classes.
        #[arg(long)]
        classes: bool,
    },
    /// Lift a nowhere-zero modular flow to a nowhere-zero integer flow.
    Lift {
        graph: PathBuf,
        /// Reference orientation bits for the flow coordinates.
        #[arg(long)]
        orientation: String,
        /// Flow values, e.g. `[1,2]`.
        #[arg(long)]
        flow: String,
        /// Modulus q; values must lie strictly between 0 and q.
        #[arg(long = "mod")]
        modulus: i64,
    },
    /// Re-derive every identity on one graph and report pass/fail lines.
    Verify {
        graph: PathBuf,
        /// Largest modulus for the lifting and decomposition checks.
        #[arg(long, default_value_t = 3)]
        qmax: i64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let caps = Caps {
        max_edges: cli.global.max_edges,
        max_enumeration: cli.global.max_enumeration,
        max_subsets: cli.global.max_subsets,
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.jobs)
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            report_error(cli.global.format, &Error::Domain(format!("thread pool: {e}")));
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(&cli.command, cli.global.format, &caps)) {
        Ok(code) => code,
        Err(e) => {
            report_error(cli.global.format, &e);
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Domain(_) => 2,
        Error::ResourceLimit { .. } => 3,
        Error::Invariant(_) => 4,
    }
}

fn report_error(format: Format, e: &Error) {
    let kind = match e {
        Error::Parse(_) => "parse",
        Error::Domain(_) => "domain",
        Error::ResourceLimit { .. } => "resource-limit",
        Error::Invariant(_) => "invariant",
    };
    match format {
        Format::Json => {
            let body = json!({ "error": { "kind": kind, "message": e.to_string() } });
            eprintln!("{}", serde_json::to_string_pretty(&body).expect("error report"));
        }
        Format::Text => eprintln!("error: {e}"),
    }
}

fn load_graph(path: &PathBuf) -> flowpoly::Result<MultiGraph> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
            .map_err(|e| Error::Parse(format!("reading stdin: {e}")))?
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("reading {}: {e}", path.display())))?
    };
    MultiGraph::parse_json(&text)
}

fn emit(format: Format, body: &Value, text: String) {
    match format {
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(body).expect("report"));
        }
        Format::Text => println!("{text}"),
    }
}

fn samples_json(samples: &Option<Vec<(i64, u64)>>) -> Value {
    match samples {
        None => Value::Null,
        Some(s) => json!(s),
    }
}

fn method_json(report: &MethodReport) -> Value {
    json!({
        "method": report.method,
        "poly": report.poly.to_json(),
        "samples": samples_json(&report.samples),
    })
}

fn method_text(report: &MethodReport) -> String {
    let mut line = format!("{:>16}: {}", report.method, report.poly);
    if let Some(samples) = &report.samples {
        let pairs: Vec<String> = samples
            .iter()
            .map(|(q, c)| format!("{q} -> {c}"))
            .collect();
        let _ = write!(line, "   [{}]", pairs.join(", "));
    }
    line
}

fn run(command: &Command, format: Format, caps: &Caps) -> flowpoly::Result<ExitCode> {
    match command {
        Command::Info { graph } => {
            let g = load_graph(graph)?;
            let forest = g.maximal_spanning_forest();
            let body = json!({
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "components": g.components().count,
                "rank": g.rank(),
                "cycle_rank": g.cycle_rank(),
                "bridges": g.bridges().indices(),
                "loops": g.loops().indices(),
                "bridgeless": g.is_bridgeless(),
                "forest_edges": forest.tree().indices(),
                "cotree_edges": forest.cotree(),
            });
            let text = format!(
                "{} vertices, {} edges, {} components\nrank {}, cycle rank {}\nbridges {:?}, loops {:?}\nforest {:?}, co-tree {:?}",
                g.vertex_count(),
                g.edge_count(),
                g.components().count,
                g.rank(),
                g.cycle_rank(),
                g.bridges().indices(),
                g.loops().indices(),
                forest.tree().indices(),
                forest.cotree(),
            );
            emit(format, &body, text);
            Ok(ExitCode::SUCCESS)
        }
        Command::Tutte { graph } => {
            let g = load_graph(graph)?;
            let s = tutte_specializations(&g, caps)?;
            let body = json!({
                "tutte": s.tutte.to_json(),
                "class_count": s.class_count.to_string(),
                "totally_cyclic_count": s.totally_cyclic_count.to_string(),
                "modular": s.modular.to_json(),
                "closed_modular": s.closed_modular.to_json(),
            });
            let text = format!(
                "T(x, y) = {}\nT(0, 1) = {} Eulerian classes\nT(0, 2) = {} totally cyclic orientations\nmodular flow polynomial {}\nclosed companion {}",
                s.tutte, s.class_count, s.totally_cyclic_count, s.modular, s.closed_modular
            );
            emit(format, &body, text);
            Ok(ExitCode::SUCCESS)
        }
        Command::Modular { graph, method } => {
            let g = load_graph(graph)?;
            if method == "all" {
                let cmp = modular_flow_all(&g, caps)?;
                let body = json!({
                    "methods": cmp.reports.iter().map(method_json).collect::<Vec<_>>(),
                    "agreed": cmp.agreed,
                    "poly": cmp.poly().to_json(),
                });
                let mut text = cmp
                    .reports
                    .iter()
                    .map(method_text)
                    .collect::<Vec<_>>()
                    .join("\n");
                let _ = write!(
                    text,
                    "\n{}",
                    if cmp.agreed { "all methods agree" } else { "METHODS DISAGREE" }
                );
                emit(format, &body, text);
                Ok(if cmp.agreed {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                })
            } else {
                let report = modular_flow_poly(&g, method.parse::<ModularMethod>()?, caps)?;
                emit(format, &method_json(&report), method_text(&report));
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Integral { graph, method } => {
            let g = load_graph(graph)?;
            if method == "all" {
                let cmp = integral_flow_all(&g, caps)?;
                let body = json!({
                    "methods": cmp.reports.iter().map(method_json).collect::<Vec<_>>(),
                    "agreed": cmp.agreed,
                    "poly": cmp.poly().to_json(),
                });
                let mut text = cmp
                    .reports
                    .iter()
                    .map(method_text)
                    .collect::<Vec<_>>()
                    .join("\n");
                let _ = write!(
                    text,
                    "\n{}",
                    if cmp.agreed { "all methods agree" } else { "METHODS DISAGREE" }
                );
                emit(format, &body, text);
                Ok(if cmp.agreed {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                })
            } else {
                let report = integral_flow_poly(&g, method.parse::<IntegralMethod>()?, caps)?;
                emit(format, &method_json(&report), method_text(&report));
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Local { graph, orientation } => {
            let g = load_graph(graph)?;
            let rho = Orientation::from_bitstring(orientation, g.edge_count())?;
            let locals = local_flow_polys(&g, &rho, caps)?;
            let body = json!({
                "orientation": rho.to_bitstring(),
                "totally_cyclic": locals.totally_cyclic,
                "open": locals.open.to_json(),
                "open_samples": locals.open_samples,
                "closed": locals.closed.to_json(),
                "closed_samples": locals.closed_samples,
            });
            let text = format!(
                "orientation {} ({})\nopen   {}\nclosed {}",
                rho.to_bitstring(),
                if locals.totally_cyclic { "totally cyclic" } else { "has a directed cut" },
                locals.open,
                locals.closed
            );
            emit(format, &body, text);
            Ok(ExitCode::SUCCESS)
        }
        Command::Orientations {
            graph,
            totally_cyclic,
            classes,
        } => {
            let g = load_graph(graph)?;
            if *classes {
                let all = eulerian_classes(&g, *totally_cyclic, caps)?;
                let class_json: Vec<Value> = all
                    .iter()
                    .map(|c| {
                        json!({
                            "representative": c.representative.to_bitstring(),
                            "size": c.size(),
                            "totally_cyclic": c.totally_cyclic,
                            "members": c
                                .members
                                .iter()
                                .map(|m| m.to_bitstring())
                                .collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                let count: usize = all.iter().map(|c| c.size()).sum();
                let body = json!({
                    "classes": class_json,
                    "class_count": all.len(),
                    "count": count,
                });
                let mut text = format!("{} orientations in {} classes", count, all.len());
                for c in &all {
                    let _ = write!(
                        text,
                        "\n[{}] size {}{}: {}",
                        c.representative.to_bitstring(),
                        c.size(),
                        if c.totally_cyclic { ", totally cyclic" } else { "" },
                        c.members
                            .iter()
                            .map(|m| m.to_bitstring())
                            .collect::<Vec<_>>()
                            .join(" ")
                    );
                }
                emit(format, &body, text);
            } else {
                let listed = if *totally_cyclic {
                    totally_cyclic_orientations(&g, caps)?
                } else {
                    enumerate_orientations(&g, caps)?
                };
                let bits: Vec<String> = listed.iter().map(|o| o.to_bitstring()).collect();
                let body = json!({ "count": bits.len(), "orientations": bits });
                let text = format!(
                    "{} orientations\n{}",
                    listed.len(),
                    listed
                        .iter()
                        .map(|o| o.to_bitstring())
                        .collect::<Vec<_>>()
                        .join(" ")
                );
                emit(format, &body, text);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Lift {
            graph,
            orientation,
            flow,
            modulus,
        } => {
            let g = load_graph(graph)?;
            let eps = Orientation::from_bitstring(orientation, g.edge_count())?;
            let values = FlowVector::parse_values(flow)?;
            let modular = FlowVector::modular(values, *modulus)?;
            let result = lift_modular_flow(&g, &eps, &modular, caps)?;
            let body = json!({
                "input": modular.to_json(),
                "orientation": eps.to_bitstring(),
                "flow": result.flow.to_json(),
                "final_orientation": result.orientation.to_bitstring(),
                "iterations": result.iterations,
                "eta": result.final_eta,
            });
            let text = format!(
                "lift of {:?} (mod {}) under {}: {:?} after {} flips",
                modular.values(),
                modulus,
                eps.to_bitstring(),
                result.flow.values(),
                result.iterations
            );
            emit(format, &body, text);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { graph, qmax } => {
            let g = load_graph(graph)?;
            let report = verify(&g, *qmax, caps)?;
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| serde_json::to_value(c).expect("check serializes"))
                .collect();
            let body = json!({
                "summary": serde_json::to_value(&report.summary).expect("summary serializes"),
                "q_max": report.q_max,
                "checks": checks,
                "all_passed": report.all_passed,
            });
            let mut text = String::new();
            for c in &report.checks {
                let _ = writeln!(
                    text,
                    "{} {}{}  {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    if c.hypothesis_met { "" } else { " (hypothesis not met, trivial)" },
                    c.detail
                );
            }
            let _ = write!(
                text,
                "{}",
                if report.all_passed { "all checks passed" } else { "SOME CHECKS FAILED" }
            );
            emit(format, &body, text);
            Ok(if report.all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
