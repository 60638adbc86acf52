//! Command-line front end: load a graph and optional decomposition, pick a
//! problem from the catalog or a definition file, pick an engine, and emit
//! the optimum with an optional witness as JSON.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use lcp_core::catalog::{self, AppliedTransform, Bundle};
use lcp_core::engine::{SolveOptions, SolveReport};
use lcp_core::flow;
use lcp_core::globals::{build_size_automaton, GlobalConstraint, SizeSpec};
use lcp_core::graph::LabeledGraph;
use lcp_core::treedec::{self, EdgeTransformKind, TreeDecomposition};
use lcp_core::{io as pace, Weight};
use serde_json::{json, Map, Value};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "lcp", about = "Solver for locally checkable vertex problems on bounded-treewidth graphs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem instance.
    Solve(SolveArgs),
    /// Solve with the brute-force reference solver (same flags as solve).
    Oracle(SolveArgs),
    /// Validate a tree decomposition against a graph.
    Validate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        td: PathBuf,
    },
    /// Emit a transformed graph (power, subdivision or jagged).
    Transform {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = ["power", "subdivision", "jagged"])]
        kind: String,
        /// Exponent for the power transform.
        #[arg(long, default_value_t = 2)]
        p: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print a runtime scaling table for dominating set on paths.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [2000usize, 4000, 8000])]
        sizes: Vec<usize>,
    },
}

#[derive(Args, Clone)]
struct SolveArgs {
    /// Graph in PACE .gr format (third edge token = label).
    #[arg(long)]
    graph: PathBuf,
    /// Optional decomposition in PACE .td format (for the input graph).
    #[arg(long)]
    td: Option<PathBuf>,
    /// Catalog problem name.
    #[arg(long, conflicts_with = "dsl")]
    problem: Option<String>,
    /// Problem parameters: inline JSON or a path to a JSON file.
    #[arg(long)]
    params: Option<String>,
    /// Problem definition file in the DSL.
    #[arg(long)]
    dsl: Option<PathBuf>,
    #[arg(long, default_value = "treewidth-dp", value_parser = ["treewidth-dp", "complete-flow", "oracle"])]
    engine: String,
    /// Global constraints: inline JSON or a path, e.g.
    /// {"connected":[1],"size":[{"colors":[1],"in":[3]}]}.
    #[arg(long)]
    constraints: Option<String>,
    /// Also report an optimal coloring.
    #[arg(long)]
    witness: bool,
    /// Log one line per evaluated state (trace level).
    #[arg(long)]
    trace: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Enumeration budget for the oracle engine.
    #[arg(long)]
    budget: Option<u128>,
    /// Abort before the DP when the decomposition width exceeds this.
    #[arg(long)]
    max_width: Option<usize>,
    /// Exit with status 1 when the optimum is ERROR.
    #[arg(long)]
    fail_on_error: bool,
    /// Write the result JSON here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Solve(args) => solve_command(args, false),
        Command::Oracle(mut args) => {
            args.engine = "oracle".into();
            solve_command(args, true)
        }
        Command::Validate { graph, td } => {
            let g = load_graph(&graph)?;
            let td = load_td(&td)?;
            match treedec::validate_decomposition(&g, &td) {
                Ok(width) => {
                    println!("{}", json!({ "valid": true, "width": width }));
                    Ok(0)
                }
                Err(violation) => {
                    println!("{}", json!({ "valid": false, "violation": violation.to_string() }));
                    Ok(1)
                }
            }
        }
        Command::Transform { graph, kind, p, output } => {
            let g = load_graph(&graph)?;
            let (out, comments) = match kind.as_str() {
                "power" => {
                    if p < 1 {
                        bail!("power exponent must be positive");
                    }
                    (lcp_core::graph_power(&g, p), String::new())
                }
                "subdivision" | "jagged" => {
                    let (t, map) = if kind == "subdivision" {
                        lcp_core::transform_subdivision(&g)
                    } else {
                        lcp_core::transform_jagged(&g)
                    };
                    let mut comments = String::new();
                    for x in 0..map.len() {
                        if let lcp_core::VertexOrigin::Edge(u, v) = map.origin(x) {
                            comments.push_str(&format!("c map {} edge {} {}\n", x + 1, u + 1, v + 1));
                        }
                    }
                    (t, comments)
                }
                _ => unreachable!(),
            };
            let text = format!("{comments}{}", pace::write_gr(&out));
            match output {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::Bench { sizes } => {
            let mut prev: Option<f64> = None;
            println!("{:>10} {:>12} {:>8}", "n", "millis", "ratio");
            for n in sizes {
                let g = lcp_core::graph::path(n);
                let bundle =
                    catalog::instantiate("dominating-set", &json!({}), &g).map_err(|e| anyhow!(e))?;
                let etd = treedec::to_easy(&bundle.instance.graph, &treedec::path_decomposition(n))
                    .map_err(|e| anyhow!(e))?;
                let start = Instant::now();
                let report = lcp_core::solve(
                    &bundle.instance,
                    bundle.system.as_ref(),
                    &etd,
                    &[],
                    &SolveOptions { witness: false, ..Default::default() },
                )
                .map_err(|e| anyhow!(e))?;
                let millis = start.elapsed().as_secs_f64() * 1e3;
                let ratio = prev.map(|p| millis / p);
                println!(
                    "{:>10} {:>12.2} {:>8}",
                    n,
                    millis,
                    ratio.map_or("-".to_string(), |r| format!("{r:.2}")),
                );
                let _ = report.optimum;
                prev = Some(millis);
            }
            Ok(0)
        }
    }
}

fn load_graph(path: &PathBuf) -> Result<LabeledGraph> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    pace::parse_gr(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn load_td(path: &PathBuf) -> Result<TreeDecomposition> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    pace::parse_td(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

/// Inline JSON or a path to a JSON file.
fn load_json(arg: &str) -> Result<Value> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        serde_json::from_str(arg).context("parsing inline JSON")
    } else {
        let text = std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {arg}"))
    }
}

fn parse_constraints(arg: &Option<String>) -> Result<Vec<GlobalConstraint>> {
    let Some(arg) = arg else {
        return Ok(vec![]);
    };
    let value = load_json(arg)?;
    let obj = value
        .as_object()
        .ok_or_else(|| anyhow!("constraints must be a JSON object"))?;
    let mut out = Vec::new();
    let color_list = |v: &Value| -> Result<Vec<usize>> {
        v.as_array()
            .ok_or_else(|| anyhow!("expected an array of color ids"))?
            .iter()
            .map(|x| {
                x.as_u64()
                    .map(|n| n as usize)
                    .ok_or_else(|| anyhow!("color ids are integers"))
            })
            .collect()
    };
    for (key, v) in obj {
        match key.as_str() {
            "connected" => out.push(GlobalConstraint::Connected { colors: color_list(v)? }),
            "acyclic" => out.push(GlobalConstraint::Acyclic { colors: color_list(v)? }),
            "size" => {
                let entries: Vec<&Value> = match v {
                    Value::Array(items) => items.iter().collect(),
                    other => vec![other],
                };
                for entry in entries {
                    let colors = color_list(
                        entry
                            .get("colors")
                            .ok_or_else(|| anyhow!("size constraint needs `colors`"))?,
                    )?;
                    let spec = if let Some(set) = entry.get("in") {
                        SizeSpec::Finite(
                            set.as_array()
                                .ok_or_else(|| anyhow!("`in` must be an array"))?
                                .iter()
                                .map(|x| {
                                    x.as_u64()
                                        .map(|n| n as usize)
                                        .ok_or_else(|| anyhow!("sizes are integers"))
                                })
                                .collect::<Result<Vec<_>>>()?,
                        )
                    } else if let Some(m) = entry.get("mod") {
                        let pair = m
                            .as_array()
                            .filter(|p| p.len() == 2)
                            .ok_or_else(|| anyhow!("`mod` must be [rem, modulus]"))?;
                        SizeSpec::Residue {
                            rem: pair[0].as_u64().unwrap_or(0) as usize,
                            modulus: pair[1].as_u64().unwrap_or(0) as usize,
                        }
                    } else if entry.get("nonempty").and_then(|b| b.as_bool()) == Some(true) {
                        SizeSpec::NonEmpty
                    } else if entry.get("atMostOne").and_then(|b| b.as_bool()) == Some(true) {
                        SizeSpec::AtMostOne
                    } else {
                        bail!("size constraint needs `in`, `mod`, `nonempty` or `atMostOne`");
                    };
                    let automaton = build_size_automaton(&spec).map_err(|e| anyhow!(e))?;
                    out.push(GlobalConstraint::SizeAutomaton {
                        colors,
                        automaton: Arc::new(automaton),
                    });
                }
            }
            other => bail!("unknown constraint `{other}`"),
        }
    }
    Ok(out)
}

fn build_bundle(args: &SolveArgs, g: &LabeledGraph) -> Result<Bundle> {
    if let Some(name) = &args.problem {
        let params = match &args.params {
            Some(p) => load_json(p)?,
            None => json!({}),
        };
        catalog::instantiate(name, &params, g).map_err(|e| anyhow!(e))
    } else if let Some(dsl_path) = &args.dsl {
        let text = std::fs::read_to_string(dsl_path)
            .with_context(|| format!("reading {}", dsl_path.display()))?;
        let (instance, system) = lcp_core::dsl::build_problem(&text, g).map_err(|e| anyhow!(e))?;
        Ok(Bundle {
            instance,
            system,
            transform: AppliedTransform::None,
            constraints: vec![],
        })
    } else {
        bail!("select a problem with --problem or --dsl");
    }
}

/// Lifts or builds an easy decomposition for the bundle's (possibly
/// transformed) instance graph.
fn decomposition_for(
    bundle: &Bundle,
    input_graph: &LabeledGraph,
    user_td: &Option<TreeDecomposition>,
) -> Result<lcp_core::EasyDecomposition> {
    let instance_graph = &bundle.instance.graph;
    let td = match user_td {
        Some(td) => {
            treedec::validate_decomposition(input_graph, td)
                .map_err(|v| anyhow!("supplied decomposition invalid: {v}"))?;
            match &bundle.transform {
                AppliedTransform::None => td.clone(),
                AppliedTransform::Power(p) | AppliedTransform::LabeledPower(p) => {
                    treedec::lift_power(input_graph, td, *p)
                }
                AppliedTransform::Subdivision(_) => {
                    treedec::lift_edge_transform(input_graph, td, EdgeTransformKind::Subdivision)
                }
                AppliedTransform::Jagged(_) => {
                    treedec::lift_edge_transform(input_graph, td, EdgeTransformKind::Jagged)
                }
            }
        }
        None => treedec::heuristic_decomposition(instance_graph),
    };
    treedec::validate_decomposition(instance_graph, &td)
        .map_err(|v| anyhow!("decomposition invalid for the instance graph: {v}"))?;
    treedec::to_easy(instance_graph, &td).map_err(|e| anyhow!(e))
}

fn witness_json(bundle: &Bundle, coloring: &[usize]) -> Value {
    let mut map = Map::new();
    for (v, &c) in coloring.iter().enumerate() {
        map.insert(v.to_string(), Value::String(bundle.instance.colors[c].clone()));
    }
    Value::Object(map)
}

fn solve_command(args: SolveArgs, force_oracle: bool) -> Result<i32> {
    if args.trace {
        env_logger::Builder::new()
            .filter_level(log::LevelFilter::Trace)
            .init();
    }
    let engine = if force_oracle { "oracle" } else { args.engine.as_str() };
    let g = load_graph(&args.graph)?;
    let user_td = args.td.as_ref().map(load_td).transpose()?;
    let bundle = build_bundle(&args, &g)?;
    let mut constraints = parse_constraints(&args.constraints)?;
    let mut all_constraints = bundle.constraints.clone();
    all_constraints.append(&mut constraints);

    let start = Instant::now();
    let mut result = Map::new();
    let optimum: Weight;
    match engine {
        "treewidth-dp" => {
            let etd = decomposition_for(&bundle, &g, &user_td)?;
            if let Some(max) = args.max_width {
                if etd.width() > max {
                    bail!(
                        "decomposition width {} exceeds --max-width {max}; supply a better .td",
                        etd.width()
                    );
                }
            }
            let report: SolveReport = lcp_core::solve(
                &bundle.instance,
                bundle.system.as_ref(),
                &etd,
                &all_constraints,
                &SolveOptions {
                    witness: args.witness,
                    threads: args.threads.max(1),
                    trace: args.trace,
                    ..Default::default()
                },
            )
            .map_err(|e| anyhow!(e))?;
            optimum = report.optimum;
            result.insert("width".into(), json!(report.width));
            result.insert("nodes".into(), json!(report.nodes));
            if let Some(w) = &report.witness {
                result.insert("witness".into(), witness_json(&bundle, w));
            }
        }
        "complete-flow" => {
            if !all_constraints.is_empty() {
                bail!("the complete-flow engine does not support global constraints");
            }
            let check = flow::distribution_check_from_instance(&bundle.instance)
                .ok_or_else(|| anyhow!("instance lists are not uniform; complete-flow needs full lists"))?;
            let report = flow::solve_complete_graph(&bundle.instance, &check).map_err(|e| anyhow!(e))?;
            optimum = report.optimum;
            result.insert("width".into(), Value::Null);
            result.insert("nodes".into(), Value::Null);
            result.insert("distributions".into(), json!(report.distributions));
            if args.witness {
                if let Some(w) = &report.witness {
                    result.insert("witness".into(), witness_json(&bundle, w));
                }
            }
        }
        "oracle" => {
            let res = lcp_core::brute_force_solve(
                &bundle.instance,
                &all_constraints,
                args.budget,
                args.witness,
            )
            .map_err(|e| anyhow!(e))?;
            optimum = res.optimum;
            result.insert("width".into(), Value::Null);
            result.insert("nodes".into(), Value::Null);
            if args.witness {
                if let Some(w) = res.optimal_colorings.first() {
                    result.insert("witness".into(), witness_json(&bundle, w));
                }
            }
        }
        other => bail!("unknown engine `{other}`"),
    }
    result.insert("optimum".into(), serde_json::to_value(optimum)?);
    result.insert("millis".into(), json!(start.elapsed().as_millis() as u64));
    let text = serde_json::to_string(&Value::Object(result))?;
    match &args.output {
        Some(path) => std::fs::write(path, format!("{text}\n"))?,
        None => println!("{text}"),
    }
    Ok(if args.fail_on_error && optimum.is_error() { 1 } else { 0 })
}
