//! detflow: linear deterministic relay networks over GF(q).
//!
//! Subcommands load a network JSON file (or generate one), compute the
//! unicast capacity by path augmentation, cross-check it against the
//! exhaustive cut oracle, simulate one-symbol relay coding, and export
//! GraphViz renderings. Output is stable JSON on stdout unless `--human`
//! is given; diagnostics go to stderr as `{"error":{...}}` with distinct
//! exit codes per category.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use detflow::codec::{build_relay_plan, decode, transmit};
use detflow::network::{Network, RandomParams};
use detflow::oracle::{min_cut_exhaustive_with, OracleOptions};
use detflow::pathfinder::{find_paths, Search};
use detflow::{capacity_bits, Fe};
use detflow_cli::{run_capacity, run_verify, VerifySchedule};

const EXIT_PARSE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_PARAMS: u8 = 4;
const EXIT_FAILURE: u8 = 1;

struct CliError {
    category: &'static str,
    message: String,
    exit: u8,
}

impl CliError {
    fn parse(message: impl Into<String>) -> Self {
        CliError { category: "parse", message: message.into(), exit: EXIT_PARSE }
    }
    fn validation(message: impl Into<String>) -> Self {
        CliError { category: "validation", message: message.into(), exit: EXIT_VALIDATION }
    }
    fn params(message: impl Into<String>) -> Self {
        CliError { category: "params", message: message.into(), exit: EXIT_PARAMS }
    }
    fn other(message: impl Into<String>) -> Self {
        CliError { category: "error", message: message.into(), exit: EXIT_FAILURE }
    }
}

#[derive(Parser)]
#[command(name = "detflow", version, about = "Min-cut capacity of linear deterministic relay networks over GF(q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    /// JSON output (the default; kept for explicit scripting).
    #[arg(long, global = true, conflicts_with = "human")]
    json: bool,
}

#[derive(Args)]
struct GenParams {
    /// RNG seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of layers including source and destination.
    #[arg(long, default_value_t = 4)]
    layers: usize,
    /// Maximum nodes per intermediate layer.
    #[arg(long, default_value_t = 3)]
    max_nodes: u32,
    /// Maximum transmit ports per node.
    #[arg(long, default_value_t = 3)]
    max_in: u32,
    /// Maximum receive ports per node.
    #[arg(long, default_value_t = 3)]
    max_out: u32,
    /// Channel probability per port pair.
    #[arg(long, default_value_t = 0.6)]
    density: f64,
    /// Field order q (prime power).
    #[arg(long, default_value_t = 2)]
    field: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the capacity of a network file by path augmentation.
    Capacity {
        file: PathBuf,
        /// Also print the committed paths.
        #[arg(long)]
        paths: bool,
        /// Print the exploration trace to stderr.
        #[arg(long)]
        trace: bool,
        /// Cross-check against the exhaustive oracle.
        #[arg(long)]
        oracle: bool,
        /// Intermediate-node bound for the oracle.
        #[arg(long, default_value_t = detflow::oracle::DEFAULT_NODE_BOUND)]
        oracle_bound: usize,
    },
    /// Exhaustive min-cut of a network file, with a witness partition.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = detflow::oracle::DEFAULT_NODE_BOUND)]
        oracle_bound: usize,
        /// Enumerate only predecessor-closed partitions (optimization).
        #[arg(long)]
        monotone: bool,
    },
    /// Batch-verify path counts against the oracle on seeded instances.
    Verify {
        /// Number of instances.
        #[arg(long, default_value_t = 200)]
        count: u64,
        /// Base seed; instance i uses seed base+i.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Pin the field order instead of cycling {2,3,4,5,8}.
        #[arg(long)]
        field: Option<u32>,
        /// Pin the density instead of cycling {0.3,0.6,0.9}.
        #[arg(long)]
        density: Option<f64>,
        /// Pin the layer count instead of cycling 2..=5.
        #[arg(long)]
        layers: Option<usize>,
        /// Pin the per-layer node bound (default 3).
        #[arg(long)]
        max_nodes: Option<u32>,
        #[arg(long, default_value_t = detflow::oracle::DEFAULT_NODE_BOUND)]
        oracle_bound: usize,
        /// Symbol round-trips per positive-capacity instance.
        #[arg(long, default_value_t = 10)]
        roundtrips: usize,
    },
    /// Generate a seeded random network file.
    Gen {
        #[command(flatten)]
        params: GenParams,
        /// Output path (stdout if omitted).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Send symbols across the network with one-symbol relaying and decode.
    Simulate {
        file: PathBuf,
        /// Comma-separated source symbols, one per path.
        #[arg(long, value_delimiter = ',')]
        symbols: Vec<u32>,
    },
    /// GraphViz export, one cluster per layer.
    ExportDot {
        file: PathBuf,
        /// Bold the channels of a maximum path set.
        #[arg(long)]
        paths: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn load_network(path: &PathBuf) -> Result<Network, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    let net = Network::from_json(&text).map_err(|e| CliError::parse(e.to_string()))?;
    let violations = net.validate();
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(CliError::validation(list.join("; ")));
    }
    Ok(net)
}

fn emit(human: bool, value: serde_json::Value, render: impl Fn(&serde_json::Value) -> String) {
    if human {
        println!("{}", render(&value));
    } else {
        println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Capacity { file, paths, trace, oracle, oracle_bound } => {
            let net = load_network(&file)?;
            if trace {
                let mut search = Search::new(&net).map_err(|e| CliError::other(e.to_string()))?;
                search.enable_trace();
                search.run();
                eprint!("{}", search.trace());
            }
            let report = run_capacity(&net, oracle, oracle_bound, paths)
                .map_err(CliError::other)?;
            let value = serde_json::to_value(&report).expect("report serializes");
            emit(cli.human, value, |v| {
                let mut s = format!(
                    "network {}: capacity {} paths, {} bits over GF({})",
                    v["digest"].as_str().unwrap_or(""),
                    v["k"],
                    v["capacity_bits"],
                    v["q"]
                );
                if let Some(agree) = v.get("agreement").and_then(|a| a.as_bool()) {
                    s.push_str(&format!(
                        "\noracle value {} ({})",
                        v["oracle_value"],
                        if agree { "agrees" } else { "DISAGREES" }
                    ));
                }
                s
            });
            Ok(())
        }
        Command::Oracle { file, oracle_bound, monotone } => {
            let net = load_network(&file)?;
            let cut = min_cut_exhaustive_with(
                &net,
                &OracleOptions { node_bound: Some(oracle_bound), monotone_only: monotone },
            )
            .map_err(|e| CliError::params(e.to_string()))?;
            let value = json!({
                "value": cut.value,
                "value_bits": cut.value_bits,
                "witness_v1": cut.v1.iter().map(|n| n.0).collect::<Vec<_>>(),
            });
            emit(cli.human, value, |v| {
                format!("min cut {} ({} bits), source side {}", v["value"], v["value_bits"], v["witness_v1"])
            });
            Ok(())
        }
        Command::Verify { count, seed, field, density, layers, max_nodes, oracle_bound, roundtrips } => {
            if let Some(q) = field {
                detflow::Field::new(q).map_err(|e| CliError::params(e.to_string()))?;
            }
            let schedule = VerifySchedule {
                base_seed: seed,
                q: field,
                density,
                num_layers: layers,
                max_nodes_per_layer: max_nodes,
                ..Default::default()
            };
            let report = run_verify(&schedule, count, oracle_bound, roundtrips);
            let ok = report.all_green();
            let value = serde_json::to_value(&report).expect("report serializes");
            emit(cli.human, value, |v| {
                format!(
                    "{}/{} agree, {} decode failures, {} witness failures, {:.2}s",
                    v["agreements"],
                    v["count"],
                    v["decode_failures"].as_array().map_or(0, |a| a.len()),
                    v["witness_failures"].as_array().map_or(0, |a| a.len()),
                    v["elapsed_secs"].as_f64().unwrap_or(0.0)
                )
            });
            if ok {
                Ok(())
            } else {
                Err(CliError::other("verification found disagreements"))
            }
        }
        Command::Gen { params, out } => {
            let net = Network::random(&RandomParams {
                seed: params.seed,
                num_layers: params.layers,
                max_nodes_per_layer: params.max_nodes,
                max_inputs_per_node: params.max_in,
                max_outputs_per_node: params.max_out,
                density: params.density,
                q: params.field,
            })
            .map_err(|e| CliError::params(e.to_string()))?;
            let text = net.to_json();
            match out {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| CliError::other(format!("{}: {e}", path.display())))?,
                None => println!("{text}"),
            }
            Ok(())
        }
        Command::Simulate { file, symbols } => {
            let net = load_network(&file)?;
            let paths = find_paths(&net).map_err(|e| CliError::other(e.to_string()))?;
            let plan = build_relay_plan(&net, &paths).map_err(|e| CliError::other(e.to_string()))?;
            if symbols.len() != plan.k() {
                return Err(CliError::params(format!(
                    "network carries {} paths, got {} symbols",
                    plan.k(),
                    symbols.len()
                )));
            }
            let field = net.field();
            let syms: Vec<Fe> = symbols
                .iter()
                .map(|&v| field.element(v))
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::params(e.to_string()))?;
            let obs = transmit(&net, &plan, &syms).map_err(|e| CliError::other(e.to_string()))?;
            let back = decode(&plan, &obs).map_err(|e| CliError::other(e.to_string()))?;
            let value = json!({
                "k": plan.k(),
                "capacity_bits": capacity_bits(plan.k(), field.q()),
                "symbols": symbols,
                "observations": obs.iter().map(|f| f.value()).collect::<Vec<_>>(),
                "decoded": back.iter().map(|f| f.value()).collect::<Vec<_>>(),
                "roundtrip_ok": back == syms,
            });
            emit(cli.human, value, |v| {
                format!(
                    "sent {} -> observed {} -> decoded {} ({})",
                    v["symbols"],
                    v["observations"],
                    v["decoded"],
                    if v["roundtrip_ok"].as_bool().unwrap_or(false) { "exact" } else { "MISMATCH" }
                )
            });
            Ok(())
        }
        Command::ExportDot { file, paths, out } => {
            let net = load_network(&file)?;
            let highlight = if paths {
                find_paths(&net)
                    .map_err(|e| CliError::other(e.to_string()))?
                    .all_edges()
            } else {
                Vec::new()
            };
            // Deduplicate while keeping the type obvious.
            let highlight: Vec<_> = highlight.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
            let dot = net.to_dot(&highlight);
            match out {
                Some(path) => std::fs::write(&path, dot)
                    .map_err(|e| CliError::other(format!("{}: {e}", path.display())))?,
                None => print!("{dot}"),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let payload = json!({"error": {"category": e.category, "message": e.message}});
            eprintln!("{payload}");
            ExitCode::from(e.exit)
        }
    }
}
