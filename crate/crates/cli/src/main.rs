//! `rfd`: classify, decompose, verify and replay protected unicast
//! connections.
//!
//! Exit codes: 0 on success, 1 for unreadable or inconsistent input, 2 when
//! the connection cannot be protected or a plan fails verification.

mod dot;
mod files;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use rfd_core::simulate::DecodeRule;
use rfd_core::{
    certify_plan, classify_feasibility, decompose, derive_coding_capacities, generate, verify_plan,
    CodingNetwork, EdgeId, Error, FeasibilityClass, GenParams, Generation, Label, Network, Simulator,
    Structure,
};
use serde::Serialize;

use files::{NetworkFile, PlanFile, ReportFile};

#[derive(Debug, Parser)]
#[command(
    name = "rfd",
    version,
    about = "Resilient flow decomposition for single-failure protected unicast"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a network and print its reduced max flow.
    Analyze {
        /// Network file, or `-` for stdin.
        network: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compute a recovery plan.
    Decompose {
        network: PathBuf,
        /// Plan file to write; stdout if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write a Graphviz rendering of the plan.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Re-verify a plan against a network.
    Verify {
        network: PathBuf,
        plan: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Replay one generation over a plan with one edge failed, or with each
    /// edge failed in turn.
    Simulate {
        network: PathBuf,
        plan: PathBuf,
        #[command(flatten)]
        failure: FailureArgs,
        #[command(flatten)]
        payload_a: PayloadA,
        #[command(flatten)]
        payload_b: PayloadB,
        #[arg(long)]
        json: bool,
    },
    /// Generate a synthetic network.
    Gen {
        /// ladder, random-dag or parallel-paths.
        #[arg(long, default_value = "ladder")]
        structure: Structure,
        #[arg(long, default_value_t = 32)]
        nodes: usize,
        /// Target feasibility class, e.g. NETWORK_CODING.
        #[arg(long, default_value = "NETWORK_CODING")]
        class: FeasibilityClass,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Probability that a ladder cut is a 2-edge-cut.
        #[arg(long, default_value_t = 0.5)]
        two_edge_ratio: f64,
        /// Probability that a thin ladder edge is made thick.
        #[arg(long, default_value_t = 0.0)]
        interior_boost: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct FailureArgs {
    /// Id of the edge to fail.
    #[arg(long)]
    fail: Option<String>,
    /// Fail every edge in turn.
    #[arg(long)]
    sweep: bool,
}

#[derive(Debug, Args)]
#[group(id = "payload-a", required = true, multiple = false)]
struct PayloadA {
    /// Part A as hex.
    #[arg(long)]
    payload_a: Option<String>,
    /// File holding part A.
    #[arg(long)]
    payload_a_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(id = "payload-b", required = true, multiple = false)]
struct PayloadB {
    /// Part B as hex.
    #[arg(long)]
    payload_b: Option<String>,
    /// File holding part B.
    #[arg(long)]
    payload_b_file: Option<PathBuf>,
}

/// A domain refusal: the input is fine but cannot be protected or verified.
#[derive(Debug)]
struct Refusal(String);

impl std::fmt::Display for Refusal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Refusal {}

fn refuse(msg: impl Into<String>) -> anyhow::Error {
    Refusal(msg.into()).into()
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn load_network(path: &Path) -> Result<Network> {
    let text = read_input(path)?;
    let file: NetworkFile =
        serde_json::from_str(&text).with_context(|| format!("{}: invalid network file", path.display()))?;
    file.to_network()
        .with_context(|| format!("{}: invalid network", path.display()))
}

fn load_plan(path: &Path) -> Result<PlanFile> {
    let text = read_input(path)?;
    serde_json::from_str(&text).with_context(|| format!("{}: invalid plan file", path.display()))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct Analysis {
    class: FeasibilityClass,
    /// In real units; 3.5 stands for "more than 3".
    reduced_max_flow: f64,
    coding_max_flow: Option<u32>,
    protectable: bool,
}

fn analyze(network: &Path, json: bool) -> Result<()> {
    let cn = derive_coding_capacities(&load_network(network)?);
    let f = classify_feasibility(&cn)?;
    let report = Analysis {
        class: f.class,
        reduced_max_flow: f.reduced_units(),
        coding_max_flow: f.coding_flow,
        protectable: f.class.is_protectable(),
    };
    if json {
        print!("{}", to_json(&report));
    } else {
        println!("class: {}", f.class);
        if f.reduced_units() > 3.0 {
            println!("reduced max flow: more than 3");
        } else {
            println!("reduced max flow: {}", f.reduced_units());
        }
        if let Some(c) = f.coding_flow {
            println!("coding max flow: {c}");
        }
    }
    if f.class.is_protectable() {
        Ok(())
    } else {
        Err(refuse(format!(
            "connection cannot be protected (class {})",
            f.class
        )))
    }
}

fn decompose_cmd(network: &Path, output: Option<&Path>, dot_path: Option<&Path>) -> Result<()> {
    let net = load_network(network)?;
    let d = match decompose(&net) {
        Ok(d) => d,
        Err(e @ Error::Unprotectable(_)) => return Err(refuse(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    // Same report as `verify_plan`, in linear time.
    let report = certify_plan(&d.coding, &d.plan);
    if !report.overall {
        return Err(refuse("computed plan failed verification"));
    }
    write_output(output, &to_json(&PlanFile::new(&d.coding, &d.plan, &report)))?;
    if let Some(p) = dot_path {
        fs::write(p, dot::render(&d.coding, &d.plan)).with_context(|| format!("writing {}", p.display()))?;
    }
    if output.is_some() {
        let sizes: Vec<String> = Label::ALL
            .iter()
            .map(|&l| format!("{l} {}", d.plan.subflow(l).len()))
            .collect();
        println!(
            "{}: {} arcs ({}), verified",
            d.plan.class,
            d.plan.arc_count(),
            sizes.join(", ")
        );
    }
    Ok(())
}

fn resolve(network: &Path, plan: &Path) -> Result<(CodingNetwork, rfd_core::RecoveryPlan, PlanFile)> {
    let cn = derive_coding_capacities(&load_network(network)?);
    let file = load_plan(plan)?;
    let plan = file
        .to_plan(&cn)
        .with_context(|| format!("{} does not match {}", plan.display(), network.display()))?;
    Ok((cn, plan, file))
}

fn verify_cmd(network: &Path, plan_path: &Path, json: bool) -> Result<()> {
    let (cn, plan, file) = resolve(network, plan_path)?;
    let report = ReportFile::new(&cn, &verify_plan(&cn, &plan));
    if json {
        print!("{}", to_json(&report));
    } else {
        println!("disjoint: {}", report.disjointness_ok);
        println!("within capacity: {}", report.capacity_ok);
        for (label, ok) in &report.connectivity {
            println!("{label} connected: {ok}");
        }
        for v in &report.violations {
            println!("violation: {v}");
        }
        println!("overall: {}", if report.overall { "ok" } else { "FAILED" });
        if file.verification != report {
            eprintln!("note: the plan's embedded verification is out of date");
        }
    }
    if report.overall {
        Ok(())
    } else {
        Err(refuse(format!(
            "plan fails verification with {} violations",
            report.violations.len()
        )))
    }
}

fn payload(hex_arg: &Option<String>, file: &Option<PathBuf>) -> Result<Vec<u8>> {
    match (hex_arg, file) {
        (Some(h), _) => hex::decode(h.trim()).with_context(|| format!("`{h}` is not valid hex")),
        (None, Some(p)) => fs::read(p).with_context(|| format!("reading {}", p.display())),
        (None, None) => unreachable!("clap requires one payload source"),
    }
}

#[derive(Serialize)]
struct OutcomeEntry {
    failed_edge: Option<String>,
    received: Vec<Label>,
    decoded: bool,
    recovered_via: Option<DecodeRule>,
    transmissions: usize,
    max_per_arc: usize,
}

fn rule_text(rule: DecodeRule) -> &'static str {
    match rule {
        DecodeRule::Direct => "A and B directly",
        DecodeRule::FromAXor => "B = A xor (A xor B)",
        DecodeRule::FromBXor => "A = B xor (A xor B)",
    }
}

fn simulate_cmd(
    network: &Path,
    plan_path: &Path,
    failure: &FailureArgs,
    a: Vec<u8>,
    b: Vec<u8>,
    json: bool,
) -> Result<()> {
    let (cn, plan, _) = resolve(network, plan_path)?;
    let generation = Generation::new(0, a, b)?;
    let sim = match Simulator::new(&cn, &plan) {
        Ok(s) => s,
        Err(Error::UnverifiedPlan) => return Err(refuse("plan fails verification; refusing to simulate")),
        Err(e) => return Err(e.into()),
    };
    let outcomes = match &failure.fail {
        Some(name) => {
            let edge: Option<EdgeId> = match cn.edge_by_name(name) {
                Some(e) => Some(e),
                None if cn.names.edges.iter().any(|n| n == name) => None,
                None => anyhow::bail!("unknown edge `{name}`"),
            };
            vec![sim.transmit(&generation, edge)]
        }
        None => sim.sweep(&generation),
    };
    let entries: Vec<OutcomeEntry> = outcomes
        .iter()
        .map(|o| OutcomeEntry {
            failed_edge: o.failed_edge.map(|e| cn.edge_name(e).to_string()),
            received: o.received_labels.clone(),
            decoded: o.recovered(&generation),
            recovered_via: o.recovered_via,
            transmissions: o.transmissions,
            max_per_arc: o.max_per_arc,
        })
        .collect();
    let decoded = entries.iter().filter(|e| e.decoded).count();
    if json {
        print!("{}", to_json(&entries));
    } else {
        for (entry, o) in entries.iter().zip(&outcomes) {
            let failed = entry.failed_edge.as_deref().unwrap_or("(none)");
            let received: Vec<&str> = entry.received.iter().map(|l| l.as_str()).collect();
            let verdict = match entry.recovered_via {
                Some(rule) if entry.decoded => format!("decoded via {}", rule_text(rule)),
                _ => "NOT DECODED".to_string(),
            };
            println!("{failed}: received [{}], {verdict}", received.join(", "));
            if failure.fail.is_some() {
                if let Some((a, b)) = &o.decoded {
                    println!("A = {}", hex::encode(a));
                    println!("B = {}", hex::encode(b));
                }
            }
        }
        println!("{decoded}/{} decoded", entries.len());
    }
    if decoded == entries.len() {
        Ok(())
    } else {
        Err(refuse(format!(
            "{} failures were not decoded",
            entries.len() - decoded
        )))
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze { network, json } => analyze(&network, json),
        Command::Decompose { network, output, dot } => {
            decompose_cmd(&network, output.as_deref(), dot.as_deref())
        }
        Command::Verify { network, plan, json } => verify_cmd(&network, &plan, json),
        Command::Simulate {
            network,
            plan,
            failure,
            payload_a,
            payload_b,
            json,
        } => {
            let a = payload(&payload_a.payload_a, &payload_a.payload_a_file)?;
            let b = payload(&payload_b.payload_b, &payload_b.payload_b_file)?;
            simulate_cmd(&network, &plan, &failure, a, b, json)
        }
        Command::Gen {
            structure,
            nodes,
            class,
            seed,
            two_edge_ratio,
            interior_boost,
            output,
        } => {
            let mut params = GenParams::new(structure, nodes, class, seed);
            params.two_edge_ratio = two_edge_ratio;
            params.interior_boost = interior_boost;
            let net = match generate(&params) {
                Ok(n) => n,
                Err(e @ Error::GenerationFailed { .. }) => return Err(refuse(e.to_string())),
                Err(e) => return Err(e.into()),
            };
            write_output(output.as_deref(), &to_json(&NetworkFile::from_network(&net)))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Refusal>() => {
            eprintln!("rfd: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("rfd: {e:#}");
            ExitCode::from(1)
        }
    }
}
