//! `ddmf`: equivalence checking and inspection of semi-classical quantum
//! circuits.
//!
//! Exit codes: 0 success or equivalent, 1 inequivalent, 2 not semi-classical
//! or bad input, 3 node limit exceeded, 4 internal error.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use ddmf::bench::{run_bench, to_csv, BenchConfig};
use ddmf::dd::{DdError, DdmfManager};
use ddmf::oracle::simulate_assignment;
use ddmf::verifier::{build, check_equivalence, CheckOptions, VerifyError};
use ddmf::{parse, Circuit};

use report::{bits, CounterexampleJson, VerifyView};

const NODE_LIMIT_VAR: &str = "DDMF_NODE_LIMIT";

#[derive(Parser)]
#[command(
    name = "ddmf",
    version,
    about = "Decision-diagram equivalence checking for semi-classical quantum circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether two circuits compute the same per-qubit functions.
    Verify {
        a: PathBuf,
        b: PathBuf,
        /// Print a machine-readable report.
        #[arg(long)]
        json: bool,
        /// Report an input on which the circuits differ.
        #[arg(long)]
        counterexample: bool,
    },
    /// Build the per-qubit diagrams and report their sizes.
    Build {
        file: PathBuf,
        /// Also report interned nodes, distinct matrices and build time.
        #[arg(long)]
        stats: bool,
        /// Write one Graphviz file per qubit into this directory.
        #[arg(long, value_name = "DIR")]
        dot: Option<PathBuf>,
    },
    /// Run the circuit on one classical input.
    Simulate {
        file: PathBuf,
        /// Input bits, x1 first.
        #[arg(long, value_name = "BITS")]
        input: String,
        #[arg(long)]
        json: bool,
    },
    /// Check that every control is classical when its gate fires.
    Check { file: PathBuf },
    /// Random semi-classical circuits: node counts and build times.
    Bench {
        #[arg(long)]
        qubits: u32,
        #[arg(long)]
        gates: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Write CSV here instead of standard output.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
}

/// A failure with the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = if is_node_limit(&error) { 3 } else { 2 };
        Failure { code, error }
    }
}

fn is_node_limit(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        matches!(c.downcast_ref::<DdError>(), Some(DdError::NodeLimit { .. }))
            || matches!(
                c.downcast_ref::<VerifyError>(),
                Some(VerifyError::Dd(DdError::NodeLimit { .. }))
            )
    })
}

fn internal(error: anyhow::Error) -> Failure {
    Failure { code: 4, error }
}

fn node_limit() -> Result<Option<usize>> {
    match std::env::var(NODE_LIMIT_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .with_context(|| format!("{NODE_LIMIT_VAR} must be a node count, got '{v}'")),
        Err(_) => Ok(None),
    }
}

fn load(path: &Path) -> Result<Circuit> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn verify(a: &Path, b: &Path, json: bool, want_witness: bool) -> Result<u8, Failure> {
    let ca = load(a)?;
    let cb = load(b)?;
    let opts = CheckOptions {
        counterexample: want_witness,
        node_limit: node_limit()?,
    };
    let rep = check_equivalence(&ca, &cb, opts).map_err(anyhow::Error::from)?;
    let witness = match &rep.counterexample {
        Some(cx) => {
            // every witness is replayed on the brute-force oracle
            let ta = simulate_assignment(&ca, &cx.assignment).map_err(|e| internal(e.into()))?;
            let tb = simulate_assignment(&cb, &cx.assignment).map_err(|e| internal(e.into()))?;
            let q = cx.qubit as usize - 1;
            let (ma, mb) = (&ta.per_qubit_matrix[q], &tb.per_qubit_matrix[q]);
            if ma == mb {
                return Err(internal(anyhow!(
                    "counterexample {} for qubit {} is not confirmed by simulation",
                    cx.bits(),
                    cx.qubit
                )));
            }
            let namer = report::namer_for(&[&ca, &cb]);
            Some(CounterexampleJson {
                qubit: cx.qubit,
                label: ca.label(cx.qubit).to_string(),
                assignment: cx.bits(),
                value_a: namer.render(ma),
                value_b: namer.render(mb),
                confirmed: true,
            })
        }
        None => None,
    };
    let (fa, fb) = (a.display().to_string(), b.display().to_string());
    let view = VerifyView {
        report: &rep,
        a: &ca,
        files: [&fa, &fb],
        witness,
    };
    if json {
        let doc = serde_json::to_string_pretty(&view.json()).map_err(|e| internal(e.into()))?;
        println!("{doc}");
    } else {
        print!("{}", view.text());
    }
    Ok(rep.verdict.exit_code() as u8)
}

fn build_cmd(file: &Path, stats: bool, dot: Option<&Path>) -> Result<u8, Failure> {
    let c = load(file)?;
    let start = std::time::Instant::now();
    let mut mgr = DdmfManager::new(c.required_ring(), c.num_qubits).with_node_limit(node_limit()?);
    let state = build(&mut mgr, &c).map_err(|e| match e {
        VerifyError::NotScqc { gate, qubit } => anyhow!(
            "not semi-classical: gate {gate} uses control qubit {} while it is not classical",
            c.label(qubit)
        ),
        other => anyhow::Error::from(other),
    })?;
    let millis = start.elapsed().as_secs_f64() * 1e3;
    let width = (1..=c.num_qubits)
        .map(|q| c.label(q).len())
        .max()
        .unwrap_or(0);
    for q in 1..=c.num_qubits {
        let d = state.qubit(q);
        let kind = if mgr.is_boolean(d) {
            "Boolean"
        } else {
            "quantum"
        };
        println!(
            "{:width$}  {:>6} nodes  {kind}",
            c.label(q),
            mgr.node_count(d)
        );
    }
    println!(
        "total  {} nodes (shared)",
        mgr.shared_node_count(state.qubits())
    );
    if stats {
        println!("interned nodes     {}", mgr.live_nodes());
        println!("distinct matrices  {}", mgr.distinct_matrices());
        println!("build time         {millis:.3} ms");
    }
    if let Some(dir) = dot {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        let namer = report::namer_for(&[&c]);
        for q in 1..=c.num_qubits {
            let text = mgr.dot_export_with(state.qubit(q), &c.labels, |m| namer.render(m));
            let path = dir.join(format!("qubit{q}.dot"));
            fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
        }
    }
    Ok(0)
}

fn parse_bits(s: &str, n: u32) -> Result<Vec<bool>> {
    let a = s
        .chars()
        .map(|ch| match ch {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(anyhow!(
                "input must be a string of 0 and 1, found '{other}'"
            )),
        })
        .collect::<Result<Vec<_>>>()?;
    if a.len() != n as usize {
        bail!("input has {} bits but the circuit has {n} qubits", a.len());
    }
    Ok(a)
}

fn simulate(file: &Path, input: &str, json: bool) -> Result<u8, Failure> {
    let c = load(file)?;
    let a = parse_bits(input, c.num_qubits)?;
    let trace = simulate_assignment(&c, &a).map_err(anyhow::Error::from)?;
    if let Some((gate, qubit)) = trace.violation {
        return Err(anyhow!(
            "not semi-classical on input {}: gate {gate} uses control qubit {} while it is not classical",
            bits(&a),
            c.label(qubit)
        )
        .into());
    }
    let namer = report::namer_for(&[&c]);
    if json {
        let doc = serde_json::to_string_pretty(&report::simulate_json(&c, &trace, &namer))
            .map_err(|e| internal(e.into()))?;
        println!("{doc}");
    } else {
        print!("{}", report::simulate_text(&c, &trace, &namer));
    }
    Ok(0)
}

fn check(file: &Path) -> Result<u8, Failure> {
    let c = load(file)?;
    let mut mgr = DdmfManager::new(c.required_ring(), c.num_qubits).with_node_limit(node_limit()?);
    match build(&mut mgr, &c) {
        Ok(_) => {
            println!(
                "semi-classical: {} gates, {} qubits",
                c.gates.len(),
                c.num_qubits
            );
            Ok(0)
        }
        Err(VerifyError::NotScqc { gate, qubit }) => {
            println!(
                "not semi-classical: gate {gate} uses control qubit {} while it is not classical",
                c.label(qubit)
            );
            Ok(2)
        }
        Err(e) => Err(anyhow::Error::from(e).into()),
    }
}

fn bench(
    qubits: u32,
    gates: usize,
    trials: usize,
    seed: u64,
    csv: Option<&Path>,
) -> Result<u8, Failure> {
    let cfg = BenchConfig::new(qubits, gates, trials, seed);
    let summary = run_bench(&cfg).map_err(anyhow::Error::from)?;
    let text = to_csv(&cfg, &summary);
    match csv {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
            println!(
                "n={qubits} g={gates} trials={trials}: mean nodes {:.1}, mean peak nodes {:.1}, mean build {:.3} ms",
                summary.mean_nodes, summary.mean_peak_nodes, summary.mean_millis
            );
        }
        None => print!("{text}"),
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Verify {
            a,
            b,
            json,
            counterexample,
        } => verify(&a, &b, json, counterexample),
        Command::Build { file, stats, dot } => build_cmd(&file, stats, dot.as_deref()),
        Command::Simulate { file, input, json } => simulate(&file, &input, json),
        Command::Check { file } => check(&file),
        Command::Bench {
            qubits,
            gates,
            trials,
            seed,
            csv,
        } => bench(qubits, gates, trials, seed, csv.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
