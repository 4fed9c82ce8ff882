//! Random semi-classical circuits and a build-time/node-count harness.

use std::fmt::Write as _;
use std::time::Instant;

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::dd::DdmfManager;
use crate::exact::{DyadicAngle, GateKind, Ring};
use crate::verifier::{apply_gate, build, init_state, VerifyError};

pub const RNG_NAME: &str = "ChaCha8";

/// Default weights of `X, V, V+, R(1/2), R(1/4)`. NOT is drawn more often so
/// that enough qubits stay Boolean to serve as controls on long circuits.
pub const DEFAULT_GATE_MIX: [f64; 5] = [3.0, 1.0, 1.0, 1.0, 1.0];
pub const DEFAULT_MAX_CONTROLS: usize = 2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BenchError {
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("gate weights must be nonnegative and not all zero")]
    BadWeights,
    #[error("at least one qubit is required")]
    NoQubits,
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

/// The alphabet random gates are drawn from.
pub fn default_gate_alphabet() -> [GateKind; 5] {
    [
        GateKind::X,
        GateKind::V,
        GateKind::VDagger,
        GateKind::R(DyadicAngle::new(1, 2).expect("dyadic")),
        GateKind::R(DyadicAngle::new(1, 4).expect("dyadic")),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchConfig {
    pub qubits: u32,
    pub gates: usize,
    pub trials: usize,
    pub seed: u64,
    /// Relative weights of `X, V, V+, R(1/2), R(1/4)`.
    pub gate_mix: [f64; 5],
    /// Control count is uniform on `0..=max_controls`.
    pub max_controls: usize,
}

impl BenchConfig {
    pub fn new(qubits: u32, gates: usize, trials: usize, seed: u64) -> Self {
        BenchConfig {
            qubits,
            gates,
            trials,
            seed,
            gate_mix: DEFAULT_GATE_MIX,
            max_controls: DEFAULT_MAX_CONTROLS,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.trials == 0 {
            return Err(BenchError::NoTrials);
        }
        if self.qubits == 0 {
            return Err(BenchError::NoQubits);
        }
        if self.gate_mix.iter().any(|w| !w.is_finite() || *w < 0.0)
            || self.gate_mix.iter().all(|w| *w == 0.0)
        {
            return Err(BenchError::BadWeights);
        }
        Ok(())
    }

    fn rng(&self, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64);
        rng
    }
}

/// A circuit of exactly `config.gates` gates that is semi-classical by
/// construction: controls are drawn only from qubits whose current function
/// is Boolean.
pub fn random_scqc(config: &BenchConfig, trial: usize) -> Result<Circuit, BenchError> {
    config.validate()?;
    let n = config.qubits;
    let alphabet = default_gate_alphabet();
    let mix = WeightedIndex::new(config.gate_mix).map_err(|_| BenchError::BadWeights)?;
    let mut rng = config.rng(trial);
    let mut mgr = DdmfManager::new(Ring::for_gates(&alphabet), n);
    let mut state = init_state(&mut mgr, n)?;
    let mut circuit = Circuit::new(n);
    for _ in 0..config.gates {
        let target = rng.gen_range(1..=n);
        let eligible: Vec<u32> = (1..=n)
            .filter(|&q| q != target && mgr.is_boolean(state.qubit(q)))
            .collect();
        let k = rng.gen_range(0..=config.max_controls).min(eligible.len());
        let mut gate = Gate::new(alphabet[mix.sample(&mut rng)], target);
        for &q in eligible.choose_multiple(&mut rng, k) {
            if rng.gen_bool(0.5) {
                gate.positive.insert(q);
            } else {
                gate.negative.insert(q);
            }
        }
        apply_gate(&mut mgr, &mut state, &gate)?;
        circuit.push(gate);
    }
    Ok(circuit)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub qubits: u32,
    pub gates: usize,
    pub trial: usize,
    pub seed: u64,
    /// Shared node count of the final qubit DDMFs.
    pub nodes: usize,
    /// Nodes interned while building (nothing is freed).
    pub peak_nodes: usize,
    pub millis: f64,
    pub retries: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchSummary {
    pub records: Vec<BenchRecord>,
    pub mean_nodes: f64,
    pub mean_peak_nodes: f64,
    pub mean_millis: f64,
}

/// Builds one fresh manager per trial and records node counts and build
/// time. Circuit generation is not timed.
pub fn run_bench(config: &BenchConfig) -> Result<BenchSummary, BenchError> {
    config.validate()?;
    let ring = Ring::for_gates(&default_gate_alphabet());
    let mut records = Vec::with_capacity(config.trials);
    for trial in 0..config.trials {
        let circuit = random_scqc(config, trial)?;
        let start = Instant::now();
        let mut mgr = DdmfManager::new(ring, config.qubits);
        let state = build(&mut mgr, &circuit)?;
        let millis = start.elapsed().as_secs_f64() * 1e3;
        records.push(BenchRecord {
            qubits: config.qubits,
            gates: config.gates,
            trial,
            seed: config.seed,
            nodes: mgr.shared_node_count(state.qubits()),
            peak_nodes: mgr.live_nodes(),
            millis,
            retries: 0,
        });
    }
    let t = records.len() as f64;
    let mean = |f: fn(&BenchRecord) -> f64| records.iter().map(f).sum::<f64>() / t;
    Ok(BenchSummary {
        mean_nodes: mean(|r| r.nodes as f64),
        mean_peak_nodes: mean(|r| r.peak_nodes as f64),
        mean_millis: mean(|r| r.millis),
        records,
    })
}

/// CSV with a `#` config line followed by the column header.
pub fn to_csv(config: &BenchConfig, summary: &BenchSummary) -> String {
    let mix = default_gate_alphabet()
        .iter()
        .zip(config.gate_mix)
        .map(|(k, w)| format!("{k}:{w}"))
        .collect::<Vec<_>>()
        .join(",");
    let mut out = format!(
        "# qubits={} gates={} trials={} seed={} rng={} max_controls={} controls=uniform(0..={}) gate_mix={}\n",
        config.qubits,
        config.gates,
        config.trials,
        config.seed,
        RNG_NAME,
        config.max_controls,
        config.max_controls,
        mix
    );
    out.push_str("n,g,trial,seed,nodes,peak_nodes,millis,retries\n");
    for r in &summary.records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{:.3},{}",
            r.qubits, r.gates, r.trial, r.seed, r.nodes, r.peak_nodes, r.millis, r.retries
        );
    }
    out
}
