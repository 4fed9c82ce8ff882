//! Per-qubit DDMF construction and equivalence checking.
//!
//! Qubit `i` starts as the Boolean function `x_i`. A gate with target `t`
//! replaces `D_t` by `(g ∗ CM(U)) ⊕ D_t`, where `g` is the conjunction of
//! its positive controls and the complements of its negative controls. The
//! controls must be Boolean at that point; otherwise the circuit is not
//! semi-classical and construction stops at that gate.

use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::dd::{DdError, DdmfManager, DdmfRef};
use crate::exact::Ring;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("not semi-classical: gate {gate} uses non-Boolean control qubit {qubit}")]
    NotScqc { gate: usize, qubit: u32 },
    #[error("circuits have {left} and {right} qubits")]
    QubitCountMismatch { left: u32, right: u32 },
    #[error("circuit needs {needed} variables, manager has {available}")]
    TooManyQubits { needed: u32, available: u32 },
    #[error("invalid circuit: {0}")]
    Invalid(String),
    #[error(transparent)]
    Dd(#[from] DdError),
}

/// The DDMF of every qubit after the first `cursor` gates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitState {
    qubits: Vec<DdmfRef>,
    cursor: usize,
}

impl CircuitState {
    /// DDMF of qubit `q` (1-based).
    pub fn qubit(&self, q: u32) -> DdmfRef {
        self.qubits[q as usize - 1]
    }

    pub fn qubits(&self) -> &[DdmfRef] {
        &self.qubits
    }

    pub fn gates_applied(&self) -> usize {
        self.cursor
    }
}

/// `D_i = x_i` for every qubit.
pub fn init_state(mgr: &mut DdmfManager, n: u32) -> Result<CircuitState, VerifyError> {
    if n > mgr.num_vars() {
        return Err(VerifyError::TooManyQubits {
            needed: n,
            available: mgr.num_vars(),
        });
    }
    let qubits = (1..=n)
        .map(|i| mgr.variable(i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CircuitState { qubits, cursor: 0 })
}

/// The Boolean firing condition of `gate` in `state`. `gate_no` is the
/// 1-based position used in diagnostics.
pub fn control_function(
    mgr: &mut DdmfManager,
    state: &CircuitState,
    gate: &Gate,
    gate_no: usize,
) -> Result<DdmfRef, VerifyError> {
    let mut g = mgr.constant(crate::exact::Unitary2::not(mgr.ring()))?;
    let controls = gate
        .positive
        .iter()
        .map(|&q| (q, true))
        .chain(gate.negative.iter().map(|&q| (q, false)));
    for (q, positive) in controls {
        let d = state.qubit(q);
        if !mgr.is_boolean(d) {
            return Err(VerifyError::NotScqc {
                gate: gate_no,
                qubit: q,
            });
        }
        let literal = if positive { d } else { mgr.bool_not(d)? };
        g = mgr.bool_and(g, literal)?;
    }
    Ok(g)
}

/// Applies the next gate of the circuit to `state`.
pub fn apply_gate(
    mgr: &mut DdmfManager,
    state: &mut CircuitState,
    gate: &Gate,
) -> Result<(), VerifyError> {
    let gate_no = state.cursor + 1;
    let g = control_function(mgr, state, gate, gate_no)?;
    let u = mgr.ring().gate(gate.kind).map_err(DdError::from)?;
    let cu = mgr.constant(u)?;
    let d_gate = mgr.select(g, cu)?;
    let t = gate.target as usize - 1;
    // Gate matrix goes on the left of the accumulated function.
    state.qubits[t] = mgr.compose(d_gate, state.qubits[t])?;
    state.cursor += 1;
    Ok(())
}

fn check_valid(c: &Circuit) -> Result<(), VerifyError> {
    let diags = c.validate();
    if diags.is_empty() {
        Ok(())
    } else {
        let msg = diags
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join("; ");
        Err(VerifyError::Invalid(msg))
    }
}

/// Folds every gate of `circuit` into a fresh state; stops at the first
/// gate that violates the semi-classical restriction.
pub fn build(mgr: &mut DdmfManager, circuit: &Circuit) -> Result<CircuitState, VerifyError> {
    check_valid(circuit)?;
    let mut state = init_state(mgr, circuit.num_qubits)?;
    for gate in &circuit.gates {
        apply_gate(mgr, &mut state, gate)?;
    }
    Ok(state)
}

/// Assignment on which `a` and `b` differ, or `None` when equal.
pub fn find_counterexample(
    mgr: &mut DdmfManager,
    a: DdmfRef,
    b: DdmfRef,
) -> Result<Option<Vec<bool>>, VerifyError> {
    Ok(mgr.find_counterexample(a, b)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Equivalent,
    Inequivalent,
    NotScqc,
}

impl Verdict {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Equivalent => 0,
            Verdict::Inequivalent => 1,
            Verdict::NotScqc => 2,
        }
    }
}

/// Which input circuit a finding refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScqcViolation {
    pub circuit: Side,
    /// 1-based gate position.
    pub gate: usize,
    /// 1-based control qubit whose function is not Boolean.
    pub qubit: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// 1-based qubit whose functions differ.
    pub qubit: u32,
    /// `assignment[i - 1]` is the value of `x_i`.
    pub assignment: Vec<bool>,
}

impl Counterexample {
    pub fn bits(&self) -> String {
        self.assignment
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BuildStats {
    /// Shared node count of the final qubit DDMFs of circuit A.
    pub nodes_a: usize,
    pub nodes_b: usize,
    /// Nodes interned by the shared manager.
    pub peak_nodes: usize,
    pub millis: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub verdict: Verdict,
    pub qubits: u32,
    /// Per-qubit handle equality; empty when a circuit is not semi-classical.
    pub equal: Vec<bool>,
    pub first_difference: Option<u32>,
    pub counterexample: Option<Counterexample>,
    pub violation: Option<ScqcViolation>,
    pub stats: BuildStats,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CheckOptions {
    pub counterexample: bool,
    pub node_limit: Option<usize>,
}

/// Builds both circuits in one shared manager and compares the qubit
/// DDMFs by handle.
pub fn check_equivalence(
    a: &Circuit,
    b: &Circuit,
    opts: CheckOptions,
) -> Result<VerificationReport, VerifyError> {
    if a.num_qubits != b.num_qubits {
        return Err(VerifyError::QubitCountMismatch {
            left: a.num_qubits,
            right: b.num_qubits,
        });
    }
    check_valid(a)?;
    check_valid(b)?;
    let start = Instant::now();
    let ring = Ring::for_gates(a.gates.iter().chain(&b.gates).map(|g| &g.kind));
    let mut mgr = DdmfManager::new(ring, a.num_qubits).with_node_limit(opts.node_limit);
    let n = a.num_qubits;

    let mut built = Vec::with_capacity(2);
    for (side, c) in [(Side::A, a), (Side::B, b)] {
        match build(&mut mgr, c) {
            Ok(s) => built.push(s),
            Err(VerifyError::NotScqc { gate, qubit }) => {
                return Ok(VerificationReport {
                    verdict: Verdict::NotScqc,
                    qubits: n,
                    equal: Vec::new(),
                    first_difference: None,
                    counterexample: None,
                    violation: Some(ScqcViolation {
                        circuit: side,
                        gate,
                        qubit,
                    }),
                    stats: BuildStats {
                        peak_nodes: mgr.live_nodes(),
                        millis: start.elapsed().as_millis(),
                        ..BuildStats::default()
                    },
                });
            }
            Err(e) => return Err(e),
        }
    }
    let (sa, sb) = (&built[0], &built[1]);
    let equal = sa
        .qubits()
        .iter()
        .zip(sb.qubits())
        .map(|(&x, &y)| mgr.equal(x, y))
        .collect::<Result<Vec<_>, _>>()?;
    let first_difference = equal.iter().position(|e| !e).map(|i| i as u32 + 1);
    let counterexample = match (first_difference, opts.counterexample) {
        (Some(q), true) => mgr
            .find_counterexample(sa.qubit(q), sb.qubit(q))?
            .map(|assignment| Counterexample {
                qubit: q,
                assignment,
            }),
        _ => None,
    };
    let stats = BuildStats {
        nodes_a: mgr.shared_node_count(sa.qubits()),
        nodes_b: mgr.shared_node_count(sb.qubits()),
        peak_nodes: mgr.live_nodes(),
        millis: start.elapsed().as_millis(),
    };
    Ok(VerificationReport {
        verdict: if first_difference.is_none() {
            Verdict::Equivalent
        } else {
            Verdict::Inequivalent
        },
        qubits: n,
        equal,
        first_difference,
        counterexample,
        violation: None,
        stats,
    })
}

/// Semi-classical check of a single circuit: `Ok(())` or the first
/// offending gate.
pub fn check_scqc(c: &Circuit) -> Result<(), VerifyError> {
    let mut mgr = DdmfManager::new(c.required_ring(), c.num_qubits);
    build(&mut mgr, c).map(|_| ())
}
