//! Brute-force references for the DDMF engine.
//!
//! [`simulate_assignment`] tracks one 2x2 matrix per qubit for a fixed
//! classical input; [`statevector_simulate`] applies the gates to the full
//! `2^n` amplitude vector. Both use the same exact arithmetic, so every
//! comparison is exact.

use thiserror::Error;

use crate::circuit::Circuit;
use crate::exact::{ArithError, CycNumber, GateKind, Ring, Unitary2};

/// Default qubit cap for state-vector simulation.
pub const DEFAULT_STATEVECTOR_CAP: u32 = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{n} qubits exceeds the state-vector cap of {cap}")]
    CapExceeded { n: u32, cap: u32 },
    #[error("assignment has {got} bits, circuit has {want} qubits")]
    AssignmentLength { got: usize, want: u32 },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Per-qubit matrices after running a circuit on one classical input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssignmentTrace {
    pub assignment: Vec<bool>,
    /// Qubit `i` is in state `per_qubit_matrix[i - 1] |0⟩`.
    pub per_qubit_matrix: Vec<Unitary2>,
    /// Gates that acted on each qubit, in order; an input bit of 1 counts as
    /// an initial `X`.
    pub applied: Vec<Vec<GateKind>>,
    pub scqc_ok: bool,
    /// 1-based gate and control qubit where the trace stopped, if any.
    pub violation: Option<(usize, u32)>,
}

fn check_len(c: &Circuit, a: &[bool]) -> Result<(), OracleError> {
    if a.len() != c.num_qubits as usize {
        Err(OracleError::AssignmentLength {
            got: a.len(),
            want: c.num_qubits,
        })
    } else {
        Ok(())
    }
}

pub fn simulate_assignment(c: &Circuit, a: &[bool]) -> Result<AssignmentTrace, OracleError> {
    simulate_assignment_in(c.required_ring(), c, a)
}

/// As [`simulate_assignment`], in an explicitly chosen ring.
pub fn simulate_assignment_in(
    ring: Ring,
    c: &Circuit,
    a: &[bool],
) -> Result<AssignmentTrace, OracleError> {
    check_len(c, a)?;
    let mut mats: Vec<Unitary2> = a
        .iter()
        .map(|&b| {
            if b {
                Unitary2::not(ring)
            } else {
                Unitary2::identity(ring)
            }
        })
        .collect();
    let mut applied: Vec<Vec<GateKind>> = a
        .iter()
        .map(|&b| if b { vec![GateKind::X] } else { Vec::new() })
        .collect();
    for (j, gate) in c.gates.iter().enumerate() {
        let mut fires = true;
        let controls = gate
            .positive
            .iter()
            .map(|&q| (q, true))
            .chain(gate.negative.iter().map(|&q| (q, false)));
        for (q, positive) in controls {
            let m = &mats[q as usize - 1];
            if !m.is_classical() {
                return Ok(AssignmentTrace {
                    assignment: a.to_vec(),
                    per_qubit_matrix: mats,
                    applied,
                    scqc_ok: false,
                    violation: Some((j + 1, q)),
                });
            }
            if m.is_not() != positive {
                fires = false;
            }
        }
        if fires {
            let u = ring.gate(gate.kind)?;
            let t = gate.target as usize - 1;
            mats[t] = u.checked_mul(&mats[t])?;
            applied[t].push(gate.kind);
        }
    }
    Ok(AssignmentTrace {
        assignment: a.to_vec(),
        per_qubit_matrix: mats,
        applied,
        scqc_ok: true,
        violation: None,
    })
}

/// Exact joint state. Qubit 1 is the most significant bit of the index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateVector {
    pub num_qubits: u32,
    pub amplitudes: Vec<CycNumber>,
}

impl StateVector {
    pub fn basis(ring: Ring, a: &[bool]) -> Self {
        let n = a.len() as u32;
        let mut amplitudes = vec![ring.zero(); 1usize << n];
        amplitudes[index_of(a)] = ring.one();
        StateVector {
            num_qubits: n,
            amplitudes,
        }
    }

    fn bit(&self, q: u32) -> usize {
        1usize << (self.num_qubits - q)
    }

    pub fn norm_sqr(&self) -> CycNumber {
        let ring = self.amplitudes[0].ring();
        self.amplitudes
            .iter()
            .fold(ring.zero(), |acc, z| &acc + &z.norm_sqr())
    }
}

fn index_of(a: &[bool]) -> usize {
    a.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

pub fn statevector_simulate(c: &Circuit, a: &[bool]) -> Result<StateVector, OracleError> {
    statevector_simulate_in(c.required_ring(), c, a, DEFAULT_STATEVECTOR_CAP)
}

pub fn statevector_simulate_in(
    ring: Ring,
    c: &Circuit,
    a: &[bool],
    cap: u32,
) -> Result<StateVector, OracleError> {
    if c.num_qubits > cap {
        return Err(OracleError::CapExceeded {
            n: c.num_qubits,
            cap,
        });
    }
    check_len(c, a)?;
    let mut sv = StateVector::basis(ring, a);
    for gate in &c.gates {
        let u = ring.gate(gate.kind)?;
        let tbit = sv.bit(gate.target);
        let pos_mask: usize = gate.positive.iter().map(|&q| sv.bit(q)).sum();
        let neg_mask: usize = gate.negative.iter().map(|&q| sv.bit(q)).sum();
        for i0 in 0..sv.amplitudes.len() {
            if i0 & tbit != 0 || i0 & pos_mask != pos_mask || i0 & neg_mask != 0 {
                continue;
            }
            let i1 = i0 | tbit;
            let (a0, a1) = (&sv.amplitudes[i0], &sv.amplitudes[i1]);
            let n0 = &(u.entry(0, 0) * a0) + &(u.entry(0, 1) * a1);
            let n1 = &(u.entry(1, 0) * a0) + &(u.entry(1, 1) * a1);
            sv.amplitudes[i0] = n0;
            sv.amplitudes[i1] = n1;
        }
    }
    Ok(sv)
}

/// Tensor product of single-qubit states, qubit 1 most significant.
pub fn product_state(ring: Ring, states: &[(CycNumber, CycNumber)]) -> StateVector {
    let mut amps = vec![ring.one()];
    for (s0, s1) in states {
        let mut next = Vec::with_capacity(amps.len() * 2);
        for z in &amps {
            next.push(z * s0);
            next.push(z * s1);
        }
        amps = next;
    }
    StateVector {
        num_qubits: states.len() as u32,
        amplitudes: amps,
    }
}

/// Outcome of comparing the two oracles over every basis input.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Crosscheck {
    pub checked: usize,
    pub mismatches: Vec<Vec<bool>>,
    /// Inputs on which a control was not classical; these are skipped.
    pub non_scqc: Vec<Vec<bool>>,
}

impl Crosscheck {
    pub fn consistent(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// For every basis input on which the circuit behaves semi-classically,
/// the product of per-qubit states must equal the state-vector result.
pub fn crosscheck(c: &Circuit) -> Result<Crosscheck, OracleError> {
    crosscheck_with_cap(c, DEFAULT_STATEVECTOR_CAP)
}

pub fn crosscheck_with_cap(c: &Circuit, cap: u32) -> Result<Crosscheck, OracleError> {
    if c.num_qubits > cap {
        return Err(OracleError::CapExceeded {
            n: c.num_qubits,
            cap,
        });
    }
    let ring = c.required_ring();
    let n = c.num_qubits;
    let mut out = Crosscheck::default();
    for k in 0..1usize << n {
        let a: Vec<bool> = (0..n).map(|i| k >> (n - 1 - i) & 1 == 1).collect();
        let trace = simulate_assignment_in(ring, c, &a)?;
        if !trace.scqc_ok {
            out.non_scqc.push(a);
            continue;
        }
        let states: Vec<_> = trace
            .per_qubit_matrix
            .iter()
            .map(|m| {
                let s = m.apply_to_ket0();
                (s.amp0, s.amp1)
            })
            .collect();
        let predicted = product_state(ring, &states);
        let actual = statevector_simulate_in(ring, c, &a, cap)?;
        out.checked += 1;
        if predicted != actual {
            out.mismatches.push(a);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse;
    use crate::exact::GateKind;

    const FIG2: &str = ".qubits 3\nX +x1 +x2 -> x3\nX -x1 -x2 -> x3\n";

    #[test]
    fn mixed_controls_give_v_after_not() {
        let c = parse(".qubits 3\nV -x1 +x3 -> x2\n").unwrap();
        let t = simulate_assignment(&c, &[false, true, true]).unwrap();
        let r = Ring::default();
        let v = r.gate(GateKind::V).unwrap();
        assert_eq!(t.per_qubit_matrix[1], &v * &Unitary2::not(r));
        assert_eq!(t.applied[1], vec![GateKind::X, GateKind::V]);
        assert!(t.applied[0].is_empty());
        assert!(t.scqc_ok);
    }

    #[test]
    fn empty_circuit_tracks_inputs() {
        let c = Circuit::new(3);
        let t = simulate_assignment(&c, &[true, false, true]).unwrap();
        assert!(t.per_qubit_matrix[0].is_not());
        assert!(t.per_qubit_matrix[1].is_identity());
        assert!(t.per_qubit_matrix[2].is_not());
        let sv = statevector_simulate(&c, &[true, false, true]).unwrap();
        assert!(sv.amplitudes[0b101].is_one());
    }

    #[test]
    fn fig2_flips_on_equal_inputs() {
        let c = parse(FIG2).unwrap();
        let t = simulate_assignment(&c, &[false, false, false]).unwrap();
        assert!(t.per_qubit_matrix[2].is_not());
        let sv = statevector_simulate(&c, &[true, true, false]).unwrap();
        assert!(sv.amplitudes[0b111].is_one());
        assert!(sv.norm_sqr().is_one());
    }

    #[test]
    fn single_v_gate_state() {
        let c = parse(".qubits 1\nV -> x1\n").unwrap();
        let sv = statevector_simulate(&c, &[false]).unwrap();
        let v = Ring::default().gate(GateKind::V).unwrap();
        assert_eq!(
            sv.amplitudes,
            vec![v.entry(0, 0).clone(), v.entry(1, 0).clone()]
        );
    }

    #[test]
    fn crosscheck_fig2() {
        let c = parse(FIG2).unwrap();
        let x = crosscheck(&c).unwrap();
        assert!(x.consistent());
        assert_eq!(x.checked, 8);
        assert!(x.non_scqc.is_empty());
    }

    #[test]
    fn crosscheck_reports_non_scqc_inputs() {
        let c = parse(".qubits 3\nV +x1 -> x3\nX +x3 -> x2\n").unwrap();
        let x = crosscheck(&c).unwrap();
        assert!(x.consistent());
        // x1 = 1 puts x3 into superposition before it is used as a control
        assert_eq!(x.non_scqc.len(), 4);
        assert!(x.non_scqc.iter().all(|a| a[0]));
        let t = simulate_assignment(&c, &[true, false, false]).unwrap();
        assert_eq!(t.violation, Some((2, 3)));
    }

    #[test]
    fn cap_and_length_errors() {
        let c = Circuit::new(13);
        assert!(matches!(
            statevector_simulate(&c, &[false; 13]),
            Err(OracleError::CapExceeded { n: 13, cap: 12 })
        ));
        let c = Circuit::new(2);
        assert!(matches!(
            simulate_assignment(&c, &[false]),
            Err(OracleError::AssignmentLength { got: 1, want: 2 })
        ));
    }
}
