//! Text and JSON renderings of command results.

use ddmf::circuit::Circuit;
use ddmf::exact::{DyadicAngle, GateKind, MatrixNamer, QubitState, Unitary2};
use ddmf::oracle::AssignmentTrace;
use ddmf::verifier::{Side, VerificationReport};
use serde::Serialize;

pub fn bits(a: &[bool]) -> String {
    a.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Namer over `N, V, V+` and every phase gate used by the circuits, plus
/// the two common ones.
pub fn namer_for(circuits: &[&Circuit]) -> MatrixNamer {
    let mut angles = vec![
        DyadicAngle::new(1, 2).unwrap(),
        DyadicAngle::new(1, 4).unwrap(),
    ];
    for c in circuits {
        for g in &c.gates {
            if let GateKind::R(a) = g.kind {
                angles.push(a);
            }
        }
    }
    let ring = ddmf::exact::Ring::for_gates(
        circuits
            .iter()
            .flat_map(|c| c.gates.iter().map(|g| &g.kind)),
    );
    MatrixNamer::new(ring, &angles, 3)
}

/// Gates in application order rendered as a product, last gate leftmost.
pub fn applied_word(kinds: &[GateKind]) -> String {
    let word: String = kinds
        .iter()
        .rev()
        .filter(|k| **k != GateKind::I)
        .map(|k| match k {
            GateKind::X => "N".to_string(),
            other => other.to_string(),
        })
        .collect();
    if word.is_empty() {
        "I".to_string()
    } else {
        word
    }
}

pub fn state_text(s: &QubitState) -> String {
    match s.as_basis() {
        Some(false) => "|0>".to_string(),
        Some(true) => "|1>".to_string(),
        None => format!("({})|0> + ({})|1>", s.amp0, s.amp1),
    }
}

#[derive(Serialize)]
pub struct CounterexampleJson {
    pub qubit: u32,
    pub label: String,
    pub assignment: String,
    pub value_a: String,
    pub value_b: String,
    pub confirmed: bool,
}

#[derive(Serialize)]
pub struct ViolationJson {
    pub circuit: Side,
    pub file: String,
    pub gate: usize,
    pub qubit: u32,
    pub label: String,
}

#[derive(Serialize)]
pub struct StatsJson {
    pub nodes_a: usize,
    pub nodes_b: usize,
    pub peak_nodes: usize,
    pub millis: u128,
}

#[derive(Serialize)]
pub struct VerifyJson {
    pub verdict: ddmf::Verdict,
    pub exit_code: i32,
    pub qubits: u32,
    pub equal: Vec<bool>,
    pub first_difference: Option<u32>,
    pub counterexample: Option<CounterexampleJson>,
    pub violation: Option<ViolationJson>,
    pub stats: StatsJson,
}

pub struct VerifyView<'a> {
    pub report: &'a VerificationReport,
    pub a: &'a Circuit,
    pub files: [&'a str; 2],
    pub witness: Option<CounterexampleJson>,
}

impl VerifyView<'_> {
    pub fn json(self) -> VerifyJson {
        let r = self.report;
        let violation = r.violation.as_ref().map(|v| {
            let idx = match v.circuit {
                Side::A => 0,
                Side::B => 1,
            };
            ViolationJson {
                circuit: v.circuit,
                file: self.files[idx].to_string(),
                gate: v.gate,
                qubit: v.qubit,
                label: self.a.label(v.qubit).to_string(),
            }
        });
        VerifyJson {
            verdict: r.verdict,
            exit_code: r.verdict.exit_code(),
            qubits: r.qubits,
            equal: r.equal.clone(),
            first_difference: r.first_difference,
            counterexample: self.witness,
            violation,
            stats: StatsJson {
                nodes_a: r.stats.nodes_a,
                nodes_b: r.stats.nodes_b,
                peak_nodes: r.stats.peak_nodes,
                millis: r.stats.millis,
            },
        }
    }

    pub fn text(self) -> String {
        let r = self.report;
        let mut out = String::new();
        match r.verdict {
            ddmf::Verdict::Equivalent => {
                out.push_str(&format!("equivalent: all {} qubits match\n", r.qubits));
            }
            ddmf::Verdict::Inequivalent => {
                let differ: Vec<&str> = r
                    .equal
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| !**e)
                    .map(|(i, _)| self.a.label(i as u32 + 1))
                    .collect();
                let (noun, verb) = if differ.len() == 1 {
                    ("qubit", "differs")
                } else {
                    ("qubits", "differ")
                };
                out.push_str(&format!(
                    "inequivalent: {noun} {} {verb}\n",
                    differ.join(", ")
                ));
            }
            ddmf::Verdict::NotScqc => {
                let v = r
                    .violation
                    .as_ref()
                    .expect("not-scqc report carries a violation");
                let idx = if v.circuit == Side::A { 0 } else { 1 };
                out.push_str(&format!(
                    "not semi-classical: {} gate {} uses control qubit {} while it is not classical\n",
                    self.files[idx],
                    v.gate,
                    self.a.label(v.qubit)
                ));
            }
        }
        if let Some(w) = &self.witness {
            out.push_str(&format!(
                "counterexample: input {} gives qubit {} = {} in A but {} in B\n",
                w.assignment, w.label, w.value_a, w.value_b
            ));
        }
        if r.verdict != ddmf::Verdict::NotScqc {
            out.push_str(&format!(
                "nodes: {} (A), {} (B), {} interned, {} ms\n",
                r.stats.nodes_a, r.stats.nodes_b, r.stats.peak_nodes, r.stats.millis
            ));
        }
        out
    }
}

#[derive(Serialize)]
pub struct QubitJson {
    pub qubit: u32,
    pub label: String,
    /// Gates that acted on the qubit, last one leftmost.
    pub applied: String,
    /// Shortest product naming the matrix, when one exists.
    pub name: Option<String>,
    pub matrix: [[String; 2]; 2],
    pub amp0: String,
    pub amp1: String,
    /// Classical output bit, when the state is a basis state.
    pub bit: Option<u8>,
}

#[derive(Serialize)]
pub struct SimulateJson {
    pub input: String,
    pub qubits: Vec<QubitJson>,
}

pub fn simulate_json(c: &Circuit, trace: &AssignmentTrace, namer: &MatrixNamer) -> SimulateJson {
    let entry = |m: &Unitary2, i: usize, j: usize| m.entry(i, j).to_string();
    let qubits = (1..=c.num_qubits)
        .map(|q| {
            let m = &trace.per_qubit_matrix[q as usize - 1];
            let s = m.apply_to_ket0();
            QubitJson {
                qubit: q,
                label: c.label(q).to_string(),
                applied: applied_word(&trace.applied[q as usize - 1]),
                name: namer.name(m).map(str::to_string),
                matrix: [
                    [entry(m, 0, 0), entry(m, 0, 1)],
                    [entry(m, 1, 0), entry(m, 1, 1)],
                ],
                amp0: s.amp0.to_string(),
                amp1: s.amp1.to_string(),
                bit: s.as_basis().map(u8::from),
            }
        })
        .collect();
    SimulateJson {
        input: bits(&trace.assignment),
        qubits,
    }
}

pub fn simulate_text(c: &Circuit, trace: &AssignmentTrace, namer: &MatrixNamer) -> String {
    let mut out = format!("input {}\n", bits(&trace.assignment));
    let width = (1..=c.num_qubits)
        .map(|q| c.label(q).len())
        .max()
        .unwrap_or(0);
    for q in 1..=c.num_qubits {
        let m = &trace.per_qubit_matrix[q as usize - 1];
        let word = applied_word(&trace.applied[q as usize - 1]);
        let rendered = namer.render(m);
        let matrix = if rendered == word {
            word
        } else {
            format!("{word} = {rendered}")
        };
        out.push_str(&format!(
            "{:width$}  {}  state {}\n",
            c.label(q),
            matrix,
            state_text(&m.apply_to_ket0())
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_put_the_last_gate_first() {
        assert_eq!(applied_word(&[]), "I");
        assert_eq!(applied_word(&[GateKind::X, GateKind::V]), "VN");
        let r = GateKind::R(DyadicAngle::new(1, 2).unwrap());
        assert_eq!(applied_word(&[r, GateKind::VDagger]), "V+R(1/2)");
    }

    #[test]
    fn bit_strings() {
        assert_eq!(bits(&[false, true, true]), "011");
    }
}
