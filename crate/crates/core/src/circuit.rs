//! Controlled-U gate networks and their line-oriented text format.
//!
//! ```text
//! # comment
//! .qubits 3
//! .labels x1 x2 x3          (optional; defaults to x1..xn)
//! X +x1 +x2 -> x3
//! V -x1 +x3 -> x2
//! R(3/8) -> x1
//! ```
//!
//! Gate names are `I`, `X`, `V`, `V+` and `R(p/q)` with `q` a power of two
//! (the angle is `p/q · π`). Controls are `+label` (fires on `|1⟩`) or
//! `-label` (fires on `|0⟩`). Qubits are numbered from 1.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::exact::{DyadicAngle, GateKind, Ring};

/// One controlled-U gate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    pub kind: GateKind,
    pub positive: BTreeSet<u32>,
    pub negative: BTreeSet<u32>,
    pub target: u32,
}

impl Gate {
    pub fn new(kind: GateKind, target: u32) -> Self {
        Gate {
            kind,
            positive: BTreeSet::new(),
            negative: BTreeSet::new(),
            target,
        }
    }

    pub fn with_positive(mut self, q: u32) -> Self {
        self.positive.insert(q);
        self
    }

    pub fn with_negative(mut self, q: u32) -> Self {
        self.negative.insert(q);
        self
    }

    /// Same controls and target, adjoint unitary.
    pub fn adjoint(&self) -> Gate {
        Gate {
            kind: self.kind.adjoint(),
            ..self.clone()
        }
    }

    /// Every qubit the gate touches.
    pub fn support(&self) -> BTreeSet<u32> {
        let mut s: BTreeSet<u32> = self.positive.union(&self.negative).copied().collect();
        s.insert(self.target);
        s
    }
}

/// Ordered list of gates over `num_qubits` qubits, applied left to right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub num_qubits: u32,
    pub labels: Vec<String>,
    pub gates: Vec<Gate>,
}

pub fn default_labels(n: u32) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

impl Circuit {
    pub fn new(num_qubits: u32) -> Self {
        Circuit {
            num_qubits,
            labels: default_labels(num_qubits),
            gates: Vec::new(),
        }
    }

    pub fn with_gates(num_qubits: u32, gates: Vec<Gate>) -> Self {
        Circuit {
            gates,
            ..Circuit::new(num_qubits)
        }
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    /// Smallest ring that holds every gate matrix of the circuit.
    pub fn required_ring(&self) -> Ring {
        Ring::for_gates(self.gates.iter().map(|g| &g.kind))
    }

    /// The first `len` gates.
    pub fn prefix(&self, len: usize) -> Circuit {
        Circuit {
            gates: self.gates[..len.min(self.gates.len())].to_vec(),
            ..self.clone()
        }
    }

    pub fn label(&self, q: u32) -> &str {
        &self.labels[q as usize - 1]
    }

    /// All structural violations; an empty list means the circuit is valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.labels.len() != self.num_qubits as usize {
            out.push(Diagnostic {
                gate: None,
                message: format!(
                    "{} labels for {} qubits",
                    self.labels.len(),
                    self.num_qubits
                ),
            });
        }
        let mut seen = BTreeSet::new();
        for l in &self.labels {
            if !valid_label(l) {
                out.push(Diagnostic {
                    gate: None,
                    message: format!("invalid label '{l}'"),
                });
            }
            if !seen.insert(l.as_str()) {
                out.push(Diagnostic {
                    gate: None,
                    message: format!("duplicate label '{l}'"),
                });
            }
        }
        let in_range = |q: u32| q >= 1 && q <= self.num_qubits;
        for (i, g) in self.gates.iter().enumerate() {
            let pos = Some(i + 1);
            for q in g.support() {
                if !in_range(q) {
                    out.push(Diagnostic {
                        gate: pos,
                        message: format!("qubit {q} out of range 1..={}", self.num_qubits),
                    });
                }
            }
            if g.positive.contains(&g.target) || g.negative.contains(&g.target) {
                out.push(Diagnostic {
                    gate: pos,
                    message: format!("target qubit {} is also a control", g.target),
                });
            }
            for q in g.positive.intersection(&g.negative) {
                out.push(Diagnostic {
                    gate: pos,
                    message: format!("qubit {q} is both a positive and a negative control"),
                });
            }
        }
        out
    }

    /// Canonical text form; `parse` of the result yields `self` again.
    pub fn serialize(&self) -> String {
        let mut out = format!(".qubits {}\n", self.num_qubits);
        if self.labels != default_labels(self.num_qubits) {
            out.push_str(".labels");
            for l in &self.labels {
                out.push(' ');
                out.push_str(l);
            }
            out.push('\n');
        }
        for g in &self.gates {
            out.push_str(&g.kind.to_string());
            let controls = g
                .positive
                .iter()
                .map(|&q| (q, '+'))
                .chain(g.negative.iter().map(|&q| (q, '-')))
                .collect::<BTreeSet<_>>();
            for (q, sign) in controls {
                out.push(' ');
                out.push(sign);
                out.push_str(self.label(q));
            }
            out.push_str(" -> ");
            out.push_str(self.label(g.target));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// A validation finding; `gate` is the 1-based gate position when the
/// problem is local to one gate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub gate: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.gate {
            Some(g) => write!(f, "gate {g}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("unknown gate '{0}'")]
    UnknownGate(String),
    #[error("unknown qubit '{0}'")]
    UnknownQubit(String),
    #[error("target '{0}' is also listed as a control")]
    TargetIsControl(String),
    #[error("qubit '{0}' listed twice as a control")]
    DuplicateControl(String),
    #[error("angle {0} is not a dyadic multiple of π")]
    NonDyadicAngle(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

fn valid_label(s: &str) -> bool {
    !s.is_empty()
        && !s.starts_with(['+', '-', '.', '#'])
        && s != "->"
        && !s.chars().any(|c| c.is_whitespace() || c == '#')
}

/// Whitespace-separated tokens with their 1-based columns, comments removed.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let body = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in body.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &body[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &body[s..]));
    }
    out.into_iter()
        .map(|(byte, t)| (body[..byte].chars().count() + 1, t))
        .collect()
}

fn parse_gate_kind(tok: &str) -> Result<GateKind, ParseErrorKind> {
    match tok {
        "I" => return Ok(GateKind::I),
        "X" => return Ok(GateKind::X),
        "V" => return Ok(GateKind::V),
        "V+" => return Ok(GateKind::VDagger),
        _ => {}
    }
    let inner = tok
        .strip_prefix("R(")
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| ParseErrorKind::UnknownGate(tok.to_string()))?;
    let (p, q) = inner
        .split_once('/')
        .ok_or_else(|| ParseErrorKind::Syntax(format!("angle '{inner}' must be written p/q")))?;
    let p: i64 = p
        .trim()
        .parse()
        .map_err(|_| ParseErrorKind::Syntax(format!("bad angle numerator '{p}'")))?;
    let q: i64 = q
        .trim()
        .parse()
        .map_err(|_| ParseErrorKind::Syntax(format!("bad angle denominator '{q}'")))?;
    DyadicAngle::new(p, q)
        .map(GateKind::R)
        .map_err(|_| ParseErrorKind::NonDyadicAngle(inner.to_string()))
}

/// Parses the text format into a validated circuit.
pub fn parse(text: &str) -> Result<Circuit, ParseError> {
    let mut num_qubits: Option<(u32, usize)> = None;
    let mut labels: Option<Vec<String>> = None;
    let mut gates = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let err = |column: usize, kind: ParseErrorKind| ParseError {
            line: lineno,
            column,
            kind,
        };
        let toks = tokens(line);
        let Some(&(col0, head)) = toks.first() else {
            continue;
        };
        match head {
            ".qubits" => {
                if num_qubits.is_some() || !gates.is_empty() {
                    return Err(err(
                        col0,
                        ParseErrorKind::Syntax("misplaced .qubits".into()),
                    ));
                }
                let [_, (col, n)] = toks[..] else {
                    return Err(err(
                        col0,
                        ParseErrorKind::Syntax(".qubits takes one count".into()),
                    ));
                };
                let n: u32 = n.parse().map_err(|_| {
                    err(
                        col,
                        ParseErrorKind::Syntax(format!("bad qubit count '{n}'")),
                    )
                })?;
                num_qubits = Some((n, lineno));
            }
            ".labels" => {
                let Some((n, _)) = num_qubits else {
                    return Err(err(
                        col0,
                        ParseErrorKind::Syntax(".labels before .qubits".into()),
                    ));
                };
                if labels.is_some() || !gates.is_empty() {
                    return Err(err(
                        col0,
                        ParseErrorKind::Syntax("misplaced .labels".into()),
                    ));
                }
                let names: Vec<String> = toks[1..].iter().map(|(_, t)| t.to_string()).collect();
                if names.len() != n as usize {
                    return Err(err(
                        col0,
                        ParseErrorKind::Syntax(format!("{} labels for {n} qubits", names.len())),
                    ));
                }
                for (i, (col, t)) in toks[1..].iter().enumerate() {
                    if !valid_label(t) {
                        return Err(err(
                            *col,
                            ParseErrorKind::Syntax(format!("invalid label '{t}'")),
                        ));
                    }
                    if names[..i].iter().any(|prev| prev == t) {
                        return Err(err(
                            *col,
                            ParseErrorKind::Syntax(format!("duplicate label '{t}'")),
                        ));
                    }
                }
                labels = Some(names);
            }
            _ if head.starts_with('.') => {
                return Err(err(
                    col0,
                    ParseErrorKind::Syntax(format!("unknown directive '{head}'")),
                ));
            }
            _ => {
                let Some((n, _)) = num_qubits else {
                    return Err(err(
                        col0,
                        ParseErrorKind::Syntax("gate before .qubits".into()),
                    ));
                };
                let names = labels.get_or_insert_with(|| default_labels(n));
                let lookup = |col: usize, name: &str| {
                    names
                        .iter()
                        .position(|l| l == name)
                        .map(|i| i as u32 + 1)
                        .ok_or_else(|| err(col, ParseErrorKind::UnknownQubit(name.to_string())))
                };
                let kind = parse_gate_kind(head).map_err(|k| err(col0, k))?;
                let arrow = toks.iter().position(|(_, t)| *t == "->").ok_or_else(|| {
                    err(col0, ParseErrorKind::Syntax("expected '-> target'".into()))
                })?;
                if arrow + 2 != toks.len() {
                    let col = toks.get(arrow + 2).map_or(toks[arrow].0, |t| t.0);
                    return Err(err(
                        col,
                        ParseErrorKind::Syntax("expected exactly one target".into()),
                    ));
                }
                let (tcol, tname) = toks[arrow + 1];
                let target = lookup(tcol, tname)?;
                let mut gate = Gate::new(kind, target);
                for &(col, tok) in &toks[1..arrow] {
                    let (positive, name) = if let Some(rest) = tok.strip_prefix('+') {
                        (true, rest)
                    } else if let Some(rest) = tok.strip_prefix('-') {
                        (false, rest)
                    } else {
                        return Err(err(
                            col,
                            ParseErrorKind::Syntax(format!(
                                "control '{tok}' needs a '+' or '-' prefix"
                            )),
                        ));
                    };
                    let q = lookup(col + 1, name)?;
                    if q == target {
                        return Err(err(col, ParseErrorKind::TargetIsControl(name.to_string())));
                    }
                    if gate.positive.contains(&q) || gate.negative.contains(&q) {
                        return Err(err(col, ParseErrorKind::DuplicateControl(name.to_string())));
                    }
                    if positive {
                        gate.positive.insert(q);
                    } else {
                        gate.negative.insert(q);
                    }
                }
                gates.push(gate);
            }
        }
    }

    let Some((n, _)) = num_qubits else {
        return Err(ParseError {
            line: text.lines().count().max(1),
            column: 1,
            kind: ParseErrorKind::Syntax("missing .qubits header".into()),
        });
    };
    Ok(Circuit {
        num_qubits: n,
        labels: labels.unwrap_or_else(|| default_labels(n)),
        gates,
    })
}
