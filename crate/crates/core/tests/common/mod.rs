//! Shared test support: random matrix-function expressions evaluated two
//! ways (through the DDMF engine and through explicit truth tables), and
//! small circuit helpers.

#![allow(dead_code)]

pub mod tables;

use ddmf::dd::{DdmfManager, DdmfRef};
use ddmf::exact::{DyadicAngle, GateKind, Ring, Unitary2};
use ddmf::Circuit;
use rand::prelude::*;

pub fn angle(p: i64, q: i64) -> DyadicAngle {
    DyadicAngle::new(p, q).unwrap()
}

pub fn r(p: i64, q: i64) -> GateKind {
    GateKind::R(angle(p, q))
}

/// All `2^n` assignments, `x1` most significant.
pub fn assignments(n: u32) -> impl Iterator<Item = Vec<bool>> {
    (0..1u64 << n).map(move |k| (0..n).map(|i| k >> (n - 1 - i) & 1 == 1).collect())
}

pub fn bits(s: &str) -> Vec<bool> {
    s.chars().map(|c| c == '1').collect()
}

#[derive(Clone, Debug)]
pub enum Expr {
    Var(u32),
    Const(GateKind),
    Compose(Box<Expr>, Box<Expr>),
    /// First operand is always Boolean by construction.
    Select(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    Cofactor(Box<Expr>, u32, bool),
}

const ALPHABET: [GateKind; 5] = [
    GateKind::X,
    GateKind::V,
    GateKind::VDagger,
    GateKind::I,
    GateKind::X,
];

fn random_const(rng: &mut impl Rng, boolean: bool) -> GateKind {
    if boolean {
        if rng.gen_bool(0.5) {
            GateKind::X
        } else {
            GateKind::I
        }
    } else {
        match rng.gen_range(0..7) {
            0..=4 => ALPHABET[rng.gen_range(0..5)],
            5 => r(1, 2),
            _ => r(1, 4),
        }
    }
}

/// Random expression over `x1..xn`. When `boolean` is set the expression
/// only ever evaluates to `I` or `X`.
pub fn random_expr(rng: &mut impl Rng, n: u32, depth: u32, boolean: bool) -> Expr {
    if depth == 0 || rng.gen_bool(0.2) {
        return if rng.gen_bool(0.6) {
            Expr::Var(rng.gen_range(1..=n))
        } else {
            Expr::Const(random_const(rng, boolean))
        };
    }
    match rng.gen_range(0..4) {
        0 => Expr::Compose(
            Box::new(random_expr(rng, n, depth - 1, boolean)),
            Box::new(random_expr(rng, n, depth - 1, boolean)),
        ),
        1 => Expr::Select(
            Box::new(random_expr(rng, n, depth - 1, true)),
            Box::new(random_expr(rng, n, depth - 1, boolean)),
        ),
        2 if boolean => Expr::Not(Box::new(random_expr(rng, n, depth - 1, true))),
        _ => Expr::Cofactor(
            Box::new(random_expr(rng, n, depth - 1, boolean)),
            rng.gen_range(1..=n),
            rng.gen_bool(0.5),
        ),
    }
}

pub fn build_dd(mgr: &mut DdmfManager, e: &Expr) -> DdmfRef {
    match e {
        Expr::Var(i) => mgr.variable(*i).unwrap(),
        Expr::Const(k) => {
            let m = mgr.ring().gate(*k).unwrap();
            mgr.constant(m).unwrap()
        }
        Expr::Compose(a, b) => {
            let a = build_dd(mgr, a);
            let b = build_dd(mgr, b);
            mgr.compose(a, b).unwrap()
        }
        Expr::Select(f, g) => {
            let f = build_dd(mgr, f);
            let g = build_dd(mgr, g);
            mgr.select(f, g).unwrap()
        }
        Expr::Not(f) => {
            let f = build_dd(mgr, f);
            mgr.bool_not(f).unwrap()
        }
        Expr::Cofactor(f, v, b) => {
            let f = build_dd(mgr, f);
            mgr.cofactor(f, *v, *b).unwrap()
        }
    }
}

/// Pointwise reference semantics: one matrix per assignment, computed with
/// plain matrix products and no diagram.
pub fn truth_table(ring: Ring, n: u32, e: &Expr) -> Vec<Unitary2> {
    assignments(n).map(|a| eval_expr(ring, e, &a)).collect()
}

pub fn eval_expr(ring: Ring, e: &Expr, a: &[bool]) -> Unitary2 {
    match e {
        Expr::Var(i) => {
            if a[*i as usize - 1] {
                Unitary2::not(ring)
            } else {
                Unitary2::identity(ring)
            }
        }
        Expr::Const(k) => ring.gate(*k).unwrap(),
        Expr::Compose(x, y) => &eval_expr(ring, x, a) * &eval_expr(ring, y, a),
        Expr::Select(f, g) => {
            let fv = eval_expr(ring, f, a);
            assert!(fv.is_classical(), "guard must be Boolean");
            if fv.is_not() {
                eval_expr(ring, g, a)
            } else {
                Unitary2::identity(ring)
            }
        }
        Expr::Not(f) => &Unitary2::not(ring) * &eval_expr(ring, f, a),
        Expr::Cofactor(f, v, b) => {
            let mut a2 = a.to_vec();
            a2[*v as usize - 1] = *b;
            eval_expr(ring, f, &a2)
        }
    }
}

/// Every value of `d`, by walking the diagram once per assignment.
pub fn dd_table(mgr: &mut DdmfManager, d: DdmfRef, n: u32) -> Vec<Unitary2> {
    assignments(n)
        .map(|a| mgr.evaluate(d, &a).unwrap())
        .collect()
}

/// Builds a DDMF directly from a truth table (`x1` most significant) by
/// Shannon expansion through `make_node`.
pub fn dd_from_table(mgr: &mut DdmfManager, table: &[Unitary2], first_var: u32) -> DdmfRef {
    if table.len() == 1 {
        return mgr.constant(table[0].clone()).unwrap();
    }
    let half = table.len() / 2;
    let lo = dd_from_table(mgr, &table[..half], first_var + 1);
    let hi = dd_from_table(mgr, &table[half..], first_var + 1);
    let id = Unitary2::identity(mgr.ring());
    mgr.make_node(first_var, id.clone(), hi, id, lo).unwrap()
}

/// Random circuit configuration for the oracle sweeps.
pub fn random_circuit(rng: &mut impl Rng, max_n: u32, max_gates: usize) -> Circuit {
    let n = rng.gen_range(1..=max_n);
    let g = rng.gen_range(0..=max_gates);
    let mut cfg = ddmf::bench::BenchConfig::new(n, g, 1, rng.gen());
    for w in cfg.gate_mix.iter_mut() {
        *w = rng.gen_range(0..4) as f64;
    }
    if cfg.gate_mix.iter().all(|w| *w == 0.0) {
        cfg.gate_mix[0] = 1.0;
    }
    cfg.max_controls = rng.gen_range(0..=3);
    ddmf::bench::random_scqc(&cfg, 0).unwrap()
}
