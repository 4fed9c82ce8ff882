//! Exact reproductions of the reference truth tables and of the two-gate
//! equality circuit. Each check returns a description of the first mismatch.

#![allow(dead_code)]

use ddmf::dd::DdmfManager;
use ddmf::exact::{GateKind, Ring, Unitary2};
use ddmf::parse;
use ddmf::verifier::{apply_gate, build, control_function, init_state};

use super::{assignments, dd_from_table, r};

pub const EQUALITY: &str = ".qubits 3\nX +x1 +x2 -> x3\nX -x1 -x2 -> x3\n";
pub const HALF_ADDER_GATE1: &str = ".qubits 3\nV+ +x2 -> x3\n";
pub const MIXED_V: &str = ".qubits 3\nV -x1 +x3 -> x2\n";

type Check = Result<(), String>;

fn expect(row: &[bool], what: &str, got: &Unitary2, want: &Unitary2) -> Check {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what} at {row:?}: got {got:?}, want {want:?}"))
    }
}

fn g(ring: Ring, k: GateKind) -> Unitary2 {
    ring.gate(k).unwrap()
}

/// qf1, qf2, mf1, mf2, CM(I) and CM(R(π/2)) over `(x1, x2)` with the third
/// qubit starting in |0⟩.
pub fn adder_gate_functions() -> Check {
    let ring = Ring::default();
    let (i, n, vd) = (
        g(ring, GateKind::I),
        g(ring, GateKind::X),
        g(ring, GateKind::VDagger),
    );
    let mf1_want = [&i, &vd, &i, &vd];
    let mf2_want = [&n, &i, &i, &n];
    let qf2_want = [true, false, false, true];

    let ha = parse(HALF_ADDER_GATE1).unwrap();
    let mut m1 = DdmfManager::new(ring, 3);
    let s1 = build(&mut m1, &ha).map_err(|e| e.to_string())?;
    let mf1 = m1.cofactor(s1.qubit(3), 3, false).unwrap();

    let fig2 = parse(EQUALITY).unwrap();
    let mut m2 = DdmfManager::new(ring, 3);
    let s2 = build(&mut m2, &fig2).map_err(|e| e.to_string())?;
    let mf2 = m2.cofactor(s2.qubit(3), 3, false).unwrap();

    let cm_i = m1.terminal();
    let cm_r = m1.constant(g(ring, r(1, 2))).unwrap();

    for (k, row) in assignments(2).enumerate() {
        let a = [row[0], row[1], false];
        let v1 = m1.evaluate(mf1, &a).unwrap();
        expect(&row, "mf1", &v1, mf1_want[k])?;
        if v1.apply_to_ket0() != mf1_want[k].apply_to_ket0() {
            return Err(format!("qf1 at {row:?}"));
        }
        let v2 = m2.evaluate(mf2, &a).unwrap();
        expect(&row, "mf2", &v2, mf2_want[k])?;
        if v2.apply_to_ket0().as_basis() != Some(qf2_want[k]) {
            return Err(format!("qf2 at {row:?}"));
        }
        expect(&row, "CM(I)", &m1.evaluate(cm_i, &a).unwrap(), &i)?;
        expect(
            &row,
            "CM(R(pi/2))",
            &m1.evaluate(cm_r, &a).unwrap(),
            &g(ring, r(1, 2)),
        )?;
    }
    // qf1(0,1) is V⁻¹|0⟩, a proper superposition
    if vd.apply_to_ket0().as_basis().is_some() {
        return Err("V+|0> should not be a basis state".into());
    }
    Ok(())
}

/// mf1 ⊕ mf2 and f ∗ mf3 over `(x1, x2)`.
pub fn operator_rows() -> Check {
    let ring = Ring::default();
    let (i, n) = (g(ring, GateKind::I), g(ring, GateKind::X));
    let (r2, r4, r1, r34) = (
        g(ring, r(1, 2)),
        g(ring, r(1, 4)),
        g(ring, r(1, 1)),
        g(ring, r(3, 4)),
    );
    let mut m = DdmfManager::new(ring, 2);
    let mf1 = dd_from_table(&mut m, &[r2.clone(), i.clone(), i.clone(), r2.clone()], 1);
    let mf2 = dd_from_table(&mut m, &[r2.clone(), i.clone(), r4.clone(), r4.clone()], 1);
    let mf3 = dd_from_table(&mut m, &[r2.clone(), i.clone(), r1.clone(), r1.clone()], 1);
    let f = dd_from_table(&mut m, &[n.clone(), i.clone(), n.clone(), i.clone()], 1);
    if !m.is_boolean(f) {
        return Err("f should be Boolean".into());
    }
    // f = x̄2, and the canonical handle must say so
    let x2 = m.variable(2).unwrap();
    let nx2 = m.bool_not(x2).unwrap();
    if f != nx2 {
        return Err("f built from its table differs from NOT x2".into());
    }
    let sum = m.compose(mf1, mf2).unwrap();
    let sel = m.select(f, mf3).unwrap();
    let sum_want = [&r1, &i, &r4, &r34];
    let sel_want = [&r2, &i, &r1, &i];
    for (k, row) in assignments(2).enumerate() {
        expect(
            &row,
            "mf1+mf2",
            &m.evaluate(sum, &row).unwrap(),
            sum_want[k],
        )?;
        expect(&row, "f*mf3", &m.evaluate(sel, &row).unwrap(), sel_want[k])?;
    }
    Ok(())
}

/// F(D_gate) for `V -x1 +x3 -> x2`: V exactly when x1 = 0 and x3 = 1.
pub fn mixed_v_gate_function() -> Check {
    let ring = Ring::default();
    let c = parse(MIXED_V).unwrap();
    let mut m = DdmfManager::new(ring, 3);
    let s = init_state(&mut m, 3).unwrap();
    let gf = control_function(&mut m, &s, &c.gates[0], 1).map_err(|e| e.to_string())?;
    let x1 = m.variable(1).unwrap();
    let x3 = m.variable(3).unwrap();
    let nx1 = m.bool_not(x1).unwrap();
    let want_g = m.bool_and(nx1, x3).unwrap();
    if gf != want_g {
        return Err("control function is not NOT x1 AND x3".into());
    }
    let cv = m.constant(g(ring, GateKind::V)).unwrap();
    let d_gate = m.select(gf, cv).unwrap();
    let (i, v) = (g(ring, GateKind::I), g(ring, GateKind::V));
    let want = [&i, &v, &i, &v, &i, &i, &i, &i];
    for (k, row) in assignments(3).enumerate() {
        expect(
            &row,
            "F(D_gate)",
            &m.evaluate(d_gate, &row).unwrap(),
            want[k],
        )?;
    }
    Ok(())
}

/// F(D_2^1) after the same gate: I, V, N, VN, I, I, N, N.
pub fn mixed_v_target_function() -> Check {
    let ring = Ring::default();
    let c = parse(MIXED_V).unwrap();
    let mut m = DdmfManager::new(ring, 3);
    let mut s = init_state(&mut m, 3).unwrap();
    let before = s.clone();
    apply_gate(&mut m, &mut s, &c.gates[0]).map_err(|e| e.to_string())?;
    if s.qubit(1) != before.qubit(1) || s.qubit(3) != before.qubit(3) {
        return Err("non-target qubits changed".into());
    }
    let (i, v, n) = (
        g(ring, GateKind::I),
        g(ring, GateKind::V),
        g(ring, GateKind::X),
    );
    let vn = &v * &n;
    let want = [&i, &v, &n, &vn, &i, &i, &n, &n];
    for (k, row) in assignments(3).enumerate() {
        expect(
            &row,
            "F(D_2^1)",
            &m.evaluate(s.qubit(2), &row).unwrap(),
            want[k],
        )?;
    }
    Ok(())
}

/// Qubit 3 of the equality circuit computes `x3 ⊕ (x1·x2 + x̄1·x̄2)`.
pub fn equality_circuit() -> Check {
    let ring = Ring::default();
    let c = parse(EQUALITY).unwrap();
    let mut m = DdmfManager::new(ring, 3);
    let s = build(&mut m, &c).map_err(|e| e.to_string())?;
    if !m.is_boolean(s.qubit(3)) {
        return Err("qubit 3 is not Boolean".into());
    }
    for q in 1..=2 {
        if s.qubit(q) != m.variable(q).unwrap() {
            return Err(format!("qubit {q} changed"));
        }
    }
    for row in assignments(3) {
        let (x1, x2, x3) = (row[0], row[1], row[2]);
        let want = x3 ^ ((x1 && x2) || (!x1 && !x2));
        let got = m.evaluate(s.qubit(3), &row).unwrap();
        let ok = if want {
            got.is_not()
        } else {
            got.is_identity()
        };
        if !ok {
            return Err(format!("qubit 3 at {row:?}"));
        }
    }
    Ok(())
}
