use num_complex::Complex64;

use super::*;
use crate::dialects::{full_registry, mqtopt, mqtopt::GateKind};
use crate::ir::Function;
use crate::testing::circuit;

fn close(a: Complex64, re: f64, im: f64) -> bool {
    (a - Complex64::new(re, im)).norm() < 1e-12
}

#[test]
fn hadamard_on_one_qubit() {
    let reg = full_registry();
    let s = simulate(&circuit(&reg, 1, &[(GateKind::H, &[0], &[])]), 1).unwrap();
    assert_eq!(s.amplitudes[0].re, std::f64::consts::FRAC_1_SQRT_2);
    assert_eq!(s.amplitudes[1].re, std::f64::consts::FRAC_1_SQRT_2);
}

#[test]
fn ghz_three() {
    let reg = full_registry();
    let f = circuit(
        &reg,
        3,
        &[
            (GateKind::H, &[0], &[]),
            (GateKind::X, &[1], &[0]),
            (GateKind::X, &[2], &[1]),
        ],
    );
    let s = simulate(&f, 3).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for (i, a) in s.amplitudes.iter().enumerate() {
        let want = if i == 0 || i == 7 { h } else { 0.0 };
        assert!(close(*a, want, 0.0), "index {i}: {a}");
    }
}

#[test]
fn little_endian_convention() {
    let reg = full_registry();
    let s = simulate(&circuit(&reg, 2, &[(GateKind::X, &[1], &[])]), 2).unwrap();
    assert!(close(s.amplitudes[0b10], 1.0, 0.0));
}

/// t⁸ against an independent matrix-power computation.
#[test]
fn t_eight_times_is_identity() {
    let reg = full_registry();
    let gates: Vec<(GateKind, &[usize], &[usize])> = vec![(GateKind::T, &[0], &[]); 8];
    let f = circuit(&reg, 1, &gates);
    let s = simulate(&f, 1).unwrap();

    let phase = Complex64::from_polar(1.0, std::f64::consts::PI / 4.0);
    let t = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), phase],
    ];
    let mut m = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ];
    for _ in 0..8 {
        let mut p = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    p[i][j] += t[i][k] * m[k][j];
                }
            }
        }
        m = p;
    }
    assert!((s.amplitudes[0] - m[0][0]).norm() < 1e-12);
    assert!((s.amplitudes[1] - m[1][0]).norm() < 1e-12);
    assert!(close(s.amplitudes[0], 1.0, 0.0));
}

#[test]
fn measure_is_rejected() {
    let reg = full_registry();
    let mut f = Function::new("m");
    let r = mqtopt::alloc_register(&mut f, &reg, 1).unwrap();
    let (r1, q) = mqtopt::extract_qubit(&mut f, &reg, r, 0).unwrap();
    let (q1, _) = mqtopt::measure(&mut f, &reg, q).unwrap();
    let r2 = mqtopt::insert_qubit(&mut f, &reg, r1, q1, 0).unwrap();
    mqtopt::dealloc_register(&mut f, &reg, r2).unwrap();
    assert!(matches!(simulate(&f, 1), Err(SimError::NonUnitaryOp(_))));
}

#[test]
fn too_many_qubits() {
    let reg = full_registry();
    let f = circuit(&reg, 3, &[]);
    assert!(matches!(
        simulate(&f, 2),
        Err(SimError::TooManyQubits { .. })
    ));
    assert!(matches!(
        simulate(&f, 13),
        Err(SimError::TooManyQubits { .. })
    ));
}

#[test]
fn equivalence_on_zero() {
    let reg = full_registry();
    let h = circuit(&reg, 1, &[(GateKind::H, &[0], &[])]);
    let empty = circuit(&reg, 1, &[]);
    assert!(equivalent_on_zero(&h, &h, 1, None).unwrap());
    assert!(!equivalent_on_zero(&h, &empty, 1, None).unwrap());
}

#[test]
fn layout_permutation_is_undone() {
    let reg = full_registry();
    // logical: x on q0; physical: x on wire 1, layout q0 -> 1, q1 -> 0
    let f = circuit(&reg, 2, &[(GateKind::X, &[0], &[])]);
    let g = circuit(&reg, 2, &[(GateKind::X, &[1], &[])]);
    assert!(!equivalent_on_zero(&f, &g, 2, None).unwrap());
    assert!(equivalent_on_zero(&f, &g, 2, Some(&[1, 0])).unwrap());
}

#[test]
fn swap_equals_three_cnots() {
    let reg = full_registry();
    let swap = circuit(&reg, 2, &[(GateKind::Swap, &[0, 1], &[])]);
    let cx = circuit(
        &reg,
        2,
        &[
            (GateKind::X, &[0], &[1]),
            (GateKind::X, &[1], &[0]),
            (GateKind::X, &[0], &[1]),
        ],
    );
    assert!(full_unitary_equal(&swap, &cx, 2).unwrap());
}

#[test]
fn x_equals_hzh() {
    let reg = full_registry();
    let x = circuit(&reg, 1, &[(GateKind::X, &[0], &[])]);
    let hzh = circuit(
        &reg,
        1,
        &[
            (GateKind::H, &[0], &[]),
            (GateKind::Z, &[0], &[]),
            (GateKind::H, &[0], &[]),
        ],
    );
    let y = circuit(&reg, 1, &[(GateKind::Y, &[0], &[])]);
    assert!(full_unitary_equal(&x, &hzh, 1).unwrap());
    assert!(!full_unitary_equal(&x, &y, 1).unwrap());
}

#[test]
fn global_phase_is_ignored() {
    let reg = full_registry();
    // y = i·x·z
    let y = circuit(&reg, 1, &[(GateKind::Y, &[0], &[])]);
    let xz = circuit(
        &reg,
        1,
        &[(GateKind::Z, &[0], &[]), (GateKind::X, &[0], &[])],
    );
    assert!(full_unitary_equal(&y, &xz, 1).unwrap());
}

#[test]
fn qcirc_trace_matches_mqtopt() {
    let reg = full_registry();
    let m = crate::text::parse_module(
        r#"module { func @g() {
    %0 = qcirc.alloc() {size = 2} : () -> !qcirc.reg
    %1 = qcirc.extract(%0) {index = 0} : (!qcirc.reg) -> !qcirc.bit
    %2 = qcirc.extract(%0) {index = 1} : (!qcirc.reg) -> !qcirc.bit
    %3 = qcirc.custom(%1) {gate_name = "Hadamard"} : (!qcirc.bit) -> !qcirc.bit
    %4, %5 = qcirc.custom(%3, %2) {gate_name = "CNOT"} : (!qcirc.bit, !qcirc.bit) -> (!qcirc.bit, !qcirc.bit)
    %6 = qcirc.insert(%0, %4) {index = 0} : (!qcirc.reg, !qcirc.bit) -> !qcirc.reg
    %7 = qcirc.insert(%6, %5) {index = 1} : (!qcirc.reg, !qcirc.bit) -> !qcirc.reg
    qcirc.dealloc(%7) : (!qcirc.reg) -> ()
} }"#,
        &reg,
    )
    .unwrap();
    let q = m.function("g").unwrap();
    let o = circuit(
        &reg,
        2,
        &[(GateKind::H, &[0], &[]), (GateKind::X, &[1], &[0])],
    );
    assert_eq!(trace(q).unwrap(), trace(&o).unwrap());
    assert!(equivalent_on_zero(q, &o, 2, None).unwrap());
}

#[test]
fn rotation_angles_fold() {
    let reg = full_registry();
    let mut f = Function::new("r");
    let r = mqtopt::alloc_register(&mut f, &reg, 1).unwrap();
    let (r1, q) = mqtopt::extract_qubit(&mut f, &reg, r, 0).unwrap();
    let a = crate::dialects::arith::constant(&mut f, &reg, std::f64::consts::PI).unwrap();
    let (t, _) = mqtopt::gate(&mut f, &reg, GateKind::Rx, &[a], &[q], &[]).unwrap();
    let r2 = mqtopt::insert_qubit(&mut f, &reg, r1, t[0], 0).unwrap();
    mqtopt::dealloc_register(&mut f, &reg, r2).unwrap();
    let s = simulate(&f, 1).unwrap();
    // rx(pi)|0> = -i|1>
    assert!(close(s.amplitudes[1], 0.0, -1.0));
}
