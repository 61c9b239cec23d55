//! Circuit builders shared by unit tests.

use crate::dialects::{arith, mqtopt, mqtopt::GateKind};
use crate::ir::{verify_function, DialectRegistry, Function};

pub type G<'a> = (GateKind, &'a [usize], &'a [usize]);

/// Builds an mqtopt function on `n` wires from `(kind, targets, controls)`.
/// Rotations take angles from `angles` in order, then 0.3.
pub fn circuit_with_angles(
    reg: &DialectRegistry,
    n: usize,
    gates: &[G<'_>],
    angles: &[f64],
) -> Function {
    let mut angles = angles.iter().copied();
    let mut f = Function::new("c");
    let mut r = mqtopt::alloc_register(&mut f, reg, n as i64).unwrap();
    let mut q = Vec::new();
    for i in 0..n {
        let (r1, qi) = mqtopt::extract_qubit(&mut f, reg, r, i as i64).unwrap();
        r = r1;
        q.push(qi);
    }
    for (kind, t, c) in gates {
        let params: Vec<_> = (0..kind.num_params())
            .map(|_| arith::constant(&mut f, reg, angles.next().unwrap_or(0.3)).unwrap())
            .collect();
        let tv: Vec<_> = t.iter().map(|&i| q[i]).collect();
        let cv: Vec<_> = c.iter().map(|&i| q[i]).collect();
        let (to, co) = mqtopt::gate(&mut f, reg, *kind, &params, &tv, &cv).unwrap();
        for (&i, v) in t.iter().zip(to) {
            q[i] = v;
        }
        for (&i, v) in c.iter().zip(co) {
            q[i] = v;
        }
    }
    for (i, qi) in q.into_iter().enumerate() {
        r = mqtopt::insert_qubit(&mut f, reg, r, qi, i as i64).unwrap();
    }
    mqtopt::dealloc_register(&mut f, reg, r).unwrap();
    assert!(verify_function(&f, reg).is_empty());
    f
}

pub fn circuit(reg: &DialectRegistry, n: usize, gates: &[G<'_>]) -> Function {
    circuit_with_angles(reg, n, gates, &[])
}

/// Gate kinds in body order, with their control counts.
pub fn gates_of(f: &Function) -> Vec<(GateKind, usize)> {
    f.body()
        .iter()
        .filter_map(|&op| mqtopt::GateOp::from_op(f, op))
        .map(|g| (g.kind, g.ctrls.len()))
        .collect()
}
