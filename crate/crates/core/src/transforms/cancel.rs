use super::{bypass_gate, TransformError};
use crate::dialects::arith;
use crate::dialects::mqtopt::GateOp;
use crate::ir::{Function, OpId};

const ANGLE_TOLERANCE: f64 = 1e-12;

/// Whether `b` undoes `a` when applied directly after it on the same wires.
fn inverse_pair(func: &Function, a: &GateOp, b: &GateOp) -> bool {
    if a.ctrls.len() != b.ctrls.len() || a.targets.len() != b.targets.len() {
        return false;
    }
    if a.kind.is_rotation() {
        if a.kind != b.kind {
            return false;
        }
        let angle = |g: &GateOp| arith::evaluate(func, g.params[0]);
        return matches!((angle(a), angle(b)), (Some(x), Some(y)) if (x + y).abs() <= ANGLE_TOLERANCE);
    }
    if a.kind.is_self_inverse() {
        return a.kind == b.kind;
    }
    a.kind.adjoint() == Some(b.kind)
}

/// `b` when every qubit result of `a` feeds `b` exactly once, in the same
/// qubit position.
fn direct_successor(func: &Function, a: &GateOp) -> Option<(OpId, GateOp)> {
    let first = a.target_results.first().or(a.ctrl_results.first())?;
    let uses = func.uses(*first);
    let [u] = uses else {
        return None;
    };
    let b = GateOp::from_op(func, u.op)?;
    let aligned = a
        .results()
        .zip(b.qubits())
        .all(|(r, q)| r == q && func.uses(r).len() == 1);
    (aligned && a.results().count() == b.qubits().count()).then_some((u.op, b))
}

/// Removes adjacent inverse pairs until none remain. Returns the number of
/// gates removed.
pub fn cancel_pass(func: &mut Function) -> Result<usize, TransformError> {
    let mut removed = 0;
    loop {
        let mut changed = false;
        for op in func.body().to_vec() {
            if func.try_op(op).is_none_or(|o| !o.is_attached()) {
                continue;
            }
            let Some(a) = GateOp::from_op(func, op) else {
                continue;
            };
            let Some((b_op, b)) = direct_successor(func, &a) else {
                continue;
            };
            if !inverse_pair(func, &a, &b) {
                continue;
            }
            bypass_gate(func, b_op)?;
            bypass_gate(func, op)?;
            removed += 2;
            changed = true;
        }
        if !changed {
            return Ok(removed);
        }
    }
}
