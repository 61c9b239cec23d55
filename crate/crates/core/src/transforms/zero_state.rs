use std::collections::HashMap;

use super::{bypass_gate, TransformError};
use crate::dialects::mqtopt::{self, GateOp};
use crate::ir::{Function, ValueId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Lattice {
    Zero,
    Unknown,
}

/// Removes controlled gates whose control is provably `|0⟩`, assuming every
/// register starts in `|0…0⟩`. Only the output state on that input is
/// preserved, not the unitary. Returns the number of gates removed.
pub fn zero_state_pass(func: &mut Function) -> Result<usize, TransformError> {
    // register value -> allocating value; slot lattice defaults to Zero
    let mut roots: HashMap<ValueId, ValueId> = HashMap::new();
    let mut slots: HashMap<(ValueId, i64), Lattice> = HashMap::new();
    let mut state: HashMap<ValueId, Lattice> = HashMap::new();
    let mut removed = 0;
    let get = |state: &HashMap<ValueId, Lattice>, v: &ValueId| {
        state.get(v).copied().unwrap_or(Lattice::Unknown)
    };

    for op in func.body().to_vec() {
        let o = func.op(op);
        if o.kind.dialect != mqtopt::DIALECT {
            continue;
        }
        let index = o.int_attr("index").unwrap_or(0);
        match o.kind.name.as_str() {
            "allocQubitRegister" => {
                roots.insert(o.results()[0], o.results()[0]);
            }
            "extractQubit" => {
                let lattice = match roots.get(&o.operands()[0]).copied() {
                    Some(root) => {
                        roots.insert(o.results()[0], root);
                        slots.get(&(root, index)).copied().unwrap_or(Lattice::Zero)
                    }
                    None => Lattice::Unknown,
                };
                state.insert(o.results()[1], lattice);
            }
            "insertQubit" => {
                if let Some(root) = roots.get(&o.operands()[0]).copied() {
                    roots.insert(o.results()[0], root);
                    slots.insert((root, index), get(&state, &o.operands()[1]));
                }
            }
            "measure" => {
                state.insert(o.results()[0], Lattice::Unknown);
            }
            _ => {
                let Some(g) = GateOp::from_op(func, op) else {
                    continue;
                };
                if g.ctrls.iter().any(|c| get(&state, c) == Lattice::Zero) {
                    for (r, q) in g.results().zip(g.qubits()) {
                        state.insert(r, get(&state, &q));
                    }
                    bypass_gate(func, op)?;
                    removed += 1;
                    continue;
                }
                for (r, c) in g.ctrl_results.iter().zip(&g.ctrls) {
                    state.insert(*r, get(&state, c));
                }
                for (r, t) in g.target_results.iter().zip(&g.targets) {
                    let lattice = if g.kind.is_diagonal() {
                        get(&state, t)
                    } else {
                        Lattice::Unknown
                    };
                    state.insert(*r, lattice);
                }
            }
        }
    }
    Ok(removed)
}
