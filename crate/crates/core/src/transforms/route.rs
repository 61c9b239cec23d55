use std::collections::HashMap;
use std::str::FromStr;

use super::{CouplingMap, TransformError};
use crate::dialects::mqtopt::{self, GateKind, GateOp};
use crate::ir::{Attribute, DialectRegistry, Function, ValueId};

pub const INITIAL_ATTR: &str = "layout.initial";
pub const FINAL_ATTR: &str = "layout.final";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    Identity,
}

impl FromStr for Placement {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "identity" => Ok(Placement::Identity),
            other => Err(format!(
                "unsupported placement '{other}', expected 'identity'"
            )),
        }
    }
}

/// Logical-to-physical qubit assignments before and after routing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub initial: Vec<usize>,
    pub final_: Vec<usize>,
}

impl Layout {
    /// Reads the layout attributes a routed function carries.
    pub fn of(func: &Function) -> Option<Layout> {
        let read = |key| -> Option<Vec<usize>> {
            func.attributes
                .get(key)?
                .as_int_array()?
                .iter()
                .map(|&i| usize::try_from(i).ok())
                .collect()
        };
        Some(Layout {
            initial: read(INITIAL_ATTR)?,
            final_: read(FINAL_ATTR)?,
        })
    }

    fn attach(&self, func: &mut Function) {
        let ints = |v: &[usize]| Attribute::IntArray(v.iter().map(|&i| i as i64).collect());
        func.attributes
            .insert(INITIAL_ATTR.into(), ints(&self.initial));
        func.attributes
            .insert(FINAL_ATTR.into(), ints(&self.final_));
    }
}

struct Router<'a> {
    reg: &'a DialectRegistry,
    dst: Function,
    register: Option<ValueId>,
    /// Current qubit value on each physical wire, if extracted.
    wires: Vec<Option<ValueId>>,
    phys_of_log: Vec<usize>,
    log_of_phys: Vec<usize>,
    swaps: usize,
}

impl Router<'_> {
    fn register(&self) -> Result<ValueId, TransformError> {
        self.register.ok_or_else(|| {
            TransformError::Unsupported("qubit used outside its register's lifetime".into())
        })
    }

    fn ensure(&mut self, p: usize) -> Result<ValueId, TransformError> {
        if let Some(v) = self.wires[p] {
            return Ok(v);
        }
        let current = self.register()?;
        let (r, q) = mqtopt::extract_qubit(&mut self.dst, self.reg, current, p as i64)?;
        self.register = Some(r);
        self.wires[p] = Some(q);
        Ok(q)
    }

    /// Exchanges the qubits on `current` and `next`, emitted as
    /// `swap(next, current)`.
    fn swap(&mut self, current: usize, next: usize) -> Result<(), TransformError> {
        let a = self.ensure(current)?;
        let b = self.ensure(next)?;
        let (out, _) = mqtopt::gate(&mut self.dst, self.reg, GateKind::Swap, &[], &[b, a], &[])?;
        self.wires[next] = Some(out[0]);
        self.wires[current] = Some(out[1]);
        let (la, lb) = (self.log_of_phys[current], self.log_of_phys[next]);
        self.log_of_phys.swap(current, next);
        self.phys_of_log[la] = next;
        self.phys_of_log[lb] = current;
        self.swaps += 1;
        Ok(())
    }

    fn flush(&mut self) -> Result<(), TransformError> {
        for p in 0..self.wires.len() {
            if let Some(q) = self.wires[p].take() {
                let current = self.register()?;
                let r = mqtopt::insert_qubit(&mut self.dst, self.reg, current, q, p as i64)?;
                self.register = Some(r);
            }
        }
        Ok(())
    }
}

/// Routes a single-register mqtopt function onto `cmap`. Returns the number
/// of swaps inserted and records the layout as function attributes.
///
/// Gates are visited in order. A two-qubit gate on uncoupled qubits moves
/// its first qubit (the first control, or the first target when there are
/// none) along a shortest path until it is adjacent to the second.
pub fn route_pass(
    func: &mut Function,
    reg: &DialectRegistry,
    cmap: &CouplingMap,
    placement: Placement,
) -> Result<usize, TransformError> {
    let Placement::Identity = placement;
    let allocs: Vec<_> = func
        .body()
        .iter()
        .copied()
        .filter(|&op| func.op(op).kind.is(mqtopt::DIALECT, "allocQubitRegister"))
        .collect();
    let alloc = match allocs.as_slice() {
        [] => return Ok(0),
        [one] => *one,
        _ => {
            return Err(TransformError::Unsupported(
                "route supports one qubit register per function".into(),
            ))
        }
    };
    let n_logical = func.op(alloc).int_attr("size").unwrap_or(0).max(0) as usize;
    let n_physical = cmap.n_physical();
    if n_logical > n_physical {
        return Err(TransformError::TooManyQubits {
            logical: n_logical,
            physical: n_physical,
        });
    }

    let mut rt = Router {
        reg,
        dst: func.empty_like(),
        register: None,
        wires: vec![None; n_physical],
        phys_of_log: (0..n_physical).collect(),
        log_of_phys: (0..n_physical).collect(),
        swaps: 0,
    };
    let mut values: HashMap<ValueId, ValueId> = HashMap::new();
    let mut logical: HashMap<ValueId, usize> = HashMap::new();
    let lookup = |m: &HashMap<ValueId, usize>, v: ValueId| -> Result<usize, TransformError> {
        m.get(&v).copied().ok_or_else(|| {
            TransformError::Unsupported(format!("qubit {} has no slot", func.display_name(v)))
        })
    };

    for &op in func.body() {
        let o = func.op(op);
        if o.kind.dialect != mqtopt::DIALECT {
            let operands = o
                .operands()
                .iter()
                .map(|v| {
                    values
                        .get(v)
                        .copied()
                        .ok_or(TransformError::Unsupported(format!(
                            "operand {} of '{}' cannot be routed",
                            func.display_name(*v),
                            o.kind
                        )))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let results = rt.dst.clone_op_from(reg, func, op, operands)?;
            values.extend(o.results().iter().copied().zip(results));
            continue;
        }
        match o.kind.name.as_str() {
            "allocQubitRegister" => {
                rt.register = Some(mqtopt::alloc_register(&mut rt.dst, reg, n_physical as i64)?);
            }
            "extractQubit" => {
                let l = o.int_attr("index").unwrap_or(0) as usize;
                rt.ensure(rt.phys_of_log[l])?;
                logical.insert(o.results()[1], l);
            }
            "insertQubit" => {
                let l = lookup(&logical, o.operands()[1])?;
                let index = o.int_attr("index").unwrap_or(0) as usize;
                if l != index {
                    return Err(TransformError::Unsupported(format!(
                        "qubit from slot {l} is inserted into slot {index}"
                    )));
                }
                let p = rt.phys_of_log[l];
                let q = rt.wires[p].take().expect("extracted");
                let current = rt.register()?;
                rt.register = Some(mqtopt::insert_qubit(
                    &mut rt.dst,
                    reg,
                    current,
                    q,
                    p as i64,
                )?);
            }
            "deallocQubitRegister" => {
                rt.flush()?;
                let current = rt.register()?;
                mqtopt::dealloc_register(&mut rt.dst, reg, current)?;
                rt.register = None;
            }
            "measure" => {
                let l = lookup(&logical, o.operands()[0])?;
                let p = rt.phys_of_log[l];
                let q = rt.ensure(p)?;
                let (q2, c) = mqtopt::measure(&mut rt.dst, reg, q)?;
                rt.wires[p] = Some(q2);
                logical.insert(o.results()[0], l);
                values.insert(o.results()[1], c);
            }
            _ => {
                let g = GateOp::from_op(func, op).ok_or_else(|| {
                    TransformError::Unsupported(format!("malformed gate '{}'", o.kind))
                })?;
                let order: Vec<usize> = g
                    .ctrls
                    .iter()
                    .chain(&g.targets)
                    .map(|&q| lookup(&logical, q))
                    .collect::<Result<_, _>>()?;
                if order.len() > 2 {
                    return Err(TransformError::UnsupportedArity {
                        op: o.kind.to_string(),
                        qubits: order.len(),
                    });
                }
                if let [first, second] = order[..] {
                    let (from, to) = (rt.phys_of_log[first], rt.phys_of_log[second]);
                    if !cmap.adjacent(from, to) {
                        let path = cmap
                            .shortest_path(from, to)
                            .ok_or(TransformError::DisconnectedTarget { from, to })?;
                        for w in path[..path.len() - 1].windows(2) {
                            rt.swap(w[0], w[1])?;
                        }
                    }
                }
                let params = g
                    .params
                    .iter()
                    .map(|v| {
                        values.get(v).copied().ok_or(TransformError::Unsupported(
                            "gate parameter is not available".into(),
                        ))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let phys = |q: &ValueId| -> Result<usize, TransformError> {
                    Ok(rt.phys_of_log[lookup(&logical, *q)?])
                };
                let tp: Vec<usize> = g.targets.iter().map(phys).collect::<Result<_, _>>()?;
                let cp: Vec<usize> = g.ctrls.iter().map(phys).collect::<Result<_, _>>()?;
                let tv = tp
                    .iter()
                    .map(|&p| rt.ensure(p))
                    .collect::<Result<Vec<_>, _>>()?;
                let cv = cp
                    .iter()
                    .map(|&p| rt.ensure(p))
                    .collect::<Result<Vec<_>, _>>()?;
                let (tout, cout) = mqtopt::gate(&mut rt.dst, reg, g.kind, &params, &tv, &cv)?;
                for ((p, v), src) in tp.iter().zip(tout).zip(&g.target_results) {
                    rt.wires[*p] = Some(v);
                    logical.insert(*src, rt.log_of_phys[*p]);
                }
                for ((p, v), src) in cp.iter().zip(cout).zip(&g.ctrl_results) {
                    rt.wires[*p] = Some(v);
                    logical.insert(*src, rt.log_of_phys[*p]);
                }
            }
        }
    }

    // compose with a layout from an earlier routing run
    let layout = match Layout::of(func) {
        Some(prev) if prev.final_.iter().all(|&p| p < n_physical) => Layout {
            initial: prev.initial,
            final_: prev.final_.iter().map(|&p| rt.phys_of_log[p]).collect(),
        },
        _ => Layout {
            initial: (0..n_logical).collect(),
            final_: rt.phys_of_log[..n_logical].to_vec(),
        },
    };
    let swaps = rt.swaps;
    *func = rt.dst;
    layout.attach(func);
    Ok(swaps)
}
