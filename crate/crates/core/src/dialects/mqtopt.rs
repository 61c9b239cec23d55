//! The `mqtopt` dialect: one operation per gate and linear qubit values.
//!
//! Every `!mqtopt.Qubit` and `!mqtopt.QubitRegister` value must be consumed
//! exactly once. `extractQubit` therefore returns the updated register next
//! to the qubit, and gates return one qubit per qubit operand in operand
//! order: targets first, then the `num_ctrls` positive controls.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::ir::{
    AttrKind, AttrSpec, Attribute, Attributes, DialectManifest, DialectRegistry, DialectRule,
    Function, IrError, OpId, OpKind, OpSchema, RegistryError, Segment, Trait, TypeRef, ValueId,
};

pub const DIALECT: &str = "mqtopt";

pub fn qubit_type() -> TypeRef {
    TypeRef::new(DIALECT, "Qubit")
}

pub fn register_type() -> TypeRef {
    TypeRef::new(DIALECT, "QubitRegister")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Swap,
    Rx,
    Ry,
    Rz,
}

impl GateKind {
    pub const ALL: [GateKind; 12] = [
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::H,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::Swap,
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
    ];

    pub fn op_name(self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Swap => "swap",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
        }
    }

    pub fn num_targets(self) -> usize {
        if self == GateKind::Swap {
            2
        } else {
            1
        }
    }

    pub fn num_params(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz => 1,
            _ => 0,
        }
    }

    /// Gates whose matrix is diagonal in the computational basis.
    pub fn is_diagonal(self) -> bool {
        matches!(
            self,
            GateKind::Z | GateKind::S | GateKind::Sdg | GateKind::T | GateKind::Tdg | GateKind::Rz
        )
    }

    pub fn is_self_inverse(self) -> bool {
        matches!(
            self,
            GateKind::X | GateKind::Y | GateKind::Z | GateKind::H | GateKind::Swap
        )
    }

    pub fn is_rotation(self) -> bool {
        self.num_params() == 1
    }

    /// The fixed-matrix inverse, where one exists as a separate kind.
    pub fn adjoint(self) -> Option<GateKind> {
        match self {
            GateKind::S => Some(GateKind::Sdg),
            GateKind::Sdg => Some(GateKind::S),
            GateKind::T => Some(GateKind::Tdg),
            GateKind::Tdg => Some(GateKind::T),
            k if k.is_self_inverse() => Some(k),
            _ => None,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.op_name())
    }
}

impl FromStr for GateKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.op_name() == s)
            .ok_or_else(|| format!("unknown mqtopt gate '{s}'"))
    }
}

/// A structured view of a gate operation.
#[derive(Clone, Debug)]
pub struct GateOp {
    pub kind: GateKind,
    pub params: Vec<ValueId>,
    pub targets: Vec<ValueId>,
    pub ctrls: Vec<ValueId>,
    pub target_results: Vec<ValueId>,
    pub ctrl_results: Vec<ValueId>,
}

impl GateOp {
    /// Returns `None` for non-gate operations and malformed gates.
    pub fn from_op(func: &Function, op: OpId) -> Option<GateOp> {
        let o = func.op(op);
        if o.kind.dialect != DIALECT {
            return None;
        }
        let kind: GateKind = o.kind.name.parse().ok()?;
        let n_params = o
            .operands()
            .iter()
            .take_while(|v| func.value_type(**v).is_f64())
            .count();
        let qubits = &o.operands()[n_params..];
        let ctrls = usize::try_from(o.int_attr("num_ctrls").unwrap_or(0)).ok()?;
        if qubits.len() < ctrls || o.results().len() != qubits.len() {
            return None;
        }
        let n_targets = qubits.len() - ctrls;
        Some(GateOp {
            kind,
            params: o.operands()[..n_params].to_vec(),
            targets: qubits[..n_targets].to_vec(),
            ctrls: qubits[n_targets..].to_vec(),
            target_results: o.results()[..n_targets].to_vec(),
            ctrl_results: o.results()[n_targets..].to_vec(),
        })
    }

    pub fn qubits(&self) -> impl Iterator<Item = ValueId> + '_ {
        self.targets.iter().chain(&self.ctrls).copied()
    }

    pub fn results(&self) -> impl Iterator<Item = ValueId> + '_ {
        self.target_results
            .iter()
            .chain(&self.ctrl_results)
            .copied()
    }
}

fn gate_schema(kind: GateKind) -> OpSchema {
    OpSchema::new(kind.op_name())
        .operands(vec![
            Segment::variadic(TypeRef::f64()),
            Segment::one_or_more(qubit_type()),
        ])
        .results(vec![Segment::one_or_more(qubit_type())])
        .attr(AttrSpec::optional("num_ctrls", AttrKind::Int))
        .traits(vec![
            Trait::NumParams(kind.num_params()),
            Trait::NumTargets(kind.num_targets()),
            Trait::Unitary,
            Trait::NoClassicalResult,
        ])
}

pub fn manifest() -> DialectManifest {
    let mut m = DialectManifest::new(DIALECT);
    m.types = vec!["Qubit".into(), "QubitRegister".into()];
    m.ops = vec![
        OpSchema::new("allocQubitRegister")
            .results(vec![Segment::one(register_type())])
            .attr(AttrSpec::required("size", AttrKind::Int)),
        OpSchema::new("extractQubit")
            .operands(vec![Segment::one(register_type())])
            .results(vec![
                Segment::one(register_type()),
                Segment::one(qubit_type()),
            ])
            .attr(AttrSpec::required("index", AttrKind::Int)),
        OpSchema::new("insertQubit")
            .operands(vec![
                Segment::one(register_type()),
                Segment::one(qubit_type()),
            ])
            .results(vec![Segment::one(register_type())])
            .attr(AttrSpec::required("index", AttrKind::Int)),
        OpSchema::new("deallocQubitRegister").operands(vec![Segment::one(register_type())]),
    ];
    m.ops.extend(GateKind::ALL.into_iter().map(gate_schema));
    m.ops.push(
        OpSchema::new("measure")
            .operands(vec![Segment::one(qubit_type())])
            .results(vec![
                Segment::one(qubit_type()),
                Segment::one(TypeRef::i1()),
            ]),
    );
    m.rules = vec![
        DialectRule {
            name: "linearity".into(),
            check: linearity_rule,
        },
        DialectRule {
            name: "register-chain".into(),
            check: register_chain_rule,
        },
    ];
    m
}

pub fn register_mqtopt(reg: &mut DialectRegistry) -> Result<(), RegistryError> {
    reg.register(manifest())
}

/// Every qubit and register value has exactly one use; qubit-typed
/// function results are forbidden.
fn linearity_rule(func: &Function) -> Vec<(Option<usize>, String)> {
    let mut out = Vec::new();
    if func
        .result_types()
        .iter()
        .any(|t| *t == qubit_type() || *t == register_type())
    {
        out.push((
            None,
            "qubit-typed function results are not allowed".to_string(),
        ));
    }
    let numbering = func.value_numbering();
    let positions: HashMap<OpId, usize> = func
        .body()
        .iter()
        .enumerate()
        .map(|(i, &o)| (o, i))
        .collect();
    let mut values: Vec<(ValueId, Option<usize>)> =
        func.arguments().iter().map(|&a| (a, None)).collect();
    for (i, &op) in func.body().iter().enumerate() {
        values.extend(func.op(op).results().iter().map(|&r| (r, Some(i))));
    }
    for (v, def_index) in values {
        let ty = func.value_type(v);
        let what = if *ty == qubit_type() {
            "qubit"
        } else if *ty == register_type() {
            "register"
        } else {
            continue;
        };
        let name = format!("%{}", numbering[&v]);
        let uses = func.uses(v);
        match uses.len() {
            1 => {}
            0 => out.push((def_index, format!("{what} value {name} is never consumed"))),
            _ => {
                let mut at: Vec<usize> = uses
                    .iter()
                    .filter_map(|u| positions.get(&u.op).copied())
                    .collect();
                at.sort();
                out.push((
                    at.get(1).copied().or(def_index),
                    format!("{what} value {name} used more than once"),
                ));
            }
        }
    }
    out
}

/// Statically walks each register's extract/insert chain, tracking which
/// slots are currently extracted.
fn register_chain_rule(func: &Function) -> Vec<(Option<usize>, String)> {
    let mut out = Vec::new();
    let mut state: HashMap<ValueId, (i64, BTreeSet<i64>)> = HashMap::new();
    for (i, &op) in func.body().iter().enumerate() {
        let o = func.op(op);
        if o.kind.dialect != DIALECT {
            continue;
        }
        match o.kind.name.as_str() {
            "allocQubitRegister" => {
                let size = o.int_attr("size").unwrap_or(0);
                if size < 0 {
                    out.push((
                        Some(i),
                        format!("register size must be non-negative, found {size}"),
                    ));
                }
                if let Some(&r) = o.results().first() {
                    state.insert(r, (size, BTreeSet::new()));
                }
            }
            "extractQubit" | "insertQubit" => {
                let Some((size, mut taken)) =
                    o.operands().first().and_then(|r| state.get(r)).cloned()
                else {
                    continue;
                };
                let index = o.int_attr("index").unwrap_or(-1);
                if index < 0 || index >= size {
                    out.push((
                        Some(i),
                        format!("IndexOutOfRange: index {index} is out of range for a register of size {size}"),
                    ));
                } else if o.kind.name == "extractQubit" {
                    if !taken.insert(index) {
                        out.push((
                            Some(i),
                            format!("DoubleExtract: index {index} is already extracted from this register"),
                        ));
                    }
                } else if !taken.remove(&index) {
                    out.push((
                        Some(i),
                        format!("InsertOccupied: index {index} of this register is not extracted"),
                    ));
                }
                if let Some(&r) = o.results().first() {
                    state.insert(r, (size, taken));
                }
            }
            "deallocQubitRegister" => {
                if let Some((_, taken)) = o.operands().first().and_then(|r| state.get(r)) {
                    if !taken.is_empty() {
                        out.push((
                            Some(i),
                            format!(
                                "register deallocated while indices {:?} are still extracted",
                                taken.iter().collect::<Vec<_>>()
                            ),
                        ));
                    }
                }
            }
            _ => {}
        }
    }
    out
}

fn kind(name: &str) -> OpKind {
    OpKind::new(DIALECT, name)
}

fn int_attr(key: &str, v: i64) -> Attributes {
    let mut a = Attributes::new();
    a.insert(key.into(), Attribute::Int(v));
    a
}

pub fn alloc_register(
    func: &mut Function,
    reg: &DialectRegistry,
    size: i64,
) -> Result<ValueId, IrError> {
    let r = func.build(
        reg,
        kind("allocQubitRegister"),
        vec![],
        vec![register_type()],
        int_attr("size", size),
    )?;
    Ok(r[0])
}

/// Extracts slot `index`, returning `(updated register, qubit)`.
pub fn extract_qubit(
    func: &mut Function,
    reg: &DialectRegistry,
    register: ValueId,
    index: i64,
) -> Result<(ValueId, ValueId), IrError> {
    let r = func.build(
        reg,
        kind("extractQubit"),
        vec![register],
        vec![register_type(), qubit_type()],
        int_attr("index", index),
    )?;
    Ok((r[0], r[1]))
}

pub fn insert_qubit(
    func: &mut Function,
    reg: &DialectRegistry,
    register: ValueId,
    qubit: ValueId,
    index: i64,
) -> Result<ValueId, IrError> {
    let r = func.build(
        reg,
        kind("insertQubit"),
        vec![register, qubit],
        vec![register_type()],
        int_attr("index", index),
    )?;
    Ok(r[0])
}

pub fn dealloc_register(
    func: &mut Function,
    reg: &DialectRegistry,
    register: ValueId,
) -> Result<(), IrError> {
    func.build(
        reg,
        kind("deallocQubitRegister"),
        vec![register],
        vec![],
        Attributes::new(),
    )?;
    Ok(())
}

/// Creates a gate op; returns `(target results, control results)`.
pub fn gate_op(
    func: &mut Function,
    reg: &DialectRegistry,
    gate: GateKind,
    params: &[ValueId],
    targets: &[ValueId],
    ctrls: &[ValueId],
) -> Result<OpId, IrError> {
    let attrs = if ctrls.is_empty() {
        Attributes::new()
    } else {
        int_attr("num_ctrls", ctrls.len() as i64)
    };
    let operands: Vec<ValueId> = params.iter().chain(targets).chain(ctrls).copied().collect();
    let n = targets.len() + ctrls.len();
    func.create_operation(
        reg,
        kind(gate.op_name()),
        operands,
        vec![qubit_type(); n],
        attrs,
    )
}

/// Appends a gate; returns `(target results, control results)`.
pub fn gate(
    func: &mut Function,
    reg: &DialectRegistry,
    gate: GateKind,
    params: &[ValueId],
    targets: &[ValueId],
    ctrls: &[ValueId],
) -> Result<(Vec<ValueId>, Vec<ValueId>), IrError> {
    let op = gate_op(func, reg, gate, params, targets, ctrls)?;
    func.append(op)?;
    let results = func.op(op).results();
    let (t, c) = results.split_at(targets.len());
    Ok((t.to_vec(), c.to_vec()))
}

pub fn measure(
    func: &mut Function,
    reg: &DialectRegistry,
    qubit: ValueId,
) -> Result<(ValueId, ValueId), IrError> {
    let r = func.build(
        reg,
        kind("measure"),
        vec![qubit],
        vec![qubit_type(), TypeRef::i1()],
        Attributes::new(),
    )?;
    Ok((r[0], r[1]))
}
