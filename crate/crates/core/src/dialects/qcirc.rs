//! The `qcirc` dialect: generic gates named by a `gate_name` attribute.
//!
//! Values are SSA but not linear. `extract` reads a qubit out of a register
//! without producing a new register, and a `!qcirc.bit` value may be used
//! any number of times.

use crate::ir::{
    AttrKind, AttrSpec, Attribute, Attributes, DialectManifest, DialectRegistry, Function, IrError,
    NamedTrait, OpId, OpKind, OpSchema, RegistryError, Segment, Trait, TypeRef, ValueId,
};

pub const DIALECT: &str = "qcirc";

/// Known gate names with their qubit arity and parameter count.
pub const GATE_TABLE: &[(&str, usize, usize)] = &[
    ("Hadamard", 1, 0),
    ("PauliX", 1, 0),
    ("PauliY", 1, 0),
    ("PauliZ", 1, 0),
    ("S", 1, 0),
    ("Sdg", 1, 0),
    ("T", 1, 0),
    ("Tdg", 1, 0),
    ("CNOT", 2, 0),
    ("CZ", 2, 0),
    ("SWAP", 2, 0),
    ("RX", 1, 1),
    ("RY", 1, 1),
    ("RZ", 1, 1),
];

pub fn gate_signature(name: &str) -> Option<(usize, usize)> {
    GATE_TABLE
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|&(_, arity, params)| (arity, params))
}

pub fn reg_type() -> TypeRef {
    TypeRef::new(DIALECT, "reg")
}

pub fn bit_type() -> TypeRef {
    TypeRef::new(DIALECT, "bit")
}

fn check_gate_name_arity(func: &Function, op: OpId) -> Result<(), String> {
    let o = func.op(op);
    let Some(name) = o.str_attr("gate_name") else {
        return Ok(());
    };
    let Some((arity, params)) = gate_signature(name) else {
        return Ok(());
    };
    let qubits = o
        .operands()
        .iter()
        .filter(|v| *func.value_type(**v) == bit_type())
        .count();
    let found_params = o.operands().len() - qubits;
    if qubits != arity || found_params != params {
        return Err(format!(
            "gate '{name}' takes {arity} qubit(s) and {params} parameter(s), found {qubits} and {found_params}"
        ));
    }
    Ok(())
}

pub fn manifest() -> DialectManifest {
    let mut m = DialectManifest::new(DIALECT);
    m.types = vec!["reg".into(), "bit".into()];
    m.ops = vec![
        OpSchema::new("alloc")
            .results(vec![Segment::one(reg_type())])
            .attr(AttrSpec::required("size", AttrKind::Int)),
        OpSchema::new("extract")
            .operands(vec![Segment::one(reg_type())])
            .results(vec![Segment::one(bit_type())])
            .attr(AttrSpec::required("index", AttrKind::Int)),
        OpSchema::new("insert")
            .operands(vec![Segment::one(reg_type()), Segment::one(bit_type())])
            .results(vec![Segment::one(reg_type())])
            .attr(AttrSpec::required("index", AttrKind::Int)),
        OpSchema::new("custom")
            .operands(vec![
                Segment::variadic(TypeRef::f64()),
                Segment::variadic(bit_type()),
            ])
            .results(vec![Segment::variadic(bit_type())])
            .attr(AttrSpec::required("gate_name", AttrKind::Str))
            .traits(vec![
                Trait::Unitary,
                Trait::NoClassicalResult,
                Trait::Named("GateNameArity".into()),
            ]),
        OpSchema::new("measure")
            .operands(vec![Segment::one(bit_type())])
            .results(vec![Segment::one(bit_type()), Segment::one(TypeRef::i1())]),
        OpSchema::new("dealloc").operands(vec![Segment::one(reg_type())]),
    ];
    m.named_traits = vec![NamedTrait {
        name: "GateNameArity".into(),
        check: check_gate_name_arity,
    }];
    m
}

pub fn register_qcirc(reg: &mut DialectRegistry) -> Result<(), RegistryError> {
    reg.register(manifest())
}

fn kind(name: &str) -> OpKind {
    OpKind::new(DIALECT, name)
}

fn index_attrs(key: &str, v: i64) -> Attributes {
    let mut a = Attributes::new();
    a.insert(key.into(), Attribute::Int(v));
    a
}

pub fn alloc(func: &mut Function, reg: &DialectRegistry, size: i64) -> Result<ValueId, IrError> {
    let r = func.build(
        reg,
        kind("alloc"),
        vec![],
        vec![reg_type()],
        index_attrs("size", size),
    )?;
    Ok(r[0])
}

pub fn extract(
    func: &mut Function,
    reg: &DialectRegistry,
    register: ValueId,
    index: i64,
) -> Result<ValueId, IrError> {
    let r = func.build(
        reg,
        kind("extract"),
        vec![register],
        vec![bit_type()],
        index_attrs("index", index),
    )?;
    Ok(r[0])
}

pub fn insert(
    func: &mut Function,
    reg: &DialectRegistry,
    register: ValueId,
    bit: ValueId,
    index: i64,
) -> Result<ValueId, IrError> {
    let r = func.build(
        reg,
        kind("insert"),
        vec![register, bit],
        vec![reg_type()],
        index_attrs("index", index),
    )?;
    Ok(r[0])
}

pub fn custom(
    func: &mut Function,
    reg: &DialectRegistry,
    gate_name: &str,
    params: &[ValueId],
    qubits: &[ValueId],
) -> Result<Vec<ValueId>, IrError> {
    let mut attrs = Attributes::new();
    attrs.insert("gate_name".into(), Attribute::Str(gate_name.into()));
    let operands = params.iter().chain(qubits).copied().collect();
    func.build(
        reg,
        kind("custom"),
        operands,
        vec![bit_type(); qubits.len()],
        attrs,
    )
}

pub fn measure(
    func: &mut Function,
    reg: &DialectRegistry,
    bit: ValueId,
) -> Result<(ValueId, ValueId), IrError> {
    let r = func.build(
        reg,
        kind("measure"),
        vec![bit],
        vec![bit_type(), TypeRef::i1()],
        Attributes::new(),
    )?;
    Ok((r[0], r[1]))
}

pub fn dealloc(
    func: &mut Function,
    reg: &DialectRegistry,
    register: ValueId,
) -> Result<(), IrError> {
    func.build(
        reg,
        kind("dealloc"),
        vec![register],
        vec![],
        Attributes::new(),
    )?;
    Ok(())
}
