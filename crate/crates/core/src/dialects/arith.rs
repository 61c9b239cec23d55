//! A minimal classical dialect for rotation angles.

use crate::ir::{
    AttrKind, AttrSpec, Attribute, Attributes, DialectManifest, DialectRegistry, Function, IrError,
    OpKind, OpSchema, RegistryError, Segment, TypeRef, ValueId,
};

pub const DIALECT: &str = "arith";

pub fn manifest() -> DialectManifest {
    let f64 = TypeRef::f64;
    let mut m = DialectManifest::new(DIALECT);
    m.ops = vec![
        OpSchema::new("constant")
            .results(vec![Segment::one(f64())])
            .attr(AttrSpec::required("value", AttrKind::Float)),
        OpSchema::new("negf")
            .operands(vec![Segment::one(f64())])
            .results(vec![Segment::one(f64())]),
        OpSchema::new("addf")
            .operands(vec![Segment::variadic(f64())])
            .results(vec![Segment::one(f64())]),
        OpSchema::new("mulf")
            .operands(vec![Segment::variadic(f64())])
            .results(vec![Segment::one(f64())]),
    ];
    m
}

pub fn register_arith(reg: &mut DialectRegistry) -> Result<(), RegistryError> {
    reg.register(manifest())
}

pub fn constant(
    func: &mut Function,
    reg: &DialectRegistry,
    value: f64,
) -> Result<ValueId, IrError> {
    let mut attrs = Attributes::new();
    attrs.insert("value".into(), Attribute::Float(value));
    let r = func.build(
        reg,
        OpKind::new(DIALECT, "constant"),
        vec![],
        vec![TypeRef::f64()],
        attrs,
    )?;
    Ok(r[0])
}

/// Folds `v` to a number when it is computed from constants only.
pub fn evaluate(func: &Function, v: ValueId) -> Option<f64> {
    let (op, _) = func.defining_op(v)?;
    let o = func.op(op);
    if o.kind.dialect != DIALECT {
        return None;
    }
    let args: Option<Vec<f64>> = o.operands().iter().map(|&a| evaluate(func, a)).collect();
    let args = args?;
    match o.kind.name.as_str() {
        "constant" => o.attr("value").and_then(Attribute::as_float),
        "negf" => args.first().map(|x| -x),
        "addf" => Some(args.iter().sum()),
        "mulf" => Some(args.iter().product()),
        _ => None,
    }
}
