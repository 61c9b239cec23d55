//! Pattern-based dialect conversion.
//!
//! A conversion rebuilds each function in a forward sweep. Operations whose
//! kind is legal for the [`ConversionTarget`] are copied with remapped
//! operands; every illegal operation must be matched by a
//! [`RewritePattern`], which emits replacement operations into the new
//! function. Among matching patterns the highest benefit wins, ties going to
//! the one registered first. Sweeps repeat until no illegal operation
//! remains, bounded by ten pattern applications per original operation.

mod mqtopt_to_qcirc;
mod qcirc_to_mqtopt;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::dialects::mqtopt::GateKind;
use crate::ir::{
    verify_function, Attributes, DialectRegistry, Function, IrError, Module, OpId, OpKind, TypeRef,
    ValueId,
};
use crate::passes::{Pass, PassContext, PassError, PassOptions};

pub use mqtopt_to_qcirc::{mqtopt_to_qcirc, mqtopt_to_qcirc_conversion};
pub use qcirc_to_mqtopt::{qcirc_to_mqtopt, qcirc_to_mqtopt_conversion};

/// qcirc gate names and their mqtopt form `(kind, number of controls)`.
/// qcirc lists control qubits first; mqtopt lists targets first.
pub const GATE_NAMES: &[(&str, GateKind, usize)] = &[
    ("Hadamard", GateKind::H, 0),
    ("PauliX", GateKind::X, 0),
    ("PauliY", GateKind::Y, 0),
    ("PauliZ", GateKind::Z, 0),
    ("S", GateKind::S, 0),
    ("Sdg", GateKind::Sdg, 0),
    ("T", GateKind::T, 0),
    ("Tdg", GateKind::Tdg, 0),
    ("CNOT", GateKind::X, 1),
    ("CZ", GateKind::Z, 1),
    ("SWAP", GateKind::Swap, 0),
    ("RX", GateKind::Rx, 0),
    ("RY", GateKind::Ry, 0),
    ("RZ", GateKind::Rz, 0),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Legality {
    Legal,
    Illegal,
}

/// Per-dialect legality with per-op overrides. Anything unmentioned is legal.
#[derive(Clone, Debug, Default)]
pub struct ConversionTarget {
    dialects: HashMap<String, Legality>,
    ops: HashMap<OpKind, Legality>,
}

impl ConversionTarget {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn legal_dialect(mut self, dialect: &str) -> Self {
        self.dialects.insert(dialect.into(), Legality::Legal);
        self
    }

    pub fn illegal_dialect(mut self, dialect: &str) -> Self {
        self.dialects.insert(dialect.into(), Legality::Illegal);
        self
    }

    pub fn op(mut self, kind: OpKind, legality: Legality) -> Self {
        self.ops.insert(kind, legality);
        self
    }

    pub fn is_legal(&self, kind: &OpKind) -> bool {
        let legality = self
            .ops
            .get(kind)
            .or_else(|| self.dialects.get(&kind.dialect))
            .copied()
            .unwrap_or(Legality::Legal);
        legality == Legality::Legal
    }
}

/// A one-to-one type mapping; unmapped types convert to themselves.
#[derive(Clone, Debug, Default)]
pub struct TypeConverter {
    pairs: Vec<(TypeRef, TypeRef)>,
}

impl TypeConverter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn map(mut self, from: TypeRef, to: TypeRef) -> Self {
        self.pairs.push((from, to));
        self
    }

    pub fn convert(&self, ty: &TypeRef) -> TypeRef {
        self.pairs
            .iter()
            .find(|(from, _)| from == ty)
            .map_or_else(|| ty.clone(), |(_, to)| to.clone())
    }

    pub fn inverse(&self) -> TypeConverter {
        TypeConverter {
            pairs: self
                .pairs
                .iter()
                .map(|(a, b)| (b.clone(), a.clone()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConversionErrorKind {
    NoPattern(OpKind),
    UnknownGateName(String),
    NonLinearizable(String),
    UnsupportedControlCount { gate: String, num_ctrls: usize },
    IterationLimit(usize),
    Ir(IrError),
    Verification(String),
    Internal(String),
}

impl fmt::Display for ConversionErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConversionErrorKind::NoPattern(k) => write!(f, "no pattern matches illegal op '{k}'"),
            ConversionErrorKind::UnknownGateName(n) => write!(f, "no pattern for gate_name {n}"),
            ConversionErrorKind::NonLinearizable(m) => write!(f, "NonLinearizable: {m}"),
            ConversionErrorKind::UnsupportedControlCount { gate, num_ctrls } => write!(
                f,
                "UnsupportedControlCount: '{gate}' with {num_ctrls} controls has no qcirc name"
            ),
            ConversionErrorKind::IterationLimit(n) => {
                write!(
                    f,
                    "conversion did not converge within {n} pattern applications"
                )
            }
            ConversionErrorKind::Ir(e) => write!(f, "{e}"),
            ConversionErrorKind::Verification(m) => write!(f, "converted IR does not verify: {m}"),
            ConversionErrorKind::Internal(m) => write!(f, "internal conversion error: {m}"),
        }
    }
}

impl From<IrError> for ConversionErrorKind {
    fn from(e: IrError) -> Self {
        ConversionErrorKind::Ir(e)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConversionError {
    pub function: String,
    /// Body position of the offending source operation, when there is one.
    pub op_index: Option<usize>,
    pub kind: ConversionErrorKind,
}

impl fmt::Display for ConversionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.op_index {
            Some(i) => write!(f, "@{}, op #{i}: {}", self.function, self.kind),
            None => write!(f, "@{}: {}", self.function, self.kind),
        }
    }
}

impl std::error::Error for ConversionError {}

/// Register threading for turning reference-semantics qubits into linear
/// values. Keys are source values; "roots" are the source values that
/// allocated each register.
#[derive(Clone, Debug, Default)]
pub struct RegisterThreadState {
    /// Every source register value to the allocation it descends from.
    pub(crate) roots: HashMap<ValueId, ValueId>,
    /// Root to the current register value in the new function.
    pub(crate) current: BTreeMap<ValueId, ValueId>,
    /// `(root, index)` of every extracted slot to its current qubit value.
    pub(crate) live: BTreeMap<(ValueId, i64), ValueId>,
    /// Source qubit value to the slot it stands for.
    pub(crate) wires: HashMap<ValueId, (ValueId, i64)>,
    /// Source qubit values that have already been consumed.
    pub(crate) stale: HashSet<ValueId>,
}

impl RegisterThreadState {
    pub fn is_empty(&self) -> bool {
        self.current.is_empty() && self.live.is_empty()
    }
}

/// The state handed to patterns: the source function, the function being
/// built, and the mapping between them.
pub struct Rewriter<'a> {
    pub registry: &'a DialectRegistry,
    pub src: &'a Function,
    pub dst: Function,
    pub types: &'a TypeConverter,
    pub threads: RegisterThreadState,
    values: HashMap<ValueId, ValueId>,
}

impl<'a> Rewriter<'a> {
    pub fn lookup(&self, v: ValueId) -> Result<ValueId, ConversionErrorKind> {
        self.values.get(&v).copied().ok_or_else(|| {
            ConversionErrorKind::Internal(format!(
                "{} has no converted value",
                self.src.display_name(v)
            ))
        })
    }

    pub fn lookup_all(&self, vs: &[ValueId]) -> Result<Vec<ValueId>, ConversionErrorKind> {
        vs.iter().map(|&v| self.lookup(v)).collect()
    }

    /// Records that source value `from` is now represented by `to`.
    pub fn bind(&mut self, from: ValueId, to: ValueId) {
        self.values.insert(from, to);
    }

    pub fn build(
        &mut self,
        kind: OpKind,
        operands: Vec<ValueId>,
        result_types: Vec<TypeRef>,
        attributes: Attributes,
    ) -> Result<Vec<ValueId>, ConversionErrorKind> {
        Ok(self
            .dst
            .build(self.registry, kind, operands, result_types, attributes)?)
    }

    fn copy(&mut self, op: OpId) -> Result<(), ConversionErrorKind> {
        let o = self.src.op(op);
        let operands = self.lookup_all(o.operands())?;
        let types = o
            .results()
            .iter()
            .map(|r| self.types.convert(self.src.value_type(*r)))
            .collect();
        let results = self.build(o.kind.clone(), operands, types, o.attributes.clone())?;
        for (&a, b) in o.results().iter().zip(results) {
            self.bind(a, b);
        }
        Ok(())
    }
}

pub trait RewritePattern: Send + Sync {
    fn name(&self) -> &str;

    fn benefit(&self) -> u32 {
        1
    }

    fn matches(&self, func: &Function, op: OpId) -> bool;

    /// Emits the replacement of `op` into `rw.dst` and binds its results.
    fn rewrite(&self, rw: &mut Rewriter<'_>, op: OpId) -> Result<(), ConversionErrorKind>;
}

/// Called once a sweep is complete, e.g. to check that thread state is empty.
pub type FinishHook = fn(&mut Rewriter<'_>) -> Result<(), ConversionErrorKind>;

pub struct Conversion {
    pub target: ConversionTarget,
    pub patterns: Vec<Box<dyn RewritePattern>>,
    pub types: TypeConverter,
    pub finish: Option<FinishHook>,
}

/// A converted module and the number of pattern applications it took.
#[derive(Clone, Debug)]
pub struct Converted {
    pub module: Module,
    pub rewrites: usize,
}

/// Applies `conversion` to every function and verifies the result.
pub fn apply_conversion(
    module: &Module,
    conversion: &Conversion,
    registry: &DialectRegistry,
) -> Result<Converted, ConversionError> {
    let mut out = Module::new();
    out.attributes = module.attributes.clone();
    let mut rewrites = 0;
    for func in module.functions() {
        let (f, n) = convert_function(func, conversion, registry)?;
        rewrites += n;
        if let Some(d) = verify_function(&f, registry).into_iter().next() {
            return Err(ConversionError {
                function: func.name().into(),
                op_index: None,
                kind: ConversionErrorKind::Verification(d.to_string()),
            });
        }
        out.add_function(f).map_err(|e| ConversionError {
            function: func.name().into(),
            op_index: None,
            kind: e.into(),
        })?;
    }
    Ok(Converted {
        module: out,
        rewrites,
    })
}

fn convert_function(
    func: &Function,
    conversion: &Conversion,
    registry: &DialectRegistry,
) -> Result<(Function, usize), ConversionError> {
    let limit = 10 * func.len().max(1);
    let mut applied = 0;
    let mut current = func.clone();
    while current
        .body()
        .iter()
        .any(|&op| !conversion.target.is_legal(&current.op(op).kind))
    {
        let fail = |op_index, kind| ConversionError {
            function: func.name().into(),
            op_index,
            kind,
        };
        let mut rw = Rewriter {
            registry,
            src: &current,
            dst: current.empty_like(),
            types: &conversion.types,
            threads: RegisterThreadState::default(),
            values: HashMap::new(),
        };
        rw.dst.set_result_types(
            current
                .result_types()
                .iter()
                .map(|t| conversion.types.convert(t))
                .collect(),
        );
        for &a in current.arguments() {
            let b = rw
                .dst
                .add_argument(conversion.types.convert(current.value_type(a)));
            rw.bind(a, b);
        }
        for (index, &op) in current.body().iter().enumerate() {
            let kind = &current.op(op).kind;
            if conversion.target.is_legal(kind) {
                rw.copy(op).map_err(|e| fail(Some(index), e))?;
                continue;
            }
            let mut best: Option<&dyn RewritePattern> = None;
            for p in &conversion.patterns {
                if p.matches(&current, op) && best.is_none_or(|b| p.benefit() > b.benefit()) {
                    best = Some(p.as_ref());
                }
            }
            let pattern = best
                .ok_or_else(|| fail(Some(index), ConversionErrorKind::NoPattern(kind.clone())))?;
            applied += 1;
            if applied > limit {
                return Err(fail(None, ConversionErrorKind::IterationLimit(limit)));
            }
            pattern
                .rewrite(&mut rw, op)
                .map_err(|e| fail(Some(index), e))?;
            if cfg!(debug_assertions) {
                rw.dst
                    .check_use_lists()
                    .map_err(|m| fail(Some(index), ConversionErrorKind::Internal(m)))?;
            }
        }
        if let Some(finish) = conversion.finish {
            finish(&mut rw).map_err(|e| fail(None, e))?;
        }
        let next = rw.dst;
        current = next;
    }
    Ok((current, applied))
}

pub struct QcircToMqtoptPass;

impl Pass for QcircToMqtoptPass {
    fn name(&self) -> &str {
        "qcirc-to-mqtopt"
    }

    fn description(&self) -> &str {
        "convert qcirc to linearly typed mqtopt"
    }

    fn run(
        &self,
        module: &mut Module,
        options: &PassOptions,
        cx: &PassContext<'_>,
    ) -> Result<usize, PassError> {
        options.expect_only(&[])?;
        let out =
            qcirc_to_mqtopt(module, cx.dialects).map_err(|e| PassError::new(e.to_string()))?;
        *module = out.module;
        Ok(out.rewrites)
    }
}

pub struct MqtoptToQcircPass;

impl Pass for MqtoptToQcircPass {
    fn name(&self) -> &str {
        "mqtopt-to-qcirc"
    }

    fn description(&self) -> &str {
        "convert mqtopt back to qcirc"
    }

    fn run(
        &self,
        module: &mut Module,
        options: &PassOptions,
        cx: &PassContext<'_>,
    ) -> Result<usize, PassError> {
        options.expect_only(&[])?;
        let out =
            mqtopt_to_qcirc(module, cx.dialects).map_err(|e| PassError::new(e.to_string()))?;
        *module = out.module;
        Ok(out.rewrites)
    }
}
