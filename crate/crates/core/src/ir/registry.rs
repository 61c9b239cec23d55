use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::{AttrKind, Attributes, Function, OpId, OpKind, TypeRef};

pub const BUILTIN_DIALECT: &str = "builtin";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arity {
    One,
    Variadic,
    OneOrMore,
}

/// One run of operands or results sharing a type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub ty: TypeRef,
    pub arity: Arity,
}

impl Segment {
    pub fn one(ty: TypeRef) -> Self {
        Segment {
            ty,
            arity: Arity::One,
        }
    }

    pub fn variadic(ty: TypeRef) -> Self {
        Segment {
            ty,
            arity: Arity::Variadic,
        }
    }

    pub fn one_or_more(ty: TypeRef) -> Self {
        Segment {
            ty,
            arity: Arity::OneOrMore,
        }
    }
}

/// Greedy match of a type list against segments. Adjacent segments in a
/// schema never share a type, so greedy matching is exact.
pub fn match_segments(segments: &[Segment], types: &[TypeRef]) -> bool {
    let mut i = 0;
    for seg in segments {
        match seg.arity {
            Arity::One => {
                if types.get(i) != Some(&seg.ty) {
                    return false;
                }
                i += 1;
            }
            Arity::Variadic | Arity::OneOrMore => {
                let start = i;
                while types.get(i) == Some(&seg.ty) {
                    i += 1;
                }
                if seg.arity == Arity::OneOrMore && i == start {
                    return false;
                }
            }
        }
    }
    i == types.len()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttrSpec {
    pub name: String,
    pub kind: AttrKind,
    pub required: bool,
}

impl AttrSpec {
    pub fn required(name: &str, kind: AttrKind) -> Self {
        AttrSpec {
            name: name.to_string(),
            kind,
            required: true,
        }
    }

    pub fn optional(name: &str, kind: AttrKind) -> Self {
        AttrSpec {
            name: name.to_string(),
            kind,
            required: false,
        }
    }
}

/// A verification property shared across operation kinds.
///
/// Quantum operands are operands of non-builtin type; parameters are `f64`
/// operands. Controls are counted by the optional `num_ctrls` attribute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Trait {
    NumParams(usize),
    NumTargets(usize),
    Unitary,
    NoClassicalResult,
    /// A dialect-supplied check, looked up by name in the owning manifest.
    Named(String),
}

impl fmt::Display for Trait {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Trait::NumParams(n) => write!(f, "NumParams({n})"),
            Trait::NumTargets(n) => write!(f, "NumTargets({n})"),
            Trait::Unitary => f.write_str("Unitary"),
            Trait::NoClassicalResult => f.write_str("NoClassicalResult"),
            Trait::Named(name) => f.write_str(name),
        }
    }
}

impl Trait {
    /// Built-in trait checks. Named traits always pass here; the verifier
    /// dispatches them to the dialect.
    pub fn check_builtin(&self, func: &Function, op: OpId) -> Result<(), String> {
        let o = func.op(op);
        let quantum_in = o
            .operands()
            .iter()
            .filter(|v| !func.value_type(**v).is_builtin())
            .count();
        match self {
            Trait::NumParams(n) => {
                let found = o
                    .operands()
                    .iter()
                    .filter(|v| func.value_type(**v).is_f64())
                    .count();
                if found != *n {
                    return Err(format!("expected {n} parameter(s), found {found}"));
                }
            }
            Trait::NumTargets(n) => {
                let ctrls = o.int_attr("num_ctrls").unwrap_or(0);
                if ctrls < 0 || ctrls as usize > quantum_in {
                    return Err(format!(
                        "num_ctrls = {ctrls} is inconsistent with {quantum_in} qubit operand(s)"
                    ));
                }
                let targets = quantum_in - ctrls as usize;
                if targets != *n {
                    return Err(format!("expected {n} target(s), found {targets}"));
                }
            }
            Trait::Unitary => {
                let qin: Vec<&TypeRef> = o
                    .operands()
                    .iter()
                    .map(|v| func.value_type(*v))
                    .filter(|t| !t.is_builtin())
                    .collect();
                let qout: Vec<&TypeRef> = o
                    .results()
                    .iter()
                    .map(|v| func.value_type(*v))
                    .filter(|t| !t.is_builtin())
                    .collect();
                if qin != qout {
                    return Err(format!(
                        "expected {} qubit result(s) matching the qubit operands, found {}",
                        qin.len(),
                        qout.len()
                    ));
                }
            }
            Trait::NoClassicalResult => {
                if o.results().iter().any(|v| func.value_type(*v).is_builtin()) {
                    return Err("operation must not produce classical results".into());
                }
            }
            Trait::Named(_) => {}
        }
        Ok(())
    }
}

pub type TraitCheck = fn(&Function, OpId) -> Result<(), String>;

/// A dialect-supplied trait check.
#[derive(Clone, Debug)]
pub struct NamedTrait {
    pub name: String,
    pub check: TraitCheck,
}

/// Violations reported by a dialect-level rule: body position (if any) and message.
pub type RuleCheck = fn(&Function) -> Vec<(Option<usize>, String)>;

/// A function-wide verification rule, run on every function that contains
/// at least one operation of the owning dialect.
#[derive(Clone, Debug)]
pub struct DialectRule {
    pub name: String,
    pub check: RuleCheck,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpSchema {
    pub name: String,
    pub operands: Vec<Segment>,
    pub results: Vec<Segment>,
    pub attributes: Vec<AttrSpec>,
    pub traits: Vec<Trait>,
}

impl OpSchema {
    pub fn new(name: &str) -> Self {
        OpSchema {
            name: name.to_string(),
            operands: Vec::new(),
            results: Vec::new(),
            attributes: Vec::new(),
            traits: Vec::new(),
        }
    }

    pub fn operands(mut self, segs: Vec<Segment>) -> Self {
        self.operands = segs;
        self
    }

    pub fn results(mut self, segs: Vec<Segment>) -> Self {
        self.results = segs;
        self
    }

    pub fn attr(mut self, spec: AttrSpec) -> Self {
        self.attributes.push(spec);
        self
    }

    pub fn traits(mut self, traits: Vec<Trait>) -> Self {
        self.traits = traits;
        self
    }

    pub fn check(
        &self,
        operand_types: &[TypeRef],
        result_types: &[TypeRef],
        attributes: &Attributes,
    ) -> Result<(), String> {
        if !match_segments(&self.operands, operand_types) {
            return Err(format!(
                "operand types ({}) do not match the registered signature",
                join_types(operand_types)
            ));
        }
        if !match_segments(&self.results, result_types) {
            return Err(format!(
                "result types ({}) do not match the registered signature",
                join_types(result_types)
            ));
        }
        for spec in &self.attributes {
            match attributes.get(&spec.name) {
                None if spec.required => {
                    return Err(format!("missing required attribute '{}'", spec.name))
                }
                Some(a) if a.kind() != spec.kind => {
                    return Err(format!(
                        "attribute '{}' must be of {} kind",
                        spec.name, spec.kind
                    ))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

fn join_types(types: &[TypeRef]) -> String {
    types
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Everything one dialect contributes: types, operation schemas, trait
/// checks, and function-level rules.
#[derive(Clone, Debug)]
pub struct DialectManifest {
    pub name: String,
    pub types: Vec<String>,
    pub ops: Vec<OpSchema>,
    pub named_traits: Vec<NamedTrait>,
    pub rules: Vec<DialectRule>,
}

impl DialectManifest {
    pub fn new(name: &str) -> Self {
        DialectManifest {
            name: name.to_string(),
            types: Vec::new(),
            ops: Vec::new(),
            named_traits: Vec::new(),
            rules: Vec::new(),
        }
    }

    pub fn op(&self, name: &str) -> Option<&OpSchema> {
        self.ops.iter().find(|o| o.name == name)
    }

    pub fn named_trait(&self, name: &str) -> Option<&NamedTrait> {
        self.named_traits.iter().find(|t| t.name == name)
    }
}

// Check functions are compared by name: the same dialect loaded from a
// shared library carries different function addresses.
impl PartialEq for DialectManifest {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.types == other.types
            && self.ops == other.ops
            && self
                .named_traits
                .iter()
                .map(|t| &t.name)
                .eq(other.named_traits.iter().map(|t| &t.name))
            && self
                .rules
                .iter()
                .map(|r| &r.name)
                .eq(other.rules.iter().map(|r| &r.name))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("dialect '{0}' is already registered with a different manifest")]
    DuplicateDialect(String),
    #[error("pass '{name}' is already provided by '{existing}'")]
    DuplicatePassName { name: String, existing: String },
}

/// Loaded dialects by name. The `builtin` dialect (types `f64`, `i1`,
/// `i64`) is always present.
#[derive(Clone, Debug)]
pub struct DialectRegistry {
    dialects: BTreeMap<String, DialectManifest>,
}

impl Default for DialectRegistry {
    fn default() -> Self {
        Self::new()
    }
}

impl DialectRegistry {
    pub fn new() -> Self {
        let mut builtin = DialectManifest::new(BUILTIN_DIALECT);
        builtin.types = vec!["f64".into(), "i1".into(), "i64".into()];
        let mut dialects = BTreeMap::new();
        dialects.insert(BUILTIN_DIALECT.to_string(), builtin);
        DialectRegistry { dialects }
    }

    /// Registers a dialect. Re-registering an identical manifest is a no-op.
    pub fn register(&mut self, manifest: DialectManifest) -> Result<(), RegistryError> {
        match self.dialects.get(&manifest.name) {
            Some(existing) if *existing == manifest => Ok(()),
            Some(_) => Err(RegistryError::DuplicateDialect(manifest.name)),
            None => {
                self.dialects.insert(manifest.name.clone(), manifest);
                Ok(())
            }
        }
    }

    pub fn dialect(&self, name: &str) -> Option<&DialectManifest> {
        self.dialects.get(name)
    }

    pub fn dialect_names(&self) -> impl Iterator<Item = &str> {
        self.dialects.keys().map(String::as_str)
    }

    pub fn op_schema(&self, kind: &OpKind) -> Option<&OpSchema> {
        self.dialects.get(&kind.dialect)?.op(&kind.name)
    }

    pub fn has_type(&self, ty: &TypeRef) -> bool {
        self.dialects
            .get(&ty.dialect)
            .is_some_and(|d| d.types.contains(&ty.name))
    }
}
