//! The generic SSA intermediate representation.
//!
//! A [`Module`] holds [`Function`]s; each function is a single straight-line
//! block of [`Operation`]s. Operations and values live in per-function arenas
//! addressed by [`OpId`] and [`ValueId`], and every value keeps its use list
//! up to date as operations are inserted, rewired, and erased.

mod attr;
mod registry;
mod verify;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

pub use attr::{AttrKind, Attribute};
pub use registry::{
    match_segments, Arity, AttrSpec, DialectManifest, DialectRegistry, DialectRule, NamedTrait,
    OpSchema, RegistryError, RuleCheck, Segment, Trait, TraitCheck, BUILTIN_DIALECT,
};
pub use verify::{verify_function, verify_module, Diagnostic, VerificationReport};

pub type Attributes = BTreeMap<String, Attribute>;

/// A type named by its owning dialect. Builtin scalar types (`f64`, `i1`,
/// `i64`) belong to the `builtin` dialect and print without a `!` prefix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeRef {
    pub dialect: String,
    pub name: String,
}

impl TypeRef {
    pub fn new(dialect: impl Into<String>, name: impl Into<String>) -> Self {
        TypeRef {
            dialect: dialect.into(),
            name: name.into(),
        }
    }

    pub fn f64() -> Self {
        TypeRef::new(BUILTIN_DIALECT, "f64")
    }

    pub fn i1() -> Self {
        TypeRef::new(BUILTIN_DIALECT, "i1")
    }

    pub fn i64() -> Self {
        TypeRef::new(BUILTIN_DIALECT, "i64")
    }

    pub fn is_builtin(&self) -> bool {
        self.dialect == BUILTIN_DIALECT
    }

    pub fn is_f64(&self) -> bool {
        self.is_builtin() && self.name == "f64"
    }
}

impl fmt::Display for TypeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_builtin() {
            f.write_str(&self.name)
        } else {
            write!(f, "!{}.{}", self.dialect, self.name)
        }
    }
}

/// A `(dialect, op-name)` pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpKind {
    pub dialect: String,
    pub name: String,
}

impl OpKind {
    pub fn new(dialect: impl Into<String>, name: impl Into<String>) -> Self {
        OpKind {
            dialect: dialect.into(),
            name: name.into(),
        }
    }

    pub fn is(&self, dialect: &str, name: &str) -> bool {
        self.dialect == dialect && self.name == name
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.dialect, self.name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ValueId(u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpId(u32);

impl ValueId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl OpId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueDef {
    Argument(usize),
    Result { op: OpId, index: usize },
}

/// One operand slot referencing a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Use {
    pub op: OpId,
    pub operand: usize,
}

#[derive(Clone, Debug)]
pub struct ValueData {
    pub ty: TypeRef,
    pub def: ValueDef,
    uses: Vec<Use>,
}

impl ValueData {
    pub fn uses(&self) -> &[Use] {
        &self.uses
    }
}

#[derive(Clone, Debug)]
pub struct Operation {
    pub kind: OpKind,
    operands: Vec<ValueId>,
    results: Vec<ValueId>,
    pub attributes: Attributes,
    pub traits: Vec<Trait>,
    attached: bool,
}

impl Operation {
    pub fn operands(&self) -> &[ValueId] {
        &self.operands
    }

    pub fn results(&self) -> &[ValueId] {
        &self.results
    }

    pub fn attr(&self, key: &str) -> Option<&Attribute> {
        self.attributes.get(key)
    }

    pub fn int_attr(&self, key: &str) -> Option<i64> {
        self.attr(key).and_then(Attribute::as_int)
    }

    pub fn str_attr(&self, key: &str) -> Option<&str> {
        self.attr(key).and_then(Attribute::as_str)
    }

    pub fn is_attached(&self) -> bool {
        self.attached
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IrError {
    #[error("unknown operation kind '{0}'")]
    UnknownOpKind(OpKind),
    #[error("unknown type {0}")]
    UnknownType(TypeRef),
    #[error("schema mismatch for '{kind}': {message}")]
    SchemaMismatch { kind: OpKind, message: String },
    #[error("type mismatch: cannot replace a value of type {from} with a value of type {to}")]
    TypeMismatch { from: TypeRef, to: TypeRef },
    #[error("cannot erase '{0}': its results still have uses")]
    ResultsStillUsed(OpKind),
    #[error("operation is already part of the function body")]
    AlreadyAttached,
    #[error("operation is not part of the function body")]
    NotAttached,
    #[error("operation or value does not belong to this function")]
    InvalidReference,
    #[error("function '{0}' is already defined in this module")]
    DuplicateFunction(String),
    #[error("body reorder must be a permutation of the current body")]
    InvalidReorder,
}

/// A function: one straight-line block of operations.
#[derive(Clone, Debug)]
pub struct Function {
    name: String,
    pub attributes: Attributes,
    result_types: Vec<TypeRef>,
    arguments: Vec<ValueId>,
    values: Vec<ValueData>,
    ops: Vec<Option<Operation>>,
    body: Vec<OpId>,
}

impl Function {
    pub fn new(name: impl Into<String>) -> Self {
        Function {
            name: name.into(),
            attributes: Attributes::new(),
            result_types: Vec::new(),
            arguments: Vec::new(),
            values: Vec::new(),
            ops: Vec::new(),
            body: Vec::new(),
        }
    }

    /// An empty function carrying over the name and attributes of `self`.
    pub fn empty_like(&self) -> Self {
        let mut f = Function::new(self.name.clone());
        f.attributes = self.attributes.clone();
        f.result_types = self.result_types.clone();
        f
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arguments(&self) -> &[ValueId] {
        &self.arguments
    }

    pub fn result_types(&self) -> &[TypeRef] {
        &self.result_types
    }

    pub fn set_result_types(&mut self, types: Vec<TypeRef>) {
        self.result_types = types;
    }

    pub fn add_argument(&mut self, ty: TypeRef) -> ValueId {
        let v = self.mint_value(ty, ValueDef::Argument(self.arguments.len()));
        self.arguments.push(v);
        v
    }

    /// Operations in body order.
    pub fn body(&self) -> &[OpId] {
        &self.body
    }

    pub fn len(&self) -> usize {
        self.body.len()
    }

    pub fn is_empty(&self) -> bool {
        self.body.is_empty()
    }

    pub fn op(&self, id: OpId) -> &Operation {
        self.ops[id.index()].as_ref().expect("operation was erased")
    }

    fn op_mut(&mut self, id: OpId) -> &mut Operation {
        self.ops[id.index()].as_mut().expect("operation was erased")
    }

    pub fn try_op(&self, id: OpId) -> Option<&Operation> {
        self.ops.get(id.index()).and_then(Option::as_ref)
    }

    pub fn value(&self, v: ValueId) -> &ValueData {
        &self.values[v.index()]
    }

    pub fn value_type(&self, v: ValueId) -> &TypeRef {
        &self.values[v.index()].ty
    }

    pub fn uses(&self, v: ValueId) -> &[Use] {
        &self.values[v.index()].uses
    }

    pub fn num_values(&self) -> usize {
        self.values.len()
    }

    /// The operation defining `v`, with the result index, or `None` for arguments.
    pub fn defining_op(&self, v: ValueId) -> Option<(OpId, usize)> {
        match self.values[v.index()].def {
            ValueDef::Argument(_) => None,
            ValueDef::Result { op, index } => Some((op, index)),
        }
    }

    pub fn position(&self, op: OpId) -> Option<usize> {
        self.body.iter().position(|&o| o == op)
    }

    pub fn set_attr(&mut self, op: OpId, key: impl Into<String>, value: Attribute) {
        self.op_mut(op).attributes.insert(key.into(), value);
    }

    fn mint_value(&mut self, ty: TypeRef, def: ValueDef) -> ValueId {
        let id = ValueId(self.values.len() as u32);
        self.values.push(ValueData {
            ty,
            def,
            uses: Vec::new(),
        });
        id
    }

    fn check_value(&self, v: ValueId) -> Result<(), IrError> {
        if v.index() < self.values.len() {
            Ok(())
        } else {
            Err(IrError::InvalidReference)
        }
    }

    /// Creates a detached operation after checking it against the registered
    /// schema. Result values are minted immediately; operand uses are linked
    /// when the operation is inserted into the body.
    pub fn create_operation(
        &mut self,
        registry: &DialectRegistry,
        kind: OpKind,
        operands: Vec<ValueId>,
        result_types: Vec<TypeRef>,
        attributes: Attributes,
    ) -> Result<OpId, IrError> {
        let schema = registry
            .op_schema(&kind)
            .ok_or_else(|| IrError::UnknownOpKind(kind.clone()))?;
        for v in &operands {
            self.check_value(*v)?;
        }
        for ty in &result_types {
            if !registry.has_type(ty) {
                return Err(IrError::UnknownType(ty.clone()));
            }
        }
        let operand_types: Vec<TypeRef> = operands
            .iter()
            .map(|v| self.value_type(*v).clone())
            .collect();
        schema
            .check(&operand_types, &result_types, &attributes)
            .map_err(|message| IrError::SchemaMismatch {
                kind: kind.clone(),
                message,
            })?;
        let traits = schema.traits.clone();
        Ok(self.create_operation_unchecked(kind, operands, result_types, attributes, traits))
    }

    /// Creates a detached operation without consulting any registry. The
    /// verifier still checks the result; this exists for tools that need to
    /// materialize malformed IR (tests, unverified parsing).
    pub fn create_operation_unchecked(
        &mut self,
        kind: OpKind,
        operands: Vec<ValueId>,
        result_types: Vec<TypeRef>,
        attributes: Attributes,
        traits: Vec<Trait>,
    ) -> OpId {
        let id = OpId(self.ops.len() as u32);
        let results = result_types
            .into_iter()
            .enumerate()
            .map(|(index, ty)| self.mint_value(ty, ValueDef::Result { op: id, index }))
            .collect();
        self.ops.push(Some(Operation {
            kind,
            operands,
            results,
            attributes,
            traits,
            attached: false,
        }));
        id
    }

    fn link(&mut self, op: OpId) -> Result<(), IrError> {
        let operation = self.op_mut(op);
        if operation.attached {
            return Err(IrError::AlreadyAttached);
        }
        operation.attached = true;
        let operands = operation.operands.clone();
        for (operand, v) in operands.into_iter().enumerate() {
            self.values[v.index()].uses.push(Use { op, operand });
        }
        Ok(())
    }

    pub fn append(&mut self, op: OpId) -> Result<(), IrError> {
        self.link(op)?;
        self.body.push(op);
        Ok(())
    }

    /// Inserts `op` at body position `index` (clamped to the body length).
    pub fn insert_at(&mut self, index: usize, op: OpId) -> Result<(), IrError> {
        self.link(op)?;
        let index = index.min(self.body.len());
        self.body.insert(index, op);
        Ok(())
    }

    /// Creates and appends an operation, returning its results.
    pub fn build(
        &mut self,
        registry: &DialectRegistry,
        kind: OpKind,
        operands: Vec<ValueId>,
        result_types: Vec<TypeRef>,
        attributes: Attributes,
    ) -> Result<Vec<ValueId>, IrError> {
        let op = self.create_operation(registry, kind, operands, result_types, attributes)?;
        self.append(op)?;
        Ok(self.op(op).results.clone())
    }

    /// Points operand slot `index` of `op` at `value`, keeping use lists exact.
    pub fn set_operand(&mut self, op: OpId, index: usize, value: ValueId) -> Result<(), IrError> {
        self.check_value(value)?;
        let operation = self.op(op);
        let old = *operation
            .operands
            .get(index)
            .ok_or(IrError::InvalidReference)?;
        let attached = operation.attached;
        self.op_mut(op).operands[index] = value;
        if attached {
            let slot = Use { op, operand: index };
            self.values[old.index()].uses.retain(|u| *u != slot);
            self.values[value.index()].uses.push(slot);
        }
        Ok(())
    }

    pub fn replace_all_uses(&mut self, old: ValueId, new: ValueId) -> Result<(), IrError> {
        self.check_value(old)?;
        self.check_value(new)?;
        if self.value_type(old) != self.value_type(new) {
            return Err(IrError::TypeMismatch {
                from: self.value_type(old).clone(),
                to: self.value_type(new).clone(),
            });
        }
        if old == new {
            return Ok(());
        }
        let uses = std::mem::take(&mut self.values[old.index()].uses);
        for u in &uses {
            self.op_mut(u.op).operands[u.operand] = new;
        }
        self.values[new.index()].uses.extend(uses);
        Ok(())
    }

    pub fn erase_operation(&mut self, op: OpId) -> Result<(), IrError> {
        let operation = self.try_op(op).ok_or(IrError::InvalidReference)?;
        if operation
            .results
            .iter()
            .any(|r| !self.values[r.index()].uses.is_empty())
        {
            return Err(IrError::ResultsStillUsed(operation.kind.clone()));
        }
        if operation.attached {
            for (operand, v) in operation.operands.clone().into_iter().enumerate() {
                self.values[v.index()]
                    .uses
                    .retain(|u| !(u.op == op && u.operand == operand));
            }
            self.body.retain(|&o| o != op);
        }
        self.ops[op.index()] = None;
        Ok(())
    }

    /// Replaces the body order with `order`, which must be a permutation of it.
    pub fn reorder_body(&mut self, order: Vec<OpId>) -> Result<(), IrError> {
        let mut a = order.clone();
        let mut b = self.body.clone();
        a.sort();
        b.sort();
        if a != b {
            return Err(IrError::InvalidReorder);
        }
        self.body = order;
        Ok(())
    }

    /// Values in canonical (printer) order: arguments, then results in body order.
    pub fn value_numbering(&self) -> HashMap<ValueId, usize> {
        let mut numbering = HashMap::new();
        let mut next = 0;
        for &a in &self.arguments {
            numbering.insert(a, next);
            next += 1;
        }
        for &op in &self.body {
            for &r in &self.op(op).results {
                numbering.insert(r, next);
                next += 1;
            }
        }
        numbering
    }

    /// The name `v` receives when printed, e.g. `%3`.
    pub fn display_name(&self, v: ValueId) -> String {
        match self.value_numbering().get(&v) {
            Some(n) => format!("%{n}"),
            None => format!("%<detached {}>", v.0),
        }
    }

    /// Rebuilds every use list from the operand slots of attached operations
    /// and compares against the maintained lists.
    pub fn check_use_lists(&self) -> Result<(), String> {
        let mut expected: Vec<Vec<Use>> = vec![Vec::new(); self.values.len()];
        for &op in &self.body {
            for (operand, v) in self.op(op).operands.iter().enumerate() {
                expected[v.index()].push(Use { op, operand });
            }
        }
        for (i, want) in expected.iter_mut().enumerate() {
            let mut have = self.values[i].uses.clone();
            have.sort();
            want.sort();
            if have != *want {
                return Err(format!(
                    "use list of {} is out of sync with operand slots",
                    self.display_name(ValueId(i as u32))
                ));
            }
        }
        Ok(())
    }

    /// Copies an attached operation of `src` into `self` with new operands.
    pub fn clone_op_from(
        &mut self,
        registry: &DialectRegistry,
        src: &Function,
        op: OpId,
        operands: Vec<ValueId>,
    ) -> Result<Vec<ValueId>, IrError> {
        let o = src.op(op);
        let result_types = o
            .results
            .iter()
            .map(|r| src.value_type(*r).clone())
            .collect();
        self.build(
            registry,
            o.kind.clone(),
            operands,
            result_types,
            o.attributes.clone(),
        )
    }

    /// Positional structural comparison: same op kinds, attributes, and types
    /// in the same order, with operands corresponding under the bijection
    /// induced by matching results.
    pub fn is_isomorphic(&self, other: &Function) -> bool {
        if self.body.len() != other.body.len()
            || self.arguments.len() != other.arguments.len()
            || self.attributes != other.attributes
        {
            return false;
        }
        let mut map: HashMap<ValueId, ValueId> = HashMap::new();
        for (a, b) in self.arguments.iter().zip(&other.arguments) {
            if self.value_type(*a) != other.value_type(*b) {
                return false;
            }
            map.insert(*a, *b);
        }
        for (&x, &y) in self.body.iter().zip(&other.body) {
            let (ox, oy) = (self.op(x), other.op(y));
            if ox.kind != oy.kind
                || ox.attributes != oy.attributes
                || ox.operands.len() != oy.operands.len()
                || ox.results.len() != oy.results.len()
            {
                return false;
            }
            for (a, b) in ox.operands.iter().zip(&oy.operands) {
                if map.get(a) != Some(b) {
                    return false;
                }
            }
            for (a, b) in ox.results.iter().zip(&oy.results) {
                if self.value_type(*a) != other.value_type(*b) {
                    return false;
                }
                map.insert(*a, *b);
            }
        }
        true
    }
}

/// A module: an ordered list of uniquely named functions.
#[derive(Clone, Debug, Default)]
pub struct Module {
    functions: Vec<Function>,
    pub attributes: Attributes,
}

impl Module {
    pub fn new() -> Self {
        Module::default()
    }

    pub fn functions(&self) -> &[Function] {
        &self.functions
    }

    pub fn functions_mut(&mut self) -> &mut [Function] {
        &mut self.functions
    }

    pub fn function(&self, name: &str) -> Option<&Function> {
        self.functions.iter().find(|f| f.name == name)
    }

    pub fn function_mut(&mut self, name: &str) -> Option<&mut Function> {
        self.functions.iter_mut().find(|f| f.name == name)
    }

    pub fn add_function(&mut self, f: Function) -> Result<(), IrError> {
        if self.function(&f.name).is_some() {
            return Err(IrError::DuplicateFunction(f.name));
        }
        self.functions.push(f);
        Ok(())
    }

    /// Replaces the function with the same name, keeping its position.
    pub fn replace_function(&mut self, f: Function) -> Result<(), IrError> {
        let slot = self
            .functions
            .iter_mut()
            .find(|g| g.name == f.name)
            .ok_or(IrError::InvalidReference)?;
        *slot = f;
        Ok(())
    }

    pub fn op_count(&self) -> usize {
        self.functions.iter().map(Function::len).sum()
    }
}
