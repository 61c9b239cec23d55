use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::{DialectRegistry, Function, Module, Trait, ValueDef};

/// One verification failure, located by function name and body position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub function: String,
    pub op_index: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.op_index {
            Some(i) => write!(f, "@{}, op #{}: {}", self.function, i, self.message),
            None => write!(f, "@{}: {}", self.function, self.message),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub diagnostics: Vec<Diagnostic>,
}

impl VerificationReport {
    pub fn is_ok(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

pub fn verify_module(module: &Module, registry: &DialectRegistry) -> VerificationReport {
    let diagnostics = module
        .functions()
        .iter()
        .flat_map(|f| verify_function(f, registry))
        .collect();
    VerificationReport { diagnostics }
}

pub fn verify_function(func: &Function, registry: &DialectRegistry) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut diag = |op_index: Option<usize>, message: String| {
        out.push(Diagnostic {
            function: func.name().to_string(),
            op_index,
            message,
        })
    };

    if let Err(msg) = func.check_use_lists() {
        diag(None, msg);
    }
    for ty in func.result_types() {
        if !registry.has_type(ty) {
            diag(None, format!("unknown result type {ty}"));
        }
    }

    let positions: HashMap<_, _> = func
        .body()
        .iter()
        .enumerate()
        .map(|(i, &op)| (op, i))
        .collect();
    let numbering = func.value_numbering();
    let name_of = |v| match numbering.get(&v) {
        Some(n) => format!("%{n}"),
        None => "<detached value>".to_string(),
    };

    let mut dialects_used = BTreeSet::new();
    for (i, &op) in func.body().iter().enumerate() {
        let o = func.op(op);
        dialects_used.insert(o.kind.dialect.clone());

        for (k, &v) in o.operands().iter().enumerate() {
            if v.index() >= func.num_values() {
                diag(Some(i), format!("operand #{k} refers to an unknown value"));
                continue;
            }
            if let ValueDef::Result { op: def, .. } = func.value(v).def {
                match positions.get(&def) {
                    Some(&p) if p < i => {}
                    Some(_) => diag(
                        Some(i),
                        format!("operand #{k} uses {} before its definition", name_of(v)),
                    ),
                    None => diag(
                        Some(i),
                        format!("operand #{k} refers to a value defined outside the body"),
                    ),
                }
            }
        }

        let Some(schema) = registry.op_schema(&o.kind) else {
            diag(Some(i), format!("unknown operation kind '{}'", o.kind));
            continue;
        };
        for &r in o.results() {
            let ty = func.value_type(r);
            if !registry.has_type(ty) {
                diag(Some(i), format!("unknown type {ty}"));
            }
        }
        let operand_types: Vec<_> = o
            .operands()
            .iter()
            .filter(|v| v.index() < func.num_values())
            .map(|v| func.value_type(*v).clone())
            .collect();
        let result_types: Vec<_> = o
            .results()
            .iter()
            .map(|v| func.value_type(*v).clone())
            .collect();
        if let Err(msg) = schema.check(&operand_types, &result_types, &o.attributes) {
            diag(Some(i), format!("'{}': {msg}", o.kind));
        }
        for t in &schema.traits {
            let res = match t {
                Trait::Named(name) => match registry
                    .dialect(&o.kind.dialect)
                    .and_then(|d| d.named_trait(name))
                {
                    Some(nt) => (nt.check)(func, op),
                    None => Err("no check registered for this trait".to_string()),
                },
                _ => t.check_builtin(func, op),
            };
            if let Err(msg) = res {
                diag(Some(i), format!("'{}': trait {t} violated: {msg}", o.kind));
            }
        }
    }

    for name in &dialects_used {
        if let Some(d) = registry.dialect(name) {
            for rule in &d.rules {
                for (op_index, message) in (rule.check)(func) {
                    diag(op_index, message);
                }
            }
        }
    }
    out
}
