use std::fmt::Write;

use crate::ir::{Attributes, Function, Module, TypeRef};

fn write_attrs(out: &mut String, attrs: &Attributes) {
    out.push('{');
    // BTreeMap iteration is already sorted by key.
    for (i, (k, v)) in attrs.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{k} = {v}");
    }
    out.push('}');
}

fn write_types(out: &mut String, types: &[&TypeRef]) {
    for (i, t) in types.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{t}");
    }
}

/// Prints one function at the given indentation depth (two spaces per level).
pub fn print_function(func: &Function, out: &mut String, depth: usize) {
    let pad = "  ".repeat(depth);
    let _ = write!(out, "{pad}func @{}()", func.name());
    if !func.attributes.is_empty() {
        out.push_str(" attributes ");
        write_attrs(out, &func.attributes);
    }
    out.push_str(" {\n");
    let numbering = func.value_numbering();
    let name = |v| format!("%{}", numbering[&v]);
    for &op in func.body() {
        let o = func.op(op);
        out.push_str(&pad);
        out.push_str("  ");
        if !o.results().is_empty() {
            let names: Vec<String> = o.results().iter().map(|&r| name(r)).collect();
            let _ = write!(out, "{} = ", names.join(", "));
        }
        let operands: Vec<String> = o.operands().iter().map(|&v| name(v)).collect();
        let _ = write!(out, "{}({})", o.kind, operands.join(", "));
        if !o.attributes.is_empty() {
            out.push(' ');
            write_attrs(out, &o.attributes);
        }
        out.push_str(" : (");
        let operand_types: Vec<&TypeRef> =
            o.operands().iter().map(|&v| func.value_type(v)).collect();
        write_types(out, &operand_types);
        out.push_str(") -> ");
        let result_types: Vec<&TypeRef> = o.results().iter().map(|&v| func.value_type(v)).collect();
        if result_types.len() == 1 {
            let _ = write!(out, "{}", result_types[0]);
        } else {
            out.push('(');
            write_types(out, &result_types);
            out.push(')');
        }
        out.push('\n');
    }
    let _ = writeln!(out, "{pad}}}");
}

/// Canonical form: values renumbered `%0, %1, …` per function in definition
/// order, one operation per line, attribute keys sorted, LF line endings.
pub fn print_module(module: &Module) -> String {
    let mut out = String::from("module");
    if !module.attributes.is_empty() {
        out.push_str(" attributes ");
        write_attrs(&mut out, &module.attributes);
    }
    out.push_str(" {\n");
    for f in module.functions() {
        print_function(f, &mut out, 1);
    }
    out.push_str("}\n");
    out
}
