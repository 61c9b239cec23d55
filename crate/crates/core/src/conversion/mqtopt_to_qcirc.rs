use super::{
    apply_conversion, Conversion, ConversionError, ConversionErrorKind, ConversionTarget,
    Converted, RewritePattern, Rewriter, TypeConverter, GATE_NAMES,
};
use crate::dialects::mqtopt::{self, GateOp};
use crate::dialects::qcirc;
use crate::ir::{DialectRegistry, Function, Module, OpId, ValueId};

fn is_mqtopt(func: &Function, op: OpId, name: &str) -> bool {
    func.op(op).kind.is(mqtopt::DIALECT, name)
}

/// Register bookkeeping ops and measurement, mapped one-to-one.
struct Memory;

impl RewritePattern for Memory {
    fn name(&self) -> &str {
        "mqtopt.memory"
    }

    fn matches(&self, func: &Function, op: OpId) -> bool {
        [
            "allocQubitRegister",
            "extractQubit",
            "insertQubit",
            "deallocQubitRegister",
            "measure",
        ]
        .iter()
        .any(|n| is_mqtopt(func, op, n))
    }

    fn rewrite(&self, rw: &mut Rewriter<'_>, op: OpId) -> Result<(), ConversionErrorKind> {
        let o = rw.src.op(op);
        let operands = rw.lookup_all(o.operands())?;
        let index = o.int_attr("index").unwrap_or(0);
        let results = o.results().to_vec();
        match o.kind.name.as_str() {
            "allocQubitRegister" => {
                let r = qcirc::alloc(&mut rw.dst, rw.registry, o.int_attr("size").unwrap_or(0))?;
                rw.bind(results[0], r);
            }
            "extractQubit" => {
                // qcirc registers are not threaded: the updated register is
                // the same qcirc value
                let b = qcirc::extract(&mut rw.dst, rw.registry, operands[0], index)?;
                rw.bind(results[0], operands[0]);
                rw.bind(results[1], b);
            }
            "insertQubit" => {
                let r = qcirc::insert(&mut rw.dst, rw.registry, operands[0], operands[1], index)?;
                rw.bind(results[0], r);
            }
            "deallocQubitRegister" => qcirc::dealloc(&mut rw.dst, rw.registry, operands[0])?,
            _ => {
                let (b, c) = qcirc::measure(&mut rw.dst, rw.registry, operands[0])?;
                rw.bind(results[0], b);
                rw.bind(results[1], c);
            }
        }
        Ok(())
    }
}

struct Gate;

impl RewritePattern for Gate {
    fn name(&self) -> &str {
        "mqtopt.gate"
    }

    fn matches(&self, func: &Function, op: OpId) -> bool {
        GateOp::from_op(func, op).is_some()
    }

    fn rewrite(&self, rw: &mut Rewriter<'_>, op: OpId) -> Result<(), ConversionErrorKind> {
        let g = GateOp::from_op(rw.src, op).expect("matched");
        let name = GATE_NAMES
            .iter()
            .find(|(_, k, c)| *k == g.kind && *c == g.ctrls.len())
            .map(|(n, _, _)| *n)
            .ok_or_else(|| ConversionErrorKind::UnsupportedControlCount {
                gate: g.kind.op_name().into(),
                num_ctrls: g.ctrls.len(),
            })?;
        let params = rw.lookup_all(&g.params)?;
        // qcirc order: controls, then targets
        let src_qubits: Vec<ValueId> = g.ctrls.iter().chain(&g.targets).copied().collect();
        let src_results: Vec<ValueId> = g
            .ctrl_results
            .iter()
            .chain(&g.target_results)
            .copied()
            .collect();
        let bits = rw.lookup_all(&src_qubits)?;
        let out = qcirc::custom(&mut rw.dst, rw.registry, name, &params, &bits)?;
        for (a, b) in src_results.into_iter().zip(out) {
            rw.bind(a, b);
        }
        Ok(())
    }
}

pub fn mqtopt_to_qcirc_conversion() -> Conversion {
    Conversion {
        target: ConversionTarget::new()
            .illegal_dialect(mqtopt::DIALECT)
            .legal_dialect(qcirc::DIALECT),
        patterns: vec![Box::new(Memory), Box::new(Gate)],
        types: TypeConverter::new()
            .map(mqtopt::register_type(), qcirc::reg_type())
            .map(mqtopt::qubit_type(), qcirc::bit_type()),
        finish: None,
    }
}

/// Raises mqtopt back to qcirc. Controlled gates other than CNOT and CZ have
/// no qcirc name and are rejected.
pub fn mqtopt_to_qcirc(
    module: &Module,
    registry: &DialectRegistry,
) -> Result<Converted, ConversionError> {
    apply_conversion(module, &mqtopt_to_qcirc_conversion(), registry)
}
