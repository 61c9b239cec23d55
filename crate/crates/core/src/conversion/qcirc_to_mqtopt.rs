use super::{
    apply_conversion, Conversion, ConversionError, ConversionErrorKind, ConversionTarget,
    Converted, RewritePattern, Rewriter, TypeConverter, GATE_NAMES,
};
use crate::dialects::{mqtopt, qcirc};
use crate::ir::{DialectRegistry, Function, Module, OpId, ValueId};

fn is_qcirc(func: &Function, op: OpId, name: &str) -> bool {
    func.op(op).kind.is(qcirc::DIALECT, name)
}

fn index_of(rw: &Rewriter<'_>, op: OpId) -> Result<i64, ConversionErrorKind> {
    rw.src
        .op(op)
        .int_attr("index")
        .ok_or_else(|| ConversionErrorKind::Internal("missing index".into()))
}

fn root_of(rw: &Rewriter<'_>, reg: ValueId) -> Result<ValueId, ConversionErrorKind> {
    let root = *rw.threads.roots.get(&reg).ok_or_else(|| {
        ConversionErrorKind::Internal(format!("register {} has no root", rw.src.display_name(reg)))
    })?;
    if !rw.threads.current.contains_key(&root) {
        return Err(ConversionErrorKind::NonLinearizable(format!(
            "register {} is used after it was deallocated",
            rw.src.display_name(reg)
        )));
    }
    Ok(root)
}

/// Takes the current linear value for a source qubit, marking the source
/// value consumed.
fn consume(
    rw: &mut Rewriter<'_>,
    bit: ValueId,
) -> Result<((ValueId, i64), ValueId), ConversionErrorKind> {
    let name = rw.src.display_name(bit);
    if rw.threads.stale.contains(&bit) {
        return Err(ConversionErrorKind::NonLinearizable(format!(
            "qubit value {name} is used again after it was consumed"
        )));
    }
    let wire = *rw.threads.wires.get(&bit).ok_or_else(|| {
        ConversionErrorKind::NonLinearizable(format!(
            "qubit value {name} is not bound to a register slot"
        ))
    })?;
    let value = rw.threads.live.remove(&wire).ok_or_else(|| {
        ConversionErrorKind::NonLinearizable(format!(
            "qubit value {name} refers to a slot that was already re-inserted"
        ))
    })?;
    rw.threads.stale.insert(bit);
    Ok((wire, value))
}

struct Alloc;

impl RewritePattern for Alloc {
    fn name(&self) -> &str {
        "qcirc.alloc"
    }

    fn matches(&self, func: &Function, op: OpId) -> bool {
        is_qcirc(func, op, "alloc")
    }

    fn rewrite(&self, rw: &mut Rewriter<'_>, op: OpId) -> Result<(), ConversionErrorKind> {
        let size = rw.src.op(op).int_attr("size").unwrap_or(0);
        let src = rw.src.op(op).results()[0];
        let r = mqtopt::alloc_register(&mut rw.dst, rw.registry, size)?;
        rw.threads.roots.insert(src, src);
        rw.threads.current.insert(src, r);
        Ok(())
    }
}

struct Extract;

impl RewritePattern for Extract {
    fn name(&self) -> &str {
        "qcirc.extract"
    }

    fn matches(&self, func: &Function, op: OpId) -> bool {
        is_qcirc(func, op, "extract")
    }

    fn rewrite(&self, rw: &mut Rewriter<'_>, op: OpId) -> Result<(), ConversionErrorKind> {
        let o = rw.src.op(op);
        let (reg, bit) = (o.operands()[0], o.results()[0]);
        let index = index_of(rw, op)?;
        let root = root_of(rw, reg)?;
        if rw.threads.live.contains_key(&(root, index)) {
            return Err(ConversionErrorKind::NonLinearizable(format!(
                "index {index} of register {} is extracted again before being inserted",
                rw.src.display_name(reg)
            )));
        }
        let (r, q) =
            mqtopt::extract_qubit(&mut rw.dst, rw.registry, rw.threads.current[&root], index)?;
        rw.threads.current.insert(root, r);
        rw.threads.live.insert((root, index), q);
        rw.threads.wires.insert(bit, (root, index));
        Ok(())
    }
}

struct Insert;

impl RewritePattern for Insert {
    fn name(&self) -> &str {
        "qcirc.insert"
    }

    fn matches(&self, func: &Function, op: OpId) -> bool {
        is_qcirc(func, op, "insert")
    }

    fn rewrite(&self, rw: &mut Rewriter<'_>, op: OpId) -> Result<(), ConversionErrorKind> {
        let o = rw.src.op(op);
        let (reg, bit, out) = (o.operands()[0], o.operands()[1], o.results()[0]);
        let index = index_of(rw, op)?;
        let root = root_of(rw, reg)?;
        let (wire, q) = consume(rw, bit)?;
        if wire != (root, index) {
            return Err(ConversionErrorKind::NonLinearizable(format!(
                "qubit value {} is inserted at index {index} but was extracted from index {} of another slot",
                rw.src.display_name(bit),
                wire.1
            )));
        }
        let r = mqtopt::insert_qubit(
            &mut rw.dst,
            rw.registry,
            rw.threads.current[&root],
            q,
            index,
        )?;
        rw.threads.current.insert(root, r);
        rw.threads.roots.insert(out, root);
        Ok(())
    }
}

struct Dealloc;

impl RewritePattern for Dealloc {
    fn name(&self) -> &str {
        "qcirc.dealloc"
    }

    fn matches(&self, func: &Function, op: OpId) -> bool {
        is_qcirc(func, op, "dealloc")
    }

    /// Slots still extracted are inserted back first, so qcirc programs that
    /// never re-insert still convert.
    fn rewrite(&self, rw: &mut Rewriter<'_>, op: OpId) -> Result<(), ConversionErrorKind> {
        let reg = rw.src.op(op).operands()[0];
        let root = root_of(rw, reg)?;
        let outstanding: Vec<(i64, ValueId)> = rw
            .threads
            .live
            .range((root, i64::MIN)..=(root, i64::MAX))
            .map(|(&(_, i), &q)| (i, q))
            .collect();
        let mut r = rw.threads.current[&root];
        for (index, q) in outstanding {
            rw.threads.live.remove(&(root, index));
            r = mqtopt::insert_qubit(&mut rw.dst, rw.registry, r, q, index)?;
        }
        mqtopt::dealloc_register(&mut rw.dst, rw.registry, r)?;
        rw.threads.current.remove(&root);
        Ok(())
    }
}

struct Measure;

impl RewritePattern for Measure {
    fn name(&self) -> &str {
        "qcirc.measure"
    }

    fn matches(&self, func: &Function, op: OpId) -> bool {
        is_qcirc(func, op, "measure")
    }

    fn rewrite(&self, rw: &mut Rewriter<'_>, op: OpId) -> Result<(), ConversionErrorKind> {
        let o = rw.src.op(op);
        let (bit, out, outcome) = (o.operands()[0], o.results()[0], o.results()[1]);
        let (wire, q) = consume(rw, bit)?;
        let (q2, c) = mqtopt::measure(&mut rw.dst, rw.registry, q)?;
        rw.threads.live.insert(wire, q2);
        rw.threads.wires.insert(out, wire);
        rw.bind(outcome, c);
        Ok(())
    }
}

/// `qcirc.custom` with a gate name from the table.
struct Gate;

impl RewritePattern for Gate {
    fn name(&self) -> &str {
        "qcirc.custom"
    }

    fn matches(&self, func: &Function, op: OpId) -> bool {
        is_qcirc(func, op, "custom") && {
            let name = func.op(op).str_attr("gate_name").unwrap_or_default();
            GATE_NAMES.iter().any(|(n, _, _)| *n == name)
        }
    }

    fn rewrite(&self, rw: &mut Rewriter<'_>, op: OpId) -> Result<(), ConversionErrorKind> {
        let o = rw.src.op(op);
        let name = o.str_attr("gate_name").unwrap_or_default();
        let &(_, kind, n_ctrls) = GATE_NAMES
            .iter()
            .find(|(n, _, _)| *n == name)
            .expect("matched");
        let (params, bits): (Vec<ValueId>, Vec<ValueId>) = o
            .operands()
            .iter()
            .partition(|v| rw.src.value_type(**v).is_f64());
        let results = o.results().to_vec();
        if bits.len() != n_ctrls + kind.num_targets() || results.len() != bits.len() {
            return Err(ConversionErrorKind::Internal(format!(
                "bad arity for '{name}'"
            )));
        }
        let params = rw.lookup_all(&params)?;
        let mut taken = Vec::new();
        for &b in &bits {
            taken.push(consume(rw, b)?);
        }
        let (ctrls, targets) = taken.split_at(n_ctrls);
        let tv: Vec<ValueId> = targets.iter().map(|(_, q)| *q).collect();
        let cv: Vec<ValueId> = ctrls.iter().map(|(_, q)| *q).collect();
        let (tout, cout) = mqtopt::gate(&mut rw.dst, rw.registry, kind, &params, &tv, &cv)?;
        // back to qcirc operand order: controls, then targets
        let outs = cout.into_iter().chain(tout);
        for ((src_result, (wire, _)), q) in results.iter().zip(&taken).zip(outs) {
            rw.threads.live.insert(*wire, q);
            rw.threads.wires.insert(*src_result, *wire);
        }
        Ok(())
    }
}

/// Catches gate names outside the table so the error names the gate.
struct UnknownGate;

impl RewritePattern for UnknownGate {
    fn name(&self) -> &str {
        "qcirc.custom.unknown"
    }

    fn benefit(&self) -> u32 {
        0
    }

    fn matches(&self, func: &Function, op: OpId) -> bool {
        is_qcirc(func, op, "custom")
    }

    fn rewrite(&self, rw: &mut Rewriter<'_>, op: OpId) -> Result<(), ConversionErrorKind> {
        let name = rw.src.op(op).str_attr("gate_name").unwrap_or_default();
        Err(ConversionErrorKind::UnknownGateName(name.into()))
    }
}

fn finish(rw: &mut Rewriter<'_>) -> Result<(), ConversionErrorKind> {
    if let Some(root) = rw.threads.current.keys().next() {
        return Err(ConversionErrorKind::NonLinearizable(format!(
            "register {} is never deallocated",
            rw.src.display_name(*root)
        )));
    }
    Ok(())
}

pub fn qcirc_to_mqtopt_conversion() -> Conversion {
    Conversion {
        target: ConversionTarget::new()
            .illegal_dialect(qcirc::DIALECT)
            .legal_dialect(mqtopt::DIALECT),
        patterns: vec![
            Box::new(Alloc),
            Box::new(Extract),
            Box::new(Insert),
            Box::new(Dealloc),
            Box::new(Measure),
            Box::new(Gate),
            Box::new(UnknownGate),
        ],
        types: TypeConverter::new()
            .map(qcirc::reg_type(), mqtopt::register_type())
            .map(qcirc::bit_type(), mqtopt::qubit_type()),
        finish: Some(finish),
    }
}

/// Lowers qcirc to linearly typed mqtopt by threading register state.
pub fn qcirc_to_mqtopt(
    module: &Module,
    registry: &DialectRegistry,
) -> Result<Converted, ConversionError> {
    apply_conversion(module, &qcirc_to_mqtopt_conversion(), registry)
}
