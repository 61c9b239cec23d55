//! Transformations over the `mqtopt` dialect: routing onto a coupling map,
//! synthesis into a native gate set, inverse-pair cancellation, and
//! removal of gates controlled by qubits known to be in `|0⟩`.

mod cancel;
mod cmap;
mod route;
mod synth;
mod zero_state;

use std::fmt;

use crate::dialects::{arith, mqtopt::GateKind};
use crate::ir::{Function, IrError, Module, OpId};
use crate::passes::{Pass, PassContext, PassError, PassOptions};

pub use cancel::cancel_pass;
pub use cmap::CouplingMap;
pub use route::{route_pass, Layout, Placement, FINAL_ATTR, INITIAL_ATTR};
pub use synth::{expand, rule, rule_keys, synth_pass, NativeGateSet, Step};
pub use zero_state::zero_state_pass;

#[derive(Clone, Debug, PartialEq)]
pub enum TransformError {
    TooManyQubits { logical: usize, physical: usize },
    DisconnectedTarget { from: usize, to: usize },
    UnsupportedArity { op: String, qubits: usize },
    UnsupportedGate { kind: GateKind, num_ctrls: usize },
    Unsupported(String),
    Ir(IrError),
}

impl fmt::Display for TransformError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformError::TooManyQubits { logical, physical } => write!(
                f,
                "TooManyQubits: {logical} logical qubits do not fit {physical} physical qubits"
            ),
            TransformError::DisconnectedTarget { from, to } => write!(
                f,
                "DisconnectedTarget: no coupling path between physical qubits {from} and {to}"
            ),
            TransformError::UnsupportedArity { op, qubits } => {
                write!(f, "UnsupportedArity: '{op}' acts on {qubits} qubits")
            }
            TransformError::UnsupportedGate { kind, num_ctrls } => {
                write!(
                    f,
                    "UnsupportedGate: no rule reaches the target set from '{kind}'"
                )?;
                if *num_ctrls > 0 {
                    write!(f, " with {num_ctrls} controls")?;
                }
                Ok(())
            }
            TransformError::Unsupported(m) => f.write_str(m),
            TransformError::Ir(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for TransformError {}

impl From<IrError> for TransformError {
    fn from(e: IrError) -> Self {
        TransformError::Ir(e)
    }
}

impl From<TransformError> for PassError {
    fn from(e: TransformError) -> Self {
        PassError::new(e.to_string())
    }
}

/// Erases the gate `op` after rewiring each qubit result to the matching
/// qubit operand, then drops angle computations nobody uses any more.
pub(crate) fn bypass_gate(func: &mut Function, op: OpId) -> Result<(), IrError> {
    let o = func.op(op);
    let n_params = o.operands().len() - o.results().len();
    let params = o.operands()[..n_params].to_vec();
    let pairs: Vec<_> = o
        .results()
        .iter()
        .copied()
        .zip(o.operands()[n_params..].iter().copied())
        .collect();
    for (result, operand) in pairs {
        func.replace_all_uses(result, operand)?;
    }
    func.erase_operation(op)?;
    drop_dead_arith(func, &params)
}

fn drop_dead_arith(func: &mut Function, values: &[crate::ir::ValueId]) -> Result<(), IrError> {
    for &v in values {
        if !func.uses(v).is_empty() {
            continue;
        }
        if let Some((op, _)) = func.defining_op(v) {
            let o = func.op(op);
            if o.kind.dialect == arith::DIALECT
                && o.results().iter().all(|r| func.uses(*r).is_empty())
            {
                let operands = o.operands().to_vec();
                func.erase_operation(op)?;
                drop_dead_arith(func, &operands)?;
            }
        }
    }
    Ok(())
}

fn each_function(
    module: &mut Module,
    mut f: impl FnMut(&mut Function) -> Result<usize, TransformError>,
) -> Result<usize, PassError> {
    let mut total = 0;
    for func in module.functions_mut() {
        total += f(func).map_err(|e| PassError::new(format!("@{}: {e}", func.name())))?;
    }
    Ok(total)
}

pub struct RoutePass;

impl Pass for RoutePass {
    fn name(&self) -> &str {
        "route"
    }

    fn description(&self) -> &str {
        "insert swaps so every two-qubit gate acts on coupled qubits"
    }

    fn run(
        &self,
        module: &mut Module,
        options: &PassOptions,
        cx: &PassContext<'_>,
    ) -> Result<usize, PassError> {
        options.expect_only(&["cmap", "placement"])?;
        let cmap: CouplingMap = options
            .get("cmap")
            .ok_or_else(|| PassError::new("missing required option 'cmap'"))?
            .parse()
            .map_err(PassError::new)?;
        let placement: Placement = options
            .get("placement")
            .unwrap_or("identity")
            .parse()
            .map_err(PassError::new)?;
        each_function(module, |f| route_pass(f, cx.dialects, &cmap, placement))
    }
}

pub struct SynthPass;

impl Pass for SynthPass {
    fn name(&self) -> &str {
        "synth"
    }

    fn description(&self) -> &str {
        "decompose gates into a native gate set"
    }

    fn run(
        &self,
        module: &mut Module,
        options: &PassOptions,
        cx: &PassContext<'_>,
    ) -> Result<usize, PassError> {
        options.expect_only(&["target"])?;
        let target: NativeGateSet = options
            .get("target")
            .ok_or_else(|| PassError::new("missing required option 'target'"))?
            .parse()
            .map_err(PassError::new)?;
        each_function(module, |f| synth_pass(f, cx.dialects, &target))
    }
}

pub struct CancelPass;

impl Pass for CancelPass {
    fn name(&self) -> &str {
        "cancel"
    }

    fn description(&self) -> &str {
        "remove adjacent inverse gate pairs"
    }

    fn run(
        &self,
        module: &mut Module,
        options: &PassOptions,
        _: &PassContext<'_>,
    ) -> Result<usize, PassError> {
        options.expect_only(&[])?;
        each_function(module, cancel_pass)
    }
}

pub struct ZeroStatePass;

impl Pass for ZeroStatePass {
    fn name(&self) -> &str {
        "zero-state"
    }

    fn description(&self) -> &str {
        "remove gates controlled by qubits still in |0>; assumes all-zero input"
    }

    fn run(
        &self,
        module: &mut Module,
        options: &PassOptions,
        _: &PassContext<'_>,
    ) -> Result<usize, PassError> {
        options.expect_only(&[])?;
        each_function(module, zero_state_pass)
    }
}
