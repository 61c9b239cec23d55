use std::fmt;
use std::str::FromStr;

use super::TransformError;
use crate::dialects::mqtopt::{self, GateKind, GateOp};
use crate::ir::{DialectRegistry, Function, ValueId};

const MAX_DEPTH: usize = 8;

/// Gate kinds a device runs directly. A bare kind admits zero or one
/// control; `kind(n)` admits exactly `n` controls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NativeGateSet {
    entries: Vec<(GateKind, Option<usize>)>,
}

impl NativeGateSet {
    pub fn new(entries: Vec<(GateKind, Option<usize>)>) -> Result<Self, String> {
        if entries.is_empty() {
            return Err("native gate set is empty".into());
        }
        Ok(NativeGateSet { entries })
    }

    pub fn contains(&self, kind: GateKind, num_ctrls: usize) -> bool {
        self.entries.iter().any(|&(k, c)| {
            k == kind
                && match c {
                    Some(n) => n == num_ctrls,
                    None => num_ctrls <= 1,
                }
        })
    }
}

/// `h;t;x` or `h,t,x(1)`.
impl FromStr for NativeGateSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut entries = Vec::new();
        for item in s.split([';', ',']).map(str::trim).filter(|i| !i.is_empty()) {
            let (name, ctrls) = match item.split_once('(') {
                Some((name, rest)) => {
                    let n = rest
                        .strip_suffix(')')
                        .and_then(|n| n.trim().parse::<usize>().ok())
                        .ok_or_else(|| format!("invalid control count in '{item}'"))?;
                    (name.trim(), Some(n))
                }
                None => (item, None),
            };
            let kind: GateKind = name
                .parse()
                .map_err(|_| format!("unknown gate kind '{name}'"))?;
            entries.push((kind, ctrls));
        }
        NativeGateSet::new(entries)
    }
}

impl fmt::Display for NativeGateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(k, c)| match c {
                Some(n) => format!("{k}({n})"),
                None => k.to_string(),
            })
            .collect();
        f.write_str(&parts.join(";"))
    }
}

/// One gate of a decomposition, over positions in the decomposed gate's
/// qubit list (targets first, then controls).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub ctrls: Vec<usize>,
}

fn on(kind: GateKind, target: usize) -> Step {
    Step {
        kind,
        targets: vec![target],
        ctrls: vec![],
    }
}

fn cx(target: usize, ctrl: usize) -> Step {
    Step {
        kind: GateKind::X,
        targets: vec![target],
        ctrls: vec![ctrl],
    }
}

/// The decomposition table, up to global phase.
pub fn rule(kind: GateKind, num_ctrls: usize) -> Option<Vec<Step>> {
    use GateKind::*;
    Some(match (kind, num_ctrls) {
        (S, 0) => vec![on(T, 0); 2],
        (Sdg, 0) => vec![on(T, 0); 6],
        (Tdg, 0) => vec![on(T, 0); 7],
        (Z, 0) => vec![on(S, 0); 2],
        (X, 0) => vec![on(H, 0), on(Z, 0), on(H, 0)],
        (Y, 0) => vec![on(S, 0), on(X, 0), on(Sdg, 0)],
        (Z, 1) => vec![on(H, 0), cx(0, 1), on(H, 0)],
        (Swap, 0) => vec![cx(0, 1), cx(1, 0), cx(0, 1)],
        _ => return None,
    })
}

/// Every (kind, control count) the table can rewrite.
pub fn rule_keys() -> Vec<(GateKind, usize)> {
    GateKind::ALL
        .iter()
        .flat_map(|&k| (0..=1).map(move |c| (k, c)))
        .filter(|&(k, c)| rule(k, c).is_some())
        .collect()
}

/// Fully expands `step` into native steps.
pub fn expand(
    step: &Step,
    target: &NativeGateSet,
    depth: usize,
) -> Result<Vec<Step>, TransformError> {
    if target.contains(step.kind, step.ctrls.len()) {
        return Ok(vec![step.clone()]);
    }
    let unsupported = || TransformError::UnsupportedGate {
        kind: step.kind,
        num_ctrls: step.ctrls.len(),
    };
    if depth >= MAX_DEPTH {
        return Err(unsupported());
    }
    let steps = rule(step.kind, step.ctrls.len()).ok_or_else(unsupported)?;
    let qubits: Vec<usize> = step.targets.iter().chain(&step.ctrls).copied().collect();
    let mut out = Vec::new();
    for s in steps {
        let mapped = Step {
            kind: s.kind,
            targets: s.targets.iter().map(|&i| qubits[i]).collect(),
            ctrls: s.ctrls.iter().map(|&i| qubits[i]).collect(),
        };
        out.extend(expand(&mapped, target, depth + 1)?);
    }
    Ok(out)
}

/// Rewrites every gate outside `target` using the rule table. Returns the
/// number of gates decomposed.
pub fn synth_pass(
    func: &mut Function,
    reg: &DialectRegistry,
    target: &NativeGateSet,
) -> Result<usize, TransformError> {
    let mut rewrites = 0;
    for op in func.body().to_vec() {
        let Some(g) = GateOp::from_op(func, op) else {
            continue;
        };
        if target.contains(g.kind, g.ctrls.len()) {
            continue;
        }
        let n_targets = g.targets.len();
        let whole = Step {
            kind: g.kind,
            targets: (0..n_targets).collect(),
            ctrls: (n_targets..n_targets + g.ctrls.len()).collect(),
        };
        let steps = expand(&whole, target, 0)?;
        let mut cur: Vec<ValueId> = g.qubits().collect();
        let mut pos = func.position(op).expect("attached");
        for s in steps {
            let tv: Vec<ValueId> = s.targets.iter().map(|&i| cur[i]).collect();
            let cv: Vec<ValueId> = s.ctrls.iter().map(|&i| cur[i]).collect();
            let new = mqtopt::gate_op(func, reg, s.kind, &[], &tv, &cv)?;
            func.insert_at(pos, new)?;
            pos += 1;
            let results = func.op(new).results().to_vec();
            for (&i, r) in s.targets.iter().chain(&s.ctrls).zip(results) {
                cur[i] = r;
            }
        }
        let old: Vec<ValueId> = g.results().collect();
        for (o, n) in old.into_iter().zip(cur) {
            func.replace_all_uses(o, n)?;
        }
        func.erase_operation(op)?;
        rewrites += 1;
    }
    Ok(rewrites)
}
