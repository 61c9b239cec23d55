//! Dense statevector simulation of straight-line quantum functions.
//!
//! The simulator never looks at rewrite machinery. A function is first
//! flattened into a [`Trace`] of `(gate, targets, controls, params)` entries
//! by walking its operations directly, and only the trace is simulated.
//!
//! Qubit `k` is bit `k` of the basis-state index (little-endian): on two
//! qubits the amplitude at index `0b10` belongs to `|q1=1, q0=0⟩`. Wires are
//! numbered by register allocation order, so register `r` with offset `o`
//! owns wires `o..o+size`.

use std::collections::HashMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;

use crate::ir::{Attribute, Function, ValueId};

/// Largest supported qubit count.
pub const MAX_QUBITS: usize = 12;

const NORM_TOLERANCE: f64 = 1e-9;
const EQUIVALENCE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum SimError {
    TooManyQubits {
        requested: usize,
        max: usize,
    },
    NonUnitaryOp(String),
    UnknownGate(String),
    /// A rotation angle that does not fold to a constant.
    NonConstantParam(String),
    Malformed(String),
    NormDrift(f64),
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::TooManyQubits { requested, max } => {
                write!(
                    f,
                    "TooManyQubits: {requested} qubits requested, limit is {max}"
                )
            }
            SimError::NonUnitaryOp(k) => write!(f, "NonUnitaryOp: '{k}' cannot be simulated"),
            SimError::UnknownGate(g) => write!(f, "unknown gate '{g}'"),
            SimError::NonConstantParam(v) => write!(f, "parameter {v} is not a constant"),
            SimError::Malformed(m) => write!(f, "malformed function: {m}"),
            SimError::NormDrift(n) => write!(f, "state norm drifted to {n}"),
        }
    }
}

impl std::error::Error for SimError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Swap,
    Rx,
    Ry,
    Rz,
}

impl Gate {
    fn from_mqtopt(name: &str) -> Option<Gate> {
        Some(match name {
            "x" => Gate::X,
            "y" => Gate::Y,
            "z" => Gate::Z,
            "h" => Gate::H,
            "s" => Gate::S,
            "sdg" => Gate::Sdg,
            "t" => Gate::T,
            "tdg" => Gate::Tdg,
            "swap" => Gate::Swap,
            "rx" => Gate::Rx,
            "ry" => Gate::Ry,
            "rz" => Gate::Rz,
            _ => return None,
        })
    }

    /// qcirc names, with the number of leading qubits that act as controls.
    fn from_qcirc(name: &str) -> Option<(Gate, usize)> {
        Some(match name {
            "Hadamard" => (Gate::H, 0),
            "PauliX" => (Gate::X, 0),
            "PauliY" => (Gate::Y, 0),
            "PauliZ" => (Gate::Z, 0),
            "S" => (Gate::S, 0),
            "Sdg" => (Gate::Sdg, 0),
            "T" => (Gate::T, 0),
            "Tdg" => (Gate::Tdg, 0),
            "CNOT" => (Gate::X, 1),
            "CZ" => (Gate::Z, 1),
            "SWAP" => (Gate::Swap, 0),
            "RX" => (Gate::Rx, 0),
            "RY" => (Gate::Ry, 0),
            "RZ" => (Gate::Rz, 0),
            _ => return None,
        })
    }

    fn num_targets(self) -> usize {
        if self == Gate::Swap {
            2
        } else {
            1
        }
    }

    fn num_params(self) -> usize {
        matches!(self, Gate::Rx | Gate::Ry | Gate::Rz) as usize
    }

    /// The 2x2 matrix `[[a, b], [c, d]]` of a single-target gate.
    fn matrix(self, params: &[f64]) -> [[Complex64; 2]; 2] {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let o = c(0.0, 0.0);
        let l = c(1.0, 0.0);
        let phase = |theta: f64| Complex64::from_polar(1.0, theta);
        let quarter = std::f64::consts::FRAC_PI_4;
        match self {
            Gate::X => [[o, l], [l, o]],
            Gate::Y => [[o, c(0.0, -1.0)], [c(0.0, 1.0), o]],
            Gate::Z => [[l, o], [o, c(-1.0, 0.0)]],
            Gate::H => {
                let h = c(FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
            Gate::S => [[l, o], [o, c(0.0, 1.0)]],
            Gate::Sdg => [[l, o], [o, c(0.0, -1.0)]],
            Gate::T => [[l, o], [o, phase(quarter)]],
            Gate::Tdg => [[l, o], [o, phase(-quarter)]],
            Gate::Rx => {
                let (s, co) = (params[0] / 2.0).sin_cos();
                [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
            }
            Gate::Ry => {
                let (s, co) = (params[0] / 2.0).sin_cos();
                [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
            }
            Gate::Rz => {
                let half = params[0] / 2.0;
                [[phase(-half), o], [o, phase(half)]]
            }
            Gate::Swap => unreachable!("swap has no single-qubit matrix"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceEntry {
    pub gate: Gate,
    pub targets: Vec<usize>,
    pub controls: Vec<usize>,
    pub params: Vec<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trace {
    pub entries: Vec<TraceEntry>,
    /// Total wires allocated by the function.
    pub num_qubits: usize,
}

fn constant_value(func: &Function, v: ValueId) -> Result<f64, SimError> {
    let (op, _) = func
        .defining_op(v)
        .ok_or_else(|| SimError::NonConstantParam(func.display_name(v)))?;
    let o = func.op(op);
    let args = || -> Result<Vec<f64>, SimError> {
        o.operands()
            .iter()
            .map(|&a| constant_value(func, a))
            .collect()
    };
    if o.kind.dialect != "arith" {
        return Err(SimError::NonConstantParam(func.display_name(v)));
    }
    match o.kind.name.as_str() {
        "constant" => o
            .attr("value")
            .and_then(Attribute::as_float)
            .ok_or_else(|| SimError::Malformed("constant without value".into())),
        "negf" => Ok(-args()?[0]),
        "addf" => Ok(args()?.iter().sum()),
        "mulf" => Ok(args()?.iter().product()),
        _ => Err(SimError::NonConstantParam(func.display_name(v))),
    }
}

fn index_attr(func: &Function, op: crate::ir::OpId, key: &str) -> Result<usize, SimError> {
    func.op(op)
        .int_attr(key)
        .and_then(|i| usize::try_from(i).ok())
        .ok_or_else(|| SimError::Malformed(format!("'{}' lacks '{key}'", func.op(op).kind)))
}

/// Flattens an `mqtopt` or `qcirc` function (with `arith` angles) into a
/// gate trace.
pub fn trace(func: &Function) -> Result<Trace, SimError> {
    // register value -> wire offset; qubit value -> wire
    let mut regs: HashMap<ValueId, usize> = HashMap::new();
    let mut wires: HashMap<ValueId, usize> = HashMap::new();
    let mut out = Trace::default();
    let lookup = |map: &HashMap<ValueId, usize>, v: ValueId| {
        map.get(&v)
            .copied()
            .ok_or_else(|| SimError::Malformed(format!("{} has no wire", func.display_name(v))))
    };
    for &op in func.body() {
        let o = func.op(op);
        let kind = &o.kind;
        match (kind.dialect.as_str(), kind.name.as_str()) {
            ("arith", _) => {}
            ("mqtopt", "allocQubitRegister") | ("qcirc", "alloc") => {
                regs.insert(o.results()[0], out.num_qubits);
                out.num_qubits += index_attr(func, op, "size")?;
            }
            ("mqtopt", "extractQubit") => {
                let base = lookup(&regs, o.operands()[0])?;
                regs.insert(o.results()[0], base);
                wires.insert(o.results()[1], base + index_attr(func, op, "index")?);
            }
            ("qcirc", "extract") => {
                let base = lookup(&regs, o.operands()[0])?;
                wires.insert(o.results()[0], base + index_attr(func, op, "index")?);
            }
            ("mqtopt", "insertQubit") | ("qcirc", "insert") => {
                let base = lookup(&regs, o.operands()[0])?;
                let wire = lookup(&wires, o.operands()[1])?;
                if wire != base + index_attr(func, op, "index")? {
                    return Err(SimError::Malformed(format!(
                        "{} inserted at a different index than it was extracted from",
                        func.display_name(o.operands()[1])
                    )));
                }
                regs.insert(o.results()[0], base);
            }
            ("mqtopt", "deallocQubitRegister") | ("qcirc", "dealloc") => {}
            ("mqtopt", "measure") | ("qcirc", "measure") => {
                return Err(SimError::NonUnitaryOp(kind.to_string()));
            }
            ("qcirc", "custom") => {
                let name = o.str_attr("gate_name").unwrap_or_default();
                let (gate, n_ctrls) =
                    Gate::from_qcirc(name).ok_or_else(|| SimError::UnknownGate(name.into()))?;
                let params: Vec<ValueId> = o
                    .operands()
                    .iter()
                    .copied()
                    .filter(|v| func.value_type(*v).is_f64())
                    .collect();
                let bits: Vec<usize> = o
                    .operands()
                    .iter()
                    .filter(|v| !func.value_type(**v).is_f64())
                    .map(|&v| lookup(&wires, v))
                    .collect::<Result<_, _>>()?;
                if bits.len() != n_ctrls + gate.num_targets() || params.len() != gate.num_params() {
                    return Err(SimError::Malformed(format!("bad arity for '{name}'")));
                }
                for (&r, &w) in o.results().iter().zip(&bits) {
                    wires.insert(r, w);
                }
                out.entries.push(TraceEntry {
                    gate,
                    controls: bits[..n_ctrls].to_vec(),
                    targets: bits[n_ctrls..].to_vec(),
                    params: params
                        .iter()
                        .map(|&p| constant_value(func, p))
                        .collect::<Result<_, _>>()?,
                });
            }
            ("mqtopt", name) => {
                let gate =
                    Gate::from_mqtopt(name).ok_or_else(|| SimError::UnknownGate(name.into()))?;
                let n_params = o
                    .operands()
                    .iter()
                    .take_while(|v| func.value_type(**v).is_f64())
                    .count();
                let qubits: Vec<usize> = o.operands()[n_params..]
                    .iter()
                    .map(|&v| lookup(&wires, v))
                    .collect::<Result<_, _>>()?;
                let n_ctrls = o.int_attr("num_ctrls").unwrap_or(0) as usize;
                if qubits.len() != gate.num_targets() + n_ctrls || n_params != gate.num_params() {
                    return Err(SimError::Malformed(format!("bad arity for '{name}'")));
                }
                for (&r, &w) in o.results().iter().zip(&qubits) {
                    wires.insert(r, w);
                }
                let split = gate.num_targets();
                out.entries.push(TraceEntry {
                    gate,
                    targets: qubits[..split].to_vec(),
                    controls: qubits[split..].to_vec(),
                    params: o.operands()[..n_params]
                        .iter()
                        .map(|&p| constant_value(func, p))
                        .collect::<Result<_, _>>()?,
                });
            }
            _ => return Err(SimError::UnknownGate(kind.to_string())),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    pub n: usize,
    pub amplitudes: Vec<Complex64>,
}

impl Statevector {
    pub fn basis(n: usize, index: usize) -> Result<Statevector, SimError> {
        if n > MAX_QUBITS {
            return Err(SimError::TooManyQubits {
                requested: n,
                max: MAX_QUBITS,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Statevector { n, amplitudes })
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `|⟨self|other⟩|`.
    pub fn overlap(&self, other: &Statevector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm()
    }

    /// Relabels qubits: the amplitude of physical qubit `layout[l]` moves to
    /// logical qubit `l`. Qubits not named by `layout` keep their position
    /// after the named ones are placed.
    pub fn to_logical(&self, layout: &[usize]) -> Statevector {
        let mut physical_of: Vec<usize> = layout.to_vec();
        for p in 0..self.n {
            if !physical_of.contains(&p) {
                physical_of.push(p);
            }
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for (phys_index, &a) in self.amplitudes.iter().enumerate() {
            let mut logical_index = 0;
            for (l, &p) in physical_of.iter().enumerate() {
                if phys_index >> p & 1 == 1 {
                    logical_index |= 1 << l;
                }
            }
            amplitudes[logical_index] = a;
        }
        Statevector {
            n: self.n,
            amplitudes,
        }
    }

    pub fn apply(&mut self, entry: &TraceEntry) -> Result<(), SimError> {
        let ctrl_mask = entry.controls.iter().fold(0usize, |m, &c| m | 1 << c);
        let on = |i: usize| i & ctrl_mask == ctrl_mask;
        if entry.gate == Gate::Swap {
            let (a, b) = (1 << entry.targets[0], 1 << entry.targets[1]);
            for i in 0..self.amplitudes.len() {
                if i & a != 0 && i & b == 0 && on(i) {
                    self.amplitudes.swap(i, i ^ a ^ b);
                }
            }
        } else {
            let m = entry.gate.matrix(&entry.params);
            let t = 1 << entry.targets[0];
            for i in 0..self.amplitudes.len() {
                if i & t == 0 && on(i) {
                    let (a0, a1) = (self.amplitudes[i], self.amplitudes[i | t]);
                    self.amplitudes[i] = m[0][0] * a0 + m[0][1] * a1;
                    self.amplitudes[i | t] = m[1][0] * a0 + m[1][1] * a1;
                }
            }
        }
        let norm = self.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(SimError::NormDrift(norm));
        }
        Ok(())
    }
}

fn run_trace(trace: &Trace, n: usize, index: usize) -> Result<Statevector, SimError> {
    if trace.num_qubits > n {
        return Err(SimError::TooManyQubits {
            requested: trace.num_qubits,
            max: n,
        });
    }
    let mut state = Statevector::basis(n, index)?;
    for e in &trace.entries {
        state.apply(e)?;
    }
    Ok(state)
}

/// The state reached from `|0…0⟩` on `n` qubits.
pub fn simulate(func: &Function, n: usize) -> Result<Statevector, SimError> {
    if n > MAX_QUBITS {
        return Err(SimError::TooManyQubits {
            requested: n,
            max: MAX_QUBITS,
        });
    }
    run_trace(&trace(func)?, n, 0)
}

/// `|⟨f|g⟩|` from `|0…0⟩`, with `g`'s output first mapped back through its
/// final layout (`layout[logical] = physical`).
pub fn fidelity_on_zero(
    f: &Function,
    g: &Function,
    n: usize,
    layout: Option<&[usize]>,
) -> Result<f64, SimError> {
    let a = simulate(f, n)?;
    let mut b = simulate(g, n)?;
    if let Some(layout) = layout {
        b = b.to_logical(layout);
    }
    Ok(a.overlap(&b))
}

pub fn equivalent_on_zero(
    f: &Function,
    g: &Function,
    n: usize,
    layout: Option<&[usize]>,
) -> Result<bool, SimError> {
    Ok(fidelity_on_zero(f, g, n, layout)? >= 1.0 - EQUIVALENCE_TOLERANCE)
}

/// Columns of the unitary a function implements on `n` qubits.
pub fn unitary(func: &Function, n: usize) -> Result<Vec<Statevector>, SimError> {
    if n > 6 {
        return Err(SimError::TooManyQubits {
            requested: n,
            max: 6,
        });
    }
    let t = trace(func)?;
    (0..1 << n).map(|i| run_trace(&t, n, i)).collect()
}

/// Compares the full unitaries of two functions up to one global phase.
pub fn full_unitary_equal(f: &Function, g: &Function, n: usize) -> Result<bool, SimError> {
    let (u, v) = (unitary(f, n)?, unitary(g, n)?);
    let mut phase: Option<Complex64> = None;
    for (cu, cv) in u.iter().zip(&v) {
        for (a, b) in cu.amplitudes.iter().zip(&cv.amplitudes) {
            if phase.is_none() && a.norm() > 1e-6 {
                if b.norm() < 1e-6 {
                    return Ok(false);
                }
                phase = Some(b / a);
            }
            let p = phase.unwrap_or(Complex64::new(1.0, 0.0));
            if (a * p - b).norm() > EQUIVALENCE_TOLERANCE {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests;
