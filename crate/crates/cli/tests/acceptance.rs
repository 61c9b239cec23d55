//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Every semantic claim is checked against the statevector simulator,
//! which reads only the (gate, wires, angles) trace of a function.

use std::collections::HashSet;
use std::env::consts::{DLL_PREFIX, DLL_SUFFIX};
use std::fs;
use std::panic;
use std::path::{Path, PathBuf};
use std::process::Command;

use qopt_cli::check::{parse_directives, run_test_file, run_test_text, DirectiveKind, TestResult};
use qopt_core::conversion::{mqtopt_to_qcirc, qcirc_to_mqtopt};
use qopt_core::dialects::{full_registry, mqtopt::GateKind};
use qopt_core::ir::{verify_module, Function, Module};
use qopt_core::passes::{parse_pipeline, run_pipeline, PassRegistry};
use qopt_core::plugin::mqt;
use qopt_core::sim::{self, Gate};
use qopt_core::text::{parse_module, parse_module_bytes, parse_module_unverified, print_module};
use qopt_core::transforms::{cancel_pass, rule, rule_keys, synth_pass, Layout, NativeGateSet};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const TOLERANCE: f64 = 1e-9;
const ROUND_TRIP: &str =
    "qcirc-to-mqtopt,route{cmap=0-1,1-2},synth{target=h;t;x},cancel,mqtopt-to-qcirc";

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).to_path_buf()
}

fn corpus() -> Vec<(String, Vec<u8>)> {
    let dir = root().join("../core/tests/corpus");
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect();
    v.sort();
    v
}

fn corpus_file(name: &str) -> String {
    fs::read_to_string(root().join("../core/tests/corpus").join(name)).unwrap()
}

fn passes() -> PassRegistry {
    let mut p = PassRegistry::new();
    for pass in mqt::passes() {
        p.register("mqt", pass).unwrap();
    }
    p
}

fn pipeline(m: &Module, spec: &str) -> Module {
    run_pipeline(
        m.clone(),
        &parse_pipeline(spec).unwrap(),
        &passes(),
        &full_registry(),
    )
    .unwrap()
    .0
}

fn only(m: &Module) -> &Function {
    &m.functions()[0]
}

fn cnot_count(f: &Function) -> usize {
    sim::trace(f)
        .unwrap()
        .entries
        .iter()
        .filter(|e| e.gate == Gate::X && e.controls.len() == 1)
        .count()
}

fn plugin_library(name: &str) -> PathBuf {
    let file = format!("{DLL_PREFIX}{name}{DLL_SUFFIX}");
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap();
    [deps.join(&file), deps.parent().unwrap().join(&file)]
        .into_iter()
        .find(|p| p.exists())
        .unwrap_or_else(|| deps.join(&file))
}

const NAMES: [(&str, usize, bool); 14] = [
    ("Hadamard", 1, false),
    ("PauliX", 1, false),
    ("PauliY", 1, false),
    ("PauliZ", 1, false),
    ("S", 1, false),
    ("Sdg", 1, false),
    ("T", 1, false),
    ("Tdg", 1, false),
    ("CNOT", 2, false),
    ("CZ", 2, false),
    ("SWAP", 2, false),
    ("RX", 1, true),
    ("RY", 1, true),
    ("RZ", 1, true),
];

/// A gate-table name, its wires (controls first), and an angle for rotations.
type Spec = (&'static str, Vec<usize>, Option<f64>);

fn random_gate(rng: &mut StdRng, n: usize) -> Spec {
    let pool = if n > 1 { NAMES.len() } else { 8 };
    let (mut name, mut arity, mut rotation) = NAMES[rng.gen_range(0..pool)];
    if n == 1 && arity == 2 {
        (name, arity, rotation) = NAMES[0];
    }
    let mut wires: Vec<usize> = Vec::new();
    while wires.len() < arity {
        let w = rng.gen_range(0..n);
        if !wires.contains(&w) {
            wires.push(w);
        }
    }
    (name, wires, rotation.then(|| rng.gen_range(-3.2..3.2)))
}

fn inverse(g: &Spec) -> Spec {
    let name = match g.0 {
        "S" => "Sdg",
        "Sdg" => "S",
        "T" => "Tdg",
        "Tdg" => "T",
        other => other,
    };
    (name, g.1.clone(), g.2.map(|a| -a))
}

/// qcirc text for one register of `n` qubits running `gates`.
fn render_qcirc(n: usize, gates: &[Spec]) -> String {
    let mut next = 0;
    let mut fresh = || {
        next += 1;
        format!("%v{next}")
    };
    let mut body = Vec::new();
    let reg = fresh();
    body.push(format!(
        "{reg} = qcirc.alloc() {{size = {n}}} : () -> !qcirc.reg"
    ));
    let mut q: Vec<String> = Vec::new();
    for i in 0..n {
        let b = fresh();
        body.push(format!(
            "{b} = qcirc.extract({reg}) {{index = {i}}} : (!qcirc.reg) -> !qcirc.bit"
        ));
        q.push(b);
    }
    for (name, wires, angle) in gates {
        let mut operands = Vec::new();
        let mut types = Vec::new();
        if let Some(a) = angle {
            let c = fresh();
            body.push(format!(
                "{c} = arith.constant() {{value = {a:?}}} : () -> f64"
            ));
            operands.push(c);
            types.push("f64");
        }
        let outs: Vec<String> = wires.iter().map(|_| fresh()).collect();
        for &w in wires {
            operands.push(q[w].clone());
            types.push("!qcirc.bit");
        }
        let result = if wires.len() == 1 {
            "!qcirc.bit"
        } else {
            "(!qcirc.bit, !qcirc.bit)"
        };
        body.push(format!(
            "{} = qcirc.custom({}) {{gate_name = \"{name}\"}} : ({}) -> {result}",
            outs.join(", "),
            operands.join(", "),
            types.join(", ")
        ));
        for (&w, o) in wires.iter().zip(outs) {
            q[w] = o;
        }
    }
    let mut r = reg;
    for (i, b) in q.iter().enumerate() {
        let r2 = fresh();
        body.push(format!("{r2} = qcirc.insert({r}, {b}) {{index = {i}}} : (!qcirc.reg, !qcirc.bit) -> !qcirc.reg"));
        r = r2;
    }
    body.push(format!("qcirc.dealloc({r}) : (!qcirc.reg) -> ()"));
    format!(
        "module {{\n  func @random() {{\n    {}\n  }}\n}}\n",
        body.join("\n    ")
    )
}

fn random_qcirc(rng: &mut StdRng, n: usize, gates: usize) -> String {
    let specs: Vec<Spec> = (0..gates).map(|_| random_gate(rng, n)).collect();
    render_qcirc(n, &specs)
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn criterion_1() -> Outcome {
    let path = root().join("../core/tests/corpus/ghz.qir-txt");
    let out = Command::new(env!("CARGO_BIN_EXE_qopt"))
        .arg(&path)
        .arg(format!("--pass-pipeline={ROUND_TRIP}"))
        .output()
        .unwrap();
    if !out.status.success() {
        return outcome(false, format!("exit {:?}", out.status.code()));
    }
    let reg = full_registry();
    let Ok(result) = parse_module_bytes(&out.stdout, &reg) else {
        return outcome(false, "output does not parse and verify");
    };
    let original = parse_module(&corpus_file("ghz.qir-txt"), &reg).unwrap();
    let g = only(&result);
    let edges: HashSet<(usize, usize)> = [(0, 1), (1, 2)].into();
    let adjacent = sim::trace(g).unwrap().entries.iter().all(|e| {
        let wires: Vec<usize> = e.controls.iter().chain(&e.targets).copied().collect();
        match wires[..] {
            [a, b] => edges.contains(&(a.min(b), a.max(b))),
            _ => wires.len() == 1,
        }
    });
    let layout = Layout::of(g).unwrap();
    let fidelity = sim::fidelity_on_zero(only(&original), g, 3, Some(&layout.final_)).unwrap();
    outcome(
        adjacent && fidelity >= 1.0 - TOLERANCE,
        format!("exit 0, verifies, adjacent={adjacent}, fidelity={fidelity:.12}"),
    )
}

fn criterion_2() -> Outcome {
    let reg = full_registry();
    let original = parse_module(&corpus_file("narrative.qir-txt"), &reg).unwrap();
    let routed = pipeline(&original, "qcirc-to-mqtopt,route{cmap=0-1,1-2}");
    let swaps = sim::trace(only(&routed))
        .unwrap()
        .entries
        .iter()
        .filter(|e| e.gate == Gate::Swap)
        .count();
    let synthesized = pipeline(&routed, "synth{target=h;t;x}");
    let cancelled = pipeline(&synthesized, "cancel");
    let reduced = pipeline(&cancelled, "zero-state");
    let counts = [
        only(&routed),
        only(&synthesized),
        only(&cancelled),
        only(&reduced),
    ]
    .map(cnot_count);
    let inserted = counts[1] - counts[0];
    let layout = Layout::of(only(&reduced)).unwrap();
    let fidelity =
        sim::fidelity_on_zero(only(&original), only(&reduced), 3, Some(&layout.final_)).unwrap();
    let pass = swaps == 1
        && inserted == 3
        && counts == [2, 5, 3, 2]
        && layout.final_ == [1, 0, 2]
        && fidelity >= 1.0 - TOLERANCE;
    outcome(
        pass,
        format!(
            "swaps={swaps}, inserted ctrl-x={inserted}, ctrl-x route/synth/cancel/zero-state={counts:?}, final layout={:?}, fidelity={fidelity:.12}",
            layout.final_
        ),
    )
}

/// Qubit operands of a printed mqtopt line, with their positions in the
/// operand list.
fn qubit_operands(line: &str) -> Vec<(usize, String)> {
    let Some(open) = line.find('(') else {
        return vec![];
    };
    let close = open + line[open..].find(')').unwrap();
    let operands: Vec<&str> = line[open + 1..close]
        .split(", ")
        .filter(|s| !s.is_empty())
        .collect();
    let sig = &line[line.rfind(" : (").map(|i| i + 4).unwrap_or(line.len())..];
    let types: Vec<&str> = sig[..sig.find(')').unwrap_or(0)].split(", ").collect();
    operands
        .iter()
        .zip(&types)
        .enumerate()
        .filter(|(_, (_, t))| **t == "!mqtopt.Qubit")
        .map(|(i, (o, _))| (i, o.to_string()))
        .collect()
}

fn criterion_3() -> Outcome {
    let reg = full_registry();
    let mut rng = StdRng::seed_from_u64(3);
    let (mut flagged, mut false_positives, mut total) = (0, 0, 0);
    while total < 200 {
        let n = rng.gen_range(1..=5);
        let gates = rng.gen_range(2..=20);
        let qcirc = parse_module(&random_qcirc(&mut rng, n, gates), &reg).unwrap();
        let text = print_module(&qcirc_to_mqtopt(&qcirc, &reg).unwrap().module);
        let lines: Vec<&str> = text.lines().collect();
        if !verify_module(&parse_module_unverified(&text, &reg).unwrap(), &reg).is_ok() {
            false_positives += 1;
        }
        // a later op takes a qubit value some earlier op already consumed
        let mut consumed: Vec<String> = Vec::new();
        let mut candidates = Vec::new();
        for (i, line) in lines.iter().enumerate() {
            let ops = qubit_operands(line);
            if !ops.is_empty() && !consumed.is_empty() {
                candidates.push((i, consumed.clone()));
            }
            consumed.extend(ops.into_iter().map(|(_, v)| v));
        }
        let Some((b, earlier)) = candidates
            .get(rng.gen_range(0..candidates.len().max(1)))
            .cloned()
        else {
            continue;
        };
        total += 1;
        let v = earlier[rng.gen_range(0..earlier.len())].clone();
        let ops = qubit_operands(lines[b]);
        let (pos, _) = ops[rng.gen_range(0..ops.len())].clone();
        let open = lines[b].find('(').unwrap();
        let close = open + lines[b][open..].find(')').unwrap();
        let mut operands: Vec<String> = lines[b][open + 1..close]
            .split(", ")
            .map(str::to_string)
            .collect();
        operands[pos] = v.clone();
        let mutated_line = format!(
            "{}{}{}",
            &lines[b][..=open],
            operands.join(", "),
            &lines[b][close..]
        );
        let mut mutated: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
        mutated[b] = mutated_line;
        let m = parse_module_unverified(&mutated.join("\n"), &reg).unwrap();
        let report = verify_module(&m, &reg);
        let wanted = format!("value {v} used more than once");
        if report
            .diagnostics
            .iter()
            .any(|d| d.message.contains(&wanted))
        {
            flagged += 1;
        }
    }
    outcome(
        flagged == 200 && false_positives == 0,
        format!(
            "flagged {flagged}/200 mutants naming the value, {false_positives} false positives"
        ),
    )
}

fn criterion_4() -> Outcome {
    let reg = full_registry();
    let files = corpus();
    let fixpoints = files
        .iter()
        .filter(|(_, bytes)| {
            parse_module_bytes(bytes, &reg).is_ok_and(|m| {
                let once = print_module(&m);
                print_module(&parse_module(&once, &reg).unwrap()) == once
            })
        })
        .count();

    let mut rng = StdRng::seed_from_u64(4);
    let (mut errors, mut accepted, mut crashes) = (0, 0, 0);
    let hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    for i in 0..10_000 {
        let input: Vec<u8> = if i % 2 == 0 {
            (0..rng.gen_range(0..256)).map(|_| rng.gen()).collect()
        } else {
            let mut bytes = files[rng.gen_range(0..files.len())].1.clone();
            for _ in 0..rng.gen_range(1..=8) {
                let at = rng.gen_range(0..=bytes.len());
                match rng.gen_range(0..3) {
                    0 if at < bytes.len() => bytes[at] = rng.gen(),
                    1 if at < bytes.len() => {
                        bytes.remove(at);
                    }
                    _ => bytes.insert(at, rng.gen()),
                }
            }
            bytes
        };
        match panic::catch_unwind(|| parse_module_bytes(&input, &reg).map(|_| ())) {
            Ok(Ok(())) => accepted += 1,
            Ok(Err(_)) => errors += 1,
            Err(_) => crashes += 1,
        }
    }
    panic::set_hook(hook);
    outcome(
        files.len() >= 25 && fixpoints == files.len() && crashes == 0,
        format!(
            "{fixpoints}/{} corpus files are print fixpoints; fuzz: {errors} ParseError, {accepted} accepted, {crashes} crashes",
            files.len()
        ),
    )
}

fn criterion_5() -> Outcome {
    let reg = full_registry();
    let mut rng = StdRng::seed_from_u64(5);
    let (mut isomorphic, mut equivalent, mut worst) = (0, 0, 1.0f64);
    for _ in 0..100 {
        let n = rng.gen_range(1..=5);
        let gates = rng.gen_range(0..=30);
        let m = parse_module(&random_qcirc(&mut rng, n, gates), &reg).unwrap();
        let there = qcirc_to_mqtopt(&m, &reg).unwrap().module;
        let back = mqtopt_to_qcirc(&there, &reg).unwrap().module;
        if only(&back).is_isomorphic(only(&m)) {
            isomorphic += 1;
        }
        let f = sim::fidelity_on_zero(only(&m), only(&back), n, None).unwrap();
        let g = sim::fidelity_on_zero(only(&m), only(&there), n, None).unwrap();
        worst = worst.min(f).min(g);
        if f >= 1.0 - TOLERANCE && g >= 1.0 - TOLERANCE {
            equivalent += 1;
        }
    }
    outcome(
        isomorphic == 100 && equivalent == 100,
        format!(
            "{isomorphic}/100 isomorphic, {equivalent}/100 equivalent, worst fidelity {worst:.12}"
        ),
    )
}

fn minimal_instance(kind: GateKind, ctrls: usize) -> (usize, Function) {
    let n = kind.num_targets() + ctrls;
    let wires: Vec<usize> = (0..n).collect();
    let text = {
        let mut s = String::from("module {\n  func @g() {\n");
        s.push_str(&format!(
            "    %r0 = mqtopt.allocQubitRegister() {{size = {n}}} : () -> !mqtopt.QubitRegister\n"
        ));
        for i in 0..n {
            s.push_str(&format!(
                "    %r{}, %q{i} = mqtopt.extractQubit(%r{i}) {{index = {i}}} : (!mqtopt.QubitRegister) -> (!mqtopt.QubitRegister, !mqtopt.Qubit)\n",
                i + 1
            ));
        }
        let operands: Vec<String> = wires.iter().map(|i| format!("%q{i}")).collect();
        let outs: Vec<String> = wires.iter().map(|i| format!("%o{i}")).collect();
        let tys = vec!["!mqtopt.Qubit"; n].join(", ");
        let attrs = if ctrls > 0 {
            format!(" {{num_ctrls = {ctrls}}}")
        } else {
            String::new()
        };
        let result = if n == 1 {
            tys.clone()
        } else {
            format!("({tys})")
        };
        s.push_str(&format!(
            "    {} = mqtopt.{}({}){attrs} : ({tys}) -> {result}\n",
            outs.join(", "),
            kind.op_name(),
            operands.join(", ")
        ));
        let mut r = format!("%r{n}");
        for i in 0..n {
            s.push_str(&format!(
                "    %s{i} = mqtopt.insertQubit({r}, %o{i}) {{index = {i}}} : (!mqtopt.QubitRegister, !mqtopt.Qubit) -> !mqtopt.QubitRegister\n"
            ));
            r = format!("%s{i}");
        }
        s.push_str(&format!(
            "    mqtopt.deallocQubitRegister({r}) : (!mqtopt.QubitRegister) -> ()\n  }}\n}}\n"
        ));
        s
    };
    let m = parse_module(&text, &full_registry()).unwrap();
    (n, only(&m).clone())
}

fn criterion_6() -> Outcome {
    let reg = full_registry();
    let target: NativeGateSet = "h;t;x".parse().unwrap();
    let keys = rule_keys();
    let mut failures = Vec::new();
    for &(kind, ctrls) in &keys {
        let (n, f) = minimal_instance(kind, ctrls);
        let mut g = f.clone();
        let ok = n <= 2
            && rule(kind, ctrls).is_some()
            && synth_pass(&mut g, &reg, &target).is_ok()
            && sim::full_unitary_equal(&f, &g, n).unwrap();
        if !ok {
            failures.push(format!("{kind}({ctrls})"));
        }
    }
    let shape = |kind, ctrls| {
        let (_, mut g) = minimal_instance(kind, ctrls);
        synth_pass(&mut g, &reg, &target).unwrap();
        sim::trace(&g)
            .unwrap()
            .entries
            .into_iter()
            .map(|e| (e.gate, e.controls.len()))
            .collect::<Vec<_>>()
    };
    let swap_ok = shape(GateKind::Swap, 0) == [(Gate::X, 1); 3];
    let s_ok = shape(GateKind::S, 0) == [(Gate::T, 0); 2];
    outcome(
        failures.is_empty() && swap_ok && s_ok,
        format!(
            "{}/{} rules unitary-equal; swap -> 3 ctrl-x: {swap_ok}; s -> t,t: {s_ok}{}",
            keys.len() - failures.len(),
            keys.len(),
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failing {failures:?}")
            }
        ),
    )
}

fn gate_count(f: &Function) -> usize {
    sim::trace(f).map(|t| t.entries.len()).unwrap_or_else(|_| {
        f.body()
            .iter()
            .filter(|&&op| qopt_core::dialects::mqtopt::GateOp::from_op(f, op).is_some())
            .count()
    })
}

fn criterion_7() -> Outcome {
    let reg = full_registry();
    let (mut idempotent, mut monotone, mut files) = (0, 0, 0);
    for (_, bytes) in corpus() {
        let m = parse_module_bytes(&bytes, &reg).unwrap();
        let m = pipeline(&m, "qcirc-to-mqtopt");
        files += 1;
        let once = pipeline(&m, "cancel");
        let twice = pipeline(&once, "cancel");
        if print_module(&once) == print_module(&twice) {
            idempotent += 1;
        }
        if m.functions()
            .iter()
            .zip(once.functions())
            .all(|(a, b)| gate_count(b) <= gate_count(a))
        {
            monotone += 1;
        }
    }
    let mut rng = StdRng::seed_from_u64(7);
    let (mut preserved, mut removed_total) = (0, 0);
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        // follow some gates by their inverse so pairs actually occur
        let mut specs = Vec::new();
        for _ in 0..rng.gen_range(0..=12) {
            let g = random_gate(&mut rng, n);
            let pair = rng.gen_bool(0.4).then(|| inverse(&g));
            specs.push(g);
            specs.extend(pair);
        }
        let m = parse_module(&render_qcirc(n, &specs), &reg).unwrap();
        let m = pipeline(&m, "qcirc-to-mqtopt");
        let mut g = only(&m).clone();
        removed_total += cancel_pass(&mut g).unwrap();
        if sim::full_unitary_equal(only(&m), &g, n).unwrap() {
            preserved += 1;
        }
    }
    outcome(
        idempotent == files && monotone == files && preserved == 100,
        format!(
            "idempotent on {idempotent}/{files} corpus files, monotone on {monotone}/{files}; unitary preserved on {preserved}/100 random circuits ({removed_total} gates removed)"
        ),
    )
}

fn criterion_8() -> Outcome {
    let qopt = env!("CARGO_BIN_EXE_qopt");
    let input = root().join("../core/tests/corpus/narrative.qir-txt");
    let spec = format!("--pass-pipeline={ROUND_TRIP}");
    let statically = Command::new(qopt).arg(&input).arg(&spec).output().unwrap();
    let dynamically = Command::new(qopt)
        .arg(&input)
        .arg(&spec)
        .arg("--no-static-plugins")
        .arg("--load-plugin")
        .arg(plugin_library("qopt_mqt_plugin"))
        .output()
        .unwrap();
    let identical = statically.status.success()
        && dynamically.status.success()
        && !statically.stdout.is_empty()
        && statically.stdout == dynamically.stdout;
    let load = |path: PathBuf| {
        let out = Command::new(qopt)
            .arg(&input)
            .arg("--load-plugin")
            .arg(path)
            .output()
            .unwrap();
        (
            out.status.code(),
            String::from_utf8_lossy(&out.stderr).into_owned(),
        )
    };
    let (v2_code, v2_err) = load(plugin_library("qopt_fixture_v2_plugin"));
    let (missing_code, missing_err) = load(PathBuf::from("/nonexistent/libqopt_plugin.so"));
    let mismatch = v2_code == Some(3) && v2_err.contains("PluginError::VersionMismatch");
    let not_found = missing_code == Some(3) && missing_err.contains("PluginError::NotFound");
    outcome(
        identical && mismatch && not_found,
        format!(
            "static/dynamic byte-identical: {identical}; major-2 plugin: exit {v2_code:?} VersionMismatch={mismatch}; missing path: exit {missing_code:?} NotFound={not_found}"
        ),
    )
}

fn criterion_9() -> Outcome {
    let golden = root().join("tests/golden/ghz-round-trip.qir-txt");
    let passes = run_test_file(&golden) == Ok(TestResult::Pass);
    let text = fs::read_to_string(&golden).unwrap();
    let checks: Vec<usize> = parse_directives(&text)
        .into_iter()
        .filter(|d| d.kind != DirectiveKind::Run)
        .map(|d| d.line)
        .collect();
    let mut named = 0;
    for &line in &checks {
        let corrupted: Vec<String> = text
            .lines()
            .enumerate()
            .map(|(i, l)| {
                if i + 1 == line {
                    format!("{l} corrupted")
                } else {
                    l.to_string()
                }
            })
            .collect();
        let result = run_test_text(&corrupted.join("\n"), &golden.to_string_lossy());
        if matches!(result, Ok(TestResult::Fail { line: l, .. }) if l == line) {
            named += 1;
        }
    }
    outcome(
        passes && named == checks.len() && !checks.is_empty(),
        format!(
            "golden passes: {passes}; {named}/{} corrupted CHECK lines fail at their own line",
            checks.len()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("GHZ round trip", criterion_1),
        ("compilation narrative", criterion_2),
        ("linearity enforcement", criterion_3),
        ("text round trip and fuzzing", criterion_4),
        ("conversion semantics", criterion_5),
        ("synthesis soundness", criterion_6),
        ("cancel properties", criterion_7),
        ("plugin parity", criterion_8),
        ("check-harness self-test", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = panic::catch_unwind(run).unwrap_or_else(|_| outcome(false, "panicked"));
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {} [{}] {name}: {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
