use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn ghz() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/corpus/ghz.qir-txt")
}

fn qopt(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qopt"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut input = child.stdin.take().unwrap();
    input.write_all(stdin.unwrap_or_default()).unwrap();
    drop(input);
    child.wait_with_output().unwrap()
}

#[test]
fn reads_a_file_and_standard_input() {
    let text = std::fs::read(ghz()).unwrap();
    let from_file = qopt(&[ghz().to_str().unwrap()], None);
    let from_stdin = qopt(&["-"], Some(&text));
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, text);
    assert_eq!(from_stdin.stdout, text);
}

#[test]
fn output_is_deterministic() {
    let args = [
        ghz().to_str().unwrap().to_string(),
        "--pass-pipeline=qcirc-to-mqtopt,route{cmap=0-1,1-2},synth{target=h;t;x},cancel,mqtopt-to-qcirc".into(),
    ];
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    assert_eq!(qopt(&args, None).stdout, qopt(&args, None).stdout);
}

#[test]
fn exit_codes() {
    let g = ghz();
    let g = g.to_str().unwrap();
    assert_eq!(qopt(&["missing.qir-txt"], None).status.code(), Some(1));
    assert_eq!(qopt(&["-"], Some(b"module {")).status.code(), Some(1));
    assert_eq!(qopt(&[g, "--bogus-flag"], None).status.code(), Some(1));
    assert_eq!(
        qopt(&[g, "--pass-pipeline=nope"], None).status.code(),
        Some(2)
    );
    assert_eq!(
        qopt(
            &[g, "--pass-pipeline=qcirc-to-mqtopt,synth{target=h}"],
            None
        )
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        qopt(&[g, "--load-plugin", "/nonexistent.so"], None)
            .status
            .code(),
        Some(3)
    );
    let missing = qopt(&["missing.qir-txt"], None);
    assert!(String::from_utf8_lossy(&missing.stderr).contains("missing.qir-txt"));
}

#[test]
fn check_runner_binary() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests");
    let out = Command::new(env!("CARGO_BIN_EXE_qopt-check"))
        .arg(dir.join("golden/ghz-round-trip.qir-txt"))
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS: "));
    let out = Command::new(env!("CARGO_BIN_EXE_qopt-check"))
        .arg(dir.join("check-failures/reordered.qir-txt"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("reordered.qir-txt:4:"));
}
