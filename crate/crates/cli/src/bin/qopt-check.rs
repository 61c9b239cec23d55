use std::path::Path;

use qopt_cli::check::{run_test_file, TestResult};

fn main() {
    let paths: Vec<String> = std::env::args().skip(1).collect();
    if paths.is_empty() {
        eprintln!("usage: qopt-check <test-file>...");
        std::process::exit(2);
    }
    let mut failures = 0;
    for p in &paths {
        match run_test_file(Path::new(p)) {
            Ok(TestResult::Pass) => println!("PASS: {p}"),
            Ok(TestResult::Fail { line, reason }) => {
                failures += 1;
                println!("FAIL: {p}:{line}: {reason}");
            }
            Err(e) => {
                failures += 1;
                println!("ERROR: {p}: {e}");
            }
        }
    }
    println!("{} of {} passed", paths.len() - failures, paths.len());
    std::process::exit(if failures == 0 { 0 } else { 1 });
}
