use std::io::{self, Read, Write};

use qopt_cli::driver::{self, Outcome};

fn report(out: Outcome) -> ! {
    io::stdout().write_all(out.stdout.as_bytes()).ok();
    io::stderr().write_all(out.stderr.as_bytes()).ok();
    std::process::exit(out.code);
}

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let args = driver::parse_args(&argv).unwrap_or_else(|out| report(out));
    let mut stdin = Vec::new();
    if args.input == "-" {
        if let Err(e) = io::stdin().read_to_end(&mut stdin) {
            eprintln!("qopt: error: cannot read standard input: {e}");
            std::process::exit(driver::EXIT_INPUT);
        }
    }
    report(driver::execute(&args, &stdin));
}
