//! `qopt`: read textual IR, run a pass pipeline, print the result.

use std::fs;
use std::path::PathBuf;

use clap::Parser;
use qopt_core::dialects::core_registry;
use qopt_core::passes::{parse_pipeline, run_pipeline, PassRegistry, PipelineError};
use qopt_core::plugin::{load_plugin, mqt, register_manifest, PluginError};
use qopt_core::text::{parse_module_bytes, print_module};

pub const EXIT_OK: i32 = 0;
/// Unreadable input, IR that does not parse or verify, bad usage.
pub const EXIT_INPUT: i32 = 1;
/// A malformed pipeline, an unknown pass, or a pass that failed.
pub const EXIT_PIPELINE: i32 = 2;
pub const EXIT_PLUGIN: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "qopt", version, about = "Run a pass pipeline over quantum IR")]
pub struct Args {
    /// Input file, or `-` for standard input.
    #[arg(default_value = "-")]
    pub input: String,

    /// Comma-separated passes, e.g. `qcirc-to-mqtopt,cancel,mqtopt-to-qcirc`.
    #[arg(long, default_value = "")]
    pub pass_pipeline: String,

    /// Write the result here instead of standard output.
    #[arg(short = 'o', value_name = "FILE")]
    pub output: Option<PathBuf>,

    /// Verify the module after every pass (the default).
    #[arg(long, overrides_with = "no_verify_each")]
    pub verify_each: bool,

    #[arg(long)]
    pub no_verify_each: bool,

    /// Load a plugin library; may be repeated.
    #[arg(long, value_name = "PATH")]
    pub load_plugin: Vec<PathBuf>,

    /// Do not register the built-in `mqt` plugin.
    #[arg(long)]
    pub no_static_plugins: bool,

    /// Print per-pass statistics to standard error.
    #[arg(long)]
    pub pass_statistics: bool,
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn fail(code: i32, message: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: message + "\n",
        }
    }
}

/// Parses `argv` (including the program name). Help, version, and usage
/// errors come back as the outcome to report.
pub fn parse_args<S: AsRef<str>>(argv: &[S]) -> Result<Args, Outcome> {
    Args::try_parse_from(argv.iter().map(AsRef::as_ref)).map_err(|e| {
        let text = e.render().to_string();
        if e.use_stderr() {
            Outcome::fail(EXIT_INPUT, text.trim_end().to_string())
        } else {
            Outcome {
                code: EXIT_OK,
                stdout: text,
                stderr: String::new(),
            }
        }
    })
}

/// Runs the driver on `argv` with the given standard input.
pub fn run<S: AsRef<str>>(argv: &[S], stdin: &[u8]) -> Outcome {
    match parse_args(argv) {
        Ok(args) => execute(&args, stdin),
        Err(out) => out,
    }
}

pub fn execute(args: &Args, stdin: &[u8]) -> Outcome {
    let mut dialects = core_registry();
    let mut passes = PassRegistry::new();
    if !args.no_static_plugins {
        if let Err(e) = register_manifest(&mqt::manifest(), &mut dialects, &mut passes) {
            return Outcome::fail(
                EXIT_PLUGIN,
                format!("qopt: error: {}", PluginError::Registration(e)),
            );
        }
    }
    for path in &args.load_plugin {
        let registered = load_plugin(path).and_then(|m| {
            register_manifest(&m, &mut dialects, &mut passes).map_err(PluginError::Registration)
        });
        if let Err(e) = registered {
            return Outcome::fail(EXIT_PLUGIN, format!("qopt: error: {e}"));
        }
    }

    let (name, bytes) = if args.input == "-" {
        ("<stdin>".to_string(), stdin.to_vec())
    } else {
        match fs::read(&args.input) {
            Ok(b) => (args.input.clone(), b),
            Err(e) => {
                return Outcome::fail(
                    EXIT_INPUT,
                    format!("qopt: error: cannot read '{}': {e}", args.input),
                );
            }
        }
    };
    let module = match parse_module_bytes(&bytes, &dialects) {
        Ok(m) => m,
        Err(e) => {
            return Outcome::fail(
                EXIT_INPUT,
                format!(
                    "{name}:{}:{}: error: {}",
                    e.location.line, e.location.column, e.message
                ),
            );
        }
    };

    let mut pipeline = match parse_pipeline(&args.pass_pipeline) {
        Ok(p) => p,
        Err(e) => {
            return Outcome::fail(
                EXIT_PIPELINE,
                format!("<pass-pipeline>:1:{}: error: {}", e.offset + 1, e.message),
            );
        }
    };
    pipeline.verify_each = !args.no_verify_each;
    let (module, stats) = match run_pipeline(module, &pipeline, &passes, &dialects) {
        Ok(r) => r,
        Err(e) => {
            let code = match e {
                PipelineError::InvalidInput(_) => EXIT_INPUT,
                _ => EXIT_PIPELINE,
            };
            return Outcome::fail(code, format!("{name}: error: {e}"));
        }
    };

    let text = print_module(&module);
    let stderr = if args.pass_statistics {
        stats.to_string()
    } else {
        String::new()
    };
    match &args.output {
        Some(path) => match fs::write(path, &text) {
            Ok(()) => Outcome {
                code: EXIT_OK,
                stdout: String::new(),
                stderr,
            },
            Err(e) => Outcome::fail(
                EXIT_INPUT,
                format!("qopt: error: cannot write '{}': {e}", path.display()),
            ),
        },
        None => Outcome {
            code: EXIT_OK,
            stdout: text,
            stderr,
        },
    }
}
