//! Pass manager: textual pipelines, a name-keyed pass registry, and
//! verified execution with per-pass statistics.
//!
//! ```text
//! pipeline := (pass ("," pass)*)?
//! pass     := name ("{" option (";" option)* "}")?
//! option   := key "=" value
//! ```
//!
//! A value is raw text up to the next `;` or `}`, so `cmap=0-1,1-2` keeps
//! its commas. A `;`-separated piece without `=` continues the previous
//! value, which lets list-valued options use `;` too: `target=h;t;x`.
//! Options are not interpreted here; each pass validates its own when it
//! starts.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::ir::{verify_module, DialectRegistry, Module, RegistryError};

/// Ordered key/value options of one pass invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PassOptions {
    entries: Vec<(String, String)>,
}

impl PassOptions {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: &str) -> Self {
        self.entries.push((key.into(), value.into()));
        self
    }

    /// The last value given for `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Fails on the first key not in `known`.
    pub fn expect_only(&self, known: &[&str]) -> Result<(), PassError> {
        match self
            .entries
            .iter()
            .find(|(k, _)| !known.contains(&k.as_str()))
        {
            Some((k, _)) => Err(PassError::new(format!("unknown option '{k}'"))),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PassSpec {
    pub name: String,
    pub options: PassOptions,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pipeline {
    pub passes: Vec<PassSpec>,
    pub verify_each: bool,
}

impl Default for Pipeline {
    fn default() -> Self {
        Pipeline {
            passes: Vec::new(),
            verify_each: true,
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.passes.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(&p.name)?;
            if !p.options.is_empty() {
                let opts: Vec<String> = p.options.iter().map(|(k, v)| format!("{k}={v}")).collect();
                write!(f, "{{{}}}", opts.join(";"))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineParseError {
    /// Byte offset into the pipeline text.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for PipelineParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pipeline offset {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for PipelineParseError {}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.'
}

pub fn parse_pipeline(text: &str) -> Result<Pipeline, PipelineParseError> {
    let err = |offset, message: &str| PipelineParseError {
        offset,
        message: message.into(),
    };
    let mut pipeline = Pipeline::default();
    if text.trim().is_empty() {
        return Ok(pipeline);
    }
    let bytes = text.as_bytes();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    loop {
        skip_ws(&mut pos);
        let start = pos;
        while pos < text.len() && text[pos..].starts_with(is_name_char) {
            pos += 1;
        }
        if pos == start {
            return Err(err(start, "expected pass name"));
        }
        let name = text[start..pos].to_string();
        skip_ws(&mut pos);
        let mut options = PassOptions::new();
        if pos < bytes.len() && bytes[pos] == b'{' {
            let open = pos;
            let close = text[open..]
                .find('}')
                .map(|i| open + i)
                .ok_or_else(|| err(open, "unterminated '{'"))?;
            let mut seg_start = open + 1;
            for segment in text[open + 1..close].split(';') {
                match segment.find('=') {
                    Some(eq) => {
                        let key = segment[..eq].trim();
                        if key.is_empty() || !key.chars().all(is_name_char) {
                            return Err(err(seg_start, "expected option key"));
                        }
                        options
                            .entries
                            .push((key.into(), segment[eq + 1..].trim().into()));
                    }
                    None => match options.entries.last_mut() {
                        Some((_, value)) => {
                            value.push(';');
                            value.push_str(segment.trim());
                        }
                        None => {
                            return Err(err(
                                seg_start + segment.len(),
                                "expected '=' after option key",
                            ))
                        }
                    },
                }
                seg_start += segment.len() + 1;
            }
            pos = close + 1;
        }
        pipeline.passes.push(PassSpec { name, options });
        skip_ws(&mut pos);
        if pos == bytes.len() {
            return Ok(pipeline);
        }
        if bytes[pos] != b',' {
            return Err(err(pos, "expected ',' between passes"));
        }
        pos += 1;
    }
}

/// A failure reported by a pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PassError {
    pub message: String,
}

impl PassError {
    pub fn new(message: impl Into<String>) -> Self {
        PassError {
            message: message.into(),
        }
    }
}

impl fmt::Display for PassError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for PassError {}

pub struct PassContext<'a> {
    pub dialects: &'a DialectRegistry,
}

pub trait Pass: Send + Sync {
    fn name(&self) -> &str;

    fn description(&self) -> &str {
        ""
    }

    /// Transforms `module` in place, returning how many rewrites it applied.
    fn run(
        &self,
        module: &mut Module,
        options: &PassOptions,
        cx: &PassContext<'_>,
    ) -> Result<usize, PassError>;
}

/// Passes by name, each remembering which provider registered it.
#[derive(Clone, Default)]
pub struct PassRegistry {
    passes: BTreeMap<String, (String, Arc<dyn Pass>)>,
}

impl PassRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registering the same name again from the same provider is a no-op.
    pub fn register(&mut self, provider: &str, pass: Arc<dyn Pass>) -> Result<(), RegistryError> {
        let name = pass.name().to_string();
        if let Some((existing, _)) = self.passes.get(&name) {
            if existing == provider {
                return Ok(());
            }
            return Err(RegistryError::DuplicatePassName {
                name,
                existing: existing.clone(),
            });
        }
        self.passes.insert(name, (provider.into(), pass));
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Arc<dyn Pass>> {
        self.passes.get(name).map(|(_, p)| p)
    }

    pub fn provider(&self, name: &str) -> Option<&str> {
        self.passes.get(name).map(|(p, _)| p.as_str())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.passes.keys().map(String::as_str)
    }
}

impl fmt::Debug for PassRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.passes.iter().map(|(k, (p, _))| (k, p)))
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PassStat {
    pub pass: String,
    pub ops_before: usize,
    pub ops_after: usize,
    pub wall_time: Duration,
    pub rewrites: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PassStatistics {
    pub passes: Vec<PassStat>,
}

impl fmt::Display for PassStatistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.passes {
            writeln!(
                f,
                "{}: ops {} -> {}, {} rewrites, {:.3} ms",
                s.pass,
                s.ops_before,
                s.ops_after,
                s.rewrites,
                s.wall_time.as_secs_f64() * 1e3
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PipelineError {
    UnknownPass(String),
    InvalidInput(String),
    PassFailure { pass: String, diagnostic: String },
    VerificationFailedAfterPass { pass: String, diagnostic: String },
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineError::UnknownPass(n) => write!(f, "unknown pass '{n}'"),
            PipelineError::InvalidInput(d) => write!(f, "input does not verify: {d}"),
            PipelineError::PassFailure { pass, diagnostic } => {
                write!(f, "pass '{pass}' failed: {diagnostic}")
            }
            PipelineError::VerificationFailedAfterPass { pass, diagnostic } => {
                write!(f, "verification failed after pass '{pass}': {diagnostic}")
            }
        }
    }
}

impl std::error::Error for PipelineError {}

/// Runs `pipeline` over `module`. All pass names are resolved before any
/// pass runs.
pub fn run_pipeline(
    mut module: Module,
    pipeline: &Pipeline,
    passes: &PassRegistry,
    dialects: &DialectRegistry,
) -> Result<(Module, PassStatistics), PipelineError> {
    let resolved: Vec<(&PassSpec, &Arc<dyn Pass>)> = pipeline
        .passes
        .iter()
        .map(|spec| {
            passes
                .get(&spec.name)
                .map(|p| (spec, p))
                .ok_or_else(|| PipelineError::UnknownPass(spec.name.clone()))
        })
        .collect::<Result<_, _>>()?;
    if let Some(d) = verify_module(&module, dialects).diagnostics.first() {
        return Err(PipelineError::InvalidInput(d.to_string()));
    }
    let cx = PassContext { dialects };
    let mut stats = PassStatistics::default();
    for (spec, pass) in resolved {
        let ops_before = module.op_count();
        let start = Instant::now();
        let rewrites =
            pass.run(&mut module, &spec.options, &cx)
                .map_err(|e| PipelineError::PassFailure {
                    pass: spec.name.clone(),
                    diagnostic: e.message,
                })?;
        let wall_time = start.elapsed();
        if pipeline.verify_each {
            if let Some(d) = verify_module(&module, dialects).diagnostics.first() {
                return Err(PipelineError::VerificationFailedAfterPass {
                    pass: spec.name.clone(),
                    diagnostic: d.to_string(),
                });
            }
        }
        stats.passes.push(PassStat {
            pass: spec.name.clone(),
            ops_before,
            ops_after: module.op_count(),
            wall_time,
            rewrites,
        });
    }
    Ok((module, stats))
}
