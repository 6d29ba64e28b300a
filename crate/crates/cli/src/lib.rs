//! The `kron` command-line tool: reads JSON documents, runs reductions,
//! decisions and descents from `kron-core`, and writes JSON results.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 input error, 3 internal
//! invariant violation, 4 certificate verification failure. A batch (a
//! top-level JSON array) exits with the largest code of its members.

mod docs;
mod gen;
mod locate;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

pub use gen::{parse_field_spec, GenKind, GenSpec};
pub use locate::locate;

pub const EXIT_OK: u8 = 0;
pub const EXIT_NO: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_VIOLATION: u8 = 3;
pub const EXIT_VERIFY: u8 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expect {
    Yes,
    No,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    ReducePencil,
    DecideSim,
    DecideEquiv,
    Descend,
    DescendEquiv,
    Verify,
    GenRandom(GenSpec),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::ReducePencil => "reduce-pencil",
            Command::DecideSim => "decide-sim",
            Command::DecideEquiv => "decide-equiv",
            Command::Descend => "descend",
            Command::DescendEquiv => "descend-equiv",
            Command::Verify => "verify",
            Command::GenRandom(_) => "gen-random",
        }
    }
}

/// One invocation of the tool.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub command: Command,
    /// Standard input when absent.
    pub input: Option<PathBuf>,
    /// Standard output when absent.
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub trace: bool,
    /// With an expectation, a yes/no verdict maps to 0 when it matches and
    /// 1 when it does not; error codes pass through unchanged.
    pub expect: Option<Expect>,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        JobSpec { command, input: None, output: None, seed: 0, trace: false, expect: None }
    }
}

/// What a job produced, before any I/O.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub code: u8,
    pub output: Option<String>,
    pub diagnostics: Vec<String>,
}

/// Runs `job` on the given input text.
pub fn execute(job: &JobSpec, input: Option<&str>, source: &str) -> Report {
    let mut report = match &job.command {
        Command::GenRandom(spec) => match gen::generate(spec, job.seed) {
            Ok(v) => Report { code: EXIT_OK, output: Some(render(&v)), diagnostics: vec![] },
            Err(msg) => Report { code: EXIT_INPUT, output: None, diagnostics: vec![format!("error: {msg}")] },
        },
        cmd => match input {
            None => Report { code: EXIT_INPUT, output: None, diagnostics: vec!["error: no input".into()] },
            Some(text) => docs::process(cmd, job, text, source),
        },
    };
    if let Some(expect) = job.expect {
        if report.code <= EXIT_NO {
            let yes = report.code == EXIT_OK;
            report.code = if yes == (expect == Expect::Yes) { EXIT_OK } else { EXIT_NO };
        }
    }
    report
}

/// Pretty JSON with short flat values (matrix rows, small matrices, prime
/// field descriptors) kept on one line.
pub(crate) fn render(v: &serde_json::Value) -> String {
    let mut s = String::new();
    write_value(&mut s, v, 0);
    s.push('\n');
    s
}

fn write_value(out: &mut String, v: &serde_json::Value, depth: usize) {
    use serde_json::Value;
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Array(items) if !items.is_empty() => {
            if let Some(flat) = inline(v).filter(|f| f.len() <= 80) {
                out.push_str(&flat);
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            if let Some(flat) = inline(v).filter(|f| f.len() <= 80) {
                out.push_str(&flat);
                return;
            }
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&serde_json::to_string(k).expect("strings serialize"));
                out.push_str(": ");
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        other => out.push_str(&serde_json::to_string(other).expect("JSON values always serialize")),
    }
}

/// One-line form of arrays and of objects with no nested objects.
fn inline(v: &serde_json::Value) -> Option<String> {
    use serde_json::Value;
    match v {
        Value::Object(map) => {
            let parts = map
                .iter()
                .map(|(k, x)| match x {
                    Value::Object(_) => None,
                    _ => Some(format!("{}: {}", serde_json::to_string(k).ok()?, inline(x)?)),
                })
                .collect::<Option<Vec<_>>>()?;
            Some(format!("{{{}}}", parts.join(", ")))
        }
        Value::Array(items) => {
            let parts = items.iter().map(inline).collect::<Option<Vec<_>>>()?;
            Some(format!("[{}]", parts.join(", ")))
        }
        other => serde_json::to_string(other).ok(),
    }
}

/// Runs `job` with real files and standard streams, returning the exit code.
pub fn run(job: &JobSpec) -> u8 {
    let (input, source) = if matches!(job.command, Command::GenRandom(_)) {
        (None, String::new())
    } else {
        let read = match &job.input {
            Some(path) => fs::read_to_string(path).map(|t| (t, path.display().to_string())),
            None => {
                let mut t = String::new();
                io::stdin().read_to_string(&mut t).map(|_| (t, "<stdin>".to_string()))
            }
        };
        match read {
            Ok((t, s)) => (Some(t), s),
            Err(e) => {
                eprintln!("error: cannot read input: {e}");
                return EXIT_INPUT;
            }
        }
    };
    let report = execute(job, input.as_deref(), &source);
    for d in &report.diagnostics {
        eprintln!("{d}");
    }
    if let Some(out) = &report.output {
        let written = match &job.output {
            Some(path) => fs::write(path, out),
            None => io::stdout().write_all(out.as_bytes()),
        };
        if let Err(e) = written {
            eprintln!("error: cannot write output: {e}");
            return EXIT_INPUT;
        }
    }
    report.code
}
