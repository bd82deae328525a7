//! Command-line front end. [`run`] is pure: it returns the exit code and both output streams.

mod commands;
mod report;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

pub use report::{InputDigest, RunReport, Table, Violation};

/// Exit code for malformed or invalid input.
pub const EXIT_INVALID: i32 = 1;
/// Exit code for a violated property or failed exactness check.
pub const EXIT_PROPERTY: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "kdescent",
    version,
    about = "Cubical descent, weight spectral sequences and descent K-theory surrogates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Add wall-clock time to the report (makes output non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

/// Degrees `a..b`, both ends included.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeRange(pub i64, pub i64);

fn parse_range(s: &str) -> Result<DegreeRange, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a..b, found {s:?}"))?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad lower end {a:?}"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad upper end {b:?}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(DegreeRange(a, b))
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate documents (file paths or built-in names).
    Validate {
        #[arg(required = true)]
        docs: Vec<String>,
    },
    /// Simple (total) complex of a diagram and its homology.
    Simple {
        doc: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
        range: Option<DegreeRange>,
    },
    /// Pages of the weight spectral sequence.
    Ss {
        doc: String,
        #[arg(long)]
        pages: Option<i64>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
        range: Option<DegreeRange>,
    },
    /// KD groups with their weight graded pieces.
    Kd {
        doc: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
        range: Option<DegreeRange>,
    },
    /// Compact-support K-theory of a compactification minus its boundary.
    Kdc { doc: String },
    /// Verify a blow-up model: commutativity, acyclic cube and squares, short exactness.
    Blowup { doc: String },
    /// Compare KD groups and weights of two hyperresolutions.
    Compare {
        first: String,
        second: Option<String>,
        /// Compare against the identity-face inflation of the first document.
        #[arg(long)]
        inflate: bool,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
        range: Option<DegreeRange>,
    },
    /// Randomized descent-axiom suite.
    CheckAxioms {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        max_cube: usize,
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
    /// Both verdicts of the (F2) criterion, on one square or the built-in corpus.
    F2 { doc: Option<String> },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Simple { .. } => "simple",
            Command::Ss { .. } => "ss",
            Command::Kd { .. } => "kd",
            Command::Kdc { .. } => "kdc",
            Command::Blowup { .. } => "blowup",
            Command::Compare { .. } => "compare",
            Command::CheckAxioms { .. } => "check-axioms",
            Command::F2 { .. } => "f2",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let (mut report, mut text) = match commands::dispatch(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            return Outcome {
                code: EXIT_INVALID,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            }
        }
    };
    debug_assert_eq!(report.command, cli.command.name());
    for v in &report.violations {
        text.push_str(&format!("FAILED {}: {}\n", v.property, v.witness));
    }
    if cli.timing {
        let ms = start.elapsed().as_secs_f64() * 1000.0;
        report.timing_ms = Some(ms);
        text.push_str(&format!("time: {ms:.1} ms\n"));
    }
    let code = if report.violations.is_empty() { 0 } else { EXIT_PROPERTY };
    let body = match cli.format {
        Format::Text => text,
        Format::Json => serde_json::to_string_pretty(&report).expect("serializable report") + "\n",
    };
    match &cli.out {
        Some(path) => match std::fs::write(path, &body) {
            Ok(()) => Outcome { code, ..Outcome::default() },
            Err(e) => Outcome {
                code: EXIT_INVALID,
                stdout: String::new(),
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
            },
        },
        None => Outcome {
            code,
            stdout: body,
            stderr: String::new(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-2..1"), Ok(DegreeRange(-2, 1)));
        assert!(parse_range("3..1").is_err());
        assert!(parse_range("1-2").is_err());
    }

    #[test]
    fn negative_range_flag_parses() {
        let cli = Cli::try_parse_from(["kdescent", "kd", "nodal", "--range", "-2..1"]).unwrap();
        assert!(matches!(cli.command, Command::Kd { range: Some(DegreeRange(-2, 1)), .. }));
    }
}
