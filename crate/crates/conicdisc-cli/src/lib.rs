//! Command-line front end for `conicdisc`: the JSON input format, command
//! routing, and the golden-case corpus.
//!
//! Exit codes: 0 success, 1 input error, 2 mathematical error (the JSON
//! report carries the error code), 3 corpus mismatch.

pub mod commands;
pub mod corpus;
pub mod input;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;
use serde_json::{json, Value};

pub use commands::{execute, run_command, Command, Failure, Flags, Report};
pub use corpus::{run_corpus, run_embedded, CorpusCase, CorpusSummary};
pub use input::{parse_input, parse_input_str, InputDoc, InputError};

/// Environment variable holding the worker thread count.
pub const WORKERS_ENV: &str = "CONICDISC_WORKERS";

#[derive(Parser, Debug, Clone)]
#[command(name = "conicdisc", version, about = "Discriminants, normal forms and singularities of conic bundles")]
pub struct Cli {
    pub command: Command,
    /// Input document; a directory for `corpus`, nothing for `selftest`.
    pub input: Option<PathBuf>,
    /// Scan over the degree-d extension of the base field.
    #[arg(long, value_name = "d")]
    pub ext_degree: Option<u32>,
    /// Series precision, overriding the document.
    #[arg(long, value_name = "N")]
    pub precision: Option<usize>,
    /// On a missing residue root, retry over field extensions.
    #[arg(long)]
    pub auto_extend: bool,
    /// Refuse scans that would visit more points than this.
    #[arg(long, value_name = "N")]
    pub max_points: Option<u64>,
    /// Also write the JSON report to this file.
    #[arg(long, value_name = "path")]
    pub json_out: Option<PathBuf>,
}

impl Cli {
    pub fn flags(&self) -> Flags {
        Flags {
            ext_degree: self.ext_degree,
            precision: self.precision,
            auto_extend: self.auto_extend,
            max_points: self.max_points,
        }
    }
}

fn configure_workers() {
    let Ok(v) = std::env::var(WORKERS_ENV) else { return };
    match v.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            // Fails only if the pool already exists, which is harmless.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        _ => eprintln!("warning: ignoring {WORKERS_ENV}={v:?}, expected a positive integer"),
    }
}

/// Pretty-printed with sorted keys and a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn input_failure(path: &std::path::Path, e: &InputError) -> Value {
    let mut v = Failure::input(e.message.clone()).to_json();
    v["error"]["file"] = json!(path.display().to_string());
    if e.line > 0 {
        v["error"]["line"] = json!(e.line);
        v["error"]["column"] = json!(e.column);
    }
    v
}

/// Run the command line `args` (program name first); returns the exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    configure_workers();
    let (json, code) = match cli.command {
        Command::Selftest => {
            let s = run_embedded();
            for line in s.diff_lines() {
                eprintln!("{line}");
            }
            (s.to_json(), s.exit_code())
        }
        Command::Corpus => {
            let Some(dir) = &cli.input else {
                eprintln!("error: corpus needs a directory");
                return 1;
            };
            match run_corpus(dir) {
                Ok(s) => {
                    for w in &s.warnings {
                        eprintln!("warning: {w}");
                    }
                    for line in s.diff_lines() {
                        eprintln!("{line}");
                    }
                    (s.to_json(), s.exit_code())
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    (Failure::input(e).to_json(), 1)
                }
            }
        }
        cmd => {
            let Some(path) = &cli.input else {
                eprintln!("error: {} needs an input document", cmd.name());
                return 1;
            };
            match parse_input(path) {
                Ok(doc) => {
                    let r = run_command(cmd, &doc, &cli.flags());
                    if r.exit_code != 0 {
                        eprintln!("error: {}", r.json["error"]["message"].as_str().unwrap_or(""));
                    }
                    (r.json, r.exit_code)
                }
                Err(e) => {
                    eprintln!("{}:{e}", path.display());
                    (input_failure(path, &e), 1)
                }
            }
        }
    };
    let text = render(&json);
    print!("{text}");
    if let Some(p) = &cli.json_out {
        if let Err(e) = std::fs::write(p, &text) {
            eprintln!("error: cannot write {}: {e}", p.display());
            return 1;
        }
    }
    code
}
