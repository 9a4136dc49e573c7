//! Golden cases: an input document plus the expected output of one or more
//! commands. Expected values are matched as subsets of the actual report,
//! so a case pins only the fields it cares about.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use clap::Parser;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::commands::{execute, Command, Failure, Flags};
use crate::input::parse_input_value;
use crate::Cli;

/// Cases shipped with the binary, run by `selftest`.
pub const EMBEDDED: &[(&str, &str)] = &[
    ("artin-d1-4.json", include_str!("../corpus/artin-d1-4.json")),
    ("char0-nonred-2.json", include_str!("../corpus/char0-nonred-2.json")),
    ("char0-nonred-3.json", include_str!("../corpus/char0-nonred-3.json")),
    ("char0-not-normal.json", include_str!("../corpus/char0-not-normal.json")),
    ("char0-red-0.json", include_str!("../corpus/char0-red-0.json")),
    ("char0-red-1.json", include_str!("../corpus/char0-red-1.json")),
    ("char0-red-2.json", include_str!("../corpus/char0-red-2.json")),
    ("char0-red-3.json", include_str!("../corpus/char0-red-3.json")),
    ("char2-nonred-i.json", include_str!("../corpus/char2-nonred-i.json")),
    ("char2-nonred-i-extend.json", include_str!("../corpus/char2-nonred-i-extend.json")),
    ("char2-nonred-ii.json", include_str!("../corpus/char2-nonred-ii.json")),
    ("char2-red-0.json", include_str!("../corpus/char2-red-0.json")),
    ("char2-red-2.json", include_str!("../corpus/char2-red-2.json")),
    ("char2-red-4.json", include_str!("../corpus/char2-red-4.json")),
    ("conic-over-q.json", include_str!("../corpus/conic-over-q.json")),
    ("fano-threefold.json", include_str!("../corpus/fano-threefold.json")),
    ("f5-singular-family.json", include_str!("../corpus/f5-singular-family.json")),
    ("f5-smooth-family.json", include_str!("../corpus/f5-smooth-family.json")),
    ("surface-char2.json", include_str!("../corpus/surface-char2.json")),
    ("threefold-phi-u.json", include_str!("../corpus/threefold-phi-u.json")),
    ("threefold-phi-uvw.json", include_str!("../corpus/threefold-phi-uvw.json")),
    ("wild-family.json", include_str!("../corpus/wild-family.json")),
];

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusCase {
    pub id: String,
    /// Where the expected values come from: `basis` is one of
    /// `published-example`, `derived` or `trivial`, `note` says which
    /// example or computation.
    pub provenance: Value,
    pub input: Value,
    /// Keyed by a command line without the input path, for example
    /// `smooth-scan --ext-degree 2`.
    pub expected: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub key: String,
    pub diffs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseOutcome {
    pub id: String,
    pub source: String,
    pub provenance: Value,
    pub checks: Vec<CheckOutcome>,
}

impl CaseOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.diffs.is_empty())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusSummary {
    pub cases: Vec<CaseOutcome>,
    pub warnings: Vec<String>,
}

impl CorpusSummary {
    pub fn failed(&self) -> usize {
        self.cases.iter().filter(|c| !c.passed()).count()
    }

    pub fn exit_code(&self) -> i32 {
        if self.failed() > 0 {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Value {
        let cases: Vec<Value> = self
            .cases
            .iter()
            .map(|c| {
                json!({
                    "id": c.id,
                    "source": c.source,
                    "passed": c.passed(),
                    "provenance": c.provenance,
                    "checks": c.checks.iter().map(|k| json!({
                        "command": k.key,
                        "passed": k.diffs.is_empty(),
                        "diff": k.diffs,
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "total": self.cases.len(),
            "passed": self.cases.len() - self.failed(),
            "failed": self.failed(),
            "warnings": self.warnings,
            "cases": cases,
        })
    }

    /// One line per failed check, for stderr.
    pub fn diff_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in &self.cases {
            for k in &c.checks {
                for d in &k.diffs {
                    out.push(format!("{} [{}] {}", c.id, k.key, d));
                }
            }
        }
        out
    }
}

/// Split a check key into the command and its flags, reusing the command
/// line parser.
pub fn parse_check_key(key: &str) -> Result<(Command, Flags), String> {
    let args = std::iter::once("conicdisc").chain(key.split_whitespace());
    let cli = Cli::try_parse_from(args).map_err(|e| e.to_string().lines().next().unwrap_or("").to_string())?;
    if cli.input.is_some() || cli.json_out.is_some() {
        return Err("a check key takes no input path or --json-out".into());
    }
    if matches!(cli.command, Command::Selftest | Command::Corpus) {
        return Err(format!("{} cannot be checked by a corpus case", cli.command.name()));
    }
    Ok((cli.command, cli.flags()))
}

/// Every way `actual` differs from `expected` on the keys `expected` has.
pub fn json_diff(expected: &Value, actual: &Value) -> Vec<String> {
    let mut out = Vec::new();
    diff_at("$", expected, actual, &mut out);
    out
}

fn diff_at(path: &str, expected: &Value, actual: &Value, out: &mut Vec<String>) {
    match (expected, actual) {
        (Value::Object(e), Value::Object(a)) => {
            for (k, ev) in e {
                let p = format!("{path}.{k}");
                match a.get(k) {
                    Some(av) => diff_at(&p, ev, av, out),
                    None => out.push(format!("{p}: missing, expected {ev}")),
                }
            }
        }
        (Value::Array(e), Value::Array(a)) if e.len() == a.len() => {
            for (i, (ev, av)) in e.iter().zip(a).enumerate() {
                diff_at(&format!("{path}[{i}]"), ev, av, out);
            }
        }
        _ if expected == actual => {}
        _ => out.push(format!("{path}: expected {expected}, got {actual}")),
    }
}

pub fn run_case(case: &CorpusCase, source: &str) -> CaseOutcome {
    let doc = parse_input_value(&case.input);
    let checks = case
        .expected
        .iter()
        .map(|(key, want)| {
            let got = match (parse_check_key(key), &doc) {
                (Err(e), _) => Failure::input(format!("bad check key: {e}")).to_json(),
                (Ok(_), Err(e)) => Failure::input(e.to_string()).to_json(),
                (Ok((cmd, flags)), Ok(doc)) => match execute(cmd, doc, &flags) {
                    Ok(v) => v,
                    Err(f) => f.to_json(),
                },
            };
            CheckOutcome { key: key.clone(), diffs: json_diff(want, &got) }
        })
        .collect();
    CaseOutcome { id: case.id.clone(), source: source.to_string(), provenance: case.provenance.clone(), checks }
}

/// Parse and run `(source name, JSON text)` pairs in parallel; the outcome
/// is ordered by case id. Unparseable case files are an input error.
pub fn run_sources(sources: &[(String, String)]) -> Result<CorpusSummary, String> {
    let mut cases = Vec::with_capacity(sources.len());
    let mut ids = BTreeSet::new();
    for (name, text) in sources {
        let case: CorpusCase = serde_json::from_str(text).map_err(|e| format!("{name}: {e}"))?;
        if !ids.insert(case.id.clone()) {
            return Err(format!("{name}: duplicate case id '{}'", case.id));
        }
        cases.push((case, name.clone()));
    }
    let mut outcomes: Vec<CaseOutcome> = cases.par_iter().map(|(c, name)| run_case(c, name)).collect();
    outcomes.sort_by(|a, b| a.id.cmp(&b.id));
    let mut warnings = Vec::new();
    if outcomes.is_empty() {
        warnings.push("no corpus cases found".to_string());
    }
    Ok(CorpusSummary { cases: outcomes, warnings })
}

pub fn run_embedded() -> CorpusSummary {
    let sources: Vec<(String, String)> = EMBEDDED.iter().map(|(n, t)| (n.to_string(), t.to_string())).collect();
    run_sources(&sources).expect("embedded corpus parses")
}

/// Run every `*.json` file directly inside `dir`.
pub fn run_corpus(dir: &Path) -> Result<CorpusSummary, String> {
    let entries = std::fs::read_dir(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let mut paths = Vec::new();
    for e in entries {
        let p = e.map_err(|e| format!("{}: {e}", dir.display()))?.path();
        if p.is_file() && p.extension().is_some_and(|x| x == "json") {
            paths.push(p);
        }
    }
    paths.sort();
    let mut sources = Vec::with_capacity(paths.len());
    for p in paths {
        let text = std::fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))?;
        let name = p.file_name().expect("files have names").to_string_lossy().into_owned();
        sources.push((name, text));
    }
    run_sources(&sources)
}
