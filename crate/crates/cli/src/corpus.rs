//! The built-in corpus; each entry is a problem document from `docs/examples`
//! together with its expectation document.

use serde::{Deserialize, Serialize};

use crate::expect::{self, Expectations};
use crate::run::{run, Command};
use crate::spec::ProblemSpec;
use crate::CliError;

pub struct Entry {
    pub name: &'static str,
    spec: &'static str,
    expectations: &'static str,
}

macro_rules! entry {
    ($name:literal) => {
        Entry {
            name: $name,
            spec: include_str!(concat!("../../../docs/examples/", $name, ".json")),
            expectations: include_str!(concat!("../../../docs/examples/", $name, ".expect.json")),
        }
    };
}

pub const ENTRIES: [Entry; 8] = [
    entry!("flip-d2-char0"),
    entry!("flip-d3-char0"),
    entry!("sl2"),
    entry!("restricted-gf2-abelian"),
    entry!("restricted-gf3"),
    entry!("stumbo"),
    entry!("kharchenko"),
    entry!("kharchenko-envelope-fixture"),
];

impl Entry {
    pub fn spec(&self) -> Result<ProblemSpec, CliError> {
        ProblemSpec::from_json(self.spec)
    }

    pub fn expectations(&self) -> Result<Expectations, CliError> {
        expect::parse(self.expectations)
    }
}

pub fn names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.name).collect()
}

pub fn entry(name: &str) -> Option<&'static Entry> {
    ENTRIES.iter().find(|e| e.name == name)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusLine {
    pub name: String,
    pub command: String,
    pub violations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub entries: Vec<CorpusLine>,
    pub passed: usize,
    pub failed: usize,
}

impl CorpusReport {
    /// 2 if anything errored, 1 if an expectation drifted, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.entries.iter().any(|e| e.error.is_some()) {
            2
        } else if self.failed > 0 {
            1
        } else {
            0
        }
    }
}

/// Runs every expectation section of one entry.
pub fn run_entry(e: &Entry) -> Vec<CorpusLine> {
    let line = |command: &str, violations, error| CorpusLine {
        name: e.name.to_string(),
        command: command.to_string(),
        violations,
        error,
    };
    let (spec, expectations) = match e.spec().and_then(|s| Ok((s, e.expectations()?))) {
        Ok(pair) => pair,
        Err(err) => return vec![line("load", Vec::new(), Some(err.to_string()))],
    };
    expectations
        .iter()
        .map(|(name, expected)| match Command::from_name(name) {
            None => line(name, Vec::new(), Some(format!("unknown command `{name}`"))),
            Some(command) => match run(command, &spec) {
                Ok(report) => line(name, expect::violations(&report.result, expected), None),
                Err(err) => line(name, Vec::new(), Some(err.to_string())),
            },
        })
        .collect()
}

pub fn run_all() -> CorpusReport {
    let entries: Vec<CorpusLine> = ENTRIES.iter().flat_map(run_entry).collect();
    let passed = entries
        .iter()
        .filter(|e| e.error.is_none() && e.violations.is_empty())
        .count();
    CorpusReport {
        failed: entries.len() - passed,
        passed,
        entries,
    }
}
