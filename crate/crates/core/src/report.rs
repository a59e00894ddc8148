//! Line-delimited JSON reports.
//!
//! A report is a `header` line, one `record` line per checked item and a
//! closing `summary` line. Every line carries `schema_version`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails { witness: Value },
    BudgetExceeded { limit: u64 },
    NotApplicable { reason: String },
}

impl Verdict {
    pub fn fails(witness: impl Serialize) -> Self {
        Verdict::Fails {
            witness: serde_json::to_value(witness).unwrap_or(Value::Null),
        }
    }

    pub fn from_bool(ok: bool, witness: impl Serialize) -> Self {
        if ok {
            Verdict::Holds
        } else {
            Verdict::fails(witness)
        }
    }

    /// Budget and applicability errors become verdicts; other errors stay
    /// errors.
    pub fn from_error(e: &Error) -> Option<Self> {
        match e {
            Error::BudgetExceeded { limit } => Some(Verdict::BudgetExceeded { limit: *limit }),
            Error::NotApplicable(reason) => Some(Verdict::NotApplicable {
                reason: reason.clone(),
            }),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails { .. } => "fails",
            Verdict::BudgetExceeded { .. } => "budget-exceeded",
            Verdict::NotApplicable { .. } => "not-applicable",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub suite: String,
    pub item: String,
    pub verdict: Verdict,
    #[serde(default)]
    pub details: Value,
}

impl Record {
    pub fn new(
        suite: &str,
        item: impl Into<String>,
        verdict: Verdict,
        details: impl Serialize,
    ) -> Self {
        Record {
            suite: suite.to_string(),
            item: item.into(),
            verdict,
            details: serde_json::to_value(details).unwrap_or(Value::Null),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub holds: usize,
    pub fails: usize,
    pub budget_exceeded: usize,
    pub not_applicable: usize,
}

impl Summary {
    pub fn of(records: &[Record]) -> Self {
        let mut s = Summary::default();
        for r in records {
            match r.verdict {
                Verdict::Holds => s.holds += 1,
                Verdict::Fails { .. } => s.fails += 1,
                Verdict::BudgetExceeded { .. } => s.budget_exceeded += 1,
                Verdict::NotApplicable { .. } => s.not_applicable += 1,
            }
        }
        s
    }

    /// 0 all hold, 1 any failure, 2 budget exceeded without failures.
    pub fn exit_code(&self) -> i32 {
        if self.fails > 0 {
            1
        } else if self.budget_exceeded > 0 {
            2
        } else {
            0
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Vec<String>,
    pub version: String,
    pub records: Vec<Record>,
    /// Wall-clock milliseconds; left out unless asked for, so that reports
    /// stay byte-identical across runs.
    pub timing_ms: Option<u64>,
}

#[derive(Serialize)]
struct Line<'a, T: Serialize> {
    schema_version: u32,
    #[serde(rename = "type")]
    kind: &'static str,
    #[serde(flatten)]
    body: &'a T,
}

#[derive(Serialize)]
struct Header<'a> {
    command: &'a [String],
    version: &'a str,
}

#[derive(Serialize)]
struct Tail {
    #[serde(flatten)]
    summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<u64>,
}

impl Report {
    pub fn new(command: Vec<String>, records: Vec<Record>) -> Self {
        Report {
            command,
            version: env!("CARGO_PKG_VERSION").to_string(),
            records,
            timing_ms: None,
        }
    }

    pub fn summary(&self) -> Summary {
        Summary::of(&self.records)
    }

    pub fn exit_code(&self) -> i32 {
        self.summary().exit_code()
    }

    pub fn to_records(&self) -> String {
        let mut out = String::new();
        let header = Header {
            command: &self.command,
            version: &self.version,
        };
        push_line(&mut out, "header", &header);
        for r in &self.records {
            push_line(&mut out, "record", r);
        }
        let tail = Tail {
            summary: self.summary(),
            timing_ms: self.timing_ms,
        };
        push_line(&mut out, "summary", &tail);
        out
    }

    /// Parses the output of [`Report::to_records`].
    pub fn from_records(text: &str) -> Result<Self, Error> {
        let mut command = Vec::new();
        let mut version = String::new();
        let mut records = Vec::new();
        let mut timing_ms = None;
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let v: Value = serde_json::from_str(line)
                .map_err(|e| Error::parse(n + 1, e.column(), e.to_string()))?;
            if v.get("schema_version").and_then(Value::as_u64) != Some(SCHEMA_VERSION as u64) {
                return Err(Error::parse(n + 1, 1, "unsupported schema_version"));
            }
            match v.get("type").and_then(Value::as_str) {
                Some("header") => {
                    command = serde_json::from_value(v["command"].clone())
                        .map_err(|e| Error::parse(n + 1, 1, e.to_string()))?;
                    version = v["version"].as_str().unwrap_or_default().to_string();
                }
                Some("record") => {
                    records.push(
                        serde_json::from_value(v)
                            .map_err(|e| Error::parse(n + 1, 1, e.to_string()))?,
                    );
                }
                Some("summary") => timing_ms = v.get("timing_ms").and_then(Value::as_u64),
                _ => return Err(Error::parse(n + 1, 1, "unknown line type")),
            }
        }
        Ok(Report {
            command,
            version,
            records,
            timing_ms,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let _ = write!(out, "{:<16} {:<40} {}", r.suite, r.item, r.verdict.label());
            match &r.verdict {
                Verdict::Fails { witness } => {
                    let _ = write!(out, "  witness: {witness}");
                }
                Verdict::BudgetExceeded { limit } => {
                    let _ = write!(out, "  after {limit} nodes");
                }
                Verdict::NotApplicable { reason } => {
                    let _ = write!(out, "  ({reason})");
                }
                Verdict::Holds => {}
            }
            if !r.details.is_null() {
                let _ = write!(out, "  {}", r.details);
            }
            out.push('\n');
        }
        let s = self.summary();
        let _ = writeln!(
            out,
            "{} holds, {} fails, {} budget exceeded, {} not applicable",
            s.holds, s.fails, s.budget_exceeded, s.not_applicable
        );
        if let Some(ms) = self.timing_ms {
            let _ = writeln!(out, "{ms} ms");
        }
        out
    }
}

fn push_line<T: Serialize>(out: &mut String, kind: &'static str, body: &T) {
    let line = Line {
        schema_version: SCHEMA_VERSION,
        kind,
        body,
    };
    out.push_str(&serde_json::to_string(&line).expect("report values serialize"));
    out.push('\n');
}
