//! Run reports: command echo, input digests, per-test records and a
//! separate timing block.
//!
//! Everything outside `timing` is a function of the inputs, so two runs of
//! the same command agree byte for byte once that block is dropped.

use std::path::Path;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const TOOL_NAME: &str = "koszul";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Recorded data that carries no verdict of its own.
    Info,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Negative,
    InputError,
    ResourceLimit,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Negative => 1,
            Status::InputError => 2,
            Status::ResourceLimit => 3,
        }
    }

    pub fn of_error(e: &Error) -> Self {
        if e.is_resource_limit() {
            Status::ResourceLimit
        } else {
            Status::InputError
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub name: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of_bytes(name: impl Into<String>, bytes: &[u8]) -> Self {
        Self { name: name.into(), sha256: hex::encode(Sha256::digest(bytes)) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub test: String,
    /// Degree or bidegree label such as `3` or `(2,4)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<String>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub data: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Record {
    pub fn new(test: impl Into<String>, verdict: Verdict) -> Self {
        Self { test: test.into(), degree: None, verdict, data: Map::new(), witness: None }
    }

    pub fn degree(mut self, d: impl ToString) -> Self {
        self.degree = Some(d.to_string());
        self
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.data.insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
        self
    }

    pub fn witness(mut self, w: impl Serialize) -> Self {
        self.witness = Some(serde_json::to_value(w).expect("serializable"));
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub records: usize,
    pub passed: usize,
    pub failed: usize,
    pub status: Status,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecordTime {
    pub test: String,
    pub millis: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Timing {
    pub total_millis: f64,
    pub records: Vec<RecordTime>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub command: Vec<String>,
    pub field: String,
    pub inputs: Vec<InputDigest>,
    pub records: Vec<Record>,
    pub summary: Summary,
    pub timing: Timing,
}

fn millis(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

/// Collects records while a command runs.
pub struct ReportBuilder {
    command: Vec<String>,
    field: String,
    inputs: Vec<InputDigest>,
    records: Vec<Record>,
    times: Vec<RecordTime>,
    started: Instant,
    mark: Instant,
}

impl ReportBuilder {
    pub fn new(command: Vec<String>, field: impl ToString) -> Self {
        let now = Instant::now();
        Self {
            command,
            field: field.to_string(),
            inputs: Vec::new(),
            records: Vec::new(),
            times: Vec::new(),
            started: now,
            mark: now,
        }
    }

    pub fn set_field(&mut self, field: impl ToString) {
        self.field = field.to_string();
    }

    pub fn input_bytes(&mut self, name: impl Into<String>, bytes: &[u8]) {
        self.inputs.push(InputDigest::of_bytes(name, bytes));
    }

    /// Read a file, record its digest and return the text.
    pub fn input_file(&mut self, path: &Path) -> Result<String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })?;
        self.input_bytes(path.display().to_string(), text.as_bytes());
        Ok(text)
    }

    /// Add a record; its wall time runs from the previous record.
    pub fn push(&mut self, r: Record) {
        let now = Instant::now();
        self.times.push(RecordTime { test: r.test.clone(), millis: millis(now - self.mark) });
        self.mark = now;
        self.records.push(r);
    }

    /// Restart the per-record clock, e.g. after setup work.
    pub fn mark(&mut self) {
        self.mark = Instant::now();
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn finish(self, error: Option<&Error>) -> RunReport {
        let passed = self.records.iter().filter(|r| r.verdict == Verdict::Pass).count();
        let failed = self.records.iter().filter(|r| r.verdict == Verdict::Fail).count();
        let status = match error {
            Some(e) => Status::of_error(e),
            None if failed > 0 => Status::Negative,
            None => Status::Pass,
        };
        RunReport {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            command: self.command,
            field: self.field,
            inputs: self.inputs,
            summary: Summary {
                records: self.records.len(),
                passed,
                failed,
                status,
                exit_code: status.code(),
                error: error.map(|e| e.to_string()),
            },
            records: self.records,
            timing: Timing { total_millis: millis(self.started.elapsed()), records: self.times },
        }
    }
}

/// TOML has no null and no integers above `i64::MAX`: drop the former and
/// write the latter as strings.
fn strip_nulls(v: Value) -> Option<Value> {
    match v {
        Value::Null => None,
        Value::Number(n) if n.is_u64() && n.as_i64().is_none() => Some(Value::String(n.to_string())),
        Value::Array(a) => Some(Value::Array(a.into_iter().filter_map(strip_nulls).collect())),
        Value::Object(m) => Some(Value::Object(m.into_iter().filter_map(|(k, v)| strip_nulls(v).map(|v| (k, v))).collect())),
        other => Some(other),
    }
}

impl RunReport {
    pub fn status(&self) -> Status {
        self.summary.status
    }

    pub fn exit_code(&self) -> i32 {
        self.summary.exit_code
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let v = strip_nulls(serde_json::to_value(self).expect("report serializes")).expect("object");
        toml::to_string(&v).expect("report is TOML-compatible")
    }

    /// The report without its timing block, for comparisons across runs.
    pub fn without_timing(&self) -> RunReport {
        RunReport { timing: Timing::default(), ..self.clone() }
    }

    pub fn record(&self, test: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.test == test)
    }

    /// Write as JSON when `json` is set or the path ends in `.json`.
    pub fn write(&self, path: &Path, json: bool) -> Result<()> {
        let json = json || path.extension().is_some_and(|e| e == "json");
        let body = if json { self.to_json() } else { self.to_text() };
        std::fs::write(path, body).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
    }

    /// One line per record.
    pub fn summary_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let v = match r.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::Info => "info",
            };
            match &r.degree {
                Some(d) => out.push_str(&format!("{v:4}  {} [{d}]\n", r.test)),
                None => out.push_str(&format!("{v:4}  {}\n", r.test)),
            }
        }
        let s = &self.summary;
        out.push_str(&format!("{} passed, {} failed, exit {}", s.passed, s.failed, s.exit_code));
        if let Some(e) = &s.error {
            out.push_str(&format!(": {e}"));
        }
        out.push('\n');
        out
    }
}
