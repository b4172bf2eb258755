//! The JSON/text report every command produces.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Identifier of the report layout; bumped on incompatible changes.
pub const SCHEMA: &str = "tldimer-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    fn tag(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub predicted: Value,
    pub computed: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    /// Passes iff the two values serialize identically.
    pub fn compare(name: impl Into<String>, predicted: impl Serialize, computed: impl Serialize) -> Check {
        let predicted = to_value(predicted);
        let computed = to_value(computed);
        let status = if predicted == computed {
            Status::Pass
        } else {
            Status::Fail
        };
        Check {
            name: name.into(),
            status,
            predicted,
            computed,
            witness: None,
        }
    }

    /// A yes/no property; the witness is kept only on failure.
    pub fn holds(name: impl Into<String>, ok: bool, witness: Option<String>) -> Check {
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            predicted: Value::Bool(true),
            computed: Value::Bool(ok),
            witness: if ok { None } else { witness },
        }
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            status: Status::Skipped,
            predicted: Value::Null,
            computed: Value::Null,
            witness: Some(reason.into()),
        }
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Check {
        if self.status == Status::Fail {
            self.witness = Some(witness.into());
        }
        self
    }

    pub fn prefixed(mut self, prefix: &str) -> Check {
        self.name = format!("{prefix}{}", self.name);
        self
    }
}

fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tool_version: Option<String>,
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    /// Command-specific payload, emitted as top-level keys.
    #[serde(flatten)]
    pub data: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    /// Human-readable body for the text rendering.
    #[serde(skip)]
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Report {
        Report {
            schema: SCHEMA.to_string(),
            tool_version: Some(env!("CARGO_PKG_VERSION").to_string()),
            command: command.into(),
            params: BTreeMap::new(),
            checks: Vec::new(),
            data: BTreeMap::new(),
            elapsed_ms: None,
            lines: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Report {
        self.params.insert(key.to_string(), to_value(value));
        self
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
    }

    pub fn set_data(&mut self, key: &str, value: impl Serialize) {
        self.data.insert(key.to_string(), to_value(value));
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    /// Appends another report's checks, data and lines under `prefix`.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        self.checks.extend(other.checks.into_iter().map(|c| c.prefixed(prefix)));
        for (k, v) in other.data {
            self.data.insert(format!("{prefix}{k}"), v);
        }
        self.lines.extend(other.lines);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| c.status == Status::Fail).count()
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn finish(mut self, started: Instant) -> Report {
        self.elapsed_ms = Some(started.elapsed().as_millis() as u64);
        self
    }

    /// Drops the fields that vary between identical runs.
    pub fn stable(mut self) -> Report {
        self.tool_version = None;
        self.elapsed_ms = None;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are plain JSON")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "tldimer {} {}", self.command, params.join(" "));
        for l in &self.lines {
            let _ = writeln!(out, "{l}");
        }
        for c in &self.checks {
            let _ = write!(out, "{}  {}", c.status.tag(), c.name);
            if c.status != Status::Skipped && !(c.predicted == Value::Bool(true)) {
                let _ = write!(out, "  (predicted {}, computed {})", c.predicted, c.computed);
            }
            if let Some(w) = &c.witness {
                let _ = write!(out, "  [{w}]");
            }
            out.push('\n');
        }
        let total = self.checks.len();
        let _ = write!(out, "{} of {} checks passed", total - self.failures(), total);
        if let Some(ms) = self.elapsed_ms {
            let _ = write!(out, " in {ms} ms");
        }
        out.push('\n');
        out
    }
}
