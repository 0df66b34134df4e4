//! Report documents with a JSON rendering and a line-oriented human one.
//!
//! The human rendering is generated by walking the same JSON tree, so every
//! number it shows is present in the machine document.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub results: Map<String, Value>,
    pub checks: Vec<Check>,
}

impl ReportDocument {
    pub fn new(command: Vec<String>) -> Self {
        Self {
            schema: SCHEMA,
            tool: "adft8",
            version: env!("CARGO_PKG_VERSION"),
            command,
            results: Map::new(),
            checks: Vec::new(),
        }
    }

    pub fn result<T: Serialize>(&mut self, key: &str, value: T) -> &mut Self {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.results.insert(key.to_string(), v);
        self
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> &mut Self {
        self.checks.push(Check { name: name.to_string(), passed, detail: detail.into() });
        self
    }

    pub fn failed_checks(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} :: {}", self.tool, self.version, self.command.join(" "));
        for (key, value) in &self.results {
            flatten(&mut out, key, value);
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out, "checks:");
            for c in &self.checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "  {tag} {}: {}", c.name, c.detail);
            }
        }
        out
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            self.to_json()
        } else {
            self.to_human()
        }
    }
}

fn flatten(out: &mut String, path: &str, value: &Value) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(out, &format!("{path}.{k}"), v);
            }
        }
        Value::Array(items) if items.iter().all(|v| !v.is_object() && !v.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            let _ = writeln!(out, "{path} = [{}]", parts.join(", "));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(out, &format!("{path}[{i}]"), v);
            }
        }
        v => {
            let _ = writeln!(out, "{path} = {}", scalar(v));
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
