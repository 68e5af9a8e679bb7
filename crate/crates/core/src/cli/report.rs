use std::fmt::Write as _;
use std::time::Duration;

use serde_json::{json, Map, Value};

/// Ordered report: key/value results, named checks and free-form tables.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub command: String,
    pub channel_digest: Option<String>,
    pub seed: Option<u64>,
    entries: Vec<(String, String)>,
    checks: Vec<(String, bool)>,
    tables: Vec<(String, String)>,
    timings: Vec<(String, Duration)>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            ..Default::default()
        }
    }

    pub fn entry(&mut self, key: impl Into<String>, value: impl ToString) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn float(&mut self, key: impl Into<String>, value: f64) {
        self.entries.push((key.into(), fmt_float(value)));
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push((name.into(), passed));
    }

    pub fn table(&mut self, name: impl Into<String>, body: impl Into<String>) {
        self.tables.push((name.into(), body.into()));
    }

    pub fn timing(&mut self, name: impl Into<String>, d: Duration) {
        self.timings.push((name.into(), d));
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# ns-state {}", self.command);
        if let Some(d) = &self.channel_digest {
            let _ = writeln!(out, "channel digest = {d}");
        }
        if let Some(s) = self.seed {
            let _ = writeln!(out, "seed = {s}");
        }
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k} = {v}");
        }
        for (name, body) in &self.tables {
            let _ = writeln!(out, "[{name}]");
            out.push_str(body);
            if !body.ends_with('\n') {
                out.push('\n');
            }
        }
        for (name, ok) in &self.checks {
            let _ = writeln!(out, "{name}: {}", if *ok { "pass" } else { "FAIL" });
        }
        for (name, d) in &self.timings {
            let _ = writeln!(out, "time {name} = {:.3}s", d.as_secs_f64());
        }
        out
    }

    pub fn render_json(&self) -> String {
        let mut results = Map::new();
        for (k, v) in &self.entries {
            results.insert(k.clone(), Value::String(v.clone()));
        }
        let mut checks = Map::new();
        for (k, ok) in &self.checks {
            checks.insert(k.clone(), Value::Bool(*ok));
        }
        let mut tables = Map::new();
        for (k, body) in &self.tables {
            tables.insert(k.clone(), Value::String(body.clone()));
        }
        let mut doc = json!({
            "command": self.command,
            "channel_digest": self.channel_digest,
            "seed": self.seed,
            "results": results,
            "tables": tables,
            "checks": checks,
            "passed": self.all_passed(),
        });
        if !self.timings.is_empty() {
            let mut t = Map::new();
            for (k, d) in &self.timings {
                t.insert(k.clone(), json!(d.as_secs_f64()));
            }
            doc["timings"] = Value::Object(t);
        }
        let mut s = serde_json::to_string_pretty(&doc).expect("plain values");
        s.push('\n');
        s
    }
}

/// Twelve significant digits, trailing zeros trimmed.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}
