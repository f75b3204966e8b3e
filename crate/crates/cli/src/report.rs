//! Suite reports and their JSON and text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub value: f64,
    pub tol: f64,
}

impl Residual {
    pub fn within(&self) -> bool {
        self.value <= self.tol
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryError {
    /// `"nonconvergence"` or `"theorem"`.
    pub kind: String,
    pub message: String,
}

/// One theorem check on one input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry {
    pub name: String,
    pub inputs: BTreeMap<String, String>,
    pub dims: BTreeMap<String, usize>,
    pub residuals: BTreeMap<String, Residual>,
    pub checks: BTreeMap<String, bool>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<EntryError>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_s: Option<f64>,
}

impl Entry {
    pub fn new(name: impl Into<String>) -> Self {
        Entry {
            name: name.into(),
            inputs: BTreeMap::new(),
            dims: BTreeMap::new(),
            residuals: BTreeMap::new(),
            checks: BTreeMap::new(),
            verdict: Verdict::Pass,
            reason: None,
            error: None,
            wall_clock_s: None,
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    pub fn dim(&mut self, key: &str, value: usize) -> &mut Self {
        self.dims.insert(key.to_string(), value);
        self
    }

    pub fn residual(&mut self, key: &str, value: f64, tol: f64) -> &mut Self {
        self.residuals.insert(key.to_string(), Residual { value, tol });
        self
    }

    pub fn check(&mut self, key: &str, ok: bool) -> &mut Self {
        self.checks.insert(key.to_string(), ok);
        self
    }

    pub fn skip(&mut self, reason: impl Into<String>) -> &mut Self {
        self.verdict = Verdict::Skipped;
        self.reason = Some(reason.into());
        self
    }

    pub fn fail_with(&mut self, kind: &str, message: impl Into<String>) -> &mut Self {
        self.verdict = Verdict::Fail;
        self.error = Some(EntryError { kind: kind.to_string(), message: message.into() });
        self
    }

    /// Settles the verdict from the recorded residuals and checks unless the
    /// entry was skipped or already failed.
    pub fn settle(&mut self) {
        if self.verdict != Verdict::Pass {
            return;
        }
        let bad: Vec<&str> = self
            .residuals
            .iter()
            .filter(|(_, r)| !r.within())
            .map(|(k, _)| k.as_str())
            .chain(self.checks.iter().filter(|(_, ok)| !**ok).map(|(k, _)| k.as_str()))
            .collect();
        if !bad.is_empty() {
            self.verdict = Verdict::Fail;
            self.reason = Some(format!("failed: {}", bad.join(", ")));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateDescription {
    pub label: String,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub tool_version: String,
    pub qg_name: String,
    pub dim: usize,
    pub seed: u64,
    pub states: Vec<StateDescription>,
    pub tolerances: BTreeMap<String, f64>,
    pub summary: Summary,
    pub entries: Vec<Entry>,
}

impl SuiteReport {
    pub fn new(qg_name: impl Into<String>, dim: usize, seed: u64) -> Self {
        SuiteReport {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            qg_name: qg_name.into(),
            dim,
            seed,
            states: Vec::new(),
            tolerances: BTreeMap::new(),
            summary: Summary { pass: 0, fail: 0, skipped: 0 },
            entries: Vec::new(),
        }
    }

    /// Sorts entries by name and recounts the summary.
    pub fn finish(&mut self) {
        self.entries.sort_by(|a, b| a.name.cmp(&b.name));
        let count = |v: Verdict| self.entries.iter().filter(|e| e.verdict == v).count();
        self.summary =
            Summary { pass: count(Verdict::Pass), fail: count(Verdict::Fail), skipped: count(Verdict::Skipped) };
    }

    pub fn entry(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// 0 when nothing failed, 2 if some entry hit a non-convergence error,
    /// 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        let failed = self.entries.iter().filter(|e| e.verdict == Verdict::Fail);
        let mut code = 0;
        for e in failed {
            match &e.error {
                Some(err) if err.kind == "nonconvergence" => return 2,
                _ => code = 3,
            }
        }
        code
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

pub fn emit_report(report: &SuiteReport, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s.into_bytes()
        }
        ReportFormat::Text => text_report(report).into_bytes(),
    }
}

fn text_report(report: &SuiteReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} (dim {}), seed {}", report.qg_name, report.dim, report.seed);
    for s in &report.states {
        let _ = writeln!(out, "  state {}: {}", s.label, s.source);
    }
    for e in &report.entries {
        let tag = match e.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skipped => "SKIP",
        };
        let mut line = format!("{tag} {}", e.name);
        for (k, v) in &e.dims {
            let _ = write!(line, " {k}={v}");
        }
        if let Some(worst) = e.residuals.values().map(|r| r.value).reduce(f64::max) {
            let _ = write!(line, " worst_residual={worst:.3e}");
        }
        if let Some(r) = &e.reason {
            let _ = write!(line, " ({r})");
        }
        if let Some(err) = &e.error {
            let _ = write!(line, " [{}: {}]", err.kind, err.message);
        }
        if let Some(t) = e.wall_clock_s {
            let _ = write!(line, " {t:.3}s");
        }
        out.push_str(&line);
        out.push('\n');
    }
    let s = &report.summary;
    let _ = writeln!(out, "{} pass, {} fail, {} skipped", s.pass, s.fail, s.skipped);
    out
}
