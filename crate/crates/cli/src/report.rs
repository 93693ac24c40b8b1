use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "affusion-report/1";

#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl CheckLine {
    pub fn residual(name: &str, value: f64, tol: f64) -> Self {
        CheckLine { name: name.into(), passed: value < tol, residual: Some(value), detail: format!("tolerance {tol:e}") }
    }

    pub fn flag(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        CheckLine { name: name.into(), passed, residual: None, detail: detail.into() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Context {
    pub family: String,
    pub rank: usize,
    pub level: i64,
    pub kappa: i64,
    pub size: usize,
}

/// One document per invocation.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub contexts: Vec<Context>,
    pub payload: Value,
    pub checks: Vec<CheckLine>,
    pub passed: bool,
    pub timing: Timing,
    /// Rows for --format csv.
    #[serde(skip)]
    pub csv: Vec<Vec<String>>,
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub seconds: f64,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report {
            schema: SCHEMA,
            command,
            contexts: Vec::new(),
            payload: Value::Null,
            checks: Vec::new(),
            passed: true,
            timing: Timing { seconds: 0.0 },
            csv: Vec::new(),
        }
    }

    pub fn finish(mut self, seconds: f64) -> Self {
        self.passed = self.checks.iter().all(|c| c.passed);
        self.timing.seconds = seconds;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.csv {
            let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Round to 15 significant digits.
pub fn sig15(x: f64) -> f64 {
    format!("{x:.14e}").parse().unwrap_or(x)
}
