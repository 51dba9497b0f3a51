//! Command results: a plain-text table or a JSON record.

use num_complex::Complex64;
use serde_json::{json, Map, Value};
use wittenloc::scalar::{format_complex, format_real};

#[derive(Clone, Debug, PartialEq)]
pub enum Val {
    Real(f64),
    Complex(Complex64),
    Int(i64),
    Text(String),
    Bool(bool),
    List(Vec<Val>),
}

/// `x` rounded to 15 significant digits.
fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

fn real_json(x: f64) -> Value {
    if x.is_finite() {
        json!(round15(x))
    } else {
        json!(x.to_string())
    }
}

impl Val {
    pub fn human(&self) -> String {
        match self {
            Val::Real(x) => format_real(*x),
            Val::Complex(z) => format_complex(*z),
            Val::Int(n) => n.to_string(),
            Val::Text(s) => s.clone(),
            Val::Bool(b) => b.to_string(),
            Val::List(items) => items.iter().map(Val::human).collect::<Vec<_>>().join("  "),
        }
    }

    pub fn json(&self) -> Value {
        match self {
            Val::Real(x) => real_json(*x),
            Val::Complex(z) => json!([real_json(z.re), real_json(z.im)]),
            Val::Int(n) => json!(n),
            Val::Text(s) => json!(s),
            Val::Bool(b) => json!(b),
            Val::List(items) => Value::Array(items.iter().map(Val::json).collect()),
        }
    }
}

impl From<f64> for Val {
    fn from(x: f64) -> Self {
        Val::Real(x)
    }
}

impl From<Complex64> for Val {
    fn from(z: Complex64) -> Self {
        Val::Complex(z)
    }
}

impl From<i64> for Val {
    fn from(n: i64) -> Self {
        Val::Int(n)
    }
}

impl From<u32> for Val {
    fn from(n: u32) -> Self {
        Val::Int(n as i64)
    }
}

impl From<usize> for Val {
    fn from(n: usize) -> Self {
        Val::Int(n as i64)
    }
}

impl From<String> for Val {
    fn from(s: String) -> Self {
        Val::Text(s)
    }
}

impl From<&str> for Val {
    fn from(s: &str) -> Self {
        Val::Text(s.to_string())
    }
}

impl From<bool> for Val {
    fn from(b: bool) -> Self {
        Val::Bool(b)
    }
}

/// A pass/fail line; `residual` and `tolerance` are absent for exact checks.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl Check {
    pub fn within(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            residual: Some(residual),
            tolerance: Some(tolerance),
            pass: residual <= tolerance,
        }
    }

    pub fn exact(name: impl Into<String>, pass: bool) -> Self {
        Check {
            name: name.into(),
            residual: None,
            tolerance: None,
            pass,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<(String, Val)>,
    pub values: Vec<(String, Val)>,
    pub error_estimates: Vec<(String, Val)>,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    /// Wall-clock seconds per stage; `None` unless requested.
    pub timings: Option<Vec<(String, f64)>>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            ..Report::default()
        }
    }

    pub fn input(&mut self, key: impl Into<String>, v: impl Into<Val>) {
        self.inputs.push((key.into(), v.into()));
    }

    pub fn value(&mut self, key: impl Into<String>, v: impl Into<Val>) {
        self.values.push((key.into(), v.into()));
    }

    pub fn estimate(&mut self, key: impl Into<String>, v: impl Into<Val>) {
        self.error_estimates.push((key.into(), v.into()));
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn warn(&mut self, w: impl Into<String>) {
        self.warnings.push(w.into());
    }

    pub fn time(&mut self, stage: &str, seconds: f64) {
        if let Some(t) = self.timings.as_mut() {
            t.push((stage.to_string(), seconds));
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        let section = |items: &[(String, Val)]| {
            let mut m = Map::new();
            for (k, v) in items {
                m.insert(k.clone(), v.json());
            }
            Value::Object(m)
        };
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "residual": c.residual.map(real_json),
                    "tolerance": c.tolerance.map(real_json),
                    "pass": c.pass,
                })
            })
            .collect();
        let timings: Map<String, Value> = self
            .timings
            .iter()
            .flatten()
            .map(|(k, v)| (k.clone(), real_json(*v)))
            .collect();
        json!({
            "command": self.command,
            "inputs_echo": section(&self.inputs),
            "values": section(&self.values),
            "error_estimates": section(&self.error_estimates),
            "checks": checks,
            "warnings": self.warnings,
            "timings": timings,
            "status": if self.passed() { "pass" } else { "fail" },
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("wittenloc {}\n", self.command);
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        let mut section = |title: &str, items: &[(String, String)]| {
            if items.is_empty() {
                return;
            }
            out.push_str(&format!("\n{title}\n"));
            let width = items
                .iter()
                .map(|(k, _)| k.chars().count())
                .max()
                .unwrap_or(0);
            for (k, v) in items {
                let pad = width - k.chars().count();
                out.push_str(&format!("  {k}{}  {v}\n", " ".repeat(pad)));
            }
        };
        let human = |items: &[(String, Val)]| -> Vec<(String, String)> {
            items.iter().map(|(k, v)| (k.clone(), v.human())).collect()
        };
        section("inputs", &human(&self.inputs));
        section("values", &human(&self.values));
        section("error estimates", &human(&self.error_estimates));
        let checks: Vec<(String, String)> = self
            .checks
            .iter()
            .map(|c| {
                let mark = if c.pass { "[PASS]" } else { "[FAIL]" };
                let detail = match (c.residual, c.tolerance) {
                    (Some(r), Some(t)) => format!("{} <= {}", format_real(r), format_real(t)),
                    _ => "exact".to_string(),
                };
                (format!("{mark} {}", c.name), detail)
            })
            .collect();
        section("checks", &checks);
        if let Some(t) = &self.timings {
            let rows: Vec<(String, String)> = t
                .iter()
                .map(|(k, s)| (k.clone(), format!("{} s", format_real(*s))))
                .collect();
            section("timings", &rows);
        }
        if !self.checks.is_empty() {
            out.push_str(&format!(
                "\nstatus: {}\n",
                if self.passed() { "PASS" } else { "FAIL" }
            ));
        }
        out
    }
}
