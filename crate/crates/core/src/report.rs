//! Uniform check records and their JSON form.
//!
//! Reals are rounded to 12 significant digits when a check is built, so the
//! shortest-round-trip printing used by `serde_json` reproduces them exactly
//! and `parse(serialize(r)) == r`.

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// A measured or expected quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Real(f64),
    Text(String),
    List(Vec<Value>),
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

impl Value {
    pub fn real(x: f64) -> Self {
        Value::Real(round12(x))
    }

    pub fn reals(xs: &[f64]) -> Self {
        Value::List(xs.iter().map(|&x| Value::real(x)).collect())
    }

    pub fn int(x: usize) -> Self {
        Value::Int(x as i64)
    }

    fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Real(x) => Some(*x),
            Value::Int(i) => Some(*i as f64),
            _ => None,
        }
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: Value,
    pub expected: Value,
    pub tolerance: f64,
    /// What the expected value rests on.
    pub provenance: String,
}

fn within(measured: &Value, expected: &Value, tol: f64) -> bool {
    match (measured, expected) {
        (Value::List(a), Value::List(b)) => a.len() == b.len() && a.iter().zip(b).all(|(x, y)| within(x, y, tol)),
        (Value::Real(_), _) | (_, Value::Real(_)) => match (measured.as_f64(), expected.as_f64()) {
            (Some(m), Some(e)) => (m - e).abs() <= tol,
            _ => false,
        },
        _ => measured == expected,
    }
}

impl Check {
    /// Passes iff `|measured - expected| <= tolerance` (elementwise for
    /// lists), or on exact equality for integers, booleans and text.
    pub fn compare(name: &str, measured: Value, expected: Value, tolerance: f64, provenance: &str) -> Self {
        let passed = within(&measured, &expected, tolerance);
        Check {
            name: name.to_string(),
            passed,
            measured,
            expected,
            tolerance: round12(tolerance),
            provenance: provenance.to_string(),
        }
    }

    pub fn real(name: &str, measured: f64, expected: f64, tolerance: f64, provenance: &str) -> Self {
        Self::compare(name, Value::real(measured), Value::real(expected), tolerance, provenance)
    }

    /// Passes iff `measured <= bound + tolerance`.
    pub fn at_most(name: &str, measured: f64, bound: f64, tolerance: f64, provenance: &str) -> Self {
        let mut c = Self::compare(name, Value::real(measured), Value::real(bound), tolerance, provenance);
        c.passed = measured <= bound + tolerance;
        c
    }

    /// Passes iff `measured >= bound - tolerance`.
    pub fn at_least(name: &str, measured: f64, bound: f64, tolerance: f64, provenance: &str) -> Self {
        let mut c = Self::compare(name, Value::real(measured), Value::real(bound), tolerance, provenance);
        c.passed = measured >= bound - tolerance;
        c
    }

    pub fn count(name: &str, measured: usize, expected: usize, provenance: &str) -> Self {
        Self::compare(name, Value::int(measured), Value::int(expected), 0.0, provenance)
    }

    pub fn flag(name: &str, measured: bool, expected: bool, provenance: &str) -> Self {
        Self::compare(name, measured.into(), expected.into(), 0.0, provenance)
    }

    /// A failed check recording an error message.
    pub fn failure(name: &str, message: &str, provenance: &str) -> Self {
        Check {
            name: name.to_string(),
            passed: false,
            measured: Value::Text(message.to_string()),
            expected: Value::Text("success".into()),
            tolerance: 0.0,
            provenance: provenance.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite_name: String,
    pub checks: Vec<Check>,
    pub seed: u64,
    /// Wall-clock time; left at 0 unless timing is requested, so that
    /// reruns stay byte-identical.
    pub elapsed_ms: u64,
}

impl SuiteReport {
    pub fn new(suite_name: &str, seed: u64) -> Self {
        SuiteReport { suite_name: suite_name.to_string(), checks: Vec::new(), seed, elapsed_ms: 0 }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Folds several suites into one, prefixing each check with its suite.
    pub fn aggregate(name: &str, seed: u64, parts: &[SuiteReport]) -> Self {
        let mut out = SuiteReport::new(name, seed);
        for p in parts {
            for c in &p.checks {
                let mut c = c.clone();
                c.name = format!("{}/{}", p.suite_name, c.name);
                out.checks.push(c);
            }
            out.elapsed_ms += p.elapsed_ms;
        }
        out
    }
}

pub fn serialize(r: &SuiteReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(r)?;
    s.push('\n');
    Ok(s)
}

pub fn parse(text: &str) -> Result<SuiteReport> {
    Ok(serde_json::from_str(text)?)
}
