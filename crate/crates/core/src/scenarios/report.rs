//! Report schema and serialization.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::ScenarioError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub name: String,
    pub expected: Value,
    pub observed: Value,
    pub tolerance: Value,
    pub pass: bool,
}

impl Criterion {
    pub fn new(
        name: impl Into<String>,
        expected: impl Into<Value>,
        observed: impl Into<Value>,
        tolerance: impl Into<Value>,
        pass: bool,
    ) -> Self {
        Self {
            name: name.into(),
            expected: expected.into(),
            observed: observed.into(),
            tolerance: tolerance.into(),
            pass,
        }
    }

    /// `|observed − expected| ≤ tol`.
    pub fn close(name: impl Into<String>, expected: f64, observed: f64, tol: f64) -> Self {
        Self::new(name, expected, observed, tol, (observed - expected).abs() <= tol)
    }

    /// `observed > bound`.
    pub fn above(name: impl Into<String>, bound: f64, observed: f64) -> Self {
        Self::new(name, format!("> {bound}"), observed, Value::Null, observed > bound)
    }

    /// `observed ≤ bound`.
    pub fn at_most(name: impl Into<String>, bound: f64, observed: f64) -> Self {
        Self::new(name, format!("<= {bound}"), observed, bound, observed <= bound)
    }

    /// `lo ≤ observed ≤ hi`.
    pub fn within(name: impl Into<String>, lo: f64, hi: f64, observed: f64) -> Self {
        Self::new(name, format!("[{lo}, {hi}]"), observed, Value::Null, (lo..=hi).contains(&observed))
    }

    pub fn equal<T: Into<Value> + PartialEq + Clone>(name: impl Into<String>, expected: T, observed: T) -> Self {
        let pass = expected == observed;
        Self::new(name, expected, observed, 0, pass)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub scenario: String,
    pub params: BTreeMap<String, Value>,
    pub seed: u64,
    pub criteria: Vec<Criterion>,
    pub wall_ms: u64,
}

impl ScenarioResult {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.pass)
    }

    pub fn criterion(&self, name: &str) -> Option<&Criterion> {
        self.criteria.iter().find(|c| c.name == name)
    }

    /// The report with `wall_ms` zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        Self { wall_ms: 0, ..self.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(ScenarioError::UnknownFormat(s.into())),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
        })
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// JSON: one object for a single result, an array otherwise. CSV: one row per criterion.
pub fn render_report(results: &[ScenarioResult], format: ReportFormat) -> Result<String, ScenarioError> {
    match format {
        ReportFormat::Json => {
            let mut s = if results.len() == 1 {
                serde_json::to_string_pretty(&results[0])?
            } else {
                serde_json::to_string_pretty(results)?
            };
            s.push('\n');
            Ok(s)
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["scenario", "seed", "criterion", "expected", "observed", "tolerance", "pass"])?;
            for r in results {
                for c in &r.criteria {
                    w.write_record([
                        r.scenario.clone(),
                        r.seed.to_string(),
                        c.name.clone(),
                        cell(&c.expected),
                        cell(&c.observed),
                        cell(&c.tolerance),
                        c.pass.to_string(),
                    ])?;
                }
            }
            let bytes = w.into_inner().map_err(|e| ScenarioError::Io(e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
        }
    }
}

/// Renders and writes to `path`.
pub fn emit_report(results: &[ScenarioResult], path: &Path, format: ReportFormat) -> Result<(), ScenarioError> {
    std::fs::write(path, render_report(results, format)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ScenarioResult {
        ScenarioResult {
            scenario: "demo".into(),
            params: [("l".to_string(), Value::from(1.0))].into_iter().collect(),
            seed: 3,
            criteria: vec![Criterion::close("a", 1.0, 1.00001, 1e-4), Criterion::above("b", 0.0, -1.0)],
            wall_ms: 12,
        }
    }

    #[test]
    fn json_roundtrip() {
        let r = sample();
        let s = render_report(std::slice::from_ref(&r), ReportFormat::Json).unwrap();
        let back: ScenarioResult = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        assert!(!r.passed());
    }

    #[test]
    fn csv_has_one_row_per_criterion() {
        let s = render_report(&[sample()], ReportFormat::Csv).unwrap();
        let mut rd = csv::Reader::from_reader(s.as_bytes());
        assert_eq!(rd.records().count(), 2);
    }

    #[test]
    fn unknown_format_is_an_error() {
        assert!(matches!("yaml".parse::<ReportFormat>(), Err(ScenarioError::UnknownFormat(_))));
        assert_eq!("JSON".parse::<ReportFormat>().unwrap(), ReportFormat::Json);
    }

    #[test]
    fn emit_writes_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        emit_report(&[sample()], &p, ReportFormat::Json).unwrap();
        let text = std::fs::read_to_string(p).unwrap();
        assert!(text.contains("\"scenario\": \"demo\""));
    }
}
