//! Suite reports and their JSON / CSV encodings.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use crate::config::{Format, SuiteConfig};

/// Which side of the tolerance a check wants its largest value on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    /// Pass iff `max < tol`.
    Below,
    /// Pass iff `max ≥ tol`.
    Above,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub bound: Bound,
    pub tol: f64,
    pub max: f64,
    pub mean: f64,
    pub count: usize,
    pub passed: bool,
    /// Non-gating checks are reported but do not affect the suite verdict.
    pub gating: bool,
    #[serde(skip)]
    pub values: Vec<f64>,
}

impl Check {
    pub fn below(name: &str, tol: f64, values: Vec<f64>) -> Self {
        Check::new(name, Bound::Below, tol, values)
    }

    pub fn above(name: &str, tol: f64, values: Vec<f64>) -> Self {
        Check::new(name, Bound::Above, tol, values)
    }

    fn new(name: &str, bound: Bound, tol: f64, values: Vec<f64>) -> Self {
        let count = values.len();
        let (max, mean) = if count == 0 {
            (f64::NAN, f64::NAN)
        } else {
            let max = values.iter().copied().fold(f64::NEG_INFINITY, |m, v| if v.is_nan() { f64::NAN } else { m.max(v) });
            (max, values.iter().sum::<f64>() / count as f64)
        };
        let passed = count > 0
            && match bound {
                Bound::Below => max < tol,
                Bound::Above => max >= tol,
            };
        Check {
            name: name.to_string(),
            bound,
            tol,
            max,
            mean,
            count,
            passed,
            gating: true,
            values,
        }
    }

    pub fn informational(mut self) -> Self {
        self.gating = false;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub seed: u64,
    pub config: SuiteConfig,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub labels: BTreeMap<String, String>,
    /// Seconds; kept out of the serialized report so reports stay
    /// reproducible.
    #[serde(skip)]
    pub wall_time: f64,
}

impl SuiteReport {
    pub fn new(config: &SuiteConfig, checks: Vec<Check>, labels: BTreeMap<String, String>) -> Self {
        let passed = checks.iter().filter(|c| c.gating).all(|c| c.passed);
        SuiteReport {
            suite: config.suite.name().to_string(),
            passed,
            seed: config.seed,
            config: config.clone(),
            checks,
            labels,
            wall_time: 0.0,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Per-sample values of every check: `check,index,value`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["check", "index", "value"])?;
        for c in &self.checks {
            for (k, v) in c.values.iter().enumerate() {
                w.write_record([c.name.as_str(), &k.to_string(), &format!("{v:e}")])?;
            }
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    pub fn encode(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    /// One summary line.
    pub fn summary(&self) -> String {
        let worst = self
            .checks
            .iter()
            .filter(|c| c.gating)
            .map(|c| format!("{}={:.3e}/{:.0e}", c.name, c.max, c.tol))
            .collect::<Vec<_>>()
            .join(" ");
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("{verdict} {} {worst}", self.suite)
    }

    /// Writes `<dir>/<suite>.<ext>` and returns the path.
    pub fn write_to(&self, dir: &Path, format: Format) -> Result<PathBuf> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let ext = match format {
            Format::Json => "json",
            Format::Csv => "csv",
        };
        let path = dir.join(format!("{}.{ext}", self.suite));
        let mut f = std::fs::File::create(&path).with_context(|| format!("writing {}", path.display()))?;
        f.write_all(self.encode(format)?.as_bytes())
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}
