//! Suite configuration: built-in defaults, a TOML file, then CLI flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    IntervalLaw,
    Ricci,
    Abraham,
    LightRays,
    ScalarInvariance,
    Tetrad,
    EmInvariance,
    Fdr,
    MomentumOracle,
    Mirror2d,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::IntervalLaw,
        Suite::Ricci,
        Suite::Abraham,
        Suite::LightRays,
        Suite::ScalarInvariance,
        Suite::Tetrad,
        Suite::EmInvariance,
        Suite::Fdr,
        Suite::MomentumOracle,
        Suite::Mirror2d,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::IntervalLaw => "interval-law",
            Suite::Ricci => "ricci",
            Suite::Abraham => "abraham",
            Suite::LightRays => "light-rays",
            Suite::ScalarInvariance => "scalar-invariance",
            Suite::Tetrad => "tetrad",
            Suite::EmInvariance => "em-invariance",
            Suite::Fdr => "fdr",
            Suite::MomentumOracle => "momentum-oracle",
            Suite::Mirror2d => "mirror-2d",
        }
    }

    /// Stream index for the suite's random generator.
    pub fn stream(self) -> u64 {
        Suite::ALL.iter().position(|s| *s == self).unwrap() as u64
    }

    pub fn defaults(self) -> SuiteConfig {
        let (samples, epsilon, h) = match self {
            Suite::IntervalLaw => (10_000, 0.0, 0.0),
            Suite::Ricci => (50, 0.0, 1e-3),
            Suite::Abraham => (20, 0.0, 0.0),
            Suite::LightRays => (200, 0.0, 0.0),
            Suite::ScalarInvariance => (1000, 1e-6, 0.0),
            Suite::Tetrad => (1000, 0.0, 0.0),
            Suite::EmInvariance => (100, 1e-2, 1e-4),
            Suite::Fdr => (6, 0.0, 0.0),
            Suite::MomentumOracle => (20, 2e-2, 0.0),
            Suite::Mirror2d => (3, 0.0, 0.0),
        };
        SuiteConfig {
            suite: self,
            seed: DEFAULT_SEED,
            samples,
            epsilon,
            h,
            step: 1e-3,
            tol: None,
            out: None,
            format: Format::Json,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match Suite::ALL.iter().find(|x| x.name() == s) {
            Some(x) => Ok(*x),
            None => {
                let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                bail!("unknown suite `{s}` (expected one of: {})", names.join(", "))
            }
        }
    }
}

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Everything one suite run depends on. Echoed into its report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub seed: u64,
    pub samples: usize,
    /// Regulator (suites that use one).
    pub epsilon: f64,
    /// Field-tensor or factor finite-difference step (suites that use one).
    pub h: f64,
    /// Proper-time finite-difference step.
    pub step: f64,
    /// Overrides the tolerance of every gating check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub format: Format,
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            bail!("{}: sample count must be positive", self.suite);
        }
        if !(self.step > 0.0) {
            bail!("{}: step must be positive", self.suite);
        }
        if self.epsilon < 0.0 || self.h < 0.0 || !self.epsilon.is_finite() || !self.h.is_finite() {
            bail!("{}: epsilon and h must be finite and non-negative", self.suite);
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                bail!("{}: tolerance must be positive", self.suite);
            }
        }
        Ok(())
    }

    /// `tol` if given, `default` otherwise.
    pub fn tolerance(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

/// Optional values from a config file or the command line.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub epsilon: Option<f64>,
    pub h: Option<f64>,
    pub step: Option<f64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Overrides {
    fn apply(&self, c: &mut SuiteConfig) {
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.samples {
            c.samples = v;
        }
        if let Some(v) = self.epsilon {
            c.epsilon = v;
        }
        if let Some(v) = self.h {
            c.h = v;
        }
        if let Some(v) = self.step {
            c.step = v;
        }
        if let Some(v) = self.tol {
            c.tol = Some(v);
        }
        if let Some(v) = &self.out {
            c.out = Some(v.clone());
        }
        if let Some(v) = self.format {
            c.format = v;
        }
    }
}

/// A config file:
///
/// ```toml
/// seed = 7
/// out = "reports"
///
/// [suite.em-invariance]
/// samples = 20
/// ```
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub epsilon: Option<f64>,
    pub h: Option<f64>,
    pub step: Option<f64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    #[serde(default)]
    pub suite: BTreeMap<Suite, Overrides>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn global(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            samples: self.samples,
            epsilon: self.epsilon,
            h: self.h,
            step: self.step,
            tol: self.tol,
            out: self.out.clone(),
            format: self.format,
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        ConfigFile::parse(&text).with_context(|| path.display().to_string())
    }
}

/// Defaults, then the file's global table, then its per-suite table, then
/// the command line.
pub fn resolve(suite: Suite, file: Option<&ConfigFile>, cli: &Overrides) -> Result<SuiteConfig> {
    let mut c = suite.defaults();
    if let Some(f) = file {
        f.global().apply(&mut c);
        if let Some(o) = f.suite.get(&suite) {
            o.apply(&mut c);
        }
    }
    cli.apply(&mut c);
    c.validate()?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn precedence() {
        let file = ConfigFile::parse(
            "seed = 3\nsamples = 5\n[suite.tetrad]\nsamples = 7\n[suite.ricci]\nseed = 4\n",
        )
        .unwrap();
        let cli = Overrides {
            seed: Some(9),
            ..Overrides::default()
        };
        let t = resolve(Suite::Tetrad, Some(&file), &cli).unwrap();
        assert_eq!((t.seed, t.samples), (9, 7));
        let r = resolve(Suite::Ricci, Some(&file), &Overrides::default()).unwrap();
        assert_eq!((r.seed, r.samples), (4, 5));
        let d = resolve(Suite::Fdr, None, &Overrides::default()).unwrap();
        assert_eq!(d, Suite::Fdr.defaults());
    }

    #[test]
    fn rejects_bad_values() {
        assert!(ConfigFile::parse("sed = 1").is_err());
        assert!(ConfigFile::parse("[suite.nope]\nseed = 1").is_err());
        let zero = Overrides {
            samples: Some(0),
            ..Overrides::default()
        };
        assert!(resolve(Suite::Tetrad, None, &zero).is_err());
    }
}
