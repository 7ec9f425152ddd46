//! Run configuration: a key-value text file with an explicit schema version,
//! overridden by command-line flags.
//!
//! ```text
//! # comments start with '#'
//! schema_version = 1
//! resolution = 14
//! degree = 4
//! seed = 7
//! ```

use crate::error::{Error, Result};
use crate::jets::Normalization;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub schema_version: u32,
    /// GLL order of the spectral elements.
    pub resolution: usize,
    /// Structure degree `n`.
    pub degree: usize,
    pub normalization: Normalization,
    pub seed: u64,
    /// Relative tolerance of reconstructions and stationarity tests.
    pub tol: f64,
    pub out: PathBuf,
    /// Size of random structures (`max |μ_k|`).
    pub amplitude: f64,
    /// Size of random 2-stationary perturbations.
    pub perturbation: f64,
    /// Number of seeded samples in sampling checks.
    pub samples: usize,
    /// Runge–Kutta steps per unit time of `flow`.
    pub steps_per_unit: usize,
    /// Optional input file: a tensor for `hodge`, a structure for `harmonize`,
    /// `flow` and `holonomy`.
    pub input: Option<PathBuf>,
    /// Optional Hamiltonian file for `flow` and `decompose`.
    pub hamiltonian: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            schema_version: SCHEMA_VERSION,
            resolution: crate::surface::DEFAULT_RESOLUTION,
            degree: 4,
            normalization: Normalization::Negative,
            seed: 0,
            tol: 1e-8,
            out: PathBuf::from("out"),
            amplitude: 0.3,
            perturbation: 0.1,
            samples: 20,
            steps_per_unit: 64,
            input: None,
            hamiltonian: None,
        }
    }
}

fn bad(key: &str, v: &str) -> Error {
    Error::Config(format!("invalid value {:?} for {}", v, key))
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| bad(key, v))
}

/// Parses `key = value` lines. Unknown or repeated keys are errors.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
        let (k, v) = (k.trim().to_string(), v.trim().to_string());
        if out.insert(k.clone(), v).is_some() {
            return Err(Error::Config(format!("line {}: {} given twice", i + 1, k)));
        }
    }
    Ok(out)
}

impl RunConfig {
    /// Sets one key from its text value.
    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "schema_version" => self.schema_version = num(key, v)?,
            "resolution" => self.resolution = num(key, v)?,
            "degree" => self.degree = num(key, v)?,
            "normalization" => {
                self.normalization = match v {
                    "negative" => Normalization::Negative,
                    "positive" => Normalization::Positive,
                    _ => return Err(bad(key, v)),
                }
            }
            "seed" => self.seed = num(key, v)?,
            "tol" => self.tol = num(key, v)?,
            "out" => self.out = PathBuf::from(v),
            "amplitude" => self.amplitude = num(key, v)?,
            "perturbation" => self.perturbation = num(key, v)?,
            "samples" => self.samples = num(key, v)?,
            "steps_per_unit" => self.steps_per_unit = num(key, v)?,
            "input" => self.input = Some(PathBuf::from(v)),
            "hamiltonian" => self.hamiltonian = Some(PathBuf::from(v)),
            _ => return Err(Error::Config(format!("unknown key {}", key))),
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let pairs = parse_pairs(text)?;
        if !pairs.contains_key("schema_version") {
            return Err(Error::Config("missing schema_version".into()));
        }
        let mut c = RunConfig::default();
        for (k, v) in &pairs {
            c.set(k, v)?;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {}", path.display(), e)))?;
        Self::from_text(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!("schema_version {} not supported (expected {})", self.schema_version, SCHEMA_VERSION)));
        }
        if !(2..=6).contains(&self.degree) {
            return Err(Error::Config(format!("degree {} outside 2..=6", self.degree)));
        }
        for (name, v) in [("tol", self.tol), ("amplitude", self.amplitude), ("perturbation", self.perturbation)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{} must be positive, got {}", name, v)));
            }
        }
        if self.amplitude >= 1.0 {
            return Err(Error::Config("amplitude must stay below 1".into()));
        }
        if self.resolution < 4 {
            return Err(Error::Config(format!("resolution {} below 4", self.resolution)));
        }
        if self.samples == 0 || self.steps_per_unit == 0 {
            return Err(Error::Config("samples and steps_per_unit must be at least 1".into()));
        }
        Ok(())
    }

    /// The file format accepted by [`RunConfig::from_text`].
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "schema_version = {}\nresolution = {}\ndegree = {}\nnormalization = {}\nseed = {}\ntol = {:e}\nout = {}\namplitude = {}\nperturbation = {}\nsamples = {}\nsteps_per_unit = {}\n",
            self.schema_version,
            self.resolution,
            self.degree,
            match self.normalization {
                Normalization::Negative => "negative",
                Normalization::Positive => "positive",
            },
            self.seed,
            self.tol,
            self.out.display(),
            self.amplitude,
            self.perturbation,
            self.samples,
            self.steps_per_unit
        );
        if let Some(p) = &self.input {
            s.push_str(&format!("input = {}\n", p.display()));
        }
        if let Some(p) = &self.hamiltonian {
            s.push_str(&format!("hamiltonian = {}\n", p.display()));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let mut c = RunConfig::default();
        c.seed = 42;
        c.degree = 5;
        c.normalization = Normalization::Positive;
        c.input = Some(PathBuf::from("in.json"));
        assert_eq!(RunConfig::from_text(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn comments_and_blank_lines() {
        let c = RunConfig::from_text("# run\n\nschema_version = 1  # required\nresolution=16\n").unwrap();
        assert_eq!(c.resolution, 16);
        assert_eq!(c.degree, RunConfig::default().degree);
    }

    #[test]
    fn rejects_bad_files() {
        for text in [
            "resolution = 14\n",
            "schema_version = 2\n",
            "schema_version = 1\ncolour = red\n",
            "schema_version = 1\nseed = 1\nseed = 2\n",
            "schema_version = 1\ndegree = 7\n",
            "schema_version = 1\ntol = -1\n",
            "schema_version = 1\ntol = nan\n",
            "schema_version = 1\nnormalization = sideways\n",
            "schema_version = 1\njust words\n",
        ] {
            assert!(matches!(RunConfig::from_text(text), Err(Error::Config(_))), "{:?}", text);
        }
    }
}
