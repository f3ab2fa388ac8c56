//! Experiment configuration: a TOML file with `[experiment]`, `[scenario]`
//! and `[optimizer]` tables. Every key is optional; missing keys take the
//! built-in defaults.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimizers::{Algorithm, OptimizerConfig};
use crate::scenario::{dbm_to_watts, ScenarioParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepVar {
    #[serde(rename = "md_density")]
    MdDensity,
    #[serde(rename = "max_power_dbm")]
    MaxPowerDbm,
    #[serde(rename = "max_cpu_ghz")]
    MaxCpuGhz,
    #[serde(rename = "solitary_V")]
    SolitaryV,
    #[serde(rename = "max_height")]
    MaxHeight,
    #[serde(rename = "none")]
    None,
}

impl SweepVar {
    pub const ALL: [SweepVar; 6] = [
        SweepVar::MdDensity,
        SweepVar::MaxPowerDbm,
        SweepVar::MaxCpuGhz,
        SweepVar::SolitaryV,
        SweepVar::MaxHeight,
        SweepVar::None,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepVar::MdDensity => "md_density",
            SweepVar::MaxPowerDbm => "max_power_dbm",
            SweepVar::MaxCpuGhz => "max_cpu_ghz",
            SweepVar::SolitaryV => "solitary_V",
            SweepVar::MaxHeight => "max_height",
            SweepVar::None => "none",
        }
    }

    /// Writes `value` into the scenario or optimizer settings.
    pub fn apply(self, value: f64, params: &mut ScenarioParams, cfg: &mut OptimizerConfig) -> Result<()> {
        let count = || {
            if value >= 1.0 && value.fract() == 0.0 {
                Ok(value as usize)
            } else {
                Err(Error::config(format!(
                    "{} needs a positive integer, got {value}",
                    self.name()
                )))
            }
        };
        match self {
            SweepVar::MdDensity => params.num_md = count()?,
            SweepVar::MaxPowerDbm => params.md_max_power_w = dbm_to_watts(value),
            SweepVar::MaxCpuGhz => params.md_cpu_hz = value * 1e9,
            SweepVar::SolitaryV => cfg.solitary_waves = count()?,
            SweepVar::MaxHeight => cfg.max_height = count()? as u32,
            SweepVar::None => {}
        }
        Ok(())
    }
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepVar::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::config(format!("unknown sweep variable '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSection {
    pub name: String,
    pub sweep: SweepVar,
    pub values: Vec<f64>,
    pub algorithms: Vec<Algorithm>,
    /// Replicates per sweep value; replicate `r` uses the same scenario for
    /// every algorithm and sweep value.
    pub seeds: usize,
    pub master_seed: u64,
    /// Worker threads for cells and fitness evaluation.
    pub parallel: usize,
    pub traces: bool,
    /// Record wall time; off by default so reruns give byte-identical CSV.
    pub timing: bool,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        ExperimentSection {
            name: "default".into(),
            sweep: SweepVar::None,
            values: vec![0.0],
            algorithms: Algorithm::ALL.to_vec(),
            seeds: 1,
            master_seed: 1,
            parallel: 1,
            traces: false,
            timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSpec {
    pub experiment: ExperimentSection,
    pub scenario: ScenarioParams,
    pub optimizer: OptimizerConfig,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        let e = &self.experiment;
        if e.values.is_empty() {
            return Err(Error::config("experiment.values must not be empty"));
        }
        if e.algorithms.is_empty() {
            return Err(Error::config("experiment.algorithms must not be empty"));
        }
        if e.seeds == 0 {
            return Err(Error::config("experiment.seeds must be at least 1"));
        }
        if e.parallel == 0 {
            return Err(Error::config("experiment.parallel must be at least 1"));
        }
        self.scenario.validate()?;
        self.optimizer.validate()?;
        for &v in &e.values {
            let (mut p, mut c) = (self.scenario.clone(), self.optimizer.clone());
            e.sweep.apply(v, &mut p, &mut c)?;
            p.validate()?;
            c.validate()?;
        }
        Ok(())
    }
}

pub fn parse_config(text: &str) -> Result<ExperimentSpec> {
    let spec: ExperimentSpec = toml::from_str(text)?;
    spec.validate()?;
    Ok(spec)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}
