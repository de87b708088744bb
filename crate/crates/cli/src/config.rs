//! Run configuration: one tree for every subcommand, each command validating
//! the sections it needs before computing anything.
//!
//! Files ending in `.json` are read as JSON, anything else as TOML. Unknown
//! keys are rejected and the error names the offending path.

use std::path::Path;

use heatrace_core::PotentialSpec;
use heatrace_spectral::{
    log_times, CoefficientField, DomainSpec, DuhamelOptions, FitOptions, GapOptions,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficient: Option<CoefficientField>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<TimeGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duhamel: Option<DuhamelConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<GapOptions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff: Option<CoeffConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariants: Option<InvariantsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyConfig>,
}

/// Either `log = { lo, hi, count }` or `values = [...]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TimeGrid {
    Log { lo: f64, hi: f64, count: usize },
    Values(Vec<f64>),
}

impl TimeGrid {
    pub fn times(&self) -> Result<Vec<f64>> {
        let t = match self {
            TimeGrid::Log { lo, hi, count } => log_times(*lo, *hi, *count)?,
            TimeGrid::Values(v) => v.clone(),
        };
        heatrace_spectral::trace::check_times(&t)?;
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DuhamelConfig {
    #[serde(default = "default_j_max")]
    pub j_max: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_tolerance: Option<f64>,
}

fn default_j_max() -> usize {
    2
}

impl DuhamelConfig {
    pub fn options(&self) -> DuhamelOptions {
        let mut o = DuhamelOptions { cutoff: self.cutoff, ..DuhamelOptions::default() };
        if let Some(tol) = self.truncation_tolerance {
            o.truncation_tolerance = tol;
        }
        o
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitConfig {
    pub powers: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_exponent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition_threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(f64, f64)>,
}

impl FitConfig {
    pub fn options(&self) -> FitOptions {
        let mut o = FitOptions { weight_exponent: self.weight_exponent, window: self.window, ..FitOptions::default() };
        if let Some(c) = self.condition_threshold {
            o.condition_threshold = c;
        }
        o
    }
}

/// Order sweep: every tuple of `j` multi-indices in dimension `dimension`
/// with `|α^j| = order`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub j: usize,
    pub dimension: usize,
    pub order: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffConfig {
    /// Tuples as lists of exponent vectors, `[[2], [2]]`.
    #[serde(default)]
    pub tuples: Vec<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
    #[serde(default = "default_budget")]
    pub budget: u32,
    /// Adds the two-time recurrence value for `j = 2`.
    #[serde(default)]
    pub cross_check: bool,
}

impl Default for CoeffConfig {
    fn default() -> Self {
        CoeffConfig { tuples: Vec::new(), sweep: None, budget: default_budget(), cross_check: false }
    }
}

fn default_budget() -> u32 {
    heatrace_core::bridge::DEFAULT_BUDGET
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvariantsConfig {
    pub min_order: u32,
    pub max_order: u32,
    pub dimension: usize,
    #[serde(default = "default_budget")]
    pub budget: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default)]
    pub numeric: bool,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if json {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        }
    }

    pub fn from_json(text: &str) -> Result<RunConfig> {
        let mut de = serde_json::Deserializer::from_str(text);
        let cfg: RunConfig =
            serde_path_to_error::deserialize(&mut de).map_err(|e| path_error(e.path(), e.inner().to_string()))?;
        de.end().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn from_toml(text: &str) -> Result<RunConfig> {
        let located = |e: &toml::de::Error| match e.span() {
            Some(span) => format!("{} (line {})", e.message(), text[..span.start].matches('\n').count() + 1),
            None => e.message().to_string(),
        };
        let de = toml::Deserializer::parse(text).map_err(|e| CliError::Config(located(&e)))?;
        serde_path_to_error::deserialize(de).map_err(|e| path_error(e.path(), located(e.inner())))
    }

    /// SHA-256 of the canonical JSON form, so equivalent JSON and TOML files
    /// share a digest.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn require_domain(&self) -> Result<&DomainSpec> {
        let d = self.domain.as_ref().ok_or_else(|| missing("domain"))?;
        if d.lengths.len() != d.points.len() || !(1..=2).contains(&d.dim()) {
            return Err(CliError::Config("domain: lengths and points must both have 1 or 2 entries".into()));
        }
        d.validate()?;
        Ok(d)
    }

    pub fn require_potential(&self) -> Result<&PotentialSpec> {
        self.potential.as_ref().ok_or_else(|| missing("potential"))
    }

    pub fn require_times(&self) -> Result<Vec<f64>> {
        self.times.as_ref().ok_or_else(|| missing("times"))?.times()
    }

    pub fn coefficient_field(&self, dim: usize) -> Result<CoefficientField> {
        let a = self.coefficient.clone().unwrap_or_default();
        a.validate(dim)?;
        Ok(a)
    }
}

fn missing(section: &str) -> CliError {
    CliError::Config(format!("missing section `{section}`"))
}

fn path_error(path: &serde_path_to_error::Path, msg: String) -> CliError {
    CliError::Config(format!("at `{path}`: {}", msg.trim_end()))
}
