use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use nudirac_core::models::{ModelFamily, ModelRegistry};
use nudirac_core::oracle::Discretization;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const MAX_NMAX: usize = 20;
pub const DEFAULT_NMAX: usize = 2;
pub const DEFAULT_MODEL: &str = "nonpt-shifted";
pub const DEFAULT_SCHEME: &str = "cheb";

/// Parameters used when neither the config file nor the flags set them.
pub fn default_parameters(model: &str) -> &'static [(&'static str, f64)] {
    match model {
        "pt-linear" => &[("a", 4.0), ("b", 4.0), ("gamma", 1.0), ("omega", 4.0)],
        "nonpt-shifted" => &[("alpha", 4.0), ("beta", 4.0), ("gamma", 1.0)],
        _ => &[],
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleSettings {
    pub grid: usize,
    pub domain: [f64; 2],
    pub scheme: String,
}

impl OracleSettings {
    pub fn discretization(&self) -> Discretization {
        Discretization::new(self.domain[0], self.domain[1], self.grid, &self.scheme)
    }
}

/// A fully resolved run configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub model: String,
    pub parameters: BTreeMap<String, f64>,
    pub n_max: usize,
    pub oracle: OracleSettings,
    pub output: OutputFormat,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub engine_only: bool,
}

impl RunConfig {
    pub fn build_model(&self) -> Result<Box<dyn ModelFamily>, CliError> {
        ModelRegistry::default()
            .build(&self.model, &self.parameters)
            .map_err(CliError::from)
    }
}

/// Oracle fields of a config file.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleFile {
    pub grid: Option<usize>,
    pub domain: Option<[f64; 2]>,
    pub scheme: Option<String>,
}

/// Every field optional; used both for config files and for flag values.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub model: Option<String>,
    #[serde(default)]
    pub parameters: BTreeMap<String, f64>,
    pub n_max: Option<usize>,
    #[serde(default)]
    pub oracle: OracleFile,
    pub output: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub engine_only: Option<bool>,
}

impl PartialConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
    }

    /// `self` with every field set in `over` replaced.
    pub fn overlay(mut self, over: PartialConfig) -> Self {
        if over.model.is_some() {
            self.model = over.model;
        }
        self.parameters.extend(over.parameters);
        self.n_max = over.n_max.or(self.n_max);
        self.oracle.grid = over.oracle.grid.or(self.oracle.grid);
        self.oracle.domain = over.oracle.domain.or(self.oracle.domain);
        if over.oracle.scheme.is_some() {
            self.oracle.scheme = over.oracle.scheme;
        }
        self.output = over.output.or(self.output);
        if over.out.is_some() {
            self.out = over.out;
        }
        self.engine_only = over.engine_only.or(self.engine_only);
        self
    }

    pub fn resolve(self) -> Result<RunConfig, CliError> {
        let model = self.model.unwrap_or_else(|| DEFAULT_MODEL.to_string());
        let registry = ModelRegistry::default();
        registry.entry(&model)?;
        let mut parameters: BTreeMap<String, f64> = default_parameters(&model)
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        parameters.extend(self.parameters);
        let n_max = self.n_max.unwrap_or(DEFAULT_NMAX);
        if n_max > MAX_NMAX {
            return Err(CliError::Config(format!(
                "n_max = {n_max} exceeds {MAX_NMAX}"
            )));
        }
        let scheme = self
            .oracle
            .scheme
            .unwrap_or_else(|| DEFAULT_SCHEME.to_string());
        nudirac_core::oracle::SchemeRegistry::default().get(&scheme)?;
        let built = registry.build(&model, &parameters)?;
        let default_disc = Discretization::default_for(built.as_ref(), &scheme);
        let oracle = OracleSettings {
            grid: self.oracle.grid.unwrap_or(default_disc.n),
            domain: self
                .oracle
                .domain
                .unwrap_or([default_disc.z_min, default_disc.z_max]),
            scheme,
        };
        Ok(RunConfig {
            model,
            parameters,
            n_max,
            oracle,
            output: self.output.unwrap_or_default(),
            out: self.out,
            engine_only: self.engine_only.unwrap_or(false),
        })
    }
}
