use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{OracleFile, OutputFormat, PartialConfig};
use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "nudirac",
    version,
    about = "Nikiforov-Uvarov solver for non-Hermitian Dirac models with a local Fermi velocity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Engine energies, printed formulas and closed-form residuals.
    Solve(CommonArgs),
    /// Solve, then cross-check with the numerical oracle and the coupled system.
    Verify(CommonArgs),
    /// Repeat solve (or verify) over values of one parameter.
    Sweep(SweepArgs),
    /// Sample the spinor components of every level.
    Export(ExportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputArg {
    Json,
    Csv,
}

impl From<OutputArg> for OutputFormat {
    fn from(o: OutputArg) -> Self {
        match o {
            OutputArg::Json => OutputFormat::Json,
            OutputArg::Csv => OutputFormat::Csv,
        }
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// pt-linear, nonpt-shifted or custom.
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Any model parameter as NAME=VALUE (repeatable).
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
    /// Highest level index (at most 20).
    #[arg(long)]
    pub nmax: Option<usize>,
    /// Oracle interior points N.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Oracle interval as ZMIN,ZMAX.
    #[arg(long, allow_hyphen_values = true, value_name = "ZMIN,ZMAX")]
    pub domain: Option<String>,
    /// Oracle scheme: fd or cheb.
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long, value_enum)]
    pub output: Option<OutputArg>,
    /// Write to PATH instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Skip the printed closed forms.
    #[arg(long)]
    pub engine_only: bool,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Parameter to vary.
    #[arg(long)]
    pub vary: String,
    /// Comma-separated values.
    #[arg(long, allow_hyphen_values = true, value_name = "V1,V2,...")]
    pub values: String,
    /// Run verify instead of solve for each value.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Args, Debug, Clone)]
pub struct ExportArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Samples per level.
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// Sample interval as X0,X1.
    #[arg(
        long,
        allow_hyphen_values = true,
        value_name = "X0,X1",
        default_value = "-5,5"
    )]
    pub xrange: String,
}

pub fn parse_pair(s: &str, what: &str) -> Result<[f64; 2], CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => match (a.parse::<f64>(), b.parse::<f64>()) {
            (Ok(a), Ok(b)) if a.is_finite() && b.is_finite() => Ok([a, b]),
            _ => Err(CliError::Usage(format!(
                "{what} must be two finite numbers, got '{s}'"
            ))),
        },
        _ => Err(CliError::Usage(format!(
            "{what} must be given as LOW,HIGH, got '{s}'"
        ))),
    }
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Usage(format!("invalid value '{v}' in list")))
        })
        .collect()
}

impl CommonArgs {
    /// The flag values as a partial configuration.
    pub fn to_partial(&self) -> Result<PartialConfig, CliError> {
        let mut parameters = BTreeMap::new();
        for (name, v) in [
            ("a", self.a),
            ("b", self.b),
            ("gamma", self.gamma),
            ("omega", self.omega),
            ("alpha", self.alpha),
            ("beta", self.beta),
        ] {
            if let Some(v) = v {
                parameters.insert(name.to_string(), v);
            }
        }
        for p in &self.params {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--param expects NAME=VALUE, got '{p}'")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("--param {k}: '{v}' is not a number")))?;
            parameters.insert(k.trim().to_string(), v);
        }
        Ok(PartialConfig {
            model: self.model.clone(),
            parameters,
            n_max: self.nmax,
            oracle: OracleFile {
                grid: self.grid,
                domain: self
                    .domain
                    .as_deref()
                    .map(|d| parse_pair(d, "--domain"))
                    .transpose()?,
                scheme: self.scheme.clone(),
            },
            output: self.output.map(Into::into),
            out: self.out.clone(),
            engine_only: self.engine_only.then_some(true),
        })
    }

    /// Config file (if any) overlaid with the flags.
    pub fn merged(&self) -> Result<PartialConfig, CliError> {
        let base = match &self.config {
            Some(p) => PartialConfig::from_file(p)?,
            None => PartialConfig::default(),
        };
        Ok(base.overlay(self.to_partial()?))
    }
}
