//! TOML run configuration.

use serde::{Deserialize, Serialize};

use crate::engine::{ClassifyOptions, FamilyKind, GeneratorSpec};
use crate::error::{Error, Result};
use crate::gpc::GpcRates;
use crate::linalg::PSD_TOL;
use crate::mub::is_supported_dimension;
use crate::phasecov::PhaseCovRates;
use crate::qubit_pauli::PauliRates;
use crate::rates::{RateFunction, DEFAULT_QUAD_TOL};

use super::sweep::SweepConfig;

pub const DEFAULT_GRID: usize = 201;
pub const DEFAULT_ODE_TOL: f64 = 1e-9;
pub const DEFAULT_ORACLE_PAIRS: usize = 10;

/// A bare number is a constant rate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RateSpec {
    Constant(f64),
    Function(RateFunction),
}

impl RateSpec {
    pub fn to_function(&self) -> RateFunction {
        match self {
            RateSpec::Constant(v) => RateFunction::constant(*v),
            RateSpec::Function(f) => f.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_psd")]
    pub psd: f64,
    #[serde(default = "default_quad")]
    pub quadrature: f64,
    #[serde(default = "default_ode")]
    pub ode: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            psd: PSD_TOL,
            quadrature: DEFAULT_QUAD_TOL,
            ode: DEFAULT_ODE_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default = "default_report")]
    pub report: String,
    #[serde(default = "default_timeline")]
    pub timeline: String,
    #[serde(default = "default_sweep")]
    pub sweep: String,
}

impl Default for OutputPaths {
    fn default() -> Self {
        Self {
            report: default_report(),
            timeline: default_timeline(),
            sweep: default_sweep(),
        }
    }
}

fn default_psd() -> f64 {
    PSD_TOL
}
fn default_quad() -> f64 {
    DEFAULT_QUAD_TOL
}
fn default_ode() -> f64 {
    DEFAULT_ODE_TOL
}
fn default_report() -> String {
    "report.json".into()
}
fn default_timeline() -> String {
    "timeline.csv".into()
}
fn default_sweep() -> String {
    "sweep.csv".into()
}
fn default_grid() -> usize {
    DEFAULT_GRID
}
fn default_true() -> bool {
    true
}
fn default_pairs() -> usize {
    DEFAULT_ORACLE_PAIRS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub family: FamilyKind,
    /// Hilbert-space dimension; required for `gpc`, 2 otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    pub rates: Vec<RateSpec>,
    /// Time horizon `T`.
    pub horizon: f64,
    /// Number of grid points on `[0, T]`.
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_true")]
    pub oracles: bool,
    #[serde(default = "default_pairs")]
    pub oracle_pairs: usize,
    /// Also integrate the master equation and report the deviation from the closed form.
    #[serde(default)]
    pub ode_check: bool,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputPaths,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

impl RunConfig {
    pub fn dim(&self) -> usize {
        self.dimension.unwrap_or(2)
    }

    pub fn expected_arity(&self) -> usize {
        match self.family {
            FamilyKind::Gpc => self.dim() + 1,
            _ => 3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match (self.family, self.dimension) {
            (FamilyKind::Gpc, None) => {
                return Err(Error::Config("gpc needs a dimension".into()));
            }
            (FamilyKind::Gpc, Some(d)) if !is_supported_dimension(d) => {
                return Err(Error::UnsupportedDimension(d));
            }
            (FamilyKind::Pauli | FamilyKind::PhaseCov, Some(d)) if d != 2 => {
                return Err(Error::Config(format!(
                    "{} is a qubit family, got dimension {d}",
                    self.family.as_str()
                )));
            }
            _ => {}
        }
        if self.rates.len() != self.expected_arity() {
            return Err(Error::Config(format!(
                "{} needs {} rates, got {}",
                self.family.as_str(),
                self.expected_arity(),
                self.rates.len()
            )));
        }
        for r in &self.rates {
            r.to_function().validate()?;
        }
        if self.grid < 2 {
            return Err(Error::Config(format!("grid needs at least 2 points, got {}", self.grid)));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::Config(format!("horizon must be positive, got {}", self.horizon)));
        }
        let tol = &self.tolerances;
        for (name, v) in [("psd", tol.psd), ("quadrature", tol.quadrature), ("ode", tol.ode)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("tolerance {name} must be positive, got {v}")));
            }
        }
        if let Some(sweep) = &self.sweep {
            sweep.validate(self.expected_arity())?;
        }
        Ok(())
    }

    pub fn rate_functions(&self) -> Vec<RateFunction> {
        self.rates.iter().map(RateSpec::to_function).collect()
    }

    pub fn generator(&self) -> Result<GeneratorSpec> {
        let mut r = self.rate_functions().into_iter();
        let mut next = || r.next().expect("arity validated");
        Ok(match self.family {
            FamilyKind::Pauli => GeneratorSpec::pauli(PauliRates::new(next(), next(), next())?),
            FamilyKind::PhaseCov => {
                GeneratorSpec::phasecov(PhaseCovRates::new(next(), next(), next())?)
            }
            FamilyKind::Gpc => {
                GeneratorSpec::gpc(GpcRates::new(self.dim(), self.rate_functions())?)?
            }
        })
    }

    /// `N` equally spaced times on `[0, T]`.
    pub fn time_grid(&self) -> Vec<f64> {
        let n = self.grid;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.horizon
                } else {
                    self.horizon * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }

    pub fn options(&self) -> ClassifyOptions {
        ClassifyOptions {
            oracles: self.oracles,
            seed: self.seed,
            random_pairs: self.oracle_pairs,
            psd_tol: self.tolerances.psd,
            quad_tol: self.tolerances.quadrature,
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}
