//! TOML run configuration.
//!
//! ```toml
//! [problem]
//! D = 0.1
//! l = 3.141592653589793
//! T = 4.0
//! modes = [{ n = 2, f = 0.5 }]
//!
//! [measurement]
//! x0 = 0.7853981633974483
//! t1 = 2.0
//! d = 0.25818
//!
//! [forward]
//! alpha = 0.75
//! ```
//!
//! `[inverse]` and `[output]` are optional; every key in them has a default.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::forward::{make_problem, ForwardError, ForwardProblem};
use crate::inverse::{InverseConfig, InverseError, Measurement};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measurement: Option<MeasurementSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forward: Option<ForwardSection>,
    #[serde(default)]
    pub inverse: InverseSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    #[serde(rename = "D")]
    pub diffusion: f64,
    pub l: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub modes: Vec<ModeEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeEntry {
    pub n: u32,
    pub f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementSection {
    pub x0: f64,
    pub t1: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    /// Further observations (t, d) at the same x0, reported as residuals only.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub additional: Vec<PointEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointEntry {
    pub t: f64,
    pub d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForwardSection {
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InverseSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_hi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub use_newton: Option<bool>,
    /// Accuracy of every series evaluation, forward runs included.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
}

impl InverseSection {
    pub fn resolve(&self) -> InverseConfig {
        let d = InverseConfig::default();
        InverseConfig {
            alpha_lo: self.alpha_lo.unwrap_or(d.alpha_lo),
            alpha_hi: self.alpha_hi.unwrap_or(d.alpha_hi),
            root_tol: self.root_tol.unwrap_or(d.root_tol),
            scan_points: self.scan_points.unwrap_or(d.scan_points),
            max_iters: self.max_iters.unwrap_or(d.max_iters),
            use_newton: self.use_newton.unwrap_or(d.use_newton),
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

/// `text` is CSV for tabular commands and `key = value` lines for `invert`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub rel_tol: Option<f64>,
    pub alpha: Option<f64>,
    pub scan_points: Option<usize>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("malformed config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration values are always representable")
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(v) = o.rel_tol {
            self.inverse.rel_tol = Some(v);
        }
        if let Some(v) = o.scan_points {
            self.inverse.scan_points = Some(v);
        }
        if let Some(alpha) = o.alpha {
            self.forward = Some(ForwardSection { alpha });
        }
    }

    /// Checks every section and builds the library objects.
    pub fn prepare(&self) -> Result<Prepared, CliError> {
        let p = &self.problem;
        let problem = make_problem(
            p.diffusion,
            p.l,
            p.modes.iter().map(|m| (m.n, m.f)),
            p.horizon,
        )
        .map_err(|e| key_error("problem", forward_key(&e, "modes"), e))?;

        let inverse = self.inverse.resolve();
        inverse.validate().map_err(|e| match e {
            InverseError::Config { name, .. } => key_error("inverse", name, e),
            other => CliError::Config(other.to_string()),
        })?;

        let alpha = self.forward.map(|f| f.alpha);
        if let Some(a) = alpha {
            if !(a > 0.0 && a <= 1.0) {
                return Err(key_error("forward", "alpha", ForwardError::Order(a)));
            }
        }

        let measurement = self
            .measurement
            .as_ref()
            .map(|m| {
                let probe =
                    Measurement::new(&problem, m.x0, m.t1, m.d.unwrap_or(0.0)).map_err(|e| {
                        let key = match &e {
                            InverseError::Forward(f) => forward_key(f, "x0"),
                            _ => "d",
                        };
                        key_error("measurement", key, e)
                    })?;
                for (i, point) in m.additional.iter().enumerate() {
                    Measurement::new(&problem, m.x0, point.t, point.d).map_err(|e| {
                        CliError::Config(format!("invalid `measurement.additional[{i}]`: {e}"))
                    })?;
                }
                Ok::<_, CliError>((probe, m.d))
            })
            .transpose()?;

        Ok(Prepared {
            problem,
            measurement: measurement.map(|(m, _)| m),
            d: measurement.and_then(|(_, d)| d),
            additional: self
                .measurement
                .as_ref()
                .map(|m| m.additional.iter().map(|p| (p.t, p.d)).collect())
                .unwrap_or_default(),
            inverse,
            alpha,
            output: self.output.clone(),
        })
    }
}

fn forward_key(e: &ForwardError, fallback: &'static str) -> &'static str {
    match e {
        ForwardError::NonPositive { name, .. }
        | ForwardError::NonFinite { name }
        | ForwardError::OutOfDomain { name, .. } => match *name {
            "f_n" => "modes",
            "x" => "x0",
            "t" => "t1",
            other => other,
        },
        _ => fallback,
    }
}

fn key_error(section: &str, key: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("invalid `{section}.{key}`: {e}"))
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub problem: ForwardProblem,
    /// Measurement location with `d` set to 0 when the file omits it.
    measurement: Option<Measurement>,
    pub d: Option<f64>,
    pub additional: Vec<(f64, f64)>,
    pub inverse: InverseConfig,
    pub alpha: Option<f64>,
    pub output: OutputSection,
}

impl Prepared {
    /// The measurement with its observed value; required by `invert` and `curve`.
    pub fn measurement(&self) -> Result<Measurement, CliError> {
        let m = self
            .measurement
            .ok_or_else(|| CliError::Config("missing `[measurement]` section".into()))?;
        let d = self
            .d
            .ok_or_else(|| CliError::Config("missing `measurement.d`".into()))?;
        Ok(m.with_value(d))
    }

    pub fn alpha(&self) -> Result<f64, CliError> {
        self.alpha.ok_or_else(|| {
            CliError::Config(
                "missing `forward.alpha` (set it in the config or pass --alpha)".into(),
            )
        })
    }
}
