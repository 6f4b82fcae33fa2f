//! JSON problem configuration and profile loading.
//!
//! A strip problem is described by a single JSON document:
//!
//! ```json
//! {
//!   "a": 1.0,
//!   "s_min": -12.0, "s_max": 12.0,
//!   "kappa": {"type": "bump", "center": 0.0, "halfwidth": 1.0, "amplitude": -0.5},
//!   "alpha": {"type": "const", "value": 0.0},
//!   "alpha0": 0.0,
//!   "end_bc": "neumann",
//!   "ns": 128, "nt": 32
//! }
//! ```
//!
//! Profiles come in four shapes: `const` (a constant value), `bump`
//! (smooth compactly supported bump), `csv` (piecewise-linear samples
//! loaded from a two-column CSV with a header row and strictly increasing
//! abscissae, e.g. `s,kappa`), and `sum`
//! ({"type": "sum", "parts": [...]}). Optional sections extend the schema for
//! specific commands: `fractions` (dk), `trials` (hardy), and `stability`
//! ({"i": [lo, hi], "neg_bump": {...}, "eps_fraction": 0.5}).

use crate::CliError;
use drstrip_core::profile::Profile;
use drstrip_core::strip2d::{EndBc, StripProblem};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ProfileSpec {
    Const {
        value: f64,
    },
    Bump {
        center: f64,
        halfwidth: f64,
        amplitude: f64,
    },
    Csv {
        path: String,
    },
    Sum {
        parts: Vec<ProfileSpec>,
    },
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum EndBcSpec {
    Neumann,
    Dirichlet,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct StabilitySpec {
    /// Support interval I of the admissible negative perturbation.
    pub i: [f64; 2],
    /// Unit-amplitude non-negative bump scaled by -eps inside the audit.
    pub neg_bump: ProfileSpec,
    /// Fraction of the budget epsilon0 actually applied (default 0.5).
    #[serde(default = "default_eps_fraction")]
    pub eps_fraction: f64,
}

fn default_eps_fraction() -> f64 {
    0.5
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct StripConfig {
    pub a: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub kappa: ProfileSpec,
    pub alpha: ProfileSpec,
    pub alpha0: f64,
    pub end_bc: EndBcSpec,
    pub ns: usize,
    pub nt: usize,
    /// Nested truncation fractions for the dk command (default
    /// [0.25, 0.5, 0.75, 1.0]).
    #[serde(default)]
    pub fractions: Option<Vec<f64>>,
    /// Randomized-audit trial count for the hardy command (default 1000).
    #[serde(default)]
    pub trials: Option<usize>,
    /// Stability-audit section for the stability command.
    #[serde(default)]
    pub stability: Option<StabilitySpec>,
}

impl StripConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Validation(format!("cannot read config {}: {}", path.display(), e))
        })?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("config {}: {}", path.display(), e)))
    }
}

/// Load a two-column CSV profile: a header row, then rows `s,value` with
/// strictly increasing s. The second column may be named kappa, alpha, or
/// value.
pub fn profile_from_csv(path: &Path) -> Result<Profile, CliError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| {
        CliError::Validation(format!("cannot read profile {}: {}", path.display(), e))
    })?;
    {
        let headers = rdr
            .headers()
            .map_err(|e| CliError::Validation(format!("{}: {}", path.display(), e)))?;
        if headers.len() < 2 || headers.get(0) != Some("s") {
            return Err(CliError::Validation(format!(
                "{}: expected header `s,<name>`",
                path.display()
            )));
        }
        let second = headers.get(1).unwrap_or("");
        if !matches!(second, "kappa" | "alpha" | "value") {
            return Err(CliError::Validation(format!(
                "{}: second column must be named kappa, alpha, or value",
                path.display()
            )));
        }
    }
    let mut s = Vec::new();
    let mut v = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Validation(format!("{}: {}", path.display(), e)))?;
        let parse = |idx: usize| -> Result<f64, CliError> {
            rec.get(idx)
                .and_then(|t| t.trim().parse::<f64>().ok())
                .ok_or_else(|| {
                    CliError::Validation(format!(
                        "{}: row {}: expected two numeric fields",
                        path.display(),
                        line + 2
                    ))
                })
        };
        s.push(parse(0)?);
        v.push(parse(1)?);
    }
    Profile::samples(s, v).map_err(CliError::from)
}

pub fn build_profile(spec: &ProfileSpec) -> Result<Profile, CliError> {
    match spec {
        ProfileSpec::Const { value } => {
            if !value.is_finite() {
                return Err(CliError::Validation("profile constant must be finite".into()));
            }
            Ok(Profile::Const(*value))
        }
        ProfileSpec::Bump {
            center,
            halfwidth,
            amplitude,
        } => Profile::bump(*center, *halfwidth, *amplitude).map_err(CliError::from),
        ProfileSpec::Csv { path } => profile_from_csv(Path::new(path)),
        ProfileSpec::Sum { parts } => {
            let built = parts.iter().map(build_profile).collect::<Result<_, _>>()?;
            Ok(Profile::Sum(built))
        }
    }
}

pub fn build_problem(cfg: &StripConfig) -> Result<StripProblem, CliError> {
    let problem = StripProblem {
        a: cfg.a,
        s_min: cfg.s_min,
        s_max: cfg.s_max,
        kappa: build_profile(&cfg.kappa)?,
        alpha: build_profile(&cfg.alpha)?,
        alpha0: cfg.alpha0,
        end_bc: match cfg.end_bc {
            EndBcSpec::Neumann => EndBc::Neumann,
            EndBcSpec::Dirichlet => EndBc::Dirichlet,
        },
    };
    problem.validate().map_err(|e| CliError::Validation(e.to_string()))?;
    if cfg.ns < 8 || cfg.nt < 8 {
        return Err(CliError::Validation("mesh sizes ns, nt must be >= 8".into()));
    }
    Ok(problem)
}

/// Robin coefficient argument: a number, or the token `dirichlet`.
#[derive(Clone, Debug, PartialEq)]
pub enum AlphaArg {
    Robin(f64),
    Dirichlet,
}

impl AlphaArg {
    pub fn parse(token: &str) -> Result<Self, CliError> {
        let t = token.trim();
        if t.eq_ignore_ascii_case("dirichlet") {
            return Ok(AlphaArg::Dirichlet);
        }
        t.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(AlphaArg::Robin)
            .ok_or_else(|| {
                CliError::Validation(format!(
                    "alpha must be a finite number or `dirichlet`, got `{}`",
                    token
                ))
            })
    }

    pub fn to_bc(&self) -> drstrip_core::transverse::OuterBc {
        match self {
            AlphaArg::Robin(v) => drstrip_core::transverse::OuterBc::Robin(*v),
            AlphaArg::Dirichlet => drstrip_core::transverse::OuterBc::Dirichlet,
        }
    }

    /// Canonical token used in CSV/JSON output.
    pub fn token(&self) -> String {
        match self {
            AlphaArg::Robin(v) => format!("{}", v),
            AlphaArg::Dirichlet => "dirichlet".into(),
        }
    }
}
