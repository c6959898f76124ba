//! Run configuration: a flat `key = value` format shared by config files,
//! command-line overrides and the `#` headers of emitted files.
//!
//! Precedence is flag over file over built-in default. Defaults describe the
//! Ohmic zero-temperature baseline (`ε = 1`, `Δ = 0.05`, `ω_c = α_c = 1`,
//! `s = r = 1`, `G = 0.4`, `F = 0.03`) on 60 log-spaced τ points in `[0.05, 3]`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::analysis::{tau_grid, Refinement, SweepParameter, TauSpacing};
use crate::decay::{FormulaOptions, ModelConfig, SpinJ, SquareTermConvention};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;
use crate::spectral::{BathPair, SpectralParams, Temperature};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Curve,
    Sweep,
    Transitions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// Single two-level system.
    Sb,
    /// Collective spin `j`.
    Lsb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Output {
    Stdout,
    Path(PathBuf),
}

macro_rules! keyword_enum {
    ($ty:ty, $what:literal, { $($variant:path => $text:literal),+ $(,)? }) => {
        impl $ty {
            pub fn as_str(&self) -> &'static str {
                match self {
                    $($variant => $text,)+
                }
            }
        }

        impl FromStr for $ty {
            type Err = String;

            fn from_str(s: &str) -> std::result::Result<Self, String> {
                match s {
                    $($text => Ok($variant),)+
                    other => Err(format!("unknown {} `{}`", $what, other)),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

keyword_enum!(Command, "command", {
    Command::Curve => "curve",
    Command::Sweep => "sweep",
    Command::Transitions => "transitions",
});

keyword_enum!(Model, "model", { Model::Sb => "sb", Model::Lsb => "lsb" });

keyword_enum!(OutputFormat, "format", {
    OutputFormat::Csv => "csv",
    OutputFormat::Json => "json",
});

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub command: Command,
    pub model: Model,
    pub epsilon: f64,
    pub delta: f64,
    pub strong_coupling: f64,
    pub strong_ohmicity: f64,
    pub strong_cutoff: f64,
    pub weak_coupling: f64,
    pub weak_ohmicity: f64,
    pub weak_cutoff: f64,
    pub spin_j: Option<f64>,
    /// `None` is zero temperature.
    pub beta: Option<f64>,
    pub tau_min: f64,
    pub tau_max: f64,
    pub tau_steps: usize,
    pub tau_spacing: TauSpacing,
    pub sweep_param: Option<SweepParameter>,
    pub sweep_values: Option<Vec<f64>>,
    pub refinement: Refinement,
    pub survival: bool,
    pub paper_literal: bool,
    pub square_term: SquareTermConvention,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub format: OutputFormat,
    pub out: Output,
}

/// Recognised keys in canonical order. `out` is last so that [`RunSpec::header_pairs`]
/// can drop it.
pub const KEYS: &[&str] = &[
    "command",
    "model",
    "eps",
    "delta",
    "G",
    "s",
    "wc",
    "F",
    "r",
    "ac",
    "j",
    "beta",
    "tau-min",
    "tau-max",
    "tau-steps",
    "tau-spacing",
    "sweep-param",
    "sweep-values",
    "refinement",
    "survival",
    "paper-literal",
    "square-term",
    "abs-tol",
    "rel-tol",
    "max-subdivisions",
    "format",
    "out",
];

fn config_error(key: &str, message: impl fmt::Display) -> Error {
    Error::Configuration(format!("`{key}`: {message}"))
}

/// Parses `key = value` lines. `#` starts a comment; blank lines are ignored.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Configuration(format!(
                "line {}: expected `key = value`, got `{line}`",
                n + 1
            ))
        })?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(config_error(key, "unknown key"));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

struct Lookup<'a> {
    map: &'a BTreeMap<String, String>,
}

impl Lookup<'_> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    fn parse<T: FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: fmt::Display,
    {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|e| config_error(key, format!("cannot parse `{v}`: {e}"))),
        }
    }

    fn optional<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        match self.raw(key) {
            None | Some("") => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| config_error(key, format!("cannot parse `{v}`: {e}"))),
        }
    }

    fn flag(&self, key: &str) -> Result<bool> {
        match self.raw(key) {
            None => Ok(false),
            Some("true") | Some("1") | Some("yes") => Ok(true),
            Some("false") | Some("0") | Some("no") => Ok(false),
            Some(v) => Err(config_error(
                key,
                format!("expected true or false, got `{v}`"),
            )),
        }
    }
}

/// Builds a [`RunSpec`] from an optional config file and command-line
/// overrides, the latter given as `(key, value)` pairs in config syntax.
pub fn parse_config(file_text: Option<&str>, overrides: &[(String, String)]) -> Result<RunSpec> {
    let mut map = match file_text {
        Some(text) => parse_config_text(text)?,
        None => BTreeMap::new(),
    };
    for (key, value) in overrides {
        if !KEYS.contains(&key.as_str()) {
            return Err(config_error(key, "unknown key"));
        }
        map.insert(key.clone(), value.clone());
    }
    RunSpec::from_map(&map)
}

fn square_term_name(c: SquareTermConvention) -> &'static str {
    match c {
        SquareTermConvention::DecayRateDisplay => "decay",
        SquareTermConvention::SurvivalDisplay => "survival",
    }
}

impl RunSpec {
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        let get = Lookup { map };
        let text = |key: &str, default: &str| get.raw(key).unwrap_or(default).to_string();

        let command: Command = text("command", "curve")
            .parse()
            .map_err(|e| config_error("command", e))?;
        let model: Model = text("model", "sb")
            .parse()
            .map_err(|e| config_error("model", e))?;
        let spin_j: Option<f64> = get.optional("j")?;
        match (model, spin_j) {
            (Model::Lsb, None) => return Err(config_error("j", "required for model lsb")),
            (Model::Sb, Some(_)) => return Err(config_error("j", "only valid for model lsb")),
            _ => {}
        }

        let beta = match get.parse("beta", f64::INFINITY)? {
            b if b == f64::INFINITY => None,
            b => Some(b),
        };

        let sweep_param = match get.raw("sweep-param") {
            None | Some("") => None,
            Some(v) => Some(
                v.parse::<SweepParameter>()
                    .map_err(|e| config_error("sweep-param", e))?,
            ),
        };
        let sweep_values = match get.raw("sweep-values") {
            None | Some("") => None,
            Some(v) => Some(
                v.split(',')
                    .map(|x| {
                        x.trim().parse::<f64>().map_err(|e| {
                            config_error("sweep-values", format!("cannot parse `{x}`: {e}"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        if command == Command::Sweep {
            if sweep_param.is_none() {
                return Err(config_error("sweep-param", "required for sweep"));
            }
            if sweep_values.as_ref().is_none_or(Vec::is_empty) {
                return Err(config_error("sweep-values", "required for sweep"));
            }
        }

        let refinement = match text("refinement", "parabolic").as_str() {
            "parabolic" => Refinement::Parabolic,
            "grid_only" => Refinement::GridOnly,
            other => {
                return Err(config_error(
                    "refinement",
                    format!("unknown value `{other}`"),
                ))
            }
        };
        let square_term = match text("square-term", "decay").as_str() {
            "decay" => SquareTermConvention::DecayRateDisplay,
            "survival" => SquareTermConvention::SurvivalDisplay,
            other => {
                return Err(config_error(
                    "square-term",
                    format!("unknown value `{other}`"),
                ))
            }
        };
        let out = match text("out", "-").as_str() {
            "-" => Output::Stdout,
            path => Output::Path(PathBuf::from(path)),
        };

        let spec = Self {
            command,
            model,
            epsilon: get.parse("eps", 1.0)?,
            delta: get.parse("delta", 0.05)?,
            strong_coupling: get.parse("G", 0.4)?,
            strong_ohmicity: get.parse("s", 1.0)?,
            strong_cutoff: get.parse("wc", 1.0)?,
            weak_coupling: get.parse("F", 0.03)?,
            weak_ohmicity: get.parse("r", 1.0)?,
            weak_cutoff: get.parse("ac", 1.0)?,
            spin_j,
            beta,
            tau_min: get.parse("tau-min", 0.05)?,
            tau_max: get.parse("tau-max", 3.0)?,
            tau_steps: get.parse("tau-steps", 60)?,
            tau_spacing: text("tau-spacing", "log")
                .parse()
                .map_err(|e: Error| config_error("tau-spacing", e))?,
            sweep_param,
            sweep_values,
            refinement,
            survival: get.flag("survival")?,
            paper_literal: get.flag("paper-literal")?,
            square_term,
            abs_tol: get.parse("abs-tol", QuadratureSpec::DEFAULT_ABS_TOL)?,
            rel_tol: get.parse("rel-tol", QuadratureSpec::DEFAULT_REL_TOL)?,
            max_subdivisions: get
                .parse("max-subdivisions", QuadratureSpec::DEFAULT_MAX_SUBDIVISIONS)?,
            format: text("format", "csv")
                .parse()
                .map_err(|e| config_error("format", e))?,
            out,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.tau_min.is_nan() || self.tau_min <= 0.0 {
            return Err(config_error(
                "tau-min",
                format!("must be positive, got {}", self.tau_min),
            ));
        }
        if self.tau_steps == 0 {
            return Err(config_error("tau-steps", "must be at least 1"));
        }
        if self.tau_steps > 1 && (self.tau_max.is_nan() || self.tau_max <= self.tau_min) {
            return Err(config_error(
                "tau-max",
                format!("must exceed tau-min ({} <= {})", self.tau_max, self.tau_min),
            ));
        }
        if self.sweep_param == Some(SweepParameter::J) && self.model == Model::Sb {
            return Err(config_error(
                "sweep-param",
                "j can only be swept for model lsb",
            ));
        }
        // Surface physical-parameter errors with their key names.
        self.quadrature()?;
        self.model_config()?;
        Ok(())
    }

    pub fn quadrature(&self) -> Result<QuadratureSpec> {
        QuadratureSpec::new(self.abs_tol, self.rel_tol, self.max_subdivisions).map_err(|e| {
            let key = match e {
                Error::InvalidParameter {
                    name: "abs_tol", ..
                } => "abs-tol",
                Error::InvalidParameter {
                    name: "rel_tol", ..
                } => "rel-tol",
                _ => "max-subdivisions",
            };
            config_error(key, e)
        })
    }

    pub fn model_config(&self) -> Result<ModelConfig> {
        let strong = SpectralParams::new(
            self.strong_coupling,
            self.strong_ohmicity,
            self.strong_cutoff,
        )
        .map_err(|e| config_error(strong_key(&e), e))?;
        let weak = SpectralParams::new(self.weak_coupling, self.weak_ohmicity, self.weak_cutoff)
            .map_err(|e| config_error(weak_key(&e), e))?;
        let temperature = match self.beta {
            None => Temperature::Zero,
            Some(b) => Temperature::from_beta(b).map_err(|e| config_error("beta", e))?,
        };
        let spin_j = self
            .spin_j
            .map(SpinJ::new)
            .transpose()
            .map_err(|e| config_error("j", e))?;
        let cfg = ModelConfig::new(
            self.epsilon,
            self.delta,
            BathPair::new(strong, weak),
            temperature,
            spin_j,
        )
        .map_err(|e| match e {
            Error::InvalidParameter {
                name: "epsilon", ..
            } => config_error("eps", e),
            Error::InvalidParameter { name: "delta", .. } => config_error("delta", e),
            other => other,
        })?;
        Ok(cfg.with_options(FormulaOptions {
            literal_envelope: self.paper_literal,
            square_term: self.square_term,
        }))
    }

    pub fn tau_grid(&self) -> Result<Vec<f64>> {
        tau_grid(self.tau_min, self.tau_max, self.tau_steps, self.tau_spacing)
    }

    /// All keys with their values, in canonical order.
    pub fn to_pairs(&self) -> Vec<(&'static str, String)> {
        let mut pairs: Vec<(&'static str, String)> = vec![
            ("command", self.command.to_string()),
            ("model", self.model.to_string()),
            ("eps", self.epsilon.to_string()),
            ("delta", self.delta.to_string()),
            ("G", self.strong_coupling.to_string()),
            ("s", self.strong_ohmicity.to_string()),
            ("wc", self.strong_cutoff.to_string()),
            ("F", self.weak_coupling.to_string()),
            ("r", self.weak_ohmicity.to_string()),
            ("ac", self.weak_cutoff.to_string()),
        ];
        if let Some(j) = self.spin_j {
            pairs.push(("j", j.to_string()));
        }
        pairs.push(("beta", self.beta.unwrap_or(f64::INFINITY).to_string()));
        pairs.extend([
            ("tau-min", self.tau_min.to_string()),
            ("tau-max", self.tau_max.to_string()),
            ("tau-steps", self.tau_steps.to_string()),
            ("tau-spacing", self.tau_spacing.as_str().to_string()),
        ]);
        if let Some(p) = self.sweep_param {
            pairs.push(("sweep-param", p.to_string()));
        }
        if let Some(v) = &self.sweep_values {
            let joined: Vec<String> = v.iter().map(f64::to_string).collect();
            pairs.push(("sweep-values", joined.join(",")));
        }
        pairs.extend([
            ("refinement", self.refinement.as_str().to_string()),
            ("survival", self.survival.to_string()),
            ("paper-literal", self.paper_literal.to_string()),
            (
                "square-term",
                square_term_name(self.square_term).to_string(),
            ),
            ("abs-tol", self.abs_tol.to_string()),
            ("rel-tol", self.rel_tol.to_string()),
            ("max-subdivisions", self.max_subdivisions.to_string()),
            ("format", self.format.to_string()),
        ]);
        pairs.push((
            "out",
            match &self.out {
                Output::Stdout => "-".to_string(),
                Output::Path(p) => p.display().to_string(),
            },
        ));
        pairs
    }

    /// Parameters recorded in emitted files: everything except the destination.
    pub fn header_pairs(&self) -> Vec<(&'static str, String)> {
        self.to_pairs()
            .into_iter()
            .filter(|(k, _)| *k != "out")
            .collect()
    }

    /// Config-file form; parses back to an identical spec.
    pub fn to_config_string(&self) -> String {
        self.to_pairs()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }
}

fn strong_key(e: &Error) -> &'static str {
    match e {
        Error::InvalidParameter {
            name: "strength", ..
        } => "G",
        Error::InvalidParameter {
            name: "ohmicity", ..
        } => "s",
        _ => "wc",
    }
}

fn weak_key(e: &Error) -> &'static str {
    match e {
        Error::InvalidParameter {
            name: "strength", ..
        } => "F",
        Error::InvalidParameter {
            name: "ohmicity", ..
        } => "r",
        _ => "ac",
    }
}
