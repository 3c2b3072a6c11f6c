//! Run configuration: line-based `key = value` text with dotted keys and `#` comments.
//!
//! ```text
//! # edge-cracked plate, fibers along x
//! mesh.nx = 32
//! material.b = 0.02
//! thermal_bc.kind = parabolic
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::constitutive::{MaterialConstants, MaterialParams};
use crate::error::{ConfigError, Error};
use crate::mesh::{CrackSpec, MouthEdge};
use crate::postprocess::SweepParameter;
use crate::solver::PicardConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct MeshConfig {
    pub nx: usize,
    pub ny: usize,
    pub crack: Option<CrackSpec>,
}

impl Default for MeshConfig {
    fn default() -> Self {
        MeshConfig {
            nx: 32,
            ny: 32,
            crack: Some(CrackSpec::default()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThermalKind {
    /// `θ = θ₀` on the bottom edge.
    Constant,
    /// `θ = c·x(1 − x)` on the bottom edge.
    Parabolic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalConfig {
    pub kind: ThermalKind,
    pub theta0: f64,
    pub c: f64,
    /// Uniform heat source `Q`.
    pub source: f64,
}

impl Default for ThermalConfig {
    fn default() -> Self {
        ThermalConfig {
            kind: ThermalKind::Constant,
            theta0: 100.0,
            c: 400.0,
            source: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MechanicalConfig {
    /// Vertical displacement `d` imposed on the top edge.
    pub top_uy: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputConfig {
    pub vtk_path: Option<PathBuf>,
    pub csv_path: Option<PathBuf>,
    pub profile_path: Option<PathBuf>,
    /// Fields written to VTK; empty means all.
    pub fields: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mesh: MeshConfig,
    pub element_order: usize,
    pub material: MaterialConstants,
    pub thermal_bc: ThermalConfig,
    pub mechanical_bc: MechanicalConfig,
    pub picard: PicardConfig,
    pub outputs: OutputConfig,
    pub sweep: Option<SweepConfig>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mesh: MeshConfig::default(),
            element_order: 2,
            material: MaterialConstants::default(),
            thermal_bc: ThermalConfig::default(),
            mechanical_bc: MechanicalConfig::default(),
            picard: PicardConfig::default(),
            outputs: OutputConfig::default(),
            sweep: None,
        }
    }
}

pub const KEYS: &[&str] = &[
    "mesh.nx",
    "mesh.ny",
    "mesh.crack",
    "mesh.crack_y",
    "mesh.crack_mouth",
    "mesh.crack_tip_x",
    "element_order",
    "material.lambda",
    "material.mu",
    "material.gamma",
    "material.fiber_angle",
    "material.a",
    "material.b",
    "material.alpha_T",
    "material.k",
    "thermal_bc.kind",
    "thermal_bc.theta0",
    "thermal_bc.c",
    "thermal_bc.Q",
    "mechanical_bc.top_uy",
    "picard.tol",
    "picard.max_iter",
    "picard.damping",
    "outputs.vtk_path",
    "outputs.csv_path",
    "outputs.profile_path",
    "outputs.fields",
    "sweep.parameter",
    "sweep.values",
];

fn parse_value<T: FromStr>(
    key: &str,
    line: usize,
    value: &str,
    expected: &'static str,
) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::TypeMismatch {
        key: key.into(),
        line,
        value: value.into(),
        expected,
    })
}

fn parse_bool(key: &str, line: usize, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "yes" | "on" => Ok(true),
        "false" | "no" | "off" | "none" => Ok(false),
        _ => Err(ConfigError::TypeMismatch {
            key: key.into(),
            line,
            value: value.into(),
            expected: "a boolean",
        }),
    }
}

fn parse_list(key: &str, line: usize, value: &str) -> Result<Vec<f64>, ConfigError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_value(key, line, s, "a comma-separated list of numbers"))
        .collect()
}

fn optional_path(value: &str) -> Option<PathBuf> {
    (!value.is_empty() && value != "none").then(|| PathBuf::from(value))
}

fn strip_quotes(value: &str) -> &str {
    value
        .strip_prefix('"')
        .and_then(|v| v.strip_suffix('"'))
        .unwrap_or(value)
}

/// Parses configuration text; omitted keys keep their defaults.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut builder = ConfigBuilder::default();
    builder.apply_text(text)?;
    builder.finish()
}

/// Accumulates settings from a file and command-line overrides, remembering where each key came from.
#[derive(Debug, Clone, Default)]
pub struct ConfigBuilder {
    config: RunConfig,
    lines: HashMap<&'static str, usize>,
}

impl From<RunConfig> for ConfigBuilder {
    fn from(config: RunConfig) -> Self {
        ConfigBuilder {
            config,
            lines: HashMap::new(),
        }
    }
}

impl ConfigBuilder {
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or(ConfigError::Syntax { line })?;
            self.set(key.trim(), value.trim(), line)?;
        }
        Ok(())
    }

    /// Applies `--key value` pairs; line 0 marks the command line in error messages.
    pub fn apply_overrides<S: AsRef<str>>(&mut self, args: &[S]) -> Result<(), ConfigError> {
        let mut iter = args.iter().map(AsRef::as_ref);
        while let Some(flag) = iter.next() {
            let Some(body) = flag.strip_prefix("--") else {
                return Err(ConfigError::Syntax { line: 0 });
            };
            let (key, value) = match body.split_once('=') {
                Some((k, v)) => (k.to_string(), v.to_string()),
                None => {
                    let v = iter.next().ok_or_else(|| ConfigError::TypeMismatch {
                        key: body.into(),
                        line: 0,
                        value: String::new(),
                        expected: "a value after the flag",
                    })?;
                    (body.to_string(), v.to_string())
                }
            };
            self.set(&key, &value, 0)?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str, line: usize) -> Result<(), ConfigError> {
        let Some(&canonical) = KEYS.iter().find(|k| **k == key) else {
            return Err(ConfigError::UnknownKey {
                key: key.into(),
                line,
            });
        };
        let value = strip_quotes(value);
        let c = &mut self.config;
        let num = |expected| parse_value::<f64>(key, line, value, expected);
        let int = || parse_value::<usize>(key, line, value, "a non-negative integer");
        match canonical {
            "mesh.nx" => c.mesh.nx = int()?,
            "mesh.ny" => c.mesh.ny = int()?,
            "mesh.crack" => {
                c.mesh.crack = if parse_bool(key, line, value)? {
                    Some(c.mesh.crack.unwrap_or_default())
                } else {
                    None
                }
            }
            "mesh.crack_y" => {
                c.mesh.crack.get_or_insert_with(CrackSpec::default).y_line = num("a number")?
            }
            "mesh.crack_mouth" => {
                c.mesh
                    .crack
                    .get_or_insert_with(CrackSpec::default)
                    .mouth_edge = match value {
                    "left" => MouthEdge::Left,
                    "right" => MouthEdge::Right,
                    _ => {
                        return Err(ConfigError::TypeMismatch {
                            key: key.into(),
                            line,
                            value: value.into(),
                            expected: "`left` or `right`",
                        })
                    }
                }
            }
            "mesh.crack_tip_x" => {
                c.mesh.crack.get_or_insert_with(CrackSpec::default).tip_x = num("a number")?
            }
            "element_order" => c.element_order = int()?,
            "material.lambda" => c.material.lambda = num("a number")?,
            "material.mu" => c.material.mu = num("a number")?,
            "material.gamma" => c.material.gamma = num("a number")?,
            "material.fiber_angle" => c.material.fiber_angle = num("a number (radians)")?,
            "material.a" => c.material.a = num("a number")?,
            "material.b" => c.material.b = num("a number")?,
            "material.alpha_T" => c.material.alpha_t = num("a number")?,
            "material.k" => c.material.k = num("a number")?,
            "thermal_bc.kind" => {
                c.thermal_bc.kind = match value {
                    "constant" => ThermalKind::Constant,
                    "parabolic" => ThermalKind::Parabolic,
                    _ => {
                        return Err(ConfigError::TypeMismatch {
                            key: key.into(),
                            line,
                            value: value.into(),
                            expected: "`constant` or `parabolic`",
                        })
                    }
                }
            }
            "thermal_bc.theta0" => c.thermal_bc.theta0 = num("a number")?,
            "thermal_bc.c" => c.thermal_bc.c = num("a number")?,
            "thermal_bc.Q" => c.thermal_bc.source = num("a number")?,
            "mechanical_bc.top_uy" => c.mechanical_bc.top_uy = num("a number")?,
            "picard.tol" => c.picard.tol = num("a number")?,
            "picard.max_iter" => c.picard.max_iter = int()?,
            "picard.damping" => c.picard.damping = num("a number")?,
            "outputs.vtk_path" => c.outputs.vtk_path = optional_path(value),
            "outputs.csv_path" => c.outputs.csv_path = optional_path(value),
            "outputs.profile_path" => c.outputs.profile_path = optional_path(value),
            "outputs.fields" => {
                c.outputs.fields = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(String::from)
                    .collect()
            }
            "sweep.parameter" => {
                let parameter = value.parse().map_err(|_| ConfigError::TypeMismatch {
                    key: key.into(),
                    line,
                    value: value.into(),
                    expected: "`a` or `b`",
                })?;
                c.sweep
                    .get_or_insert_with(|| SweepConfig {
                        parameter,
                        values: Vec::new(),
                    })
                    .parameter = parameter;
            }
            "sweep.values" => {
                let values = parse_list(key, line, value)?;
                c.sweep
                    .get_or_insert_with(|| SweepConfig {
                        parameter: SweepParameter::B,
                        values: Vec::new(),
                    })
                    .values = values;
            }
            _ => unreachable!("key table and match arms out of sync: {canonical}"),
        }
        self.lines.insert(canonical, line);
        Ok(())
    }

    fn violation(&self, key: &'static str, reason: impl Into<String>) -> ConfigError {
        ConfigError::InvariantViolation {
            key: key.into(),
            line: self.lines.get(key).copied().unwrap_or(0),
            reason: reason.into(),
        }
    }

    /// Validates the accumulated settings.
    pub fn finish(self) -> Result<RunConfig, ConfigError> {
        let c = &self.config;
        if c.mesh.nx < 2 {
            return Err(self.violation("mesh.nx", "need at least 2 cells"));
        }
        if c.mesh.ny < 2 {
            return Err(self.violation("mesh.ny", "need at least 2 cells"));
        }
        if let Some(crack) = &c.mesh.crack {
            if !(crack.y_line > 0.0 && crack.y_line < 1.0) {
                return Err(
                    self.violation("mesh.crack_y", "crack line must lie strictly inside (0, 1)")
                );
            }
            if !(crack.tip_x > 0.0 && crack.tip_x < 1.0) {
                return Err(self.violation(
                    "mesh.crack_tip_x",
                    "crack tip must lie strictly inside (0, 1)",
                ));
            }
            let aligned =
                |v: f64, n: usize| ((v * n as f64) - (v * n as f64).round()).abs() <= 1e-9;
            if !aligned(crack.y_line, c.mesh.ny) {
                return Err(self.violation(
                    "mesh.ny",
                    format!(
                        "crack line y = {} is not a mesh line for ny = {}",
                        crack.y_line, c.mesh.ny
                    ),
                ));
            }
            if !aligned(crack.tip_x, c.mesh.nx) {
                return Err(self.violation(
                    "mesh.nx",
                    format!(
                        "crack tip x = {} is not a mesh line for nx = {}",
                        crack.tip_x, c.mesh.nx
                    ),
                ));
            }
        }
        if !(1..=2).contains(&c.element_order) {
            return Err(self.violation("element_order", "must be 1 or 2"));
        }
        match MaterialParams::new(c.material) {
            Ok(_) => {}
            Err(Error::InvalidParameter { name, reason, .. }) => {
                let key = match name {
                    "alpha_T" => "material.alpha_T",
                    "lambda" => "material.lambda",
                    "mu" => "material.mu",
                    "gamma" => "material.gamma",
                    "fiber_angle" => "material.fiber_angle",
                    "a" => "material.a",
                    "b" => "material.b",
                    _ => "material.k",
                };
                return Err(self.violation(key, reason));
            }
            Err(_) => {
                return Err(self.violation("material.gamma", "stiffness is not positive definite"))
            }
        }
        for (key, v) in [
            ("thermal_bc.theta0", c.thermal_bc.theta0),
            ("thermal_bc.c", c.thermal_bc.c),
            ("thermal_bc.Q", c.thermal_bc.source),
            ("mechanical_bc.top_uy", c.mechanical_bc.top_uy),
        ] {
            if !v.is_finite() {
                return Err(self.violation(key, "must be finite"));
            }
        }
        if let Err(Error::InvalidParameter { name, reason, .. }) = c.picard.validate() {
            let key = match name {
                "picard.tol" => "picard.tol",
                "picard.max_iter" => "picard.max_iter",
                _ => "picard.damping",
            };
            return Err(self.violation(key, reason));
        }
        if let Some(s) = &c.sweep {
            if s.values.is_empty() {
                return Err(self.violation("sweep.values", "need at least one value"));
            }
            let ok = s.values.iter().all(|&v| {
                v.is_finite()
                    && match s.parameter {
                        SweepParameter::A => v > 0.0,
                        SweepParameter::B => v >= 0.0,
                    }
            });
            if !ok {
                return Err(self.violation(
                    "sweep.values",
                    format!("invalid value for parameter {}", s.parameter),
                ));
            }
        }
        Ok(self.config)
    }
}

fn path_text(p: &Option<PathBuf>) -> String {
    p.as_ref()
        .map_or_else(|| "none".to_string(), |p| p.display().to_string())
}

impl RunConfig {
    /// Text form that [`parse_config`] reads back to an identical configuration.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("mesh.nx", self.mesh.nx.to_string());
        kv("mesh.ny", self.mesh.ny.to_string());
        kv("mesh.crack", self.mesh.crack.is_some().to_string());
        if let Some(crack) = &self.mesh.crack {
            kv("mesh.crack_y", crack.y_line.to_string());
            kv("mesh.crack_mouth", crack.mouth_edge.to_string());
            kv("mesh.crack_tip_x", crack.tip_x.to_string());
        }
        kv("element_order", self.element_order.to_string());
        let m = &self.material;
        kv("material.lambda", m.lambda.to_string());
        kv("material.mu", m.mu.to_string());
        kv("material.gamma", m.gamma.to_string());
        kv("material.fiber_angle", m.fiber_angle.to_string());
        kv("material.a", m.a.to_string());
        kv("material.b", m.b.to_string());
        kv("material.alpha_T", m.alpha_t.to_string());
        kv("material.k", m.k.to_string());
        kv(
            "thermal_bc.kind",
            match self.thermal_bc.kind {
                ThermalKind::Constant => "constant",
                ThermalKind::Parabolic => "parabolic",
            }
            .into(),
        );
        kv("thermal_bc.theta0", self.thermal_bc.theta0.to_string());
        kv("thermal_bc.c", self.thermal_bc.c.to_string());
        kv("thermal_bc.Q", self.thermal_bc.source.to_string());
        kv(
            "mechanical_bc.top_uy",
            self.mechanical_bc.top_uy.to_string(),
        );
        kv("picard.tol", self.picard.tol.to_string());
        kv("picard.max_iter", self.picard.max_iter.to_string());
        kv("picard.damping", self.picard.damping.to_string());
        kv("outputs.vtk_path", path_text(&self.outputs.vtk_path));
        kv("outputs.csv_path", path_text(&self.outputs.csv_path));
        kv(
            "outputs.profile_path",
            path_text(&self.outputs.profile_path),
        );
        kv("outputs.fields", self.outputs.fields.join(","));
        if let Some(sweep) = &self.sweep {
            kv("sweep.parameter", sweep.parameter.to_string());
            kv(
                "sweep.values",
                sweep
                    .values
                    .iter()
                    .map(f64::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
            );
        }
        s
    }
}
