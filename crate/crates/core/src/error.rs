use std::fmt;
use std::io;

use thiserror::Error;

/// Where in the mesh a pointwise constitutive evaluation happened.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraturePoint {
    pub element: usize,
    pub qp: usize,
    pub x: [f64; 2],
}

impl fmt::Display for QuadraturePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "element {} qp {} at ({:.6}, {:.6})",
            self.element, self.qp, self.x[0], self.x[1]
        )
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("operator is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("inadmissible strain: b*t = {bt} reaches the limit 1 - 1e-8 (energy norm t = {t}){}",
        .location.map(|l| format!(" at {l}")).unwrap_or_default())]
    InadmissibleStrain {
        t: f64,
        bt: f64,
        location: Option<QuadraturePoint>,
    },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("crack does not lie on mesh lines: {0}")]
    MisalignedCrack(String),

    #[error("no Dirichlet data for the {0} problem; the system would be singular")]
    EmptyDirichlet(&'static str),

    #[error("finite element spaces do not match: {0}")]
    SpaceMismatch(String),

    #[error("linear solver breakdown: {0}")]
    SolverBreakdown(String),

    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

/// Errors raised while reading a run configuration. `line` is 1-based; 0 means a command-line override.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { key: String, line: usize },

    #[error("line {line}: `{key}` expects {expected}, got `{value}`")]
    TypeMismatch {
        key: String,
        line: usize,
        value: String,
        expected: &'static str,
    },

    #[error("line {line}: `{key}`: {reason}")]
    InvariantViolation {
        key: String,
        line: usize,
        reason: String,
    },

    #[error("line {line}: malformed line, expected `key = value`")]
    Syntax { line: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
