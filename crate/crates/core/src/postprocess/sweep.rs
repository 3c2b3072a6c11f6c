use std::fmt;
use std::str::FromStr;

use super::{
    recover_fields, FieldMap, STRAIN_NORM, STRAIN_PRINCIPAL_MAX, STRAIN_PRINCIPAL_MIN, STRESS_NORM,
    STRESS_PRINCIPAL_MAX, STRESS_PRINCIPAL_MIN,
};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::runner::{solve_problem, Problem};

/// Strain-limiting parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepParameter {
    A,
    #[default]
    B,
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParameter::A => "a",
            SweepParameter::B => "b",
        })
    }
}

impl FromStr for SweepParameter {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "a" => Ok(SweepParameter::A),
            "b" => Ok(SweepParameter::B),
            _ => Err(format!(
                "unknown sweep parameter `{s}` (expected `a` or `b`)"
            )),
        }
    }
}

impl SweepParameter {
    pub fn apply(&self, cfg: &mut RunConfig, value: f64) {
        match self {
            SweepParameter::A => cfg.material.a = value,
            SweepParameter::B => cfg.material.b = value,
        }
    }
}

/// Headline extrema of one solve in a sweep. Frobenius norms are the headline scalars.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepRow {
    pub parameter: SweepParameter,
    pub value: f64,
    pub max_stress_norm: f64,
    pub max_strain_norm: f64,
    pub max_principal_stress: f64,
    pub min_principal_stress: f64,
    pub max_principal_strain: f64,
    pub min_principal_strain: f64,
    pub stress_argmax_node: usize,
    pub strain_argmax_node: usize,
    pub converged: bool,
    pub iterations: usize,
    /// Picard damping the solve ran with.
    pub damping: f64,
}

impl SweepRow {
    pub fn from_fields(
        parameter: SweepParameter,
        value: f64,
        fields: &FieldMap,
        converged: bool,
        iterations: usize,
    ) -> Self {
        let max = |k: &str| fields[k].max().expect("scalar field");
        let min = |k: &str| fields[k].min().expect("scalar field");
        let stress = max(STRESS_NORM);
        let strain = max(STRAIN_NORM);
        SweepRow {
            parameter,
            value,
            max_stress_norm: stress.value,
            max_strain_norm: strain.value,
            max_principal_stress: max(STRESS_PRINCIPAL_MAX).value,
            min_principal_stress: min(STRESS_PRINCIPAL_MIN).value,
            max_principal_strain: max(STRAIN_PRINCIPAL_MAX).value,
            min_principal_strain: min(STRAIN_PRINCIPAL_MIN).value,
            stress_argmax_node: stress.node,
            strain_argmax_node: strain.node,
            converged,
            iterations,
            damping: 1.0,
        }
    }

    fn failed(parameter: SweepParameter, value: f64, iterations: usize) -> Self {
        SweepRow {
            parameter,
            value,
            max_stress_norm: f64::NAN,
            max_strain_norm: f64::NAN,
            max_principal_stress: f64::NAN,
            min_principal_stress: f64::NAN,
            max_principal_strain: f64::NAN,
            min_principal_strain: f64::NAN,
            stress_argmax_node: usize::MAX,
            strain_argmax_node: usize::MAX,
            converged: false,
            iterations,
            damping: 1.0,
        }
    }
}

/// One full solve per value on the same mesh; rows come back in input order.
///
/// Non-converged solves are reported with `converged = false`. When a solve breaks down or its
/// fields cannot be recovered, the extrema are NaN.
pub fn run_sweep(
    base: &RunConfig,
    parameter: SweepParameter,
    values: &[f64],
) -> Result<Vec<SweepRow>> {
    let problem = Problem::build(base)?;
    let one = |&value: &f64| -> Result<SweepRow> {
        let mut cfg = base.clone();
        parameter.apply(&mut cfg, value);
        let sol = match solve_problem(&problem, &cfg) {
            Ok(sol) => sol,
            Err(Error::SolverBreakdown(_) | Error::InadmissibleStrain { .. }) => {
                return Ok(SweepRow {
                    damping: cfg.picard.damping,
                    ..SweepRow::failed(parameter, value, 0)
                })
            }
            Err(e) => return Err(e),
        };
        let converged = sol.report.converged;
        let iterations = sol.report.iterations;
        let row = match recover_fields(&sol.u, &sol.theta, &sol.params) {
            Ok(fields) => SweepRow::from_fields(parameter, value, &fields, converged, iterations),
            Err(_) => SweepRow::failed(parameter, value, iterations),
        };
        Ok(SweepRow {
            damping: cfg.picard.damping,
            ..row
        })
    };
    #[cfg(feature = "parallel")]
    let rows = {
        use rayon::prelude::*;
        values.par_iter().map(one).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows = values.iter().map(one).collect();
    rows
}
