//! Linear solves and the Picard fixed-point driver for the nonlinear mechanical problem.

use std::sync::Arc;

use crate::assembly::{
    assemble_mechanical, assemble_thermal, LinearSystem, MechanicalBc, ThermalBc,
};
use crate::constitutive::MaterialParams;
use crate::error::{Error, Result};
use crate::fe::{FEField, FESpace};
use crate::sparse::EnvelopeCholesky;

/// Relative residual `‖A x − b‖ / ‖b‖` every linear solve must reach.
pub const LINEAR_RESIDUAL_TOL: f64 = 1e-12;
const MAX_REFINEMENT_STEPS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearSolveStats {
    /// `‖A x − b‖₂ / ‖b‖₂` (absolute residual when `b = 0`).
    pub relative_residual: f64,
    /// `‖A x − b‖∞ / (‖A‖∞ ‖x‖∞ + ‖b‖∞)`, the attainable floor for a backward-stable solve.
    pub backward_error: f64,
    pub refinement_steps: usize,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn residual(sys: &LinearSystem, x: &[f64]) -> Vec<f64> {
    sys.matrix
        .matvec(x)
        .iter()
        .zip(&sys.rhs)
        .map(|(ax, b)| b - ax)
        .collect()
}

/// Direct profile-Cholesky solve with iterative refinement.
///
/// Refinement stops once the relative residual is well below [`LINEAR_RESIDUAL_TOL`] or stops
/// improving; a final residual above the tolerance is reported as a breakdown. That happens
/// when the secant factors span many orders of magnitude, typically in a diverging Picard run.
pub fn linear_solve_with_stats(sys: &LinearSystem) -> Result<(Vec<f64>, LinearSolveStats)> {
    let factor = EnvelopeCholesky::factor(&sys.matrix)?;
    let scale = norm(&sys.rhs);
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let mut x = factor.solve(&sys.rhs);
    let mut r = residual(sys, &x);
    let mut rel = norm(&r) / scale;
    let mut steps = 0;
    while rel > 0.01 * LINEAR_RESIDUAL_TOL && steps < MAX_REFINEMENT_STEPS {
        let dx = factor.solve(&r);
        let candidate: Vec<f64> = x.iter().zip(&dx).map(|(a, d)| a + d).collect();
        let r_new = residual(sys, &candidate);
        let rel_new = norm(&r_new) / scale;
        steps += 1;
        if !(rel_new < rel) {
            break;
        }
        x = candidate;
        r = r_new;
        rel = rel_new;
    }
    let a_inf = (0..sys.matrix.dim())
        .map(|i| sys.matrix.row(i).1.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let denom = a_inf * norm_inf(&x) + norm_inf(&sys.rhs);
    let backward_error = if denom > 0.0 {
        norm_inf(&r) / denom
    } else {
        0.0
    };
    if !(rel <= LINEAR_RESIDUAL_TOL) {
        return Err(Error::SolverBreakdown(format!(
            "relative residual {rel:e} above {LINEAR_RESIDUAL_TOL:e} after {steps} refinement steps \
             (backward error {backward_error:.1e})"
        )));
    }
    Ok((
        x,
        LinearSolveStats {
            relative_residual: rel,
            backward_error,
            refinement_steps: steps,
        },
    ))
}

pub fn linear_solve(sys: &LinearSystem) -> Result<Vec<f64>> {
    linear_solve_with_stats(sys).map(|(x, _)| x)
}

/// Temperature field for source `Q` and boundary data `bc`.
pub fn solve_thermal(
    space: Arc<FESpace>,
    params: &MaterialParams,
    source: &(dyn Fn([f64; 2]) -> f64 + Sync),
    bc: &ThermalBc,
) -> Result<FEField> {
    let sys = assemble_thermal(&space, params, source, bc)?;
    let values = linear_solve(&sys)?;
    FEField::new(space, values)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardConfig {
    /// Stop once `‖u^{n+1} − u^n‖_{L²}` falls below this.
    pub tol: f64,
    pub max_iter: usize,
    /// Under-relaxation `ω ∈ (0, 1]`; 1 is plain Picard.
    pub damping: f64,
}

impl Default for PicardConfig {
    fn default() -> Self {
        PicardConfig {
            tol: 1e-8,
            max_iter: 100,
            damping: 1.0,
        }
    }
}

impl PicardConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "picard.tol",
                value: self.tol,
                reason: "must be positive",
            });
        }
        if self.max_iter < 1 {
            return Err(Error::InvalidParameter {
                name: "picard.max_iter",
                value: self.max_iter as f64,
                reason: "must be at least 1",
            });
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "picard.damping",
                value: self.damping,
                reason: "must lie in (0, 1]",
            });
        }
        Ok(())
    }
}

/// History of one Picard solve.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolveReport {
    pub iterations: usize,
    /// `‖u^{n+1} − u^n‖_{L²}` per iteration.
    pub increments: Vec<f64>,
    pub converged: bool,
    /// Quadrature-point clamps of the relaxation factor, summed over all iterations.
    pub clamp_events: usize,
    /// Relative residual of every linear solve, the initializer first.
    pub linear_residuals: Vec<f64>,
    /// Largest `b·t` over the quadrature points in the last assembly.
    pub max_bt: f64,
}

impl SolveReport {
    pub fn last_increment(&self) -> Option<f64> {
        self.increments.last().copied()
    }
}

/// Picard iteration started from the linear (`b = 0`) solution.
///
/// Returns the last iterate and its report whether or not the tolerance was met.
pub fn picard_solve(
    space: Arc<FESpace>,
    params: &MaterialParams,
    theta: &FEField,
    bc: &MechanicalBc,
    cfg: &PicardConfig,
) -> Result<(FEField, SolveReport)> {
    cfg.validate()?;
    let mut report = SolveReport::default();
    let (sys, _) = assemble_mechanical(&space, params, theta, None, bc)?;
    let (u0, stats) = linear_solve_with_stats(&sys)?;
    report.linear_residuals.push(stats.relative_residual);
    let mut u = FEField::new(space.clone(), u0)?;

    for _ in 0..cfg.max_iter {
        let (sys, info) = assemble_mechanical(&space, params, theta, Some(&u), bc)?;
        report.clamp_events += info.clamp_events;
        report.max_bt = info.max_bt;
        let (solution, stats) = linear_solve_with_stats(&sys)?;
        report.linear_residuals.push(stats.relative_residual);
        let next_values: Vec<f64> = if cfg.damping == 1.0 {
            solution
        } else {
            solution
                .iter()
                .zip(&u.values)
                .map(|(s, old)| cfg.damping * s + (1.0 - cfg.damping) * old)
                .collect()
        };
        let next = FEField::new(space.clone(), next_values)?;
        let increment = next.l2_distance(&u)?;
        report.iterations += 1;
        report.increments.push(increment);
        u = next;
        if increment < cfg.tol {
            report.converged = true;
            break;
        }
    }
    Ok((u, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::CsrMatrix;

    #[test]
    fn identity_system() {
        let sys = LinearSystem {
            matrix: CsrMatrix::identity(3),
            rhs: vec![1.0, 2.0, 3.0],
            prescribed: vec![None; 3],
        };
        assert_eq!(linear_solve(&sys).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn small_spd_system() {
        let sys = LinearSystem {
            matrix: CsrMatrix::from_triplets(
                2,
                &[(0, 0, 4.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 3.0)],
            ),
            rhs: vec![1.0, 2.0],
            prescribed: vec![None; 2],
        };
        let x = linear_solve(&sys).unwrap();
        assert!((x[0] - 1.0 / 11.0).abs() <= 4.0 * f64::EPSILON);
        assert!((x[1] - 7.0 / 11.0).abs() <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let sys = LinearSystem {
            matrix: CsrMatrix::identity(2),
            rhs: vec![0.0, 0.0],
            prescribed: vec![None; 2],
        };
        let (x, stats) = linear_solve_with_stats(&sys).unwrap();
        assert_eq!(x, vec![0.0, 0.0]);
        assert_eq!(stats.relative_residual, 0.0);
    }

    #[test]
    fn bad_picard_config_rejected() {
        for cfg in [
            PicardConfig {
                tol: 0.0,
                ..Default::default()
            },
            PicardConfig {
                max_iter: 0,
                ..Default::default()
            },
            PicardConfig {
                damping: 1.5,
                ..Default::default()
            },
        ] {
            assert!(cfg.validate().is_err());
        }
    }
}
