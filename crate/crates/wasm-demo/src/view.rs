//! Plain-Rust computations behind the browser bindings.

use std::f64::consts::FRAC_PI_2;

use strainlimit::config::{RunConfig, ThermalKind};
use strainlimit::constitutive::{strain_from_stress, MaterialConstants, MaterialParams};
use strainlimit::postprocess::{crack_opening_profile, recover_fields, NodalValues};
use strainlimit::runner::{solve_problem, Problem};
use strainlimit::tensor::{energy_norm, structural_tensor, SymTensor2};

/// Largest mesh the page offers; keeps a solve under a few seconds in the browser.
pub const MAX_CELLS: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct ResponseCurve {
    /// Stress magnitudes along the probe direction.
    pub stress: Vec<f64>,
    /// Energy norm of the strain-limiting strain.
    pub strain: Vec<f64>,
    /// Energy norm of the linear strain `𝕂σ`.
    pub linear_strain: Vec<f64>,
    /// Ceiling `1/b`, infinite when `b = 0`.
    pub ceiling: f64,
}

/// Uniaxial stress along the fiber (`along_fiber`) or across it, from 0 to `max_stress`.
pub fn response_curve(
    a: f64,
    b: f64,
    fiber_angle: f64,
    along_fiber: bool,
    max_stress: f64,
    samples: usize,
) -> Result<ResponseCurve, String> {
    let p = MaterialParams::new(MaterialConstants {
        a,
        b,
        fiber_angle,
        ..Default::default()
    })
    .map_err(|e| e.to_string())?;
    if !(max_stress > 0.0 && max_stress.is_finite()) || samples < 2 {
        return Err("need a positive stress range and at least two samples".into());
    }
    let dir = if along_fiber {
        structural_tensor(fiber_angle)
    } else {
        structural_tensor(fiber_angle + FRAC_PI_2)
    };
    let mut curve = ResponseCurve {
        stress: Vec::with_capacity(samples),
        strain: Vec::with_capacity(samples),
        linear_strain: Vec::with_capacity(samples),
        ceiling: if b > 0.0 { 1.0 / b } else { f64::INFINITY },
    };
    for i in 0..samples {
        let s = max_stress * i as f64 / (samples - 1) as f64;
        let sigma: SymTensor2 = dir.scale(s);
        curve.stress.push(s);
        curve
            .strain
            .push(energy_norm(&strain_from_stress(&sigma, &p), p.stiffness()));
        curve
            .linear_strain
            .push(energy_norm(&p.compliance().apply(&sigma), p.stiffness()));
    }
    Ok(curve)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlateInput {
    pub cells: usize,
    pub order: usize,
    pub a: f64,
    pub b: f64,
    pub fiber_angle: f64,
    pub parabolic: bool,
    pub top_uy: f64,
}

impl Default for PlateInput {
    fn default() -> Self {
        PlateInput {
            cells: 16,
            order: 2,
            a: 0.5,
            b: 0.02,
            fiber_angle: 0.0,
            parabolic: false,
            top_uy: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlateView {
    /// `x, y` per mesh vertex.
    pub nodes: Vec<f64>,
    /// Four vertex ids per element.
    pub elements: Vec<u32>,
    /// `u_x, u_y` per vertex.
    pub displacement: Vec<f64>,
    pub stress_norm: Vec<f64>,
    pub strain_norm: Vec<f64>,
    pub temperature: Vec<f64>,
    pub opening_x: Vec<f64>,
    pub opening_jump: Vec<f64>,
    pub tip_node: u32,
    pub iterations: usize,
    pub converged: bool,
    pub clamp_events: usize,
}

fn scalar(fields: &strainlimit::postprocess::FieldMap, key: &str) -> Vec<f64> {
    match &fields[key].values {
        NodalValues::Scalar(v) => v.clone(),
        _ => unreachable!("{key} is a scalar field"),
    }
}

/// Full thermal and Picard solve of the cracked plate, reduced to arrays for drawing.
pub fn solve_plate(input: &PlateInput) -> Result<PlateView, String> {
    if input.cells < 2 || input.cells > MAX_CELLS || !input.cells.is_multiple_of(2) {
        return Err(format!("cells must be even and between 2 and {MAX_CELLS}"));
    }
    let mut cfg = RunConfig::default();
    cfg.mesh.nx = input.cells;
    cfg.mesh.ny = input.cells;
    cfg.element_order = input.order;
    cfg.material.a = input.a;
    cfg.material.b = input.b;
    cfg.material.fiber_angle = input.fiber_angle;
    cfg.thermal_bc.kind = if input.parabolic {
        ThermalKind::Parabolic
    } else {
        ThermalKind::Constant
    };
    cfg.mechanical_bc.top_uy = input.top_uy;
    cfg.picard.damping = if input.a < 0.3 { 0.5 } else { 1.0 };

    let problem = Problem::build(&cfg).map_err(|e| e.to_string())?;
    let sol = solve_problem(&problem, &cfg).map_err(|e| e.to_string())?;
    let fields = recover_fields(&sol.u, &sol.theta, &sol.params).map_err(|e| e.to_string())?;
    let mesh = &problem.mesh;
    let nn = mesh.num_nodes();
    let profile = crack_opening_profile(&sol.u, mesh);
    Ok(PlateView {
        nodes: mesh.nodes.iter().flat_map(|p| *p).collect(),
        elements: mesh
            .elements
            .iter()
            .flat_map(|e| e.map(|n| n as u32))
            .collect(),
        displacement: sol.u.values[..2 * nn].to_vec(),
        stress_norm: scalar(&fields, strainlimit::postprocess::STRESS_NORM),
        strain_norm: scalar(&fields, strainlimit::postprocess::STRAIN_NORM),
        temperature: scalar(&fields, strainlimit::postprocess::TEMPERATURE),
        opening_x: profile.iter().map(|p| p.x).collect(),
        opening_jump: profile.iter().map(|p| p.jump).collect(),
        tip_node: mesh.tip_node.map_or(u32::MAX, |t| t as u32),
        iterations: sol.report.iterations,
        converged: sol.report.converged,
        clamp_events: sol.report.clamp_events,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_stays_below_ceiling_and_under_linear() {
        let c = response_curve(0.5, 0.1, 0.3, true, 1e4, 200).unwrap();
        assert_eq!(c.stress.len(), 200);
        assert!((c.ceiling - 10.0).abs() < 1e-6);
        assert!(c.strain.iter().all(|&t| t < 10.0));
        assert!(c.strain.iter().zip(&c.linear_strain).all(|(s, l)| s <= l));
        assert!(c.strain.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn linear_curve_without_limiting() {
        let c = response_curve(0.5, 0.0, 0.0, false, 5.0, 11).unwrap();
        assert!(c.ceiling.is_infinite());
        assert_eq!(c.strain, c.linear_strain);
    }

    #[test]
    fn bad_curve_input_is_rejected() {
        assert!(response_curve(0.5, 0.1, 0.0, true, -1.0, 10).is_err());
        assert!(response_curve(-0.5, 0.1, 0.0, true, 1.0, 10).is_err());
    }

    #[test]
    fn plate_arrays_are_consistent() {
        let input = PlateInput {
            cells: 8,
            ..PlateInput::default()
        };
        let v = solve_plate(&input).unwrap();
        let nn = v.nodes.len() / 2;
        assert_eq!(v.elements.len(), 4 * 64);
        assert_eq!(v.displacement.len(), 2 * nn);
        assert_eq!(v.stress_norm.len(), nn);
        assert!(v.converged && v.clamp_events == 0);
        assert!((v.tip_node as usize) < nn);
        assert_eq!(v.opening_x.len(), 5);
        assert!(v.opening_jump[..4].iter().all(|&j| j > 0.0));
        assert_eq!(*v.opening_jump.last().unwrap(), 0.0);
    }

    #[test]
    fn plate_rejects_odd_or_large_meshes() {
        for cells in [3, 0, 64] {
            let input = PlateInput {
                cells,
                ..PlateInput::default()
            };
            assert!(solve_plate(&input).is_err());
        }
    }
}
