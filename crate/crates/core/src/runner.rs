//! Experiment orchestration: thermal solve, Picard mechanical solve, recovery and output.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::assembly::{MechanicalBc, ThermalBc};
use crate::config::{RunConfig, ThermalKind};
use crate::constitutive::MaterialParams;
use crate::error::Result;
use crate::fe::{FEField, FESpace};
use crate::mesh::{build_mesh, CrackedMesh};
use crate::postprocess::{
    crack_opening_profile, recover_fields, run_sweep, write_csv, write_vtk, FieldMap, OpeningPoint,
    SweepParameter, SweepRow, STRAIN_NORM, STRESS_NORM,
};
use crate::solver::{picard_solve, solve_thermal, SolveReport};

/// Mesh and discrete spaces shared by every solve of a configuration.
#[derive(Debug, Clone)]
pub struct Problem {
    pub mesh: Arc<CrackedMesh>,
    pub scalar: Arc<FESpace>,
    pub vector: Arc<FESpace>,
}

impl Problem {
    pub fn build(cfg: &RunConfig) -> Result<Problem> {
        let mesh = Arc::new(build_mesh(cfg.mesh.nx, cfg.mesh.ny, cfg.mesh.crack)?);
        let scalar = Arc::new(FESpace::scalar(mesh.clone(), cfg.element_order)?);
        let vector = Arc::new(FESpace::vector(mesh.clone(), cfg.element_order)?);
        Ok(Problem {
            mesh,
            scalar,
            vector,
        })
    }
}

pub fn thermal_bc(cfg: &RunConfig) -> ThermalBc {
    match cfg.thermal_bc.kind {
        ThermalKind::Constant => ThermalBc::constant(cfg.thermal_bc.theta0),
        ThermalKind::Parabolic => ThermalBc::parabolic(cfg.thermal_bc.c),
    }
}

pub fn mechanical_bc(cfg: &RunConfig) -> MechanicalBc {
    MechanicalBc::plate(cfg.mechanical_bc.top_uy)
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub params: MaterialParams,
    pub theta: FEField,
    pub u: FEField,
    pub report: SolveReport,
}

/// Thermal solve followed by the Picard mechanical solve.
pub fn solve_problem(problem: &Problem, cfg: &RunConfig) -> Result<Solution> {
    let params = MaterialParams::new(cfg.material)?;
    let source = cfg.thermal_bc.source;
    let theta = solve_thermal(
        problem.scalar.clone(),
        &params,
        &move |_| source,
        &thermal_bc(cfg),
    )?;
    let (u, report) = picard_solve(
        problem.vector.clone(),
        &params,
        &theta,
        &mechanical_bc(cfg),
        &cfg.picard,
    )?;
    Ok(Solution {
        params,
        theta,
        u,
        report,
    })
}

/// Everything a single run produces.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub problem: Problem,
    pub solution: Solution,
    pub fields: FieldMap,
    pub opening: Vec<OpeningPoint>,
    pub written: Vec<PathBuf>,
}

impl RunOutcome {
    pub fn converged(&self) -> bool {
        self.solution.report.converged
    }

    pub fn summary(&self) -> RunSummary<'_> {
        RunSummary(self)
    }
}

/// Human-readable summary block printed by the CLI.
pub struct RunSummary<'a>(&'a RunOutcome);

impl fmt::Display for RunSummary<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = self.0;
        let r = &o.solution.report;
        let mesh = &o.problem.mesh;
        writeln!(
            f,
            "mesh             {}x{} cells, {} nodes, Q{}",
            mesh.nx(),
            mesh.ny(),
            mesh.num_nodes(),
            o.problem.vector.order()
        )?;
        writeln!(
            f,
            "dofs             {} temperature, {} displacement",
            o.problem.scalar.num_dofs(),
            o.problem.vector.num_dofs()
        )?;
        writeln!(
            f,
            "picard           {} iterations, converged = {}",
            r.iterations, r.converged
        )?;
        let incs: Vec<String> = r.increments.iter().map(|i| format!("{i:.3e}")).collect();
        writeln!(f, "increments       [{}]", incs.join(", "))?;
        writeln!(f, "clamp events     {}", r.clamp_events)?;
        writeln!(f, "max b*t          {:.6e}", r.max_bt)?;
        for key in [STRESS_NORM, STRAIN_NORM] {
            if let Some(m) = o.fields.get(key).and_then(|f| f.max()) {
                let [x, y] = mesh.nodes[m.node];
                let tip = if Some(m.node) == mesh.tip_node {
                    " (crack tip)"
                } else {
                    ""
                };
                writeln!(
                    f,
                    "max {key:<12} {:.9e} at node {} ({x:.4}, {y:.4}){tip}",
                    m.value, m.node
                )?;
            }
        }
        for path in &o.written {
            writeln!(f, "wrote            {}", path.display())?;
        }
        Ok(())
    }
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    Ok(())
}

/// Solve, recover fields, and write the outputs requested by `cfg`.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    let problem = Problem::build(cfg)?;
    let solution = solve_problem(&problem, cfg)?;
    let fields = recover_fields(&solution.u, &solution.theta, &solution.params)?;
    let opening = crack_opening_profile(&solution.u, &problem.mesh);
    let mut written = Vec::new();
    if let Some(path) = &cfg.outputs.vtk_path {
        ensure_parent(path)?;
        let selected: FieldMap = if cfg.outputs.fields.is_empty() {
            fields.clone()
        } else {
            fields
                .iter()
                .filter(|(k, _)| cfg.outputs.fields.iter().any(|f| f == *k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect()
        };
        write_vtk(&selected, &problem.mesh, path)?;
        written.push(path.clone());
    }
    if let Some(path) = &cfg.outputs.csv_path {
        ensure_parent(path)?;
        let row = SweepRow::from_fields(
            SweepParameter::B,
            cfg.material.b,
            &fields,
            solution.report.converged,
            solution.report.iterations,
        );
        write_csv(&[row], path)?;
        written.push(path.clone());
    }
    if let Some(path) = &cfg.outputs.profile_path {
        ensure_parent(path)?;
        write_csv(&opening, path)?;
        written.push(path.clone());
    }
    Ok(RunOutcome {
        problem,
        solution,
        fields,
        opening,
        written,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FiberOrientation {
    /// `M = e₁ ⊗ e₁`, fibers parallel to the crack.
    Parallel,
    /// `M = e₂ ⊗ e₂`, fibers perpendicular to the crack.
    Perpendicular,
}

impl FiberOrientation {
    pub fn angle(&self) -> f64 {
        match self {
            FiberOrientation::Parallel => 0.0,
            FiberOrientation::Perpendicular => FRAC_PI_2,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            FiberOrientation::Parallel => "m1",
            FiberOrientation::Perpendicular => "m2",
        }
    }
}

fn thermal_label(kind: ThermalKind) -> &'static str {
    match kind {
        ThermalKind::Constant => "const",
        ThermalKind::Parabolic => "parabolic",
    }
}

/// Settings of the fiber × load × parameter sweep grid.
#[derive(Debug, Clone)]
pub struct ReproductionOptions {
    /// Mesh, material, loads and solver settings shared by all cells.
    pub base: RunConfig,
    pub b_values: Vec<f64>,
    /// `a` used during the `b` sweep.
    pub a_for_b_sweep: f64,
    pub a_values: Vec<f64>,
    /// `b` used during the `a` sweep.
    pub b_for_a_sweep: f64,
    /// Damping values tried, in order, for a solve that did not converge undamped.
    pub damping_fallback: Vec<f64>,
    /// CSV files go here when set.
    pub out_dir: Option<PathBuf>,
}

/// Top-edge displacement used by the reproduction grid to open the crack.
pub const REPRODUCTION_TOP_UY: f64 = 0.5;

impl Default for ReproductionOptions {
    fn default() -> Self {
        let mut base = RunConfig::default();
        base.mechanical_bc.top_uy = REPRODUCTION_TOP_UY;
        ReproductionOptions {
            base,
            b_values: vec![0.0, 0.01, 0.02, 0.03],
            a_for_b_sweep: 0.5,
            a_values: vec![0.1, 0.5, 1.0],
            b_for_a_sweep: 0.02,
            damping_fallback: vec![0.5, 0.25],
            out_dir: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CellResult {
    pub fiber: FiberOrientation,
    pub load: ThermalKind,
    pub parameter: SweepParameter,
    pub rows: Vec<SweepRow>,
    /// Max stress norm moves in the expected direction.
    pub stress_trend: bool,
    /// Max strain norm moves in the expected direction.
    pub strain_trend: bool,
    pub csv_path: Option<PathBuf>,
}

impl CellResult {
    pub fn trend_holds(&self) -> bool {
        self.stress_trend && self.strain_trend
    }

    pub fn name(&self) -> String {
        format!(
            "{}_{}_{}sweep",
            self.fiber.label(),
            thermal_label(self.load),
            self.parameter
        )
    }
}

#[derive(Debug, Clone)]
pub struct ReproductionReport {
    pub cells: Vec<CellResult>,
}

impl ReproductionReport {
    pub fn all_pass(&self) -> bool {
        self.cells.iter().all(CellResult::trend_holds)
    }
}

impl fmt::Display for ReproductionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cell in &self.cells {
            let status = if cell.trend_holds() { "PASS" } else { "FAIL" };
            let mark = |ok: bool| if ok { "yes" } else { "no" };
            let expect = match cell.parameter {
                SweepParameter::A => "increasing in a",
                SweepParameter::B => "decreasing in b",
            };
            writeln!(
                f,
                "[{status}] {:<24} maxima {expect}: stress {}, strain {}",
                cell.name(),
                mark(cell.stress_trend),
                mark(cell.strain_trend)
            )?;
            for r in &cell.rows {
                writeln!(
                    f,
                    "         {}={:<6} |sigma|max={:.6e} |eps|max={:.6e} argmax={}/{} iters={} damping={} converged={}",
                    r.parameter,
                    r.value,
                    r.max_stress_norm,
                    r.max_strain_norm,
                    r.stress_argmax_node,
                    r.strain_argmax_node,
                    r.iterations,
                    r.damping,
                    r.converged
                )?;
            }
        }
        Ok(())
    }
}

/// Whether `key(row)` moves strictly in the expected direction along the sweep, with every
/// solve converged: decreasing along a `b` sweep, increasing along an `a` sweep.
pub fn monotone_trend(rows: &[SweepRow], key: impl Fn(&SweepRow) -> f64) -> bool {
    if rows.is_empty() || rows.iter().any(|r| !r.converged) {
        return false;
    }
    rows.windows(2).all(|w| match w[0].parameter {
        SweepParameter::B => key(&w[1]) < key(&w[0]),
        SweepParameter::A => key(&w[1]) > key(&w[0]),
    })
}

/// Like [`run_sweep`], but a value whose solve does not converge is repeated with each damping
/// in `fallback` until one converges. The row records the damping that was used.
pub fn sweep_with_fallback(
    cfg: &RunConfig,
    parameter: SweepParameter,
    values: &[f64],
    fallback: &[f64],
) -> Result<Vec<SweepRow>> {
    let mut rows = run_sweep(cfg, parameter, values)?;
    for row in rows.iter_mut().filter(|r| !r.converged) {
        for &damping in fallback {
            let mut damped = cfg.clone();
            damped.picard.damping = damping;
            let retry = run_sweep(&damped, parameter, &[row.value])?.remove(0);
            let done = retry.converged;
            *row = retry;
            if done {
                break;
            }
        }
    }
    Ok(rows)
}

/// Runs the 2 fiber orientations × 2 thermal loads × (b sweep, a sweep) grid.
pub fn run_reproduction_suite(opts: &ReproductionOptions) -> Result<ReproductionReport> {
    if let Some(dir) = &opts.out_dir {
        fs::create_dir_all(dir)?;
    }
    let mut cells = Vec::new();
    for fiber in [FiberOrientation::Parallel, FiberOrientation::Perpendicular] {
        for load in [ThermalKind::Constant, ThermalKind::Parabolic] {
            for parameter in [SweepParameter::B, SweepParameter::A] {
                let mut cfg = opts.base.clone();
                cfg.material.fiber_angle = fiber.angle();
                cfg.thermal_bc.kind = load;
                let values = match parameter {
                    SweepParameter::B => {
                        cfg.material.a = opts.a_for_b_sweep;
                        &opts.b_values
                    }
                    SweepParameter::A => {
                        cfg.material.b = opts.b_for_a_sweep;
                        &opts.a_values
                    }
                };
                let rows = sweep_with_fallback(&cfg, parameter, values, &opts.damping_fallback)?;
                let mut cell = CellResult {
                    fiber,
                    load,
                    parameter,
                    stress_trend: monotone_trend(&rows, |r| r.max_stress_norm),
                    strain_trend: monotone_trend(&rows, |r| r.max_strain_norm),
                    rows,
                    csv_path: None,
                };
                if let Some(dir) = &opts.out_dir {
                    let path = dir.join(format!("{}.csv", cell.name()));
                    write_csv(&cell.rows, &path)?;
                    cell.csv_path = Some(path);
                }
                cells.push(cell);
            }
        }
    }
    Ok(ReproductionReport { cells })
}
