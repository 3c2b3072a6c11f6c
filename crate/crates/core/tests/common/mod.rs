#![allow(dead_code)]

use rand::Rng;
use strainlimit::constitutive::{MaterialConstants, MaterialParams};
use strainlimit::tensor::{energy_norm, SymTensor2};

pub fn material(a: f64, b: f64, fiber_angle: f64) -> MaterialParams {
    MaterialParams::new(MaterialConstants {
        a,
        b,
        fiber_angle,
        ..Default::default()
    })
    .expect("valid material")
}

/// Direction uniform on the unit sphere of Mandel vectors.
pub fn random_direction<R: Rng>(rng: &mut R) -> SymTensor2 {
    loop {
        let m = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let n2: f64 = m.iter().map(|x| x * x).sum();
        if n2 > 1e-6 && n2 <= 1.0 {
            let n = n2.sqrt();
            return SymTensor2::from_mandel(m[0] / n, m[1] / n, m[2] / n);
        }
    }
}

/// Strain with `b·t` drawn uniformly from `(0, max_bt]`.
pub fn random_admissible_strain<R: Rng>(
    rng: &mut R,
    p: &MaterialParams,
    max_bt: f64,
) -> SymTensor2 {
    let dir = random_direction(rng);
    let t_dir = energy_norm(&dir, p.stiffness());
    let bt = rng.gen_range(1e-6..=max_bt);
    dir.scale(bt / (p.b() * t_dir))
}

/// Tensor with norm log-uniform in `[lo, hi]`.
pub fn random_log_scaled<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> SymTensor2 {
    let mag = (rng.gen_range(lo.ln()..=hi.ln())).exp();
    random_direction(rng).scale(mag)
}

pub fn rel_diff(a: &SymTensor2, b: &SymTensor2) -> f64 {
    (*a - *b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

use std::f64::consts::PI;
use std::sync::Arc;

use strainlimit::assembly::{MechanicalBc, ThermalBc};
use strainlimit::fe::{FEField, FESpace};
use strainlimit::mesh::{build_grid, BoundaryTag};
use strainlimit::postprocess::{recover_fields, STRAIN};
use strainlimit::solver::{picard_solve, solve_thermal, PicardConfig, SolveReport};

pub const OUTER: [BoundaryTag; 4] = [
    BoundaryTag::Bottom,
    BoundaryTag::Right,
    BoundaryTag::Top,
    BoundaryTag::Left,
];

/// `θ* = cos(πx)(1 − y)²`.
pub fn mms_exact(x: [f64; 2]) -> f64 {
    (PI * x[0]).cos() * (1.0 - x[1]).powi(2)
}

/// `Q = −k Δθ*`.
pub fn mms_source(k: f64) -> impl Fn([f64; 2]) -> f64 + Sync {
    move |x| k * (PI * x[0]).cos() * (PI * PI * (1.0 - x[1]).powi(2) - 2.0)
}

/// L² errors of the manufactured heat problem on uncracked `n × n` grids.
pub fn mms_errors(order: usize, sizes: &[usize]) -> Vec<f64> {
    let p = material(0.5, 0.02, 0.0);
    sizes
        .iter()
        .map(|&n| {
            let mesh = Arc::new(build_grid(n, n).unwrap());
            let space = Arc::new(FESpace::scalar(mesh, order).unwrap());
            let bc = ThermalBc::new(OUTER.to_vec(), mms_exact);
            let theta = solve_thermal(space, &p, &mms_source(p.k()), &bc).unwrap();
            theta.l2_error_scalar(mms_exact, order + 4).unwrap()
        })
        .collect()
}

pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

/// Affine displacement with gradient `grad` and offset `c`.
pub fn affine(
    c: [f64; 2],
    grad: [[f64; 2]; 2],
) -> impl Fn([f64; 2]) -> [f64; 2] + Send + Sync + Clone + 'static {
    move |x| {
        [
            c[0] + grad[0][0] * x[0] + grad[0][1] * x[1],
            c[1] + grad[1][0] * x[0] + grad[1][1] * x[1],
        ]
    }
}

pub struct PatchResult {
    pub report: SolveReport,
    pub u: FEField,
    /// Largest deviation of a recovered nodal strain from the imposed one, component-wise.
    pub max_strain_error: f64,
    /// Largest deviation of a displacement dof from the affine field.
    pub max_displacement_error: f64,
}

/// Uncracked patch with affine Dirichlet data on the whole outer boundary and no thermal load.
pub fn patch_test(order: usize, b: f64, n: usize) -> PatchResult {
    let grad = [[0.02, -0.01], [0.015, 0.03]];
    let f = affine([0.01, -0.005], grad);
    let exact =
        SymTensor2::from_components(grad[0][0], grad[1][1], 0.5 * (grad[0][1] + grad[1][0]));
    let p = material(0.5, b, 0.3);
    let mesh = Arc::new(build_grid(n, n).unwrap());
    let scalar = Arc::new(FESpace::scalar(mesh.clone(), order).unwrap());
    let vector = Arc::new(FESpace::vector(mesh, order).unwrap());
    let theta = FEField::zeros(scalar);
    let (u, report) = picard_solve(
        vector.clone(),
        &p,
        &theta,
        &MechanicalBc::outer_boundary(f.clone()),
        &PicardConfig::default(),
    )
    .unwrap();
    let fields = recover_fields(&u, &theta, &p).unwrap();
    let max_strain_error = fields[STRAIN]
        .as_tensor()
        .unwrap()
        .iter()
        .map(|s| {
            (0..3)
                .map(|i| (s.m[i] - exact.m[i]).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    let max_displacement_error = vector
        .support_points()
        .iter()
        .enumerate()
        .flat_map(|(n, &x)| {
            let ex = f(x);
            let u = &u;
            (0..2).map(move |c| (u.values[2 * n + c] - ex[c]).abs())
        })
        .fold(0.0, f64::max);
    PatchResult {
        report,
        u,
        max_strain_error,
        max_displacement_error,
    }
}
