//! Global systems for the heat equation and the Picard-linearized momentum balance.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::sync::Arc;

use crate::constitutive::{relaxation_factor, MaterialParams};
use crate::error::{Error, Result};
use crate::fe::{ensure_compatible, FEField, FESpace};
use crate::mesh::BoundaryTag;
use crate::sparse::CsrMatrix;
use crate::tensor::energy_norm;

pub type PointFn = Arc<dyn Fn([f64; 2]) -> f64 + Send + Sync>;

/// Prescribed temperature on a set of boundary parts; all other boundaries are insulated.
#[derive(Clone)]
pub struct ThermalBc {
    pub tags: Vec<BoundaryTag>,
    pub temperature: PointFn,
}

impl ThermalBc {
    pub fn new(
        tags: Vec<BoundaryTag>,
        temperature: impl Fn([f64; 2]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ThermalBc {
            tags,
            temperature: Arc::new(temperature),
        }
    }

    /// `θ = θ₀` on the bottom edge.
    pub fn constant(theta0: f64) -> Self {
        ThermalBc::new(vec![BoundaryTag::Bottom], move |_| theta0)
    }

    /// `θ = c·x(1 − x)` on the bottom edge.
    pub fn parabolic(c: f64) -> Self {
        ThermalBc::new(vec![BoundaryTag::Bottom], move |x| c * x[0] * (1.0 - x[0]))
    }
}

impl fmt::Debug for ThermalBc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ThermalBc")
            .field("tags", &self.tags)
            .finish_non_exhaustive()
    }
}

/// One prescribed displacement component on one boundary part.
#[derive(Clone)]
pub struct DisplacementConstraint {
    pub tag: BoundaryTag,
    pub component: usize,
    pub value: PointFn,
}

impl fmt::Debug for DisplacementConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DisplacementConstraint")
            .field("tag", &self.tag)
            .field("component", &self.component)
            .finish_non_exhaustive()
    }
}

/// Displacement Dirichlet data; every boundary not listed is traction free.
#[derive(Debug, Clone, Default)]
pub struct MechanicalBc {
    pub constraints: Vec<DisplacementConstraint>,
}

impl MechanicalBc {
    pub fn constrain(
        mut self,
        tag: BoundaryTag,
        component: usize,
        value: impl Fn([f64; 2]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.constraints.push(DisplacementConstraint {
            tag,
            component,
            value: Arc::new(value),
        });
        self
    }

    /// Plate loading: `u = (0, d)` on the top edge, `u_y = 0` on the bottom edge.
    pub fn plate(top_uy: f64) -> Self {
        MechanicalBc::default()
            .constrain(BoundaryTag::Top, 0, |_| 0.0)
            .constrain(BoundaryTag::Top, 1, move |_| top_uy)
            .constrain(BoundaryTag::Bottom, 1, |_| 0.0)
    }

    /// Both components prescribed by `f` on the four outer edges.
    pub fn outer_boundary(f: impl Fn([f64; 2]) -> [f64; 2] + Send + Sync + 'static) -> Self {
        let f = Arc::new(f);
        let mut bc = MechanicalBc::default();
        for tag in [
            BoundaryTag::Bottom,
            BoundaryTag::Right,
            BoundaryTag::Top,
            BoundaryTag::Left,
        ] {
            for c in 0..2 {
                let f = f.clone();
                bc = bc.constrain(tag, c, move |x| f(x)[c]);
            }
        }
        bc
    }
}

#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    /// Prescribed value per dof, `None` for free dofs.
    pub prescribed: Vec<Option<f64>>,
}

impl LinearSystem {
    pub fn num_prescribed(&self) -> usize {
        self.prescribed.iter().filter(|p| p.is_some()).count()
    }
}

/// Diagnostics from one mechanical assembly.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MechanicalAssemblyInfo {
    /// Quadrature points where the previous strain was pulled back under the admissibility limit.
    pub clamp_events: usize,
    /// Largest `b·t` seen at a quadrature point before clamping.
    pub max_bt: f64,
}

/// Dirichlet values per dof of `space` for `(tag, component, value)` data.
fn collect_prescribed<'a>(
    space: &FESpace,
    data: impl Iterator<Item = (BoundaryTag, usize, &'a PointFn)>,
) -> Vec<Option<f64>> {
    let c = space.components();
    let mut prescribed = vec![None; space.num_dofs()];
    let points = space.support_points();
    for (tag, component, value) in data {
        for facet in space.mesh().facets_with_tag(tag) {
            for n in space.facet_nodes(facet) {
                prescribed[c * n + component] = Some(value(points[n]));
            }
        }
    }
    prescribed
}

/// Computes local element contributions (in parallel when enabled) and scatters them in element order.
fn assemble_elements<T, F>(space: &FESpace, compute: F) -> Result<(CsrMatrix, Vec<f64>, Vec<T>)>
where
    T: Send,
    F: Fn(usize, &mut [f64], &mut [f64]) -> Result<T> + Sync + Send,
{
    let ne = space.mesh().num_elements();
    let ndof_local = space.local_nodes() * space.components();
    let dofs: Vec<Vec<usize>> = (0..ne).map(|e| space.element_dofs(e)).collect();
    let mut matrix =
        CsrMatrix::from_element_pattern(space.num_dofs(), dofs.iter().map(Vec::as_slice));
    let mut rhs = vec![0.0; space.num_dofs()];
    let mut extras = Vec::with_capacity(ne);

    let run = |e: usize| -> Result<(Vec<f64>, Vec<f64>, T)> {
        let mut ke = vec![0.0; ndof_local * ndof_local];
        let mut fe = vec![0.0; ndof_local];
        let extra = compute(e, &mut ke, &mut fe)?;
        Ok((ke, fe, extra))
    };

    const CHUNK: usize = 2048;
    for chunk_start in (0..ne).step_by(CHUNK) {
        let range = chunk_start..(chunk_start + CHUNK).min(ne);
        #[cfg(feature = "parallel")]
        let locals: Vec<Result<_>> = {
            use rayon::prelude::*;
            range.clone().into_par_iter().map(run).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let locals: Vec<Result<_>> = range.clone().map(run).collect();
        for (e, local) in range.zip(locals) {
            let (ke, fe, extra) = local?;
            matrix.add_local(&dofs[e], &ke);
            for (d, v) in dofs[e].iter().zip(&fe) {
                rhs[*d] += v;
            }
            extras.push(extra);
        }
    }
    Ok((matrix, rhs, extras))
}

/// Heat conduction `∫ k ∇θ·∇q = ∫ Q q`, with prescribed temperatures eliminated.
pub fn assemble_thermal(
    space: &FESpace,
    p: &MaterialParams,
    source: &(dyn Fn([f64; 2]) -> f64 + Sync),
    bc: &ThermalBc,
) -> Result<LinearSystem> {
    if space.components() != 1 {
        return Err(Error::SpaceMismatch(
            "temperature needs a scalar space".into(),
        ));
    }
    let prescribed = collect_prescribed(space, bc.tags.iter().map(|&t| (t, 0, &bc.temperature)));
    if prescribed.iter().all(Option::is_none) {
        return Err(Error::EmptyDirichlet("thermal"));
    }
    let k = p.k();
    let n = space.local_nodes();
    let (mut matrix, mut rhs, _) = assemble_elements(space, |e, ke, fe| {
        for q in 0..space.num_qp() {
            let pt = space.qp(e, q);
            let src = source(pt.x);
            for a in 0..n {
                let ga = pt.grads[a];
                fe[a] += pt.jxw * src * pt.values[a];
                for b in 0..n {
                    let gb = pt.grads[b];
                    ke[a * n + b] += pt.jxw * k * (ga[0] * gb[0] + ga[1] * gb[1]);
                }
            }
        }
        Ok(())
    })?;
    matrix.eliminate_dirichlet(&mut rhs, &prescribed);
    Ok(LinearSystem {
        matrix,
        rhs,
        prescribed,
    })
}

/// Mandel strain of the unit displacement of local node `a` in direction `c`.
#[inline]
fn unit_strain(grad: [f64; 2], c: usize) -> [f64; 3] {
    if c == 0 {
        [grad[0], 0.0, FRAC_1_SQRT_2 * grad[1]]
    } else {
        [0.0, grad[1], FRAC_1_SQRT_2 * grad[0]]
    }
}

/// Picard step: `∫ φ(t(u_prev)) 𝔼[ε(u)]:ε(v) = −∫ α∇θ·v`, with prescribed displacements eliminated.
///
/// `u_prev = None` gives the linear (`φ ≡ 1`) operator used to initialize the iteration.
pub fn assemble_mechanical(
    space: &FESpace,
    p: &MaterialParams,
    theta: &FEField,
    u_prev: Option<&FEField>,
    bc: &MechanicalBc,
) -> Result<(LinearSystem, MechanicalAssemblyInfo)> {
    if space.components() != 2 {
        return Err(Error::SpaceMismatch(
            "displacement needs a vector space".into(),
        ));
    }
    ensure_compatible(space, theta.space())?;
    if theta.space().components() != 1 {
        return Err(Error::SpaceMismatch(
            "temperature must be a scalar field".into(),
        ));
    }
    if let Some(u) = u_prev {
        ensure_compatible(space, u.space())?;
        if u.space().components() != 2 || u.values.len() != space.num_dofs() {
            return Err(Error::SpaceMismatch(
                "previous iterate has the wrong layout".into(),
            ));
        }
    }
    let prescribed = collect_prescribed(
        space,
        bc.constraints
            .iter()
            .map(|c| (c.tag, c.component, &c.value)),
    );
    if prescribed.iter().all(Option::is_none) {
        return Err(Error::EmptyDirichlet("mechanical"));
    }

    let e_mat = p.stiffness().matrix().entries;
    let alpha = p.alpha();
    let n = space.local_nodes();
    let nd = 2 * n;
    let (mut matrix, mut rhs, infos) = assemble_elements(space, |e, ke, fe| {
        let mut info = MechanicalAssemblyInfo::default();
        let mut b_cols = vec![[0.0; 3]; nd];
        let mut eb = vec![[0.0; 3]; nd];
        for q in 0..space.num_qp() {
            let pt = space.qp(e, q);
            let phi = match u_prev {
                Some(u) => {
                    let t = energy_norm(&u.strain_at_qp(e, q), p.stiffness());
                    info.max_bt = info.max_bt.max(p.b() * t);
                    let r = relaxation_factor(t, p);
                    if r.clamped {
                        info.clamp_events += 1;
                    }
                    r.factor
                }
                None => 1.0,
            };
            let grad_theta = theta.gradient_at_qp(e, q);
            for a in 0..n {
                for c in 0..2 {
                    let col = unit_strain(pt.grads[a], c);
                    b_cols[2 * a + c] = col;
                    let mut ec = [0.0; 3];
                    for (i, row) in e_mat.iter().enumerate() {
                        ec[i] = row[0] * col[0] + row[1] * col[1] + row[2] * col[2];
                    }
                    eb[2 * a + c] = ec;
                    fe[2 * a + c] -= pt.jxw * alpha * grad_theta[c] * pt.values[a];
                }
            }
            let w = pt.jxw * phi;
            for i in 0..nd {
                let bi = b_cols[i];
                for j in 0..nd {
                    let ebj = eb[j];
                    ke[i * nd + j] += w * (bi[0] * ebj[0] + bi[1] * ebj[1] + bi[2] * ebj[2]);
                }
            }
        }
        Ok(info)
    })?;
    matrix.eliminate_dirichlet(&mut rhs, &prescribed);
    let info = infos
        .iter()
        .fold(MechanicalAssemblyInfo::default(), |acc, i| {
            MechanicalAssemblyInfo {
                clamp_events: acc.clamp_events + i.clamp_events,
                max_bt: acc.max_bt.max(i.max_bt),
            }
        });
    Ok((
        LinearSystem {
            matrix,
            rhs,
            prescribed,
        },
        info,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constitutive::MaterialConstants;
    use crate::mesh::{build_cracked_grid, build_grid, CrackSpec};

    fn material(b: f64) -> MaterialParams {
        MaterialParams::new(MaterialConstants {
            b,
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn thermal_matrix_is_symmetric() {
        for order in [1, 2] {
            let mesh = Arc::new(build_cracked_grid(4, 4, CrackSpec::default()).unwrap());
            let space = FESpace::scalar(mesh, order).unwrap();
            let sys = assemble_thermal(
                &space,
                &material(0.02),
                &|_| 1.0,
                &ThermalBc::parabolic(400.0),
            )
            .unwrap();
            assert!(sys.matrix.relative_asymmetry() < 1e-12);
        }
    }

    #[test]
    fn no_dirichlet_data_is_rejected() {
        let mesh = Arc::new(build_grid(2, 2).unwrap());
        let s = FESpace::scalar(mesh.clone(), 1).unwrap();
        let bc = ThermalBc::new(vec![], |_| 0.0);
        assert!(matches!(
            assemble_thermal(&s, &material(0.0), &|_| 0.0, &bc),
            Err(Error::EmptyDirichlet("thermal"))
        ));
        let v = FESpace::vector(mesh, 1).unwrap();
        let theta = FEField::zeros(Arc::new(s));
        assert!(matches!(
            assemble_mechanical(&v, &material(0.0), &theta, None, &MechanicalBc::default()),
            Err(Error::EmptyDirichlet("mechanical"))
        ));
    }

    #[test]
    fn unloaded_linear_problem_has_zero_rhs() {
        let mesh = Arc::new(build_cracked_grid(4, 4, CrackSpec::default()).unwrap());
        let s = Arc::new(FESpace::scalar(mesh.clone(), 2).unwrap());
        let v = FESpace::vector(mesh, 2).unwrap();
        let theta = FEField::zeros(s);
        let (sys, info) =
            assemble_mechanical(&v, &material(0.0), &theta, None, &MechanicalBc::plate(0.0))
                .unwrap();
        assert!(sys.rhs.iter().all(|&r| r == 0.0));
        assert_eq!(info.clamp_events, 0);
        assert!(sys.matrix.relative_asymmetry() < 1e-12);
    }

    #[test]
    fn zero_b_matches_linear_operator_entrywise() {
        let mesh = Arc::new(build_cracked_grid(4, 4, CrackSpec::default()).unwrap());
        let s = Arc::new(FESpace::scalar(mesh.clone(), 2).unwrap());
        let v = Arc::new(FESpace::vector(mesh, 2).unwrap());
        let theta = FEField::interpolate_scalar(s, |x| 10.0 * x[0] * x[1]);
        let u_prev = FEField::interpolate_vector(v.clone(), |x| [0.1 * x[1] * x[1], 0.2 * x[0]]);
        let bc = MechanicalBc::plate(0.05);
        let p = material(0.0);
        let (lin, _) = assemble_mechanical(&v, &p, &theta, None, &bc).unwrap();
        let (pic, _) = assemble_mechanical(&v, &p, &theta, Some(&u_prev), &bc).unwrap();
        assert_eq!(lin.matrix, pic.matrix);
        assert_eq!(lin.rhs, pic.rhs);
    }

    #[test]
    fn uniform_prior_strain_scales_the_operator() {
        // Affine u_prev gives the same strain, hence the same φ, at every quadrature point.
        let mesh = Arc::new(build_grid(2, 2).unwrap());
        let s = Arc::new(FESpace::scalar(mesh.clone(), 1).unwrap());
        let v = Arc::new(FESpace::vector(mesh, 1).unwrap());
        let theta = FEField::zeros(s);
        let p = material(0.02);
        let u_prev =
            FEField::interpolate_vector(v.clone(), |x| [0.3 * x[0], -0.1 * x[1] + 0.2 * x[0]]);
        let phi =
            relaxation_factor(energy_norm(&u_prev.strain_at_qp(0, 0), p.stiffness()), &p).factor;
        assert!(phi > 1.0);
        let bc = MechanicalBc::plate(0.0);
        let (lin, _) = assemble_mechanical(&v, &p, &theta, None, &bc).unwrap();
        let (nl, _) = assemble_mechanical(&v, &p, &theta, Some(&u_prev), &bc).unwrap();
        for r in 0..v.num_dofs() {
            let (cols, vals) = lin.matrix.row(r);
            for (&c, &a) in cols.iter().zip(vals) {
                let b = nl.matrix.get(r, c);
                if lin.prescribed[r].is_none() && lin.prescribed[c].is_none() {
                    assert!((phi * a - b).abs() <= 1e-12 * a.abs().max(1.0), "({r},{c})");
                } else {
                    assert_eq!(a, b);
                }
            }
        }
    }
}
