//! Continuous Lagrange spaces (Q1 / Q2) on quadrilateral meshes.

use std::collections::HashMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mesh::{BoundaryFacet, CrackedMesh};
use crate::quadrature::QuadRule;
use crate::tensor::SymTensor2;

/// Reference coordinates of the local nodes: vertices, then edge midpoints, then the centre.
const LOCAL_NODES: [[f64; 2]; 9] = [
    [-1.0, -1.0],
    [1.0, -1.0],
    [1.0, 1.0],
    [-1.0, 1.0],
    [0.0, -1.0],
    [1.0, 0.0],
    [0.0, 1.0],
    [-1.0, 0.0],
    [0.0, 0.0],
];

/// 1D Lagrange basis value and derivative for a node at `node ∈ {-1, 0, 1}`.
fn lagrange_1d(order: usize, node: f64, x: f64) -> (f64, f64) {
    match order {
        1 => (0.5 * (1.0 + node * x), 0.5 * node),
        _ => {
            if node == 0.0 {
                (1.0 - x * x, -2.0 * x)
            } else {
                (0.5 * x * (x + node), x + 0.5 * node)
            }
        }
    }
}

/// Values and reference gradients of the `(order + 1)²` shape functions at `xi`.
pub fn reference_shape(order: usize, xi: [f64; 2], values: &mut [f64], grads: &mut [[f64; 2]]) {
    let n = (order + 1) * (order + 1);
    for a in 0..n {
        let [px, py] = LOCAL_NODES[a];
        let (lx, dlx) = lagrange_1d(order, px, xi[0]);
        let (ly, dly) = lagrange_1d(order, py, xi[1]);
        values[a] = lx * ly;
        grads[a] = [dlx * ly, lx * dly];
    }
}

/// Bilinear geometry map: physical point and Jacobian `∂x/∂ξ` at `xi`.
pub fn map_point(vertices: &[[f64; 2]; 4], xi: [f64; 2]) -> ([f64; 2], [[f64; 2]; 2]) {
    let mut vals = [0.0; 4];
    let mut grads = [[0.0; 2]; 4];
    reference_shape(1, xi, &mut vals, &mut grads);
    let mut x = [0.0; 2];
    let mut jac = [[0.0; 2]; 2];
    for a in 0..4 {
        for d in 0..2 {
            x[d] += vals[a] * vertices[a][d];
            jac[d][0] += grads[a][0] * vertices[a][d];
            jac[d][1] += grads[a][1] * vertices[a][d];
        }
    }
    (x, jac)
}

/// Shape data at one point of one element.
#[derive(Debug, Clone, Copy)]
pub struct PointData<'a> {
    pub values: &'a [f64],
    /// Physical gradients.
    pub grads: &'a [[f64; 2]],
    /// Quadrature weight times Jacobian determinant.
    pub jxw: f64,
    pub x: [f64; 2],
}

/// Owned variant of [`PointData`] for points outside the cached rule.
#[derive(Debug, Clone)]
pub struct PointEval {
    pub values: Vec<f64>,
    pub grads: Vec<[f64; 2]>,
    pub det_j: f64,
    pub x: [f64; 2],
}

fn physical_shape(order: usize, vertices: &[[f64; 2]; 4], xi: [f64; 2]) -> Result<PointEval> {
    let n = (order + 1) * (order + 1);
    let mut values = vec![0.0; n];
    let mut ref_grads = vec![[0.0; 2]; n];
    reference_shape(order, xi, &mut values, &mut ref_grads);
    let (x, j) = map_point(vertices, xi);
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if !(det > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "non-positive Jacobian {det} at ξ = {xi:?}"
        )));
    }
    // ∇_x N = J^{-T} ∇_ξ N
    let inv = [
        [j[1][1] / det, -j[0][1] / det],
        [-j[1][0] / det, j[0][0] / det],
    ];
    let grads = ref_grads
        .iter()
        .map(|g| {
            [
                inv[0][0] * g[0] + inv[1][0] * g[1],
                inv[0][1] * g[0] + inv[1][1] * g[1],
            ]
        })
        .collect();
    Ok(PointEval {
        values,
        grads,
        det_j: det,
        x,
    })
}

/// Scalar (`components = 1`) or vector (`components = 2`) Lagrange space of order 1 or 2.
///
/// Vector dofs are interleaved: node `n`, component `c` lives at `2n + c`.
#[derive(Debug, Clone)]
pub struct FESpace {
    mesh: Arc<CrackedMesh>,
    order: usize,
    components: usize,
    support_points: Vec<[f64; 2]>,
    local_nodes: usize,
    /// `local_nodes` scalar node ids per element.
    element_nodes: Vec<usize>,
    rule: QuadRule,
    shape: Vec<f64>,
    grads: Vec<[f64; 2]>,
    jxw: Vec<f64>,
    qp_x: Vec<[f64; 2]>,
}

impl FESpace {
    pub fn new(mesh: Arc<CrackedMesh>, order: usize, components: usize) -> Result<Self> {
        Self::with_quadrature(mesh, order, components, order + 1)
    }

    pub fn scalar(mesh: Arc<CrackedMesh>, order: usize) -> Result<Self> {
        Self::new(mesh, order, 1)
    }

    pub fn vector(mesh: Arc<CrackedMesh>, order: usize) -> Result<Self> {
        Self::new(mesh, order, 2)
    }

    /// Space using a `points_per_direction`² Gauss rule instead of the default `(order + 1)²`.
    pub fn with_quadrature(
        mesh: Arc<CrackedMesh>,
        order: usize,
        components: usize,
        points_per_direction: usize,
    ) -> Result<Self> {
        if !(1..=2).contains(&order) {
            return Err(Error::SpaceMismatch(format!(
                "element order {order} unsupported (1 or 2)"
            )));
        }
        if !(1..=2).contains(&components) {
            return Err(Error::SpaceMismatch(format!(
                "{components} components unsupported (1 or 2)"
            )));
        }
        let local_nodes = (order + 1) * (order + 1);
        let mut support_points = mesh.nodes.clone();
        let mut element_nodes = Vec::with_capacity(mesh.num_elements() * local_nodes);
        let mut edge_ids: HashMap<(usize, usize), usize> = HashMap::new();
        for v in &mesh.elements {
            element_nodes.extend_from_slice(v);
            if order == 2 {
                for k in 0..4 {
                    let (p, q) = (v[k], v[(k + 1) % 4]);
                    let key = (p.min(q), p.max(q));
                    let id = *edge_ids.entry(key).or_insert_with(|| {
                        let a = mesh.nodes[p];
                        let b = mesh.nodes[q];
                        support_points.push([0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]);
                        support_points.len() - 1
                    });
                    element_nodes.push(id);
                }
                let c = v.iter().fold([0.0; 2], |acc, &n| {
                    [
                        acc[0] + 0.25 * mesh.nodes[n][0],
                        acc[1] + 0.25 * mesh.nodes[n][1],
                    ]
                });
                support_points.push(c);
                element_nodes.push(support_points.len() - 1);
            }
        }

        let rule = QuadRule::gauss(points_per_direction);
        let ne = mesh.num_elements();
        let nq = rule.len();
        let mut shape = Vec::with_capacity(ne * nq * local_nodes);
        let mut grads = Vec::with_capacity(ne * nq * local_nodes);
        let mut jxw = Vec::with_capacity(ne * nq);
        let mut qp_x = Vec::with_capacity(ne * nq);
        for e in 0..ne {
            let verts = mesh.element_vertices(e);
            for (xi, w) in rule.points.iter().zip(&rule.weights) {
                let p = physical_shape(order, &verts, *xi)?;
                shape.extend_from_slice(&p.values);
                grads.extend_from_slice(&p.grads);
                jxw.push(w * p.det_j);
                qp_x.push(p.x);
            }
        }

        Ok(FESpace {
            mesh,
            order,
            components,
            support_points,
            local_nodes,
            element_nodes,
            rule,
            shape,
            grads,
            jxw,
            qp_x,
        })
    }

    pub fn mesh(&self) -> &Arc<CrackedMesh> {
        &self.mesh
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn num_nodes(&self) -> usize {
        self.support_points.len()
    }

    pub fn num_dofs(&self) -> usize {
        self.support_points.len() * self.components
    }

    pub fn support_points(&self) -> &[[f64; 2]] {
        &self.support_points
    }

    pub fn local_nodes(&self) -> usize {
        self.local_nodes
    }

    pub fn element_nodes(&self, e: usize) -> &[usize] {
        &self.element_nodes[e * self.local_nodes..(e + 1) * self.local_nodes]
    }

    /// Global dofs of element `e`, node-major with components interleaved.
    pub fn element_dofs(&self, e: usize) -> Vec<usize> {
        let c = self.components;
        self.element_nodes(e)
            .iter()
            .flat_map(|&n| (0..c).map(move |k| c * n + k))
            .collect()
    }

    pub fn num_qp(&self) -> usize {
        self.rule.len()
    }

    pub fn rule(&self) -> &QuadRule {
        &self.rule
    }

    pub fn qp(&self, e: usize, q: usize) -> PointData<'_> {
        let idx = e * self.rule.len() + q;
        let s = idx * self.local_nodes;
        PointData {
            values: &self.shape[s..s + self.local_nodes],
            grads: &self.grads[s..s + self.local_nodes],
            jxw: self.jxw[idx],
            x: self.qp_x[idx],
        }
    }

    /// Shape data at an arbitrary reference point of element `e`.
    pub fn evaluate_reference(&self, e: usize, xi: [f64; 2]) -> Result<PointEval> {
        physical_shape(self.order, &self.mesh.element_vertices(e), xi)
    }

    /// Scalar node ids on a boundary facet (both vertices, plus the midpoint for Q2).
    pub fn facet_nodes(&self, facet: &BoundaryFacet) -> Vec<usize> {
        let nodes = self.element_nodes(facet.element);
        let k = facet.local_edge;
        let mut out = vec![nodes[k], nodes[(k + 1) % 4]];
        if self.order == 2 {
            out.push(nodes[4 + k]);
        }
        out
    }

    /// Whether both spaces discretize the same mesh with the same elements and rule.
    pub fn is_compatible(&self, other: &FESpace) -> bool {
        Arc::ptr_eq(&self.mesh, &other.mesh) || *self.mesh == *other.mesh
    }

    fn check_compatible(&self, other: &FESpace) -> Result<()> {
        if self.order != other.order || self.rule != other.rule || !self.is_compatible(other) {
            return Err(Error::SpaceMismatch(format!(
                "order {} / {} or quadrature or mesh differ",
                self.order, other.order
            )));
        }
        Ok(())
    }
}

/// Coefficient vector bound to a space.
#[derive(Debug, Clone)]
pub struct FEField {
    space: Arc<FESpace>,
    pub values: Vec<f64>,
}

impl FEField {
    pub fn new(space: Arc<FESpace>, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.num_dofs() {
            return Err(Error::SpaceMismatch(format!(
                "{} values for a space with {} dofs",
                values.len(),
                space.num_dofs()
            )));
        }
        Ok(FEField { space, values })
    }

    pub fn zeros(space: Arc<FESpace>) -> Self {
        let n = space.num_dofs();
        FEField {
            space,
            values: vec![0.0; n],
        }
    }

    /// Nodal interpolant of a scalar function.
    pub fn interpolate_scalar(space: Arc<FESpace>, f: impl Fn([f64; 2]) -> f64) -> Self {
        assert_eq!(
            space.components(),
            1,
            "scalar interpolation needs a scalar space"
        );
        let values = space.support_points().iter().map(|&x| f(x)).collect();
        FEField { space, values }
    }

    /// Nodal interpolant of a vector function.
    pub fn interpolate_vector(space: Arc<FESpace>, f: impl Fn([f64; 2]) -> [f64; 2]) -> Self {
        assert_eq!(
            space.components(),
            2,
            "vector interpolation needs a vector space"
        );
        let values = space.support_points().iter().flat_map(|&x| f(x)).collect();
        FEField { space, values }
    }

    pub fn space(&self) -> &Arc<FESpace> {
        &self.space
    }

    fn combine(&self, e: usize, weights: &[f64]) -> [f64; 2] {
        let c = self.space.components();
        let mut out = [0.0; 2];
        for (a, &n) in self.space.element_nodes(e).iter().enumerate() {
            for k in 0..c {
                out[k] += weights[a] * self.values[c * n + k];
            }
        }
        out
    }

    /// Field value at a quadrature point; scalar fields use component 0.
    pub fn value_at_qp(&self, e: usize, q: usize) -> [f64; 2] {
        self.combine(e, self.space.qp(e, q).values)
    }

    /// Gradient of a scalar field at a quadrature point.
    pub fn gradient_at_qp(&self, e: usize, q: usize) -> [f64; 2] {
        debug_assert_eq!(self.space.components(), 1);
        let nodes = self.space.element_nodes(e);
        let grads = self.space.qp(e, q).grads;
        let mut g = [0.0; 2];
        for (a, &n) in nodes.iter().enumerate() {
            g[0] += grads[a][0] * self.values[n];
            g[1] += grads[a][1] * self.values[n];
        }
        g
    }

    /// Displacement gradient `∂u_i/∂x_j` from gradients of the local shape functions.
    fn displacement_gradient(&self, e: usize, grads: &[[f64; 2]]) -> [[f64; 2]; 2] {
        let mut du = [[0.0; 2]; 2];
        for (a, &n) in self.space.element_nodes(e).iter().enumerate() {
            for i in 0..2 {
                let u = self.values[2 * n + i];
                du[i][0] += u * grads[a][0];
                du[i][1] += u * grads[a][1];
            }
        }
        du
    }

    /// Symmetric gradient of a vector field at a quadrature point.
    pub fn strain_at_qp(&self, e: usize, q: usize) -> SymTensor2 {
        debug_assert_eq!(self.space.components(), 2);
        strain_from_gradient(self.displacement_gradient(e, self.space.qp(e, q).grads))
    }

    /// Symmetric gradient at an arbitrary reference point of element `e`.
    pub fn strain_at_reference(&self, e: usize, xi: [f64; 2]) -> Result<SymTensor2> {
        let p = self.space.evaluate_reference(e, xi)?;
        Ok(strain_from_gradient(
            self.displacement_gradient(e, &p.grads),
        ))
    }

    /// `‖self‖_{L²}`; the rule integrates the mass matrix exactly on affine cells.
    pub fn l2_norm(&self) -> f64 {
        let mut sum = 0.0;
        for e in 0..self.space.mesh().num_elements() {
            for q in 0..self.space.num_qp() {
                let v = self.value_at_qp(e, q);
                sum += self.space.qp(e, q).jxw * (v[0] * v[0] + v[1] * v[1]);
            }
        }
        sum.sqrt()
    }

    /// `‖self − other‖_{L²}` for two fields on the same space.
    pub fn l2_distance(&self, other: &FEField) -> Result<f64> {
        if !Arc::ptr_eq(&self.space, &other.space)
            && self.space.num_dofs() != other.space.num_dofs()
        {
            return Err(Error::SpaceMismatch(
                "fields live on different spaces".into(),
            ));
        }
        let diff: Vec<f64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(FEField {
            space: self.space.clone(),
            values: diff,
        }
        .l2_norm())
    }

    /// `‖u_h − u‖_{L²}` against a scalar function, using `points`² Gauss points per cell.
    pub fn l2_error_scalar(&self, exact: impl Fn([f64; 2]) -> f64, points: usize) -> Result<f64> {
        let rule = QuadRule::gauss(points);
        let mut sum = 0.0;
        for e in 0..self.space.mesh().num_elements() {
            for (xi, w) in rule.points.iter().zip(&rule.weights) {
                let p = self.space.evaluate_reference(e, *xi)?;
                let v = self.combine(e, &p.values)[0];
                let d = v - exact(p.x);
                sum += w * p.det_j * d * d;
            }
        }
        Ok(sum.sqrt())
    }
}

pub fn strain_from_gradient(du: [[f64; 2]; 2]) -> SymTensor2 {
    SymTensor2::from_mandel(du[0][0], du[1][1], FRAC_1_SQRT_2 * (du[0][1] + du[1][0]))
}

/// `∇θ_h` at a quadrature point of the temperature space.
pub fn thermal_gradient_at_qp(theta: &FEField, e: usize, q: usize) -> [f64; 2] {
    theta.gradient_at_qp(e, q)
}

/// `ε(u_h)` at a quadrature point of the displacement space.
pub fn evaluate_strain(u: &FEField, e: usize, q: usize) -> SymTensor2 {
    u.strain_at_qp(e, q)
}

pub(crate) fn ensure_compatible(a: &FESpace, b: &FESpace) -> Result<()> {
    a.check_compatible(b)
}
