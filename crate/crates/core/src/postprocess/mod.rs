//! Nodal recovery of derived fields, crack-opening profiles, parameter sweeps and file output.

mod output;
mod sweep;

use std::collections::BTreeMap;

pub use output::{write_csv, write_csv_to, write_vtk, write_vtk_to, CsvRecord};
pub use sweep::{run_sweep, SweepParameter, SweepRow};

use crate::constitutive::{
    strain_energy_density, stress_from_strain_at, thermal_stress, MaterialParams,
};
use crate::error::{Error, QuadraturePoint, Result};
use crate::fe::{reference_shape, FEField};
use crate::mesh::CrackedMesh;
use crate::tensor::SymTensor2;

#[derive(Debug, Clone, PartialEq)]
pub enum NodalValues {
    Scalar(Vec<f64>),
    Vector(Vec<[f64; 2]>),
    Tensor(Vec<SymTensor2>),
}

impl NodalValues {
    pub fn len(&self) -> usize {
        match self {
            NodalValues::Scalar(v) => v.len(),
            NodalValues::Vector(v) => v.len(),
            NodalValues::Tensor(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// One value per mesh vertex. Crack-face duplicates carry their own values.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalField {
    pub name: String,
    pub units: String,
    pub values: NodalValues,
}

/// Location and value of a scalar extremum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub node: usize,
    pub value: f64,
}

impl NodalField {
    fn scalar(name: &str, units: &str, values: Vec<f64>) -> Self {
        NodalField {
            name: name.into(),
            units: units.into(),
            values: NodalValues::Scalar(values),
        }
    }

    fn tensor(name: &str, units: &str, values: Vec<SymTensor2>) -> Self {
        NodalField {
            name: name.into(),
            units: units.into(),
            values: NodalValues::Tensor(values),
        }
    }

    pub fn as_scalar(&self) -> Option<&[f64]> {
        match &self.values {
            NodalValues::Scalar(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_tensor(&self) -> Option<&[SymTensor2]> {
        match &self.values {
            NodalValues::Tensor(v) => Some(v),
            _ => None,
        }
    }

    /// Largest scalar value (first node wins ties).
    pub fn max(&self) -> Option<Extremum> {
        self.as_scalar()?
            .iter()
            .enumerate()
            .fold(None, |best, (node, &value)| match best {
                Some(Extremum { value: b, .. }) if b >= value => best,
                _ => Some(Extremum { node, value }),
            })
    }

    pub fn min(&self) -> Option<Extremum> {
        self.as_scalar()?
            .iter()
            .enumerate()
            .fold(None, |best, (node, &value)| match best {
                Some(Extremum { value: b, .. }) if b <= value => best,
                _ => Some(Extremum { node, value }),
            })
    }
}

pub type FieldMap = BTreeMap<String, NodalField>;

pub const STRAIN: &str = "strain";
pub const STRESS: &str = "stress";
pub const THERMAL_STRESS: &str = "thermal_stress";
pub const ENERGY_DENSITY: &str = "energy_density";
pub const STRAIN_NORM: &str = "strain_norm";
pub const STRESS_NORM: &str = "stress_norm";
pub const STRESS_PRINCIPAL_MAX: &str = "stress_principal_max";
pub const STRESS_PRINCIPAL_MIN: &str = "stress_principal_min";
pub const STRAIN_PRINCIPAL_MAX: &str = "strain_principal_max";
pub const STRAIN_PRINCIPAL_MIN: &str = "strain_principal_min";
pub const TEMPERATURE: &str = "temperature";
pub const DISPLACEMENT: &str = "displacement";

/// Derived fields at the mesh vertices.
///
/// Every quadrature value is spread to the four element vertices with the bilinear vertex
/// functions as weights (a lumped L² projection): a vertex value is
/// `Σ N_v(x_q) f(x_q) w_q / Σ N_v(x_q) w_q` over all quadrature points of its neighbouring
/// elements. Constant fields are reproduced exactly and near-vertex points dominate, so a
/// concentration at a vertex stays at that vertex.
pub fn recover_fields(u: &FEField, theta: &FEField, p: &MaterialParams) -> Result<FieldMap> {
    let space = u.space();
    if space.components() != 2 || theta.space().components() != 1 {
        return Err(Error::SpaceMismatch(
            "recovery needs a vector displacement and a scalar temperature".into(),
        ));
    }
    crate::fe::ensure_compatible(space, theta.space())?;
    let mesh = space.mesh();
    let nn = mesh.num_nodes();
    let mut mass = vec![0.0; nn];
    let mut eps_sum = vec![SymTensor2::ZERO; nn];
    let mut sig_sum = vec![SymTensor2::ZERO; nn];
    let mut sig_th_sum = vec![SymTensor2::ZERO; nn];
    let mut w_sum = vec![0.0; nn];

    let hats: Vec<[f64; 4]> = space
        .rule()
        .points
        .iter()
        .map(|&xi| {
            let mut v = [0.0; 4];
            let mut g = [[0.0; 2]; 4];
            reference_shape(1, xi, &mut v, &mut g);
            v
        })
        .collect();

    for e in 0..mesh.num_elements() {
        let verts = mesh.elements[e];
        for (q, hat) in hats.iter().enumerate() {
            let pt = space.qp(e, q);
            let eps = u.strain_at_qp(e, q);
            let location = QuadraturePoint {
                element: e,
                qp: q,
                x: pt.x,
            };
            let sigma = stress_from_strain_at(&eps, p, Some(location))?;
            let th = theta.value_at_qp(e, q)[0];
            let w = strain_energy_density(&eps, p).map_err(|err| match err {
                Error::InadmissibleStrain { t, bt, .. } => Error::InadmissibleStrain {
                    t,
                    bt,
                    location: Some(location),
                },
                other => other,
            })?;
            let sigma_th = thermal_stress(&sigma, th, p);
            for (&n, &h) in verts.iter().zip(hat) {
                let m = h * pt.jxw;
                mass[n] += m;
                eps_sum[n] += eps.scale(m);
                sig_sum[n] += sigma.scale(m);
                sig_th_sum[n] += sigma_th.scale(m);
                w_sum[n] += m * w;
            }
        }
    }

    let avg = |sum: Vec<SymTensor2>| -> Vec<SymTensor2> {
        sum.into_iter()
            .zip(&mass)
            .map(|(s, m)| s.scale(1.0 / m))
            .collect()
    };
    let strain = avg(eps_sum);
    let stress = avg(sig_sum);
    let stress_th = avg(sig_th_sum);
    let energy: Vec<f64> = w_sum.iter().zip(&mass).map(|(w, m)| w / m).collect();

    let principal = |t: &[SymTensor2]| -> (Vec<f64>, Vec<f64>) {
        t.iter().map(|x| x.principal_values()).unzip()
    };
    let (s_max, s_min) = principal(&stress);
    let (e_max, e_min) = principal(&strain);

    let temperature: Vec<f64> = (0..nn).map(|n| theta.values[n]).collect();
    let displacement: Vec<[f64; 2]> = (0..nn)
        .map(|n| [u.values[2 * n], u.values[2 * n + 1]])
        .collect();

    let mut out = FieldMap::new();
    let mut insert = |f: NodalField| {
        out.insert(f.name.clone(), f);
    };
    insert(NodalField::scalar(
        STRAIN_NORM,
        "1",
        strain.iter().map(SymTensor2::norm).collect(),
    ));
    insert(NodalField::scalar(
        STRESS_NORM,
        "stress",
        stress.iter().map(SymTensor2::norm).collect(),
    ));
    insert(NodalField::scalar(STRESS_PRINCIPAL_MAX, "stress", s_max));
    insert(NodalField::scalar(STRESS_PRINCIPAL_MIN, "stress", s_min));
    insert(NodalField::scalar(STRAIN_PRINCIPAL_MAX, "1", e_max));
    insert(NodalField::scalar(STRAIN_PRINCIPAL_MIN, "1", e_min));
    insert(NodalField::scalar(ENERGY_DENSITY, "energy/volume", energy));
    insert(NodalField::scalar(TEMPERATURE, "temperature", temperature));
    insert(NodalField {
        name: DISPLACEMENT.into(),
        units: "length".into(),
        values: NodalValues::Vector(displacement),
    });
    insert(NodalField::tensor(STRAIN, "1", strain));
    insert(NodalField::tensor(STRESS, "stress", stress));
    insert(NodalField::tensor(THERMAL_STRESS, "stress", stress_th));
    Ok(out)
}

/// Vertical opening `u_y(upper) − u_y(lower)` at one crack-face station.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpeningPoint {
    pub x: f64,
    pub jump: f64,
}

/// Opening along the crack from mouth to tip; the tip itself closes with zero jump.
pub fn crack_opening_profile(u: &FEField, mesh: &CrackedMesh) -> Vec<OpeningPoint> {
    let mut profile: Vec<OpeningPoint> = mesh
        .face_pairs
        .iter()
        .map(|&(upper, lower)| OpeningPoint {
            x: mesh.nodes[upper][0],
            jump: u.values[2 * upper + 1] - u.values[2 * lower + 1],
        })
        .collect();
    if let Some(tip) = mesh.tip_node {
        profile.push(OpeningPoint {
            x: mesh.nodes[tip][0],
            jump: 0.0,
        });
    }
    profile
}

/// Scalar nodal value at a mesh station.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSample {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

/// Values of a scalar field at the vertices on the horizontal line `y`, sorted by `x`.
/// Along a crack only the upper-face copy is reported.
pub fn extract_horizontal_line(field: &NodalField, mesh: &CrackedMesh, y: f64) -> Vec<LineSample> {
    let Some(values) = field.as_scalar() else {
        return Vec::new();
    };
    let lower: std::collections::HashSet<usize> = mesh.face_pairs.iter().map(|&(_, l)| l).collect();
    let tol = 1e-12;
    let mut out: Vec<LineSample> = mesh
        .nodes
        .iter()
        .enumerate()
        .filter(|(n, p)| (p[1] - y).abs() <= tol && !lower.contains(n))
        .map(|(n, p)| LineSample {
            x: p[0],
            y: p[1],
            value: values[n],
        })
        .collect();
    out.sort_by(|a, b| a.x.total_cmp(&b.x));
    out
}
