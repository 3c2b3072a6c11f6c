//! Symmetric 2×2 tensors and fourth-order operators in the orthonormal Mandel basis.
//!
//! A symmetric tensor `t` is stored as `(t11, t22, √2·t12)`. In this basis the
//! Frobenius product `A:B` is the Euclidean dot product of the coefficient vectors,
//! and a fourth-order operator with major and minor symmetries is a symmetric 3×3
//! matrix.

use std::f64::consts::SQRT_2;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Symmetric second-order tensor in Mandel form.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SymTensor2 {
    pub m: [f64; 3],
}

impl SymTensor2 {
    pub const ZERO: SymTensor2 = SymTensor2 { m: [0.0; 3] };
    pub const IDENTITY: SymTensor2 = SymTensor2 { m: [1.0, 1.0, 0.0] };

    pub const fn from_mandel(m1: f64, m2: f64, m3: f64) -> Self {
        SymTensor2 { m: [m1, m2, m3] }
    }

    /// Builds the tensor from its ordinary components `t11, t22, t12`.
    pub fn from_components(t11: f64, t22: f64, t12: f64) -> Self {
        SymTensor2 {
            m: [t11, t22, SQRT_2 * t12],
        }
    }

    pub fn t11(&self) -> f64 {
        self.m[0]
    }

    pub fn t22(&self) -> f64 {
        self.m[1]
    }

    pub fn t12(&self) -> f64 {
        self.m[2] / SQRT_2
    }

    /// The full 2×2 matrix, row major.
    pub fn to_matrix(&self) -> [[f64; 2]; 2] {
        let t12 = self.t12();
        [[self.m[0], t12], [t12, self.m[1]]]
    }

    /// Double contraction `A:B`.
    pub fn ddot(&self, other: &SymTensor2) -> f64 {
        self.m[0] * other.m[0] + self.m[1] * other.m[1] + self.m[2] * other.m[2]
    }

    /// Frobenius norm `√(A:A)`.
    pub fn norm(&self) -> f64 {
        self.ddot(self).sqrt()
    }

    pub fn trace(&self) -> f64 {
        self.m[0] + self.m[1]
    }

    /// Eigenvalues `(max, min)`.
    pub fn principal_values(&self) -> (f64, f64) {
        let mean = 0.5 * (self.m[0] + self.m[1]);
        let half_diff = 0.5 * (self.m[0] - self.m[1]);
        let radius = half_diff.hypot(self.t12());
        (mean + radius, mean - radius)
    }

    pub fn scale(&self, s: f64) -> SymTensor2 {
        SymTensor2 {
            m: [s * self.m[0], s * self.m[1], s * self.m[2]],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().all(|v| v.is_finite())
    }
}

impl Add for SymTensor2 {
    type Output = SymTensor2;
    fn add(self, rhs: SymTensor2) -> SymTensor2 {
        SymTensor2 {
            m: [
                self.m[0] + rhs.m[0],
                self.m[1] + rhs.m[1],
                self.m[2] + rhs.m[2],
            ],
        }
    }
}

impl AddAssign for SymTensor2 {
    fn add_assign(&mut self, rhs: SymTensor2) {
        for (a, b) in self.m.iter_mut().zip(rhs.m) {
            *a += b;
        }
    }
}

impl Sub for SymTensor2 {
    type Output = SymTensor2;
    fn sub(self, rhs: SymTensor2) -> SymTensor2 {
        SymTensor2 {
            m: [
                self.m[0] - rhs.m[0],
                self.m[1] - rhs.m[1],
                self.m[2] - rhs.m[2],
            ],
        }
    }
}

impl Neg for SymTensor2 {
    type Output = SymTensor2;
    fn neg(self) -> SymTensor2 {
        self.scale(-1.0)
    }
}

impl Mul<SymTensor2> for f64 {
    type Output = SymTensor2;
    fn mul(self, rhs: SymTensor2) -> SymTensor2 {
        rhs.scale(self)
    }
}

/// Symmetric 3×3 matrix acting on Mandel vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3 {
    pub entries: [[f64; 3]; 3],
}

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3 {
        entries: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    pub fn diagonal(d: [f64; 3]) -> Mat3 {
        let mut entries = [[0.0; 3]; 3];
        for i in 0..3 {
            entries[i][i] = d[i];
        }
        Mat3 { entries }
    }

    pub fn apply(&self, t: &SymTensor2) -> SymTensor2 {
        let mut out = [0.0; 3];
        for (i, row) in self.entries.iter().enumerate() {
            out[i] = row[0] * t.m[0] + row[1] * t.m[1] + row[2] * t.m[2];
        }
        SymTensor2 { m: out }
    }

    /// `tᵀ·A·t`.
    pub fn quadratic_form(&self, t: &SymTensor2) -> f64 {
        t.ddot(&self.apply(t))
    }

    pub fn matmul(&self, other: &Mat3) -> Mat3 {
        let mut entries = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                entries[i][j] = (0..3)
                    .map(|k| self.entries[i][k] * other.entries[k][j])
                    .sum();
            }
        }
        Mat3 { entries }
    }

    pub fn determinant(&self) -> f64 {
        let a = &self.entries;
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    }

    /// Inverse by cofactors, `None` when the matrix is singular.
    pub fn inverse(&self) -> Option<Mat3> {
        let a = &self.entries;
        let det = self.determinant();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| {
            a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0]
        };
        let adj = [
            [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
            [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
            [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
        ];
        let mut entries = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                entries[i][j] = adj[i][j] / det;
            }
        }
        Some(Mat3 { entries })
    }

    /// Eigenvalues of the symmetric part, in descending order (closed-form trigonometric solution).
    pub fn symmetric_eigenvalues(&self) -> [f64; 3] {
        let a = &self.entries;
        let a01 = 0.5 * (a[0][1] + a[1][0]);
        let a02 = 0.5 * (a[0][2] + a[2][0]);
        let a12 = 0.5 * (a[1][2] + a[2][1]);
        let off = a01 * a01 + a02 * a02 + a12 * a12;
        if off == 0.0 {
            let mut d = [a[0][0], a[1][1], a[2][2]];
            d.sort_by(|x, y| y.total_cmp(x));
            return d;
        }
        let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
        let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * off;
        let p = (p2 / 6.0).sqrt();
        let b = Mat3 {
            entries: [
                [(a[0][0] - q) / p, a01 / p, a02 / p],
                [a01 / p, (a[1][1] - q) / p, a12 / p],
                [a02 / p, a12 / p, (a[2][2] - q) / p],
            ],
        };
        let r = (0.5 * b.determinant()).clamp(-1.0, 1.0);
        let phi = r.acos() / 3.0;
        let e1 = q + 2.0 * p * phi.cos();
        let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::FRAC_PI_3).cos();
        let e2 = 3.0 * q - e1 - e3;
        [e1, e2, e3]
    }

    pub fn max_asymmetry(&self) -> f64 {
        let a = &self.entries;
        [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(i, j)| (a[i][j] - a[j][i]).abs())
            .fold(0.0, f64::max)
    }
}

/// Stiffness operator `𝔼` (strain → stress) in Mandel form. Always symmetric positive definite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stiffness3(Mat3);

/// Compliance operator `𝕂 = 𝔼⁻¹` in Mandel form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Compliance3(Mat3);

fn validate_spd(m: &Mat3) -> Result<()> {
    let scale = m
        .entries
        .iter()
        .flatten()
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    if !scale.is_finite() || m.max_asymmetry() > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: f64::NAN,
        });
    }
    let min = m.symmetric_eigenvalues()[2];
    if !(min > 1e-14 * scale) {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: min,
        });
    }
    Ok(())
}

impl Stiffness3 {
    /// Wraps an arbitrary Mandel matrix, rejecting anything that is not symmetric positive definite.
    pub fn from_matrix(m: Mat3) -> Result<Self> {
        validate_spd(&m)?;
        Ok(Stiffness3(m))
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn apply(&self, eps: &SymTensor2) -> SymTensor2 {
        self.0.apply(eps)
    }

    pub fn eigenvalues(&self) -> [f64; 3] {
        self.0.symmetric_eigenvalues()
    }
}

impl Compliance3 {
    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn apply(&self, sigma: &SymTensor2) -> SymTensor2 {
        self.0.apply(sigma)
    }

    pub fn eigenvalues(&self) -> [f64; 3] {
        self.0.symmetric_eigenvalues()
    }
}

/// Mandel vector of the structural tensor `m ⊗ m` for the unit fiber `m = (cos φ, sin φ)`.
pub fn structural_tensor(fiber_angle: f64) -> SymTensor2 {
    let (s, c) = fiber_angle.sin_cos();
    SymTensor2::from_components(c * c, s * s, c * s)
}

/// Transversely isotropic stiffness `𝔼[ε] = 2με + λ tr(ε) I + γ (ε:M) M`.
pub fn build_stiffness(lambda: f64, mu: f64, gamma: f64, fiber_angle: f64) -> Result<Stiffness3> {
    let id = SymTensor2::IDENTITY.m;
    let fiber = structural_tensor(fiber_angle).m;
    let mut entries = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            entries[i][j] = lambda * id[i] * id[j] + gamma * fiber[i] * fiber[j];
        }
        entries[i][i] += 2.0 * mu;
    }
    Stiffness3::from_matrix(Mat3 { entries })
}

pub fn build_compliance(stiffness: &Stiffness3) -> Result<Compliance3> {
    let inv = stiffness.0.inverse().ok_or(Error::NotPositiveDefinite {
        min_eigenvalue: 0.0,
    })?;
    // Cofactor inverses are symmetric only up to rounding.
    let mut entries = inv.entries;
    for i in 0..3 {
        for j in (i + 1)..3 {
            let avg = 0.5 * (entries[i][j] + entries[j][i]);
            entries[i][j] = avg;
            entries[j][i] = avg;
        }
    }
    let m = Mat3 { entries };
    validate_spd(&m)?;
    Ok(Compliance3(m))
}

/// `‖𝔼^{1/2}[ε]‖ = √(ε:𝔼[ε])`.
pub fn energy_norm(eps: &SymTensor2, stiffness: &Stiffness3) -> f64 {
    stiffness.0.quadratic_form(eps).max(0.0).sqrt()
}

/// `√(σ:𝕂[σ])`, the compliance-weighted counterpart of [`energy_norm`].
pub fn compliance_norm(sigma: &SymTensor2, compliance: &Compliance3) -> f64 {
    compliance.0.quadratic_form(sigma).max(0.0).sqrt()
}
