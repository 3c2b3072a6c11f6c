//! Pointwise strain-limiting response for transversely isotropic solids.
//!
//! Stress from strain:  `σ(ε) = 𝔼[ε] / (1 − (b t)^a)^{1/a}` with `t = ‖𝔼^{1/2}[ε]‖`.
//! Strain from stress:  `ε(σ) = 𝕂[σ] / (1 + (b s)^a)^{1/a}` with `s = ‖𝕂^{1/2}[σ]‖`.
//!
//! The two maps are exact inverses on the admissible set `b t < 1`.

use crate::error::{Error, QuadraturePoint, Result};
use crate::quadrature::composite_gauss;
use crate::tensor::{
    build_compliance, build_stiffness, compliance_norm, energy_norm, Compliance3, Stiffness3,
    SymTensor2,
};

/// Safety margin on `b t < 1`; strains with `b t ≥ 1 − DELTA_GUARD` are treated as inadmissible.
pub const DELTA_GUARD: f64 = 1e-8;

/// Raw material constants, before validation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialConstants {
    pub lambda: f64,
    pub mu: f64,
    pub gamma: f64,
    /// Fiber direction `m = (cos φ, sin φ)`, radians.
    pub fiber_angle: f64,
    pub a: f64,
    pub b: f64,
    /// Linear thermal expansion coefficient.
    pub alpha_t: f64,
    /// Thermal conductivity.
    pub k: f64,
}

impl Default for MaterialConstants {
    fn default() -> Self {
        MaterialConstants {
            lambda: 1.0,
            mu: 1.0,
            gamma: 1.0,
            fiber_angle: 0.0,
            a: 0.5,
            b: 0.02,
            alpha_t: 0.01,
            k: 1.0,
        }
    }
}

/// Validated material with its stiffness and compliance operators.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialParams {
    constants: MaterialConstants,
    alpha: f64,
    stiffness: Stiffness3,
    compliance: Compliance3,
}

fn check(name: &'static str, value: f64, ok: bool, reason: &'static str) -> Result<()> {
    if value.is_finite() && ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason,
        })
    }
}

impl MaterialParams {
    pub fn new(c: MaterialConstants) -> Result<Self> {
        check("lambda", c.lambda, c.lambda >= 0.0, "must be non-negative")?;
        check("mu", c.mu, c.mu > 0.0, "must be positive")?;
        check("gamma", c.gamma, true, "must be finite")?;
        check("fiber_angle", c.fiber_angle, true, "must be finite")?;
        check("a", c.a, c.a > 0.0, "must be positive")?;
        check("b", c.b, c.b >= 0.0, "must be non-negative")?;
        check(
            "alpha_T",
            c.alpha_t,
            c.alpha_t >= 0.0,
            "must be non-negative",
        )?;
        check("k", c.k, c.k > 0.0, "must be positive")?;
        let stiffness = build_stiffness(c.lambda, c.mu, c.gamma, c.fiber_angle)?;
        let compliance = build_compliance(&stiffness)?;
        Ok(MaterialParams {
            constants: c,
            alpha: c.alpha_t * (3.0 * c.lambda + 2.0 * c.mu),
            stiffness,
            compliance,
        })
    }

    /// Same material with a different `(a, b)` pair.
    pub fn with_limiting(&self, a: f64, b: f64) -> Result<Self> {
        MaterialParams::new(MaterialConstants {
            a,
            b,
            ..self.constants
        })
    }

    pub fn constants(&self) -> &MaterialConstants {
        &self.constants
    }

    pub fn a(&self) -> f64 {
        self.constants.a
    }

    pub fn b(&self) -> f64 {
        self.constants.b
    }

    pub fn k(&self) -> f64 {
        self.constants.k
    }

    /// Thermal stress modulus `α = α_T (3λ + 2μ)`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn stiffness(&self) -> &Stiffness3 {
        &self.stiffness
    }

    pub fn compliance(&self) -> &Compliance3 {
        &self.compliance
    }

    /// Largest energy norm accepted by [`stress_from_strain`], or `∞` for the linear law.
    pub fn energy_norm_limit(&self) -> f64 {
        if self.b() > 0.0 {
            (1.0 - DELTA_GUARD) / self.b()
        } else {
            f64::INFINITY
        }
    }
}

/// `(1 − x^a)^{-1/a}` for `x ∈ [0, 1)`.
fn stiffening(x: f64, a: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    (-(-x.powf(a)).ln_1p() / a).exp()
}

/// `(1 + x^a)^{-1/a}` for `x ≥ 0`.
///
/// Above `x = 1` the equivalent form `x⁻¹ (1 + x^{-a})^{-1/a}` keeps the relative error at a few
/// ulp, which the saturated regime needs to stay below the strain ceiling.
fn softening(x: f64, a: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    if x > 1.0 {
        return (-x.powf(-a).ln_1p() / a).exp() / x;
    }
    (-x.powf(a).ln_1p() / a).exp()
}

/// Secant multiplier `φ(t)` with `σ = φ(t) 𝔼[ε]`.
pub fn secant_factor(t: f64, p: &MaterialParams) -> f64 {
    if p.b() == 0.0 {
        1.0
    } else {
        stiffening(p.b() * t, p.a())
    }
}

fn admissible(t: f64, p: &MaterialParams, location: Option<QuadraturePoint>) -> Result<()> {
    let bt = p.b() * t;
    if bt >= 1.0 - DELTA_GUARD || !bt.is_finite() {
        return Err(Error::InadmissibleStrain { t, bt, location });
    }
    Ok(())
}

pub fn stress_from_strain(eps: &SymTensor2, p: &MaterialParams) -> Result<SymTensor2> {
    stress_from_strain_at(eps, p, None)
}

/// [`stress_from_strain`] that reports `location` when the strain is inadmissible.
pub fn stress_from_strain_at(
    eps: &SymTensor2,
    p: &MaterialParams,
    location: Option<QuadraturePoint>,
) -> Result<SymTensor2> {
    let linear = p.stiffness().apply(eps);
    if p.b() == 0.0 {
        return Ok(linear);
    }
    let t = energy_norm(eps, p.stiffness());
    admissible(t, p, location)?;
    Ok(linear.scale(secant_factor(t, p)))
}

/// Strain-limiting response `F̃(σ)`; defined for every symmetric `σ`.
pub fn strain_from_stress(sigma: &SymTensor2, p: &MaterialParams) -> SymTensor2 {
    let linear = p.compliance().apply(sigma);
    if p.b() == 0.0 {
        return linear;
    }
    let s = compliance_norm(sigma, p.compliance());
    linear.scale(softening(p.b() * s, p.a()))
}

/// Picard multiplier evaluated at the previous iterate's energy norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Relaxation {
    pub factor: f64,
    /// Whether `t_prev` had to be pulled back below the admissibility limit.
    pub clamped: bool,
}

pub fn relaxation_factor(t_prev: f64, p: &MaterialParams) -> Relaxation {
    if p.b() == 0.0 {
        return Relaxation {
            factor: 1.0,
            clamped: false,
        };
    }
    let limit = p.energy_norm_limit();
    let clamped = !(t_prev < limit);
    let t = if clamped { limit } else { t_prev };
    Relaxation {
        factor: secant_factor(t, p),
        clamped,
    }
}

const ENERGY_RULE_POINTS: usize = 32;
const ENERGY_TOL: f64 = 1e-10;
const ENERGY_MAX_PANELS: usize = 1 << 12;

/// Hyperelastic potential `W(ε) = ∫₀¹ σ(sε):ε ds`, so that `∂W/∂ε = σ(ε)`.
pub fn strain_energy_density(eps: &SymTensor2, p: &MaterialParams) -> Result<f64> {
    let t = energy_norm(eps, p.stiffness());
    admissible(t, p, None)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let t2 = t * t;
    let integrand = |s: f64| s * t2 * secant_factor(s * t, p);
    let mut panels = 1;
    let mut value = composite_gauss(integrand, 0.0, 1.0, ENERGY_RULE_POINTS, panels);
    while panels < ENERGY_MAX_PANELS {
        panels *= 2;
        let refined = composite_gauss(integrand, 0.0, 1.0, ENERGY_RULE_POINTS, panels);
        let converged =
            (refined - value).abs() <= ENERGY_TOL * refined.abs().max(f64::MIN_POSITIVE);
        value = refined;
        if converged {
            break;
        }
    }
    Ok(value)
}

/// Total stress `σ_Th = σ − α θ I`.
pub fn thermal_stress(sigma_mech: &SymTensor2, theta: f64, p: &MaterialParams) -> SymTensor2 {
    let shift = p.alpha() * theta;
    SymTensor2::from_mandel(
        sigma_mech.m[0] - shift,
        sigma_mech.m[1] - shift,
        sigma_mech.m[2],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_material(a: f64, b: f64) -> MaterialParams {
        MaterialParams::new(MaterialConstants {
            lambda: 0.0,
            mu: 0.5,
            gamma: 0.0,
            a,
            b,
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn linear_limit_is_exact() {
        let p = MaterialParams::new(MaterialConstants {
            b: 0.0,
            ..Default::default()
        })
        .unwrap();
        let eps = SymTensor2::from_mandel(0.3, -0.2, 0.7);
        assert_eq!(
            stress_from_strain(&eps, &p).unwrap(),
            p.stiffness().apply(&eps)
        );
        let sigma = SymTensor2::from_mandel(3.0, 1.0, -2.0);
        assert_eq!(strain_from_stress(&sigma, &p), p.compliance().apply(&sigma));
    }

    #[test]
    fn zero_maps_to_zero() {
        let p = MaterialParams::new(MaterialConstants::default()).unwrap();
        assert_eq!(
            stress_from_strain(&SymTensor2::ZERO, &p).unwrap(),
            SymTensor2::ZERO
        );
        assert_eq!(strain_from_stress(&SymTensor2::ZERO, &p), SymTensor2::ZERO);
        assert_eq!(strain_energy_density(&SymTensor2::ZERO, &p).unwrap(), 0.0);
    }

    #[test]
    fn scalar_stress_example() {
        let p = unit_material(1.0, 0.5);
        let sigma = stress_from_strain(&SymTensor2::from_mandel(1.0, 0.0, 0.0), &p).unwrap();
        assert_relative_eq!(sigma.m[0], 2.0, max_relative = 1e-15);
        assert_eq!(sigma.m[1], 0.0);
        assert_eq!(sigma.m[2], 0.0);
    }

    #[test]
    fn inadmissible_strain_rejected() {
        let p = unit_material(1.0, 0.5);
        let err = stress_from_strain(&SymTensor2::from_mandel(2.0, 0.0, 0.0), &p).unwrap_err();
        match err {
            Error::InadmissibleStrain { t, bt, .. } => {
                assert_relative_eq!(t, 2.0);
                assert_relative_eq!(bt, 1.0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(strain_energy_density(&SymTensor2::from_mandel(2.0, 0.0, 0.0), &p).is_err());
    }

    #[test]
    fn relaxation_examples() {
        let p = unit_material(1.0, 0.02);
        assert_eq!(relaxation_factor(0.0, &p).factor, 1.0);
        let r = relaxation_factor(25.0, &p);
        assert_relative_eq!(r.factor, 2.0, max_relative = 1e-14);
        assert!(!r.clamped);
        let lin = unit_material(1.0, 0.0);
        assert_eq!(relaxation_factor(1e9, &lin).factor, 1.0);
    }

    #[test]
    fn relaxation_clamps_past_the_limit() {
        let p = unit_material(1.0, 0.02);
        let r = relaxation_factor(60.0, &p);
        assert!(r.clamped);
        assert!(r.factor.is_finite());
        assert_relative_eq!(r.factor, 1.0 / DELTA_GUARD, max_relative = 1e-6);
    }

    #[test]
    fn linear_energy_is_half_quadratic_form() {
        let p = MaterialParams::new(MaterialConstants {
            b: 0.0,
            ..Default::default()
        })
        .unwrap();
        let eps = SymTensor2::from_mandel(0.1, -0.4, 0.25);
        let w = strain_energy_density(&eps, &p).unwrap();
        let expected = 0.5 * p.stiffness().matrix().quadratic_form(&eps);
        assert!((w - expected).abs() <= 1e-10 * expected);
    }

    #[test]
    fn energy_matches_closed_form_for_unit_exponent() {
        // a = 1: W = t²(−1/c − ln(1 − c)/c²), c = b t.
        let p = MaterialParams::new(MaterialConstants {
            a: 1.0,
            b: 0.3,
            ..Default::default()
        })
        .unwrap();
        let eps = SymTensor2::from_mandel(0.4, 0.1, -0.3);
        let t = energy_norm(&eps, p.stiffness());
        let c = p.b() * t;
        let exact = t * t * (-1.0 / c - (1.0 - c).ln() / (c * c));
        let w = strain_energy_density(&eps, &p).unwrap();
        assert!((w - exact).abs() <= 1e-10 * exact, "{w} vs {exact}");
    }

    #[test]
    fn thermal_stress_examples() {
        let p = MaterialParams::new(MaterialConstants {
            lambda: 1.0,
            mu: 1.0,
            alpha_t: 0.1,
            ..Default::default()
        })
        .unwrap();
        assert_relative_eq!(p.alpha(), 0.5, max_relative = 1e-15);
        let s = SymTensor2::from_mandel(1.0, 2.0, 3.0);
        assert_eq!(thermal_stress(&s, 0.0, &p), s);
        let out = thermal_stress(&SymTensor2::ZERO, 10.0, &p);
        assert_eq!(out, SymTensor2::from_mandel(-5.0, -5.0, 0.0));

        let unit_alpha = MaterialParams::new(MaterialConstants {
            lambda: 0.0,
            mu: 0.5,
            alpha_t: 1.0,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(unit_alpha.alpha(), 1.0);
        assert_eq!(
            thermal_stress(&SymTensor2::ZERO, 2.0, &unit_alpha),
            SymTensor2::from_mandel(-2.0, -2.0, 0.0)
        );
    }

    #[test]
    fn invalid_constants_rejected() {
        for c in [
            MaterialConstants {
                b: -1.0,
                ..Default::default()
            },
            MaterialConstants {
                a: 0.0,
                ..Default::default()
            },
            MaterialConstants {
                mu: 0.0,
                ..Default::default()
            },
            MaterialConstants {
                k: -1.0,
                ..Default::default()
            },
            MaterialConstants {
                alpha_t: f64::NAN,
                ..Default::default()
            },
            MaterialConstants {
                gamma: -50.0,
                ..Default::default()
            },
        ] {
            assert!(MaterialParams::new(c).is_err(), "{c:?}");
        }
    }
}
