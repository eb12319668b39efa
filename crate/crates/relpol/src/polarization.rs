//! Helicity polarization vectors and their behaviour under Lorentz
//! transforms.
//!
//! Polarization states are complex 3-vectors (the time slot of the photon
//! polarization four-vector is identically zero in this gauge and is
//! dropped). A transform acts through
//! D(Λ) = R(Λk̂)·R_z(Θ(Λ,k))·R(k̂)⁻¹,
//! which for a boost along z reduces to R(Λk̂)·R(k̂)⁻¹.

use nalgebra::{Matrix3, Vector3};

use crate::kinematics::{
    standard_rotation, wigner_angle, Factor, FourVector, LorentzTransform, UnitDirection,
};
use crate::{C64, Error, Result};

/// Unit-norm tolerance for polarization state vectors.
pub const NORM_TOL: f64 = 1e-12;
/// Transversality tolerance |⟨k̂, α⟩| for state vectors.
pub const TRANSVERSE_TOL: f64 = 1e-10;

/// A complex polarization 3-vector.
///
/// The wrapper itself admits any finite amplitudes (intermediate algebra
/// needs that); operations that require a physical *state* — unit norm,
/// transverse to its momentum — validate at their boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizationVector(Vector3<C64>);

impl PolarizationVector {
    pub fn new(components: Vector3<C64>) -> Self {
        Self(components)
    }

    pub fn components(&self) -> &Vector3<C64> {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn is_unit(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOL
    }

    /// |⟨k̂, α⟩| with the direction taken real.
    pub fn longitudinal_component(&self, dir: UnitDirection) -> f64 {
        let n = dir.unit_vector();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..3 {
            acc += C64::new(n[i], 0.0) * self.0[i];
        }
        acc.norm()
    }

    pub fn is_transverse_to(&self, dir: UnitDirection) -> bool {
        self.longitudinal_component(dir) <= TRANSVERSE_TOL
    }

    /// Validate this vector as a physical state for momentum `dir`.
    fn require_state(&self, dir: UnitDirection) -> Result<()> {
        if !self.is_unit() {
            return Err(Error::InvalidPolarization(format!(
                "norm {} differs from 1 beyond {NORM_TOL:.0e}",
                self.norm()
            )));
        }
        if !self.is_transverse_to(dir) {
            return Err(Error::InvalidPolarization(format!(
                "longitudinal component {:.3e} beyond {TRANSVERSE_TOL:.0e}",
                self.longitudinal_component(dir)
            )));
        }
        Ok(())
    }
}

/// Hermitian overlap ⟨a|b⟩ = Σ conj(aᵢ)·bᵢ, conjugate-linear in the first
/// argument.
pub fn overlap(a: &PolarizationVector, b: &PolarizationVector) -> C64 {
    a.0.dotc(&b.0)
}

/// Promote a real rotation to the complex field for action on amplitudes.
pub(crate) fn complexify(m: &Matrix3<f64>) -> Matrix3<C64> {
    m.map(|x| C64::new(x, 0.0))
}

/// Helicity eigenvector ε^σ_k = R(k̂)·(1, σi, 0)/√2 for σ = ±1.
///
/// Componentwise: ((cosθcosφ − σi sinφ), (cosθsinφ + σi cosφ), −sinθ)/√2.
pub fn helicity_vector(dir: UnitDirection, sigma: i32) -> Result<PolarizationVector> {
    if sigma != 1 && sigma != -1 {
        return Err(Error::InvalidHelicity(sigma));
    }
    let s = sigma as f64;
    let (st, ct) = dir.theta().sin_cos();
    let (sp, cp) = dir.phi().sin_cos();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    Ok(PolarizationVector(Vector3::new(
        C64::new(ct * cp * r, -s * sp * r),
        C64::new(ct * sp * r, s * cp * r),
        C64::new(-st * r, 0.0),
    )))
}

/// Transform a polarization state at null momentum (1, k̂) by the factor list
/// `factors`; returns the transformed direction and state.
///
/// The direction comes from applying the full 4×4 product to the momentum;
/// the amplitude is rotated by R(Λk̂)·R_z(Θ)·R(k̂)⁻¹ with Θ from
/// [`wigner_angle`]. Norm and transversality are preserved exactly up to
/// rounding; helicity eigenvectors pick up the pure phase e^{−iσΘ}.
pub fn transform_polarization(
    factors: &[Factor],
    dir: UnitDirection,
    pol: &PolarizationVector,
) -> Result<(UnitDirection, PolarizationVector)> {
    pol.require_state(dir)?;
    let k = FourVector::from_direction(1.0, dir);
    let lambda = LorentzTransform::from_factors(factors)?;
    let new_dir = lambda.apply(&k).direction()?;
    let theta_w = wigner_angle(factors, &k)?;

    let (sw, cw) = theta_w.sin_cos();
    let rot_w = Matrix3::new(cw, -sw, 0.0, sw, cw, 0.0, 0.0, 0.0, 1.0);
    let d = standard_rotation(new_dir).spatial() * rot_w * standard_rotation(dir).spatial().transpose();
    Ok((new_dir, PolarizationVector(complexify(&d) * &pol.0)))
}

/// The two-state preparation of the discrimination scenario: one photon in
/// each of two helicity states at (generally different) momentum directions,
/// drawn with the given priors.
#[derive(Debug, Clone)]
pub struct MonochromaticPreparation {
    pub dir1: UnitDirection,
    pub dir2: UnitDirection,
    pub pol1: PolarizationVector,
    pub pol2: PolarizationVector,
    pub prior1: f64,
    pub prior2: f64,
}

impl MonochromaticPreparation {
    /// Validates unit norm, transversality, and that priors are a
    /// distribution.
    pub fn new(
        dir1: UnitDirection,
        pol1: PolarizationVector,
        dir2: UnitDirection,
        pol2: PolarizationVector,
        prior1: f64,
        prior2: f64,
    ) -> Result<Self> {
        pol1.require_state(dir1)?;
        pol2.require_state(dir2)?;
        if prior1 < 0.0 || prior2 < 0.0 || (prior1 + prior2 - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidEnsemble(format!(
                "priors ({prior1}, {prior2}) are not a distribution"
            )));
        }
        Ok(Self {
            dir1,
            dir2,
            pol1,
            pol2,
            prior1,
            prior2,
        })
    }

    /// The reference preparation: σ = +1 along +z against σ = −1 at polar
    /// angle `theta` in the x–z plane, equal priors.
    pub fn standard_pair(theta: f64) -> Result<Self> {
        let dir2 = UnitDirection::new(theta, 0.0)?;
        Self::new(
            UnitDirection::Z,
            helicity_vector(UnitDirection::Z, 1)?,
            dir2,
            helicity_vector(dir2, -1)?,
            0.5,
            0.5,
        )
    }
}
