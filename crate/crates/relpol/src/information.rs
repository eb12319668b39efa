//! Entropic quantities of polarization ensembles: von Neumann entropy and
//! the Holevo bound on accessible information, both in bits.

use nalgebra::Matrix3;

use crate::wavepacket::PolDensityMatrix;
use crate::{C64, Error, Result};

/// S(ρ) cannot exceed log₂(dim) for a 3×3 density matrix.
fn max_entropy() -> f64 {
    3.0f64.log2()
}

/// A discrete ensemble of polarization density matrices with priors.
#[derive(Debug, Clone)]
pub struct Ensemble {
    members: Vec<(f64, PolDensityMatrix)>,
}

impl Ensemble {
    /// Priors must be nonnegative and sum to one within 1e−12.
    pub fn new(members: Vec<(f64, PolDensityMatrix)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidEnsemble("no members".into()));
        }
        let mut total = 0.0;
        for (p, _) in &members {
            if !(p.is_finite() && *p >= 0.0) {
                return Err(Error::InvalidEnsemble(format!("prior {p}")));
            }
            total += p;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidEnsemble(format!("priors sum to {total}")));
        }
        Ok(Self { members })
    }

    /// Two members at priors ½, ½.
    pub fn equal_pair(a: PolDensityMatrix, b: PolDensityMatrix) -> Result<Self> {
        Self::new(vec![(0.5, a), (0.5, b)])
    }

    pub fn members(&self) -> &[(f64, PolDensityMatrix)] {
        &self.members
    }

    /// The prior-weighted average state Σ pᵢ ρᵢ.
    pub fn average(&self) -> Result<PolDensityMatrix> {
        let mut acc = Matrix3::<C64>::zeros();
        for (p, rho) in &self.members {
            acc += rho.matrix().map(|x| x * C64::new(*p, 0.0));
        }
        PolDensityMatrix::new(acc)
    }
}

/// Von Neumann entropy S(ρ) = −Σ λ log₂ λ in bits.
///
/// Eigenvalues inside the density-matrix tolerance band [−1e−9, 0) are
/// treated as exact zeros; the result is clamped to [0, log₂ 3].
pub fn von_neumann_entropy(rho: &PolDensityMatrix) -> Result<f64> {
    let mut s = 0.0;
    for lam in rho.eigenvalues() {
        if lam < crate::wavepacket::PSD_TOL {
            return Err(Error::NegativeEigenvalue(lam));
        }
        if lam > 0.0 {
            s -= lam * lam.log2();
        }
    }
    if s < -1e-10 || s > max_entropy() + 1e-10 {
        return Err(Error::Numerical(format!("entropy {s} outside [0, log2 3]")));
    }
    Ok(s.clamp(0.0, max_entropy()))
}

/// Holevo bound χ = S(Σ pᵢρᵢ) − Σ pᵢ S(ρᵢ) in bits.
///
/// Rounding can push the difference a hair below zero; anything above −1e−10
/// is clipped to zero, anything further negative is reported as an error.
pub fn holevo_bound(ensemble: &Ensemble) -> Result<f64> {
    let mixed = von_neumann_entropy(&ensemble.average()?)?;
    let mut conditional = 0.0;
    for (p, rho) in ensemble.members() {
        if *p > 0.0 {
            conditional += p * von_neumann_entropy(rho)?;
        }
    }
    let chi = mixed - conditional;
    if chi < -1e-10 {
        return Err(Error::Numerical(format!("Holevo bound {chi} negative")));
    }
    Ok(chi.max(0.0))
}

/// Holevo bound of the equal-prior pure pair whose overlap magnitude is
/// (1 − c)/2, written directly in terms of c = cos ϑ′:
/// χ(c) = h((1+c)/4) + h((3−c)/4) with h(x) = −x log₂ x.
///
/// The mixture of the two pure states has eigenvalues (1±|s|)/2 inside the
/// plane they span; the conditional entropies vanish.
pub fn holevo_pure_closed_form(c: f64) -> Result<f64> {
    if !(c.is_finite() && c.abs() <= 1.0 + 1e-12) {
        return Err(Error::CosineOutOfRange(c));
    }
    let c = c.clamp(-1.0, 1.0);
    let h = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    Ok(h((1.0 + c) / 4.0) + h((3.0 - c) / 4.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{standard_rotation, UnitDirection};
    use crate::polarization::helicity_vector;
    use approx::assert_abs_diff_eq;
    use nalgebra::Vector3;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::{PI, TAU};

    fn diag(a: f64, b: f64, c: f64) -> PolDensityMatrix {
        PolDensityMatrix::new(Matrix3::from_diagonal(&Vector3::new(
            C64::new(a, 0.0),
            C64::new(b, 0.0),
            C64::new(c, 0.0),
        )))
        .unwrap()
    }

    fn random_density(rng: &mut StdRng) -> PolDensityMatrix {
        let a = Matrix3::from_fn(|_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let m = &a * a.adjoint();
        let tr = m.trace().re;
        PolDensityMatrix::new(m.map(|x| x / C64::new(tr, 0.0))).unwrap()
    }

    #[test]
    fn entropy_of_pure_state_is_zero() {
        let rho = PolDensityMatrix::pure_helicity_z(1).unwrap();
        assert!(von_neumann_entropy(&rho).unwrap() < 1e-12);
    }

    #[test]
    fn entropy_spectrum_examples() {
        assert_abs_diff_eq!(von_neumann_entropy(&diag(0.5, 0.5, 0.0)).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(von_neumann_entropy(&diag(0.5, 0.25, 0.25)).unwrap(), 1.5, epsilon = 1e-14);
        let third = 1.0 / 3.0;
        assert_abs_diff_eq!(
            von_neumann_entropy(&diag(third, third, third)).unwrap(),
            3.0f64.log2(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn entropy_is_rotation_invariant() {
        let mut rng = StdRng::seed_from_u64(51);
        for _ in 0..50 {
            let rho = random_density(&mut rng);
            let dir =
                UnitDirection::new(rng.random_range(0.0..PI), rng.random_range(0.0..TAU)).unwrap();
            let r = standard_rotation(dir)
                .spatial()
                .map(|x| C64::new(x, 0.0));
            let rotated = PolDensityMatrix::new(r * rho.matrix() * r.adjoint()).unwrap();
            assert_abs_diff_eq!(
                von_neumann_entropy(&rotated).unwrap(),
                von_neumann_entropy(&rho).unwrap(),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn ensemble_validation() {
        let rho = diag(0.5, 0.5, 0.0);
        assert!(matches!(
            Ensemble::new(vec![]),
            Err(Error::InvalidEnsemble(_))
        ));
        assert!(matches!(
            Ensemble::new(vec![(-0.1, rho.clone()), (1.1, rho.clone())]),
            Err(Error::InvalidEnsemble(_))
        ));
        assert!(matches!(
            Ensemble::new(vec![(0.6, rho.clone()), (0.6, rho.clone())]),
            Err(Error::InvalidEnsemble(_))
        ));
        assert!(Ensemble::equal_pair(rho.clone(), rho).is_ok());
    }

    #[test]
    fn holevo_of_identical_members_vanishes() {
        let mut rng = StdRng::seed_from_u64(52);
        let rho = random_density(&mut rng);
        let ens = Ensemble::equal_pair(rho.clone(), rho).unwrap();
        assert_abs_diff_eq!(holevo_bound(&ens).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn holevo_of_orthogonal_pure_pair_is_one_bit() {
        let p = PolDensityMatrix::pure_helicity_z(1).unwrap();
        let m = PolDensityMatrix::pure_helicity_z(-1).unwrap();
        let ens = Ensemble::equal_pair(p, m).unwrap();
        assert_abs_diff_eq!(holevo_bound(&ens).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn closed_form_endpoints_and_frozen_midpoint() {
        assert_eq!(holevo_pure_closed_form(1.0).unwrap(), 1.0);
        assert_eq!(holevo_pure_closed_form(-1.0).unwrap(), 0.0);
        // Frozen: 0.5 + 0.75·log₂(4/3).
        assert_abs_diff_eq!(
            holevo_pure_closed_form(0.0).unwrap(),
            0.8112781244591328,
            epsilon = 1e-15
        );
        assert!(holevo_pure_closed_form(1.001).is_err());
        assert!(holevo_pure_closed_form(f64::NAN).is_err());
    }

    #[test]
    fn closed_form_is_strictly_increasing_in_c() {
        let mut last = -1.0;
        for i in 0..=40 {
            let c = -1.0 + 2.0 * i as f64 / 40.0;
            let chi = holevo_pure_closed_form(c).unwrap();
            assert!(chi > last, "chi({c}) = {chi} not above {last}");
            last = chi;
        }
    }

    #[test]
    fn general_bound_matches_closed_form_for_pure_pairs() {
        // Equal-prior pair: +1 helicity along z against −1 helicity at
        // polar angle arccos(c); overlap magnitude (1−c)/2.
        for i in 0..=20 {
            let c = -1.0 + 2.0 * i as f64 / 20.0;
            let theta = c.clamp(-1.0, 1.0).acos();
            let a1 = helicity_vector(UnitDirection::Z, 1).unwrap();
            let a2 = helicity_vector(UnitDirection::new(theta, 0.0).unwrap(), -1).unwrap();
            let ens = Ensemble::equal_pair(
                PolDensityMatrix::from_pure(&a1).unwrap(),
                PolDensityMatrix::from_pure(&a2).unwrap(),
            )
            .unwrap();
            assert_abs_diff_eq!(
                holevo_bound(&ens).unwrap(),
                holevo_pure_closed_form(c).unwrap(),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn bound_stays_in_range_for_random_pairs() {
        let mut rng = StdRng::seed_from_u64(53);
        for _ in 0..50 {
            let ens =
                Ensemble::equal_pair(random_density(&mut rng), random_density(&mut rng)).unwrap();
            let chi = holevo_bound(&ens).unwrap();
            assert!((0.0..=1.0 + 1e-12).contains(&chi), "chi = {chi}");
        }
    }
}
