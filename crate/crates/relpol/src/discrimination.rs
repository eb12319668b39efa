//! Discriminating two polarization preparations: the unambiguous
//! (no-misidentification) POVM built on the reciprocal basis, and the
//! Helstrom minimum-error bound for density matrices.

use nalgebra::{Matrix3, Vector3};

use crate::polarization::{overlap, PolarizationVector};
use crate::wavepacket::PolDensityMatrix;
use crate::{C64, Error, Result};

/// Overlap magnitude above which a pair counts as parallel (degenerate).
pub const PARALLEL_TOL: f64 = 1e-12;
/// Eigenvalues of ρ₋ − ρ₊ below this threshold select the Π₊ subspace;
/// values at or above it (ties included) fall to Π₋.
pub const NEGATIVE_EIG_THRESHOLD: f64 = -1e-12;
/// Hermiticity tolerance for eigensystem inputs.
pub const HERMITIAN_TOL: f64 = 1e-10;

fn require_unit(v: &PolarizationVector) -> Result<()> {
    if (v.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidPolarization(format!(
            "expected a unit state, got norm {}",
            v.norm()
        )));
    }
    Ok(())
}

fn require_equal_priors(priors: (f64, f64)) -> Result<()> {
    if (priors.0 - 0.5).abs() > 1e-12 || (priors.1 - 0.5).abs() > 1e-12 {
        return Err(Error::UnequalPriors(priors.0, priors.1));
    }
    Ok(())
}

/// Outer product |a⟩⟨b| as a 3×3 matrix.
fn outer(a: &Vector3<C64>, b: &Vector3<C64>) -> Matrix3<C64> {
    a * b.adjoint()
}

/// Reciprocal basis of a linearly independent pair: unit vectors ⊥₁ ⊥ a₂ and
/// ⊥₂ ⊥ a₁ inside span{a₁, a₂}, so that ⟨⊥ᵢ|a_j⟩ = tᵢδᵢⱼ.
///
/// Built by Gram–Schmidt: ⊥₁ ∝ a₁ − a₂⟨a₂|a₁⟩, and symmetrically. With this
/// construction tᵢ = √(1 − |⟨a₁|a₂⟩|²) is real positive.
///
/// Errors with [`Error::DegeneratePair`] when |⟨a₁|a₂⟩| ≥ 1 − 1e−12.
pub fn reciprocal_basis(
    a1: &PolarizationVector,
    a2: &PolarizationVector,
) -> Result<(PolarizationVector, PolarizationVector)> {
    require_unit(a1)?;
    require_unit(a2)?;
    let s = overlap(a1, a2);
    if s.norm() >= 1.0 - PARALLEL_TOL {
        return Err(Error::DegeneratePair(s.norm()));
    }
    let strip = |keep: &Vector3<C64>, drop: &Vector3<C64>, ov: C64| {
        let v = keep - drop.map(|x| ov * x);
        let n = v.norm();
        PolarizationVector::new(v.map(|x| x / C64::new(n, 0.0)))
    };
    // ⟨a₂|a₁⟩ = conj(s); ⟨a₁|a₂⟩ = s.
    let p1 = strip(a1.components(), a2.components(), s.conj());
    let p2 = strip(a2.components(), a1.components(), s);
    Ok((p1, p2))
}

/// The three-outcome unambiguous-discrimination POVM for an equal-prior pair:
/// Πᵢ = c·|⊥ᵢ⟩⟨⊥ᵢ| with c = 1/(1 + |⟨a₁|a₂⟩|), and Π₀ = 1 − Π₁ − Π₂
/// absorbing both the inconclusive direction in span{a₁,a₂} and the
/// orthogonal complement.
#[derive(Debug, Clone)]
pub struct UnambiguousPovm {
    pub pi1: Matrix3<C64>,
    pub pi2: Matrix3<C64>,
    pub pi0: Matrix3<C64>,
    /// tᵢ = ⟨⊥ᵢ|aᵢ⟩, the only nonzero detection amplitudes.
    pub t1: C64,
    pub t2: C64,
    /// The weight c on the conclusive elements.
    pub coefficient: f64,
}

impl UnambiguousPovm {
    /// Average success probability ½⟨a₁|Π₁|a₁⟩ + ½⟨a₂|Π₂|a₂⟩.
    pub fn success_probability(&self, a1: &PolarizationVector, a2: &PolarizationVector) -> f64 {
        let expect = |pi: &Matrix3<C64>, a: &PolarizationVector| {
            (a.components().adjoint() * pi * a.components())[(0, 0)].re
        };
        0.5 * expect(&self.pi1, a1) + 0.5 * expect(&self.pi2, a2)
    }
}

/// Build the optimal unambiguous POVM for an equal-prior pair.
///
/// c = 1/(1+|s|) is the largest conclusive weight keeping Π₀ positive
/// semidefinite; the resulting success probability is 1 − |s|.
pub fn unambiguous_povm(
    a1: &PolarizationVector,
    a2: &PolarizationVector,
    priors: (f64, f64),
) -> Result<UnambiguousPovm> {
    require_equal_priors(priors)?;
    let (p1, p2) = reciprocal_basis(a1, a2)?;
    let s = overlap(a1, a2).norm();
    let c = 1.0 / (1.0 + s);
    let cc = C64::new(c, 0.0);
    let pi1 = outer(p1.components(), p1.components()).map(|x| cc * x);
    let pi2 = outer(p2.components(), p2.components()).map(|x| cc * x);
    let pi0 = Matrix3::identity() - pi1 - pi2;
    // Positivity of the inconclusive element is structural; verify anyway.
    let (vals, _) = hermitian_eigensystem(&pi0)?;
    if vals[0] < -1e-10 {
        return Err(Error::Numerical(format!(
            "inconclusive POVM element has eigenvalue {:.3e}",
            vals[0]
        )));
    }
    let t1 = overlap(&p1, a1);
    let t2 = overlap(&p2, a2);
    Ok(UnambiguousPovm {
        pi1,
        pi2,
        pi0,
        t1,
        t2,
        coefficient: c,
    })
}

/// Optimal unambiguous success probability 1 − |⟨a₁|a₂⟩| for unit states.
pub fn p_opt_unambiguous(a1: &PolarizationVector, a2: &PolarizationVector) -> Result<f64> {
    require_unit(a1)?;
    require_unit(a2)?;
    Ok((1.0 - overlap(a1, a2).norm()).clamp(0.0, 1.0))
}

/// Closed form of the same probability for the reference pair (σ=+1 along z
/// versus σ=−1 at polar angle ϑ) seen by a detector moving with velocity v
/// along z: P = (1+cosϑ)(1−v) / (2(1−v·cosϑ)).
pub fn p_opt_closed_form(theta: f64, v: f64) -> Result<f64> {
    if !(v.abs() < 1.0) {
        return Err(Error::SuperluminalVelocity(v));
    }
    if !theta.is_finite() || !(-1e-12..=std::f64::consts::PI + 1e-12).contains(&theta) {
        return Err(Error::PolarAngleOutOfRange(theta));
    }
    let c = theta.clamp(0.0, std::f64::consts::PI).cos();
    Ok(((1.0 + c) * (1.0 - v) / (2.0 * (1.0 - v * c))).clamp(0.0, 1.0))
}

/// Result of the minimum-error (Helstrom) measurement for an equal-prior pair.
#[derive(Debug, Clone)]
pub struct MinErrorResult {
    /// ½ − ¼·Σ|ωₖ| over the eigenvalues of ρ₋ − ρ₊.
    pub p_error: f64,
    /// Projector onto the strictly negative eigenspace of ρ₋ − ρ₊
    /// (the "guess +" outcome).
    pub projector_plus: Matrix3<C64>,
    /// Complement of `projector_plus` (ties at zero land here).
    pub projector_minus: Matrix3<C64>,
    /// Eigenvalues of ρ₋ − ρ₊, ascending.
    pub omega_eigenvalues: [f64; 3],
}

/// Helstrom minimum-error discrimination of two density matrices at equal
/// priors.
///
/// The trace-norm value ½ − ¼Σ|ω| and the projector form
/// ½Tr(ρ₊Π₋) + ½Tr(ρ₋Π₊) are both computed and must agree within 1e−10.
pub fn helstrom(
    rho_plus: &PolDensityMatrix,
    rho_minus: &PolDensityMatrix,
    priors: (f64, f64),
) -> Result<MinErrorResult> {
    require_equal_priors(priors)?;
    let omega = rho_minus.matrix() - rho_plus.matrix();
    let (vals, vecs) = hermitian_eigensystem(&omega)?;

    let mut projector_plus = Matrix3::zeros();
    for (lam, vec) in vals.iter().zip(vecs.iter()) {
        if *lam < NEGATIVE_EIG_THRESHOLD {
            projector_plus += outer(vec, vec);
        }
    }
    let projector_minus = Matrix3::identity() - projector_plus;

    let trace_norm: f64 = vals.iter().map(|l| l.abs()).sum();
    let p_trace = 0.5 - 0.25 * trace_norm;
    let p_proj = 0.5 * (rho_plus.matrix() * projector_minus).trace().re
        + 0.5 * (rho_minus.matrix() * projector_plus).trace().re;
    if (p_trace - p_proj).abs() > 1e-10 {
        return Err(Error::Numerical(format!(
            "trace-norm form {p_trace} and projector form {p_proj} disagree"
        )));
    }
    if !(-1e-12..=0.5 + 1e-12).contains(&p_trace) {
        return Err(Error::Numerical(format!(
            "error probability {p_trace} outside [0, 1/2]"
        )));
    }
    Ok(MinErrorResult {
        p_error: p_trace.clamp(0.0, 0.5),
        projector_plus,
        projector_minus,
        omega_eigenvalues: vals,
    })
}

/// Eigendecomposition of a 3×3 Hermitian matrix: eigenvalues ascending with
/// matching orthonormal eigenvectors.
///
/// Input must be Hermitian within 1e−10 (it is symmetrized before the solve);
/// results satisfy m·vᵢ = λᵢvᵢ within 1e−9 and pairwise orthonormality
/// within 1e−10, or the call reports a numerical failure.
pub fn hermitian_eigensystem(m: &Matrix3<C64>) -> Result<([f64; 3], [Vector3<C64>; 3])> {
    let defect = (m - m.adjoint()).map(|x| x.norm()).max();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let sym = (m + m.adjoint()).map(|x| x / C64::new(2.0, 0.0));
    let se = sym.symmetric_eigen();

    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let vals = [
        se.eigenvalues[order[0]],
        se.eigenvalues[order[1]],
        se.eigenvalues[order[2]],
    ];
    let vecs = [
        se.eigenvectors.column(order[0]).into_owned(),
        se.eigenvectors.column(order[1]).into_owned(),
        se.eigenvectors.column(order[2]).into_owned(),
    ];

    let scale = vals.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    for (lam, vec) in vals.iter().zip(vecs.iter()) {
        let residual = (sym * vec - vec.map(|x| C64::new(*lam, 0.0) * x)).norm();
        if residual > 1e-9 * scale {
            return Err(Error::Numerical(format!(
                "eigenpair residual {residual:.3e} for eigenvalue {lam}"
            )));
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            let g = vecs[i].dotc(&vecs[j]).norm();
            let want = if i == j { 1.0 } else { 0.0 };
            if (g - want).abs() > 1e-10 {
                return Err(Error::Numerical(format!(
                    "eigenvectors not orthonormal: |<v{i},v{j}>| = {g}"
                )));
            }
        }
    }
    Ok((vals, vecs))
}
