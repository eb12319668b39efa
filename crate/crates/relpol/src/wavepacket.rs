//! Effective polarization density matrices of boosted photon wave packets.
//!
//! A packet centered on the z axis with Gaussian transverse spread mixes
//! helicity vectors pointing along slightly different momenta. Tracing the
//! momentum out against a fixed detector basis leaves a 3×3 density matrix
//! for the polarization alone; this module computes it by quadrature over
//! the momentum distribution.

use nalgebra::{Matrix3, Vector3};

use crate::kinematics::{Factor, UnitDirection};
use crate::polarization::{helicity_vector, transform_polarization, PolarizationVector};
use crate::{C64, Error, Result};

/// Hermiticity defect tolerance for accepted density matrices.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Allowed deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-8;
/// Most negative eigenvalue an accepted density matrix may carry.
pub const PSD_TOL: f64 = -1e-9;

/// Axially symmetric Gaussian wave packet: central energy `k0` and
/// transverse momentum spread `sigma`, both in the same units.
///
/// The shape is controlled entirely by the ratio W = sigma/k0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketSpec {
    k0: f64,
    sigma: f64,
}

impl PacketSpec {
    pub fn new(k0: f64, sigma: f64) -> Result<Self> {
        if !(k0.is_finite() && k0 > 0.0 && sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidPacketSpec { k0, sigma });
        }
        Ok(Self { k0, sigma })
    }

    /// Packet with unit central energy and the given relative width W.
    pub fn from_width(width: f64) -> Result<Self> {
        Self::new(1.0, width)
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Relative width W = sigma/k0.
    pub fn width(&self) -> f64 {
        self.sigma / self.k0
    }
}

/// Product quadrature over transverse momentum: Gauss–Legendre radially on
/// [0, radial_cutoff·sigma], uniform trapezoid (periodic, hence exact for
/// trigonometric polynomials) in azimuth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureGrid {
    n_radial: usize,
    n_azimuthal: usize,
    radial_cutoff: f64,
}

impl QuadratureGrid {
    pub fn new(n_radial: usize, n_azimuthal: usize, radial_cutoff: f64) -> Result<Self> {
        if n_radial < 8 || n_azimuthal < 8 || !(radial_cutoff.is_finite() && radial_cutoff > 0.0) {
            return Err(Error::InvalidQuadratureGrid {
                n_radial,
                n_azimuthal,
                radial_cutoff,
            });
        }
        Ok(Self {
            n_radial,
            n_azimuthal,
            radial_cutoff,
        })
    }

    pub fn n_radial(&self) -> usize {
        self.n_radial
    }

    pub fn n_azimuthal(&self) -> usize {
        self.n_azimuthal
    }

    pub fn radial_cutoff(&self) -> f64 {
        self.radial_cutoff
    }
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        Self {
            n_radial: 64,
            n_azimuthal: 64,
            radial_cutoff: 8.0,
        }
    }
}

/// Which detector basis the polarization is projected onto after a boost.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisMode {
    /// Project onto the transverse basis of each boosted momentum direction
    /// (the detector rides with the frame). Trace is exactly one.
    Boosted,
    /// Keep the source-frame transverse basis. The boosted state leaks a
    /// longitudinal component past this basis, so the raw projection loses
    /// weight and is renormalized to unit trace.
    Literal,
}

/// Validated 3×3 polarization density matrix: Hermitian within 1e−10,
/// unit trace within 1e−8, eigenvalues above −1e−9.
#[derive(Debug, Clone, PartialEq)]
pub struct PolDensityMatrix {
    m: Matrix3<C64>,
    eigenvalues: [f64; 3],
}

impl PolDensityMatrix {
    pub fn new(m: Matrix3<C64>) -> Result<Self> {
        let defect = (m - m.adjoint()).map(|x| x.norm()).max();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {} is not 1",
                tr
            )));
        }
        let sym = (m + m.adjoint()).map(|x| x / C64::new(2.0, 0.0));
        let (eigenvalues, _) = crate::discrimination::hermitian_eigensystem(&sym)?;
        if eigenvalues[0] < PSD_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {:.3e}",
                eigenvalues[0]
            )));
        }
        Ok(Self { m: sym, eigenvalues })
    }

    /// Rank-one matrix ρ_mn = conj(α_m)·α_n of a unit polarization state.
    pub fn from_pure(state: &PolarizationVector) -> Result<Self> {
        if (state.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidPolarization(format!(
                "pure-state norm {} is not 1",
                state.norm()
            )));
        }
        let a = state.components();
        let m = Matrix3::from_fn(|i, j| a[i].conj() * a[j]);
        Self::new(m)
    }

    /// Pure helicity state along +z.
    pub fn pure_helicity_z(sigma: i32) -> Result<Self> {
        Self::from_pure(&helicity_vector(UnitDirection::Z, sigma)?)
    }

    pub fn matrix(&self) -> &Matrix3<C64> {
        &self.m
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 3] {
        self.eigenvalues
    }

    /// Largest entrywise modulus of the difference to another matrix.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.m - other.m).map(|x| x.norm()).max()
    }
}

/// Transverse parts of the lab axes at direction k̂: bₘ = x̂ₘ − (x̂ₘ·k̂)k̂.
///
/// Equivalently bₘ = Σ_σ ⟨ε^σ|x̂ₘ⟩ ε^σ — the lab axes with their
/// longitudinal component removed.
pub fn transverse_basis(dir: UnitDirection) -> [Vector3<f64>; 3] {
    let k = dir.unit_vector();
    let axes = [Vector3::x(), Vector3::y(), Vector3::z()];
    axes.map(|e| e - k * e.dot(&k))
}

/// Unnormalized weight of radial momentum k_r in the packet:
/// k_r·exp(−k_r²/2σ²) / (2√(k_r² + k0²)).
///
/// The k_r prefactor is the polar Jacobian, the square root the photon
/// energy at that momentum.
pub fn packet_weight(k_r: f64, spec: &PacketSpec) -> Result<f64> {
    if !(k_r.is_finite() && k_r >= 0.0) {
        return Err(Error::NegativeRadialMomentum(k_r));
    }
    let s2 = spec.sigma * spec.sigma;
    Ok(k_r * (-k_r * k_r / (2.0 * s2)).exp() / (2.0 * (k_r * k_r + spec.k0 * spec.k0).sqrt()))
}

/// Gauss–Legendre nodes and weights on [−1, 1], by Newton iteration on the
/// Legendre recurrence. Nodes ascend; weights are symmetric.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi-style initial guess for the i-th root from the top.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // p0, p1 walk the recurrence up to degree n.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Effective polarization density matrix of a boosted Gaussian packet.
///
/// The source emits helicity `sigma` centered on +z; the observer moves with
/// velocity `v` along z. Each momentum direction in the packet is boosted
/// (aberration plus Wigner phase) and projected onto the transverse detector
/// basis selected by `mode`; the weighted average over the packet is the
/// effective matrix.
pub fn effective_density_matrix(
    sigma: i32,
    v: f64,
    spec: &PacketSpec,
    grid: &QuadratureGrid,
    mode: BasisMode,
) -> Result<PolDensityMatrix> {
    if sigma != 1 && sigma != -1 {
        return Err(Error::InvalidHelicity(sigma));
    }
    if !(v.abs() < 1.0) {
        return Err(Error::SuperluminalVelocity(v));
    }

    let cutoff = grid.radial_cutoff * spec.sigma;
    let (gl_nodes, gl_weights) = gauss_legendre(grid.n_radial);
    let dphi = std::f64::consts::TAU / grid.n_azimuthal as f64;
    let boost = [Factor::BoostZ(v)];

    let mut acc = Matrix3::<C64>::zeros();
    let mut total_weight = 0.0;
    for (x, wx) in gl_nodes.iter().zip(gl_weights.iter()) {
        let k_r = 0.5 * (x + 1.0) * cutoff;
        let w_radial = packet_weight(k_r, spec)? * 0.5 * cutoff * wx;
        let theta = k_r.atan2(spec.k0);
        for j in 0..grid.n_azimuthal {
            let phi = dphi * j as f64;
            let dir = UnitDirection::new(theta, phi)?;
            let pol = helicity_vector(dir, sigma)?;
            let (new_dir, new_pol) = transform_polarization(&boost, dir, &pol)?;
            let basis_dir = match mode {
                BasisMode::Boosted => new_dir,
                BasisMode::Literal => dir,
            };
            let b = transverse_basis(basis_dir);
            let alpha = new_pol.components();
            // e_m = ⟨α'|b_m⟩ with real b_m.
            let e: [C64; 3] = b.map(|bm| {
                alpha[0].conj() * bm[0] + alpha[1].conj() * bm[1] + alpha[2].conj() * bm[2]
            });
            let w = w_radial * dphi;
            for m in 0..3 {
                for n in 0..3 {
                    acc[(m, n)] += C64::new(w, 0.0) * e[m] * e[n].conj();
                }
            }
            total_weight += w;
        }
    }

    if total_weight <= 0.0 || !total_weight.is_finite() {
        return Err(Error::IntegrationAccuracy(format!(
            "packet weight sum {total_weight} on grid {grid:?}"
        )));
    }
    let mut m = acc.map(|x| x / C64::new(total_weight, 0.0));
    if mode == BasisMode::Literal {
        // The raw projection onto the unboosted basis is subnormalized; the
        // effective matrix is its unit-trace rescaling.
        let tr = m.trace().re;
        if tr <= 0.0 {
            return Err(Error::IntegrationAccuracy(format!(
                "non-positive raw trace {tr} in literal mode"
            )));
        }
        m = m.map(|x| x / C64::new(tr, 0.0));
    }
    PolDensityMatrix::new(m).map_err(|e| {
        Error::IntegrationAccuracy(format!(
            "grid {}x{} (cutoff {}) at W={}, v={v}: {e}",
            grid.n_radial,
            grid.n_azimuthal,
            grid.radial_cutoff,
            spec.width(),
        ))
    })
}
