use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// All variants are domain or accuracy failures; none are recoverable by
/// retrying with the same inputs.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Boost parameter with |v| ≥ 1 (or non-finite).
    #[error("superluminal velocity: |v| = {0} is not < 1")]
    SuperluminalVelocity(f64),

    /// Polar angle outside [0, π].
    #[error("polar angle {0} outside [0, pi]")]
    PolarAngleOutOfRange(f64),

    /// Direction requested for a (numerically) zero spatial vector.
    #[error("cannot extract a direction from a zero spatial vector")]
    ZeroSpatialVector,

    /// Photon momentum failing the null condition, or with non-positive energy.
    #[error("momentum is not a forward null vector: k·k = {norm_sq:.3e}, k_t = {energy}")]
    NonNullMomentum { norm_sq: f64, energy: f64 },

    /// Helicity label other than +1 or −1.
    #[error("helicity must be +1 or -1, got {0}")]
    InvalidHelicity(i32),

    /// Polarization state that is not unit-norm or not transverse to its momentum.
    #[error("invalid polarization state: {0}")]
    InvalidPolarization(String),

    /// Two-state preparation whose members are (numerically) parallel.
    #[error("states are parallel within tolerance (|overlap| = {0}); reciprocal basis is degenerate")]
    DegeneratePair(f64),

    /// Priors other than (1/2, 1/2).
    #[error("unsupported priors ({0}, {1}); only equal priors (1/2, 1/2)")]
    UnequalPriors(f64, f64),

    /// Matrix handed to a Hermitian-only routine that is not Hermitian.
    #[error("matrix is not Hermitian: max |m - m^H| entry = {0:.3e}")]
    NotHermitian(f64),

    /// Density-matrix validation failure (trace, positivity, Hermiticity).
    #[error("not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),

    /// Wave-packet parameters outside their domain.
    #[error("packet spec requires k0 > 0 and sigma > 0, got k0 = {k0}, sigma = {sigma}")]
    InvalidPacketSpec { k0: f64, sigma: f64 },

    /// Quadrature grid below the minimum supported resolution.
    #[error("quadrature grid too coarse: need >= 8 nodes per axis and cutoff > 0, got {n_radial} x {n_azimuthal}, cutoff {radial_cutoff}")]
    InvalidQuadratureGrid {
        n_radial: usize,
        n_azimuthal: usize,
        radial_cutoff: f64,
    },

    /// Radial momentum below zero.
    #[error("radial momentum must be >= 0, got {0}")]
    NegativeRadialMomentum(f64),

    /// Quadrature output failed a post-condition (diagnostics attached).
    #[error("integration accuracy failure: {0}")]
    IntegrationAccuracy(String),

    /// Eigenvalue below the positive-semidefinite tolerance.
    #[error("eigenvalue {0:.3e} below the -1e-9 positivity tolerance")]
    NegativeEigenvalue(f64),

    /// Argument that must be a cosine lies outside [−1, 1].
    #[error("cosine argument {0} outside [-1, 1]")]
    CosineOutOfRange(f64),

    /// Ensemble whose priors are negative or do not sum to one.
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    /// Monte Carlo sampling parameters that cannot produce an estimate.
    #[error("invalid sampling parameters: {0}")]
    InvalidSampling(String),

    /// Internal cross-check between two algebraically equal routes failed.
    #[error("numerical inconsistency: {0}")]
    Numerical(String),
}
