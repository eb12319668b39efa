//! Photon polarization in relatively moving frames.
//!
//! A photon prepared with a definite polarization looks different to a moving
//! detector: its momentum aberrates, and its polarization vector is carried
//! along by the Wigner rotation of the massless little group. This crate
//! computes that transformation exactly for monochromatic states and
//! numerically for Gaussian wave packets, and then quantifies how well the
//! moving detector can tell two such preparations apart.
//!
//! The pieces, bottom to top:
//!
//! - [`kinematics`] — four-vectors, boosts/rotations as an ordered factor
//!   list, aberration, and the Wigner rotation angle Θ(Λ, k).
//! - [`polarization`] — helicity vectors ε<sup>±</sup><sub>k</sub>, the induced
//!   polarization transform, and Hermitian overlaps.
//! - [`wavepacket`] — reduced 3×3 polarization density matrices of Gaussian
//!   packets by Gauss–Legendre × trapezoid quadrature.
//! - [`montecarlo`] — an independent importance-sampling estimator of the same
//!   matrices, used as a cross-check oracle.
//! - [`discrimination`] — unambiguous discrimination (reciprocal-basis POVM)
//!   and the Helstrom minimum-error bound.
//! - [`information`] — von Neumann entropy and the Holevo bound.
//!
//! Conventions fixed throughout: metric (+,−,−,−); standard null momentum
//! k̃ = (1,0,0,1); standard rotation R(k̂) = R_z(φ)R_y(θ); helicity states
//! ε<sup>σ</sup><sub>k</sub> = R(k̂)·(1, σi, 0)/√2; angles reduced into
//! (−π, π]; logarithms base 2 (bits).

#![forbid(unsafe_code)]

pub mod discrimination;
mod error;
pub mod information;
pub mod kinematics;
pub mod montecarlo;
pub mod polarization;
pub mod wavepacket;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Complex scalar used for polarization amplitudes and density matrices.
pub type C64 = num_complex::Complex<f64>;
