//! Monte Carlo estimate of the effective polarization density matrix.
//!
//! A deliberately separate route from the quadrature in [`crate::wavepacket`]:
//! transverse momenta are drawn directly from the Gaussian, the boost is
//! applied through the closed-form aberration relations written out in plain
//! trigonometry, and nothing here calls the transform pipeline. Agreement
//! between the two routes within the sampling error is the strongest
//! end-to-end check the crate has, and the one the self test exercises.

use nalgebra::Matrix3;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::wavepacket::{BasisMode, PacketSpec};
use crate::{C64, Error, Result};

/// Batched Monte Carlo estimate: overall mean plus a standard error for each
/// matrix entry, real and imaginary parts separately.
#[derive(Debug, Clone)]
pub struct McEstimate {
    pub mean: Matrix3<C64>,
    pub se_re: Matrix3<f64>,
    pub se_im: Matrix3<f64>,
    pub n_batches: usize,
    pub batch_size: usize,
}

impl McEstimate {
    /// Largest entrywise deviation from `m` in units of the standard error.
    ///
    /// Entries whose sampling error collapsed to zero (symmetry-forced zeros)
    /// use a 1e−12 floor so exact agreement still reads as zero sigma.
    pub fn max_sigma_distance(&self, m: &Matrix3<C64>) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let d = self.mean[(i, j)] - m[(i, j)];
                let sr = d.re.abs() / self.se_re[(i, j)].max(1e-12);
                let si = d.im.abs() / self.se_im[(i, j)].max(1e-12);
                worst = worst.max(sr).max(si);
            }
        }
        worst
    }
}

/// Sample-based estimate of the effective density matrix for helicity
/// `sigma` seen at velocity `v`, with `n_batches × batch_size` draws.
///
/// Each batch produces a self-normalized estimate; mean and standard errors
/// come from the spread of the batch means. Identical seeds give identical
/// results.
pub fn mc_density_matrix(
    sigma: i32,
    v: f64,
    spec: &PacketSpec,
    mode: BasisMode,
    n_batches: usize,
    batch_size: usize,
    seed: u64,
) -> Result<McEstimate> {
    if sigma != 1 && sigma != -1 {
        return Err(Error::InvalidHelicity(sigma));
    }
    if !(v.abs() < 1.0) {
        return Err(Error::SuperluminalVelocity(v));
    }
    if n_batches < 2 || batch_size < 1 {
        return Err(Error::InvalidSampling(format!(
            "need at least 2 batches of at least 1 sample, got {n_batches}x{batch_size}"
        )));
    }

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let k0 = spec.k0();
    let width = spec.sigma();
    let s = sigma as f64;

    let mut batches = Vec::with_capacity(n_batches);
    for _ in 0..n_batches {
        let mut acc = Matrix3::<C64>::zeros();
        let mut total_weight = 0.0;
        for _ in 0..batch_size {
            // Box–Muller pair: transverse momentum components ~ N(0, sigma²).
            let u1: f64 = 1.0 - rng.random::<f64>();
            let u2: f64 = rng.random();
            let r = (-2.0 * u1.ln()).sqrt();
            let kx = width * r * (std::f64::consts::TAU * u2).cos();
            let ky = width * r * (std::f64::consts::TAU * u2).sin();
            let k_r = kx.hypot(ky);
            let phi = ky.atan2(kx);

            // The Gaussian proposal already carries the k_r·exp(−k_r²/2σ²)
            // factor; only the 1/(2·energy) part remains as a weight.
            let energy = (k_r * k_r + k0 * k0).sqrt();
            let w = 1.0 / (2.0 * energy);

            // Aberration of the polar angle; azimuth is untouched and a
            // z boost adds no extra rotation around the momentum.
            let cos_t = k0 / energy;
            let sin_t = k_r / energy;
            let cos_tp = (cos_t - v) / (1.0 - v * cos_t);
            let sin_tp = (1.0 - cos_tp * cos_tp).max(0.0).sqrt();

            // Helicity vector at the aberrated direction (polar tp, azimuth phi).
            let (sin_p, cos_p) = phi.sin_cos();
            let alpha = [
                C64::new(cos_tp * cos_p, -s * sin_p) / 2.0f64.sqrt(),
                C64::new(cos_tp * sin_p, s * cos_p) / 2.0f64.sqrt(),
                C64::new(-sin_tp, 0.0) / 2.0f64.sqrt(),
            ];

            // Detector basis direction: boosted or source-frame momentum.
            let (bs, bc) = match mode {
                BasisMode::Boosted => (sin_tp, cos_tp),
                BasisMode::Literal => (sin_t, cos_t),
            };
            let k_hat = [bs * cos_p, bs * sin_p, bc];
            let longitudinal = alpha[0].conj() * k_hat[0]
                + alpha[1].conj() * k_hat[1]
                + alpha[2].conj() * k_hat[2];
            let mut e = [C64::new(0.0, 0.0); 3];
            for (m, em) in e.iter_mut().enumerate() {
                // e_m = ⟨α|x̂_m − (x̂_m·k̂)k̂⟩
                *em = alpha[m].conj() - longitudinal * k_hat[m];
            }
            for m in 0..3 {
                for n in 0..3 {
                    acc[(m, n)] += C64::new(w, 0.0) * e[m] * e[n].conj();
                }
            }
            total_weight += w;
        }
        if total_weight <= 0.0 {
            return Err(Error::InvalidSampling(format!(
                "batch weight sum {total_weight}"
            )));
        }
        let mut est = acc.map(|x| x / C64::new(total_weight, 0.0));
        if mode == BasisMode::Literal {
            let tr = est.trace().re;
            if tr <= 0.0 {
                return Err(Error::InvalidSampling(format!("batch trace {tr}")));
            }
            est = est.map(|x| x / C64::new(tr, 0.0));
        }
        batches.push(est);
    }

    let nb = n_batches as f64;
    let mut mean = Matrix3::<C64>::zeros();
    for b in &batches {
        mean += b;
    }
    mean = mean.map(|x| x / C64::new(nb, 0.0));

    let mut var_re = Matrix3::<f64>::zeros();
    let mut var_im = Matrix3::<f64>::zeros();
    for b in &batches {
        for i in 0..3 {
            for j in 0..3 {
                let d = b[(i, j)] - mean[(i, j)];
                var_re[(i, j)] += d.re * d.re;
                var_im[(i, j)] += d.im * d.im;
            }
        }
    }
    // Standard error of the mean of the batch means.
    let se = |var: f64| (var / (nb - 1.0) / nb).sqrt();
    Ok(McEstimate {
        mean,
        se_re: var_re.map(se),
        se_im: var_im.map(se),
        n_batches,
        batch_size,
    })
}
