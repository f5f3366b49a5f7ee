//! Sampling oracle for the quadrature variance.
//!
//! The vacuum Wigner function is Gaussian and the self-rotation map is
//! linear, so sampling the input amplitude `a = (x + ip)/2` with
//! x, p ~ N(0, 1), applying `a ↦ a + (igℓ/2)(a* − a)` and reading
//! `X_χ = 2 Re(a e^{iχ})` reproduces the symmetrized moments exactly.
//! Loss mixes in an independent vacuum mode with weight 1 − e^{−αℓ}.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub variance: f64,
    /// v·√(2/(N − 1)), the standard error of a Gaussian sample variance.
    pub std_error: f64,
    pub samples: usize,
}

/// Sample variance of the χ quadrature after the medium.
pub fn sample_variance(g_ell: f64, alpha_ell: f64, chi: f64, samples: usize, rng: &mut ChaCha8Rng) -> McEstimate {
    assert!(samples >= 2, "need at least two samples");
    let t = (-alpha_ell).exp();
    let (st, sl) = (t.sqrt(), (1.0 - t).sqrt());
    let (s, c) = chi.sin_cos();
    let (mut mean, mut m2) = (0.0, 0.0);
    for k in 0..samples {
        let x: f64 = StandardNormal.sample(rng);
        let p: f64 = StandardNormal.sample(rng);
        // a* − a = −ip, so the map shifts the real part by gℓp/2
        let (re, im) = (0.5 * x + 0.5 * g_ell * p, 0.5 * p);
        let q_medium = 2.0 * (re * c - im * s);
        let xb: f64 = StandardNormal.sample(rng);
        let pb: f64 = StandardNormal.sample(rng);
        let q = st * q_medium + sl * (xb * c - pb * s);
        let d = q - mean;
        mean += d / (k + 1) as f64;
        m2 += d * (q - mean);
    }
    let variance = m2 / (samples - 1) as f64;
    McEstimate { variance, std_error: variance * (2.0 / (samples - 1) as f64).sqrt(), samples }
}

/// One estimate per phase. Phase k draws from stream k of the seeded
/// generator, so results do not depend on the thread count.
pub fn quadrature_variances(g_ell: f64, alpha_ell: f64, chis: &[f64], samples: usize, seed: u64) -> Vec<McEstimate> {
    chis.par_iter()
        .enumerate()
        .map(|(k, &chi)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            sample_variance(g_ell, alpha_ell, chi, samples, &mut rng)
        })
        .collect()
}
