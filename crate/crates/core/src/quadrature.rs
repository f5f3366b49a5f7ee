//! Quadrature noise of the orthogonally polarized vacuum after
//! self-rotation.
//!
//! All variances are in units of the vacuum variance 𝓔₀²/4. The output
//! annihilation operator is `a(ℓ) = a(0) + (igℓ/2)(a†(0) − a(0))`, which
//! gives the lossless phase-dependent variance
//!
//! ```text
//! v₀(χ) = 1 − 2gℓ sinχ cosχ + (gℓ)² cos²χ = cos²χ + (gℓ cosχ − sinχ)²
//! ```
//!
//! The second form is used for evaluation; it has no cancellation near the
//! squeezed quadrature.
//!
//! Loss is a beamsplitter after a transparent medium: the output is
//! attenuated by e^{−αℓ} and 1 − e^{−αℓ} of vacuum noise is added.

use core::f64::consts::{FRAC_PI_2, PI};


#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureGeometry {
    g_ell: f64,
    alpha_ell: f64,
}

impl QuadratureGeometry {
    pub fn new(g_ell: f64, alpha_ell: f64) -> Result<Self> {
        if !g_ell.is_finite() || !alpha_ell.is_finite() || alpha_ell < 0.0 {
            return Err(Error::Domain("gℓ must be finite and αℓ finite and non-negative"));
        }
        Ok(Self { g_ell, alpha_ell })
    }

    pub fn lossless(g_ell: f64) -> Result<Self> {
        Self::new(g_ell, 0.0)
    }

    pub fn g_ell(&self) -> f64 {
        self.g_ell
    }

    pub fn alpha_ell(&self) -> f64 {
        self.alpha_ell
    }

    /// Transmitted fraction e^{−αℓ}.
    pub fn transmission(&self) -> f64 {
        (-self.alpha_ell).exp()
    }
}

/// A variance in units of the vacuum variance.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct NormalizedVariance(f64);

impl NormalizedVariance {
    pub fn value(self) -> f64 {
        self.0
    }

    /// Noise reduction below vacuum in dB (positive when squeezed).
    pub fn reduction_db(self) -> f64 {
        -10.0 * self.0.log10()
    }
}

/// Lossless variance v₀(χ).
pub fn lossless_variance(g_ell: f64, chi: f64) -> f64 {
    let (s, c) = chi.sin_cos();
    let d = g_ell * c - s;
    c * c + d * d
}

/// Variance of the χ quadrature including the beamsplitter loss.
pub fn variance(geom: &QuadratureGeometry, chi: f64) -> NormalizedVariance {
    let v0 = lossless_variance(geom.g_ell, chi);
    if geom.alpha_ell == 0.0 {
        return NormalizedVariance(v0);
    }
    let t = geom.transmission();
    NormalizedVariance(t * v0 + (-geom.alpha_ell).exp_m1().abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseOptimum {
    /// Local-oscillator phase in [0, π).
    pub chi: f64,
    /// True when gℓ = 0 and the variance does not depend on χ.
    pub degenerate: bool,
}

fn reduce_half_turn(x: f64) -> f64 {
    let r = x - PI * (x / PI).floor();
    if r >= PI {
        r - PI
    } else {
        r
    }
}

/// Phase minimising v₀(χ).
///
/// The stationary points `2cos2χ + gℓ sin2χ = 0` are
/// `χ = ½ arctan(−2/gℓ) + nπ/2`; minima and maxima alternate, and the
/// branch with the smaller variance is returned.
pub fn optimal_phase(g_ell: f64) -> PhaseOptimum {
    if g_ell == 0.0 {
        return PhaseOptimum { chi: 0.0, degenerate: true };
    }
    let base = 0.5 * (-2.0 / g_ell).atan();
    let a = reduce_half_turn(base);
    let b = reduce_half_turn(base + FRAC_PI_2);
    let chi = if lossless_variance(g_ell, a) <= lossless_variance(g_ell, b) { a } else { b };
    PhaseOptimum { chi, degenerate: false }
}

/// Which closed form to use for the minimum variance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum MinVarianceMode {
    /// `1 + G/2 − (2 + G/2)/√(1 + 4/G)`, G = (gℓ)².
    Exact,
    /// Large-gℓ form `4/(gℓ)²`, the one carried into the loss model and
    /// the squeezing parameter. It is four times the large-gℓ limit of the
    /// exact form.
    #[default]
    Asymptotic,
}

/// Largest lossless variance, `1 + G/2 + (|gℓ|/2)√(G + 4)`.
pub fn max_variance(g_ell: f64) -> f64 {
    let g2 = g_ell * g_ell;
    1.0 + 0.5 * g2 + 0.5 * g_ell.abs() * (g2 + 4.0).sqrt()
}

/// Minimum lossless variance over the local-oscillator phase.
pub fn min_variance(g_ell: f64, mode: MinVarianceMode) -> NormalizedVariance {
    match mode {
        // 1 + G/2 − (|gℓ|/2)√(G + 4) rewritten as the reciprocal of the
        // maximum; the two agree algebraically and this has no cancellation.
        MinVarianceMode::Exact => NormalizedVariance(1.0 / max_variance(g_ell)),
        MinVarianceMode::Asymptotic => {
            if g_ell.abs() < 10.0 {
                log::warn!("asymptotic minimum variance used at gℓ = {g_ell} (< 10)");
            }
            if g_ell == 0.0 {
                return NormalizedVariance(f64::INFINITY);
            }
            NormalizedVariance(4.0 / (g_ell * g_ell))
        }
    }
}

/// Optimum number of absorption lengths, `αℓ_opt = 2(α/g)^{2/3}`,
/// minimising `4/(gℓ)² + αℓ`.
pub fn optimal_length(g: f64, alpha: f64) -> Result<f64> {
    if !(g > 0.0 && alpha > 0.0) || !g.is_finite() || !alpha.is_finite() {
        return Err(Error::Domain("optimal length needs g > 0 and α > 0"));
    }
    Ok(2.0 * (alpha / g).powf(2.0 / 3.0))
}

/// Small-loss variance at the optimum phase, `4/(gℓ)² + αℓ`.
pub fn small_loss_variance(g_ell: f64, alpha_ell: f64) -> f64 {
    4.0 / (g_ell * g_ell) + alpha_ell
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingResult {
    /// Ratio of vacuum to squeezed fluctuation amplitudes.
    pub s: f64,
    /// 10·log₁₀ s.
    pub s_db: f64,
    /// Optimum local-oscillator phase at the optimum length.
    pub chi_opt: f64,
    /// α·ℓ_opt.
    pub ell_opt_alpha: f64,
    /// False when g/α ≤ 10, where the small-loss expansion breaks down.
    pub within_validity: bool,
}

/// Decibel convention for the squeezing parameter.
pub fn to_db(s: f64) -> f64 {
    10.0 * s.log10()
}

/// Squeezing parameter optimised over phase and length,
/// `s = (1/√3)(g/α)^{1/3}`.
pub fn squeezing_parameter(g: f64, alpha: f64) -> Result<SqueezingResult> {
    let ell_opt_alpha = optimal_length(g, alpha)?;
    let ratio = g / alpha;
    let s = ratio.cbrt() / 3f64.sqrt();
    let within_validity = ratio > 10.0;
    if !within_validity {
        log::warn!("squeezing parameter evaluated at g/α = {ratio} (≤ 10)");
    }
    let g_ell_opt = ratio * ell_opt_alpha;
    Ok(SqueezingResult {
        s,
        s_db: to_db(s),
        chi_opt: optimal_phase(g_ell_opt).chi,
        ell_opt_alpha,
        within_validity,
    })
}

/// Product v(χ)·v(χ + π/2) for the lossless medium, in units of the squared
/// vacuum variance. It is never below one.
pub fn uncertainty_product(g_ell: f64, chi: f64) -> f64 {
    lossless_variance(g_ell, chi) * lossless_variance(g_ell, chi + FRAC_PI_2)
}
