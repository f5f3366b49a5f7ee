//! Buffer-gas effective rates in the diffusion-limited regime, and the
//! density needed for a target optical depth.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::optimize::{golden_section_max, log_grid};
use crate::transitions::alpha0_for;

/// Collision constants of a buffer gas and the beam it fills. SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BufferGasSpec {
    /// Ground-state depolarization rate constant a₁ (m³/s).
    pub a1: f64,
    /// Pressure-broadening rate constant a₂ (m³/s).
    pub a2: f64,
    /// Elastic cross section σ (m²).
    pub sigma: f64,
    /// Mean atomic speed v (m/s).
    pub speed: f64,
    /// Beam diameter x (m).
    pub beam_diameter: f64,
}

impl BufferGasSpec {
    /// Example constants for Rb in a light buffer gas with a 100 µm beam.
    ///
    /// a₂ corresponds to about 2π × 18 MHz per Torr; σ and a₁ are
    /// representative of noble-gas diffusion and spin-destruction data.
    pub const EXAMPLE: Self = Self { a1: 1e-26, a2: 3.5e-15, sigma: 8e-19, speed: 274.0, beam_diameter: 100e-6 };

    pub fn validate(&self) -> Result<()> {
        let all = [self.a1, self.a2, self.sigma, self.speed, self.beam_diameter];
        if all.iter().any(|v| !v.is_finite() || *v < 0.0) || self.sigma <= 0.0 || self.speed <= 0.0 || self.beam_diameter <= 0.0 {
            return Err(Error::Domain("buffer-gas constants must be finite, σ, v, x > 0 and a₁, a₂ ≥ 0"));
        }
        Ok(())
    }

    /// Transit rate without buffer gas, v/x.
    pub fn free_transit_rate(&self) -> f64 {
        self.speed / self.beam_diameter
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveRates {
    /// γ′ (1/s).
    pub gamma_prime: f64,
    /// γ₀′ (1/s).
    pub gamma0_prime: f64,
    /// κ′/κ at fixed light power and beam diameter.
    pub kappa_ratio: f64,
}

/// γ′ = 𝒟/x² + a₁n_b with 𝒟 = v/(3n_bσ), γ₀′ = γ₀ + a₂n_b and
/// κ′/κ = γ₀γ_free/(γ₀′γ′).
pub fn buffer_rates(spec: &BufferGasSpec, density: f64, gamma0: f64, gamma_free: f64) -> Result<EffectiveRates> {
    spec.validate()?;
    if !(density > 0.0) || !density.is_finite() {
        return Err(Error::Domain("buffer density must be > 0 (the diffusion model does not cover the ballistic limit)"));
    }
    if !(gamma0 > 0.0 && gamma_free > 0.0) {
        return Err(Error::Domain("γ₀ and γ_free must be > 0"));
    }
    let diffusion = spec.speed / (3.0 * density * spec.sigma);
    let gamma_prime = diffusion / (spec.beam_diameter * spec.beam_diameter) + spec.a1 * density;
    let gamma0_prime = gamma0 + spec.a2 * density;
    Ok(EffectiveRates { gamma_prime, gamma0_prime, kappa_ratio: gamma0 * gamma_free / (gamma0_prime * gamma_prime) })
}

/// Density minimizing γ′ when a₂ = 0, √(v/(3σx²a₁)).
pub fn depolarization_optimum(spec: &BufferGasSpec) -> Result<f64> {
    spec.validate()?;
    if spec.a1 <= 0.0 {
        return Err(Error::Domain("a₁ must be > 0 for a finite optimum"));
    }
    Ok((spec.speed / (3.0 * spec.sigma * spec.beam_diameter * spec.beam_diameter * spec.a1)).sqrt())
}

/// Buffer density maximizing κ′/κ.
///
/// The ratio is unimodal in n_b; a log-spaced scan over 10⁻⁶–10⁶ times
/// the a₂ = 0 optimum (or the pressure-broadening crossover γ₀/a₂ when
/// a₁ = 0) brackets it, and golden section in log n_b refines it.
pub fn optimize_buffer_density(spec: &BufferGasSpec, gamma0: f64, gamma_free: f64) -> Result<(f64, EffectiveRates)> {
    spec.validate()?;
    let centre = if spec.a1 > 0.0 {
        depolarization_optimum(spec)?
    } else if spec.a2 > 0.0 {
        gamma0 / spec.a2
    } else {
        return Err(Error::NoBracket("with a₁ = a₂ = 0 the ratio grows without bound"));
    };
    let grid = log_grid(centre * 1e-6, centre * 1e6, 241)?;
    let ratio = |n: f64| buffer_rates(spec, n, gamma0, gamma_free).map(|r| r.kappa_ratio).unwrap_or(f64::NEG_INFINITY);
    let (mut best, mut value) = (0, f64::NEG_INFINITY);
    for (k, &n) in grid.iter().enumerate() {
        let r = ratio(n);
        if r > value {
            best = k;
            value = r;
        }
    }
    if best == 0 || best == grid.len() - 1 {
        return Err(Error::NoBracket("κ′/κ maximum lies outside the scanned density range"));
    }
    let (log_n, _) = golden_section_max(|t| ratio(10f64.powf(t)), grid[best - 1].log10(), grid[best + 1].log10(), 1e-12);
    let n = 10f64.powf(log_n);
    Ok((n, buffer_rates(spec, n, gamma0, gamma_free)?))
}

/// Atomic density giving a target unsaturated optical depth α₀ℓ.
pub fn required_density(alpha0_ell: f64, cell_length: f64, wavelength: f64, jg: f64, je: f64) -> Result<f64> {
    if !(alpha0_ell > 0.0 && cell_length > 0.0 && wavelength > 0.0) {
        return Err(Error::Domain("optical depth, cell length and wavelength must be > 0"));
    }
    Ok(alpha0_ell / (cell_length * alpha0_for(1.0, wavelength, jg, je)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const G0: f64 = 2.0 * core::f64::consts::PI * 5.75e6;

    #[test]
    fn zero_density_is_outside_the_model() {
        assert!(buffer_rates(&BufferGasSpec::EXAMPLE, 0.0, G0, 1e6).is_err());
    }

    #[test]
    fn removing_both_loss_channels_drives_ratio_up() {
        let spec = BufferGasSpec { a1: 0.0, a2: 0.0, ..BufferGasSpec::EXAMPLE };
        let free = spec.free_transit_rate();
        let lo = buffer_rates(&spec, 1e24, G0, free).unwrap();
        let hi = buffer_rates(&spec, 1e30, G0, free).unwrap();
        assert!(hi.gamma_prime < 1e-5 * lo.gamma_prime);
        assert!(hi.kappa_ratio > 1e5);
    }

    #[test]
    fn dense_buffer_gas_loses() {
        let spec = BufferGasSpec::EXAMPLE;
        let r = buffer_rates(&spec, 1e28, G0, spec.free_transit_rate()).unwrap();
        assert!(r.kappa_ratio < 1.0);
        assert!(r.gamma0_prime >= G0);
    }

    #[test]
    fn depolarization_optimum_scales_inversely_with_beam() {
        let spec = BufferGasSpec { a2: 0.0, ..BufferGasSpec::EXAMPLE };
        let wide = BufferGasSpec { beam_diameter: 2.0 * spec.beam_diameter, ..spec };
        assert_relative_eq!(depolarization_optimum(&wide).unwrap(), 0.5 * depolarization_optimum(&spec).unwrap(), max_relative = 1e-14);
    }

    #[test]
    fn gamma_prime_lower_bound() {
        let spec = BufferGasSpec { a2: 0.0, ..BufferGasSpec::EXAMPLE };
        let floor = 2.0 * (spec.speed * spec.a1 / (3.0 * spec.sigma * spec.beam_diameter.powi(2))).sqrt();
        let n_star = depolarization_optimum(&spec).unwrap();
        for f in [0.1, 0.5, 1.0, 2.0, 10.0] {
            let r = buffer_rates(&spec, f * n_star, G0, 1.0).unwrap();
            assert!(r.gamma_prime >= floor * (1.0 - 1e-12));
        }
        assert_relative_eq!(buffer_rates(&spec, n_star, G0, 1.0).unwrap().gamma_prime, floor, max_relative = 1e-12);
    }

    #[test]
    fn density_inversion_is_linear_in_length() {
        let a = required_density(2e5, 0.1, 795e-9, 0.5, 0.5).unwrap();
        let b = required_density(2e5, 0.2, 795e-9, 0.5, 0.5).unwrap();
        assert_relative_eq!(b, 0.5 * a, max_relative = 1e-14);
    }
}
