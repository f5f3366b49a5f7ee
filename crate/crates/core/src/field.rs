//! Two-component optical field: ellipticity, self-rotation propagation and
//! Stokes parameters.
//!
//! The field is
//!
//! ```text
//! E_x = 𝓔_x cos(kz − ωt + φ),   E_y = 𝓔_y cos(kz − ωt)
//! ```
//!
//! with `φ = rel_phase`. Positive ellipticity corresponds to `sin φ > 0`.
//! The angle of the ellipse's principal axis is called `rotation_angle`
//! to keep it apart from the relative phase.

use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

#[allow(unused_imports)]
use num_traits::Float;

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Error, Result};

/// Reduce an angle to (−π, π].
pub fn reduce_phase(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let r = x - two_pi * (x / two_pi).floor();
    if r > PI {
        r - two_pi
    } else {
        r
    }
}

/// Reduce an axis angle to (−π/2, π/2].
fn reduce_axis(x: f64) -> f64 {
    let r = x - PI * (x / PI).floor();
    if r > FRAC_PI_2 {
        r - PI
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexFieldEnvelope {
    amp_x: f64,
    amp_y: f64,
    rel_phase: f64,
    frequency: f64,
    wavenumber: f64,
}

impl ComplexFieldEnvelope {
    /// Build an envelope; `frequency` is the angular frequency ω in rad/s.
    pub fn new(amp_x: f64, amp_y: f64, rel_phase: f64, frequency: f64) -> Result<Self> {
        if !(amp_x >= 0.0 && amp_y >= 0.0) || !amp_x.is_finite() || !amp_y.is_finite() {
            return Err(Error::Domain("field amplitudes must be finite and non-negative"));
        }
        if !rel_phase.is_finite() || !frequency.is_finite() || frequency < 0.0 {
            return Err(Error::Domain("phase and frequency must be finite, frequency ≥ 0"));
        }
        Ok(Self {
            amp_x,
            amp_y,
            rel_phase: reduce_phase(rel_phase),
            frequency,
            wavenumber: frequency / SPEED_OF_LIGHT,
        })
    }

    /// Envelope without a carrier frequency (ω = k = 0), for purely
    /// polarimetric work.
    pub fn polarization(amp_x: f64, amp_y: f64, rel_phase: f64) -> Result<Self> {
        Self::new(amp_x, amp_y, rel_phase, 0.0)
    }

    /// Envelope from the complex amplitudes of the x and y components.
    /// Only the phase of x relative to y is kept.
    pub fn from_complex(x: Complex64, y: Complex64, frequency: f64) -> Result<Self> {
        let rel = if x.norm() == 0.0 || y.norm() == 0.0 {
            if y.norm() == 0.0 {
                x.arg()
            } else {
                0.0
            }
        } else {
            x.arg() - y.arg()
        };
        Self::new(x.norm(), y.norm(), rel, frequency)
    }

    pub fn amp_x(&self) -> f64 {
        self.amp_x
    }

    pub fn amp_y(&self) -> f64 {
        self.amp_y
    }

    pub fn rel_phase(&self) -> f64 {
        self.rel_phase
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn wavenumber(&self) -> f64 {
        self.wavenumber
    }

    pub fn intensity(&self) -> f64 {
        self.amp_x * self.amp_x + self.amp_y * self.amp_y
    }

    /// Complex amplitudes `(𝓔_x e^{iφ}, 𝓔_y)` at z = t = 0.
    pub fn complex_amplitudes(&self) -> (Complex64, Complex64) {
        (
            Complex64::from_polar(self.amp_x, self.rel_phase),
            Complex64::new(self.amp_y, 0.0),
        )
    }

    /// Positive-frequency components `E⁺_x, E⁺_y` at z = t = 0.
    pub fn positive_frequency(&self) -> (Complex64, Complex64) {
        let (x, y) = self.complex_amplitudes();
        (x * 0.5, y * 0.5)
    }

    /// Scale both amplitudes by `c ≥ 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.amp_x * c, self.amp_y * c, self.rel_phase, self.frequency)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationState {
    /// ε in [−π/4, π/4].
    pub ellipticity: f64,
    /// Principal-axis angle measured from x, in (−π/2, π/2].
    pub rotation_angle: f64,
}

/// Exact ellipticity, `ε = ½ arcsin[i(E⁻_x E⁺_y − E⁻_y E⁺_x) / (|E_x|² + |E_y|²)]`.
pub fn ellipticity_exact(field: &ComplexFieldEnvelope) -> Result<f64> {
    let (xp, yp) = field.positive_frequency();
    let (xm, ym) = (xp.conj(), yp.conj());
    let denom = (xp * xm + yp * ym).re;
    if denom <= 0.0 {
        return Err(Error::Domain("ellipticity of a field with zero intensity"));
    }
    let num = (Complex64::i() * (xm * yp - ym * xp)).re;
    Ok(0.5 * (num / denom).clamp(-1.0, 1.0).asin())
}

/// Small-ellipticity form `(𝓔_x/𝓔_y) sin φ`, valid for 𝓔_x ≪ 𝓔_y.
pub fn ellipticity_small(field: &ComplexFieldEnvelope) -> Result<f64> {
    if field.amp_y == 0.0 {
        return Err(Error::Domain("small-ellipticity form needs a non-zero y amplitude"));
    }
    let ratio = field.amp_x / field.amp_y;
    if ratio >= 0.1 {
        log::warn!("ellipticity_small used with amp_x/amp_y = {ratio}, expected < 0.1");
    }
    Ok(ratio * field.rel_phase.sin())
}

/// Propagate through a self-rotating medium with the first-order map
///
/// ```text
/// [E_x(ℓ)]   [ 1  θ ] [𝓔_x e^{iφ}]
/// [E_y(ℓ)] ≈ [−θ  1 ] [𝓔_y      ],   θ = g ε(0) ℓ
/// ```
///
/// where ε(0) is the small-ellipticity value of the input. The common
/// propagation phase e^{i(kℓ − ωt)} is dropped.
pub fn propagate_sr(field: &ComplexFieldEnvelope, g: f64, length: f64) -> Result<ComplexFieldEnvelope> {
    if g == 0.0 || length == 0.0 || field.amp_x == 0.0 && field.amp_y == 0.0 {
        return Ok(*field);
    }
    let eps = ellipticity_small(field)?;
    let theta = g * eps * length;
    if theta.abs() >= 0.3 {
        log::warn!("propagate_sr outside the small-rotation regime: gεℓ = {theta}");
    }
    let (x, y) = field.complex_amplitudes();
    let x_out = x + y * theta;
    let y_out = y - x * theta;
    ComplexFieldEnvelope::from_complex(x_out, y_out, field.frequency)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stokes {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl Stokes {
    /// `S0² − S1² − S2² − S3²`, zero for fully polarized light.
    pub fn depolarization_residual(&self) -> f64 {
        self.s0 * self.s0 - self.s1 * self.s1 - self.s2 * self.s2 - self.s3 * self.s3
    }
}

/// Stokes parameters of the complex amplitudes `a_x = 𝓔_x e^{iφ}`, `a_y = 𝓔_y`:
///
/// ```text
/// S0 = |a_x|² + |a_y|²         S2 = a_x a_y* + a_x* a_y
/// S1 = |a_x|² − |a_y|²         S3 = i(a_x a_y* − a_x* a_y)
/// ```
///
/// With this sign choice S3 = −2𝓔_x𝓔_y sin φ, so right-handed
/// (φ = π/2) circular light of unit components has S3 = −2.
pub fn stokes_parameters(field: &ComplexFieldEnvelope) -> Stokes {
    let (x, y) = field.complex_amplitudes();
    let xx = x.norm_sqr();
    let yy = y.norm_sqr();
    let cross = x * y.conj();
    Stokes {
        s0: xx + yy,
        s1: xx - yy,
        s2: 2.0 * cross.re,
        s3: (Complex64::i() * (cross - cross.conj())).re,
    }
}

/// Ellipticity and principal-axis angle of the field.
pub fn polarization_state(field: &ComplexFieldEnvelope) -> Result<PolarizationState> {
    let ellipticity = ellipticity_exact(field)?;
    let st = stokes_parameters(field);
    let rotation_angle = reduce_axis(0.5 * st.s2.atan2(st.s1));
    Ok(PolarizationState {
        ellipticity: ellipticity.clamp(-FRAC_PI_4, FRAC_PI_4),
        rotation_angle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn env(ax: f64, ay: f64, phi: f64) -> ComplexFieldEnvelope {
        ComplexFieldEnvelope::polarization(ax, ay, phi).unwrap()
    }

    #[test]
    fn exact_ellipticity_limits() {
        assert_relative_eq!(ellipticity_exact(&env(1.0, 1.0, FRAC_PI_2)).unwrap(), FRAC_PI_4);
        assert_eq!(ellipticity_exact(&env(1.0, 1.0, 0.0)).unwrap(), 0.0);
        assert!(ellipticity_exact(&env(0.0, 0.0, 0.3)).is_err());
    }

    #[test]
    fn exact_ellipticity_against_direct_evaluation() {
        // ½ arcsin(2 a_x a_y sin φ / (a_x² + a_y²)) evaluated by hand.
        let direct = 0.5 * (2.0 * 0.1 * 1.0 * (PI / 6.0).sin() / 1.01f64).asin();
        let e = ellipticity_exact(&env(0.1, 1.0, PI / 6.0)).unwrap();
        assert_relative_eq!(e, direct, max_relative = 1e-14);
        let approx = 0.1 * (PI / 6.0).sin() / 1.01;
        assert!((e - approx).abs() / approx < 0.01);
    }

    #[test]
    fn small_ellipticity_examples() {
        assert_relative_eq!(ellipticity_small(&env(0.01, 1.0, FRAC_PI_2)).unwrap(), 0.01);
        assert_eq!(ellipticity_small(&env(0.01, 1.0, 0.0)).unwrap(), 0.0);
        let f = env(0.05, 1.0, FRAC_PI_4);
        let small = ellipticity_small(&f).unwrap();
        let exact = ellipticity_exact(&f).unwrap();
        assert!(((small - exact) / exact).abs() < 3e-3);
        assert!(ellipticity_small(&env(0.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn wavenumber_follows_frequency() {
        let f = ComplexFieldEnvelope::new(0.0, 1.0, 0.0, 2.37e15).unwrap();
        assert_relative_eq!(f.wavenumber(), 2.37e15 / SPEED_OF_LIGHT);
        assert!(ComplexFieldEnvelope::new(-1.0, 1.0, 0.0, 0.0).is_err());
        let g = env(0.0, 1.0, 3.0 * PI);
        assert_relative_eq!(g.rel_phase(), PI);
    }

    #[test]
    fn propagation_examples() {
        let f = env(0.01, 1.0, FRAC_PI_2);
        let out = propagate_sr(&f, 5.0, 1.0).unwrap();
        let (x, _) = out.complex_amplitudes();
        let expected = Complex64::new(0.05, 0.01);
        // Output envelope is referenced to the y phase; compare moduli and
        // the x phase relative to y.
        let (x_exp, y_exp) = (expected, Complex64::new(1.0, 0.0) - Complex64::new(0.0, 0.01) * 0.05);
        assert_relative_eq!(x.norm(), x_exp.norm(), max_relative = 1e-12);
        assert_relative_eq!(out.rel_phase(), x_exp.arg() - y_exp.arg(), max_relative = 1e-12);

        let f = env(0.01, 1.0, -FRAC_PI_2);
        let out = propagate_sr(&f, 5.0, 1.0).unwrap();
        assert_relative_eq!(out.amp_x(), Complex64::new(-0.05, 0.01).norm(), max_relative = 1e-12);

        let linear = env(0.01, 1.0, 0.0);
        let out = propagate_sr(&linear, 5.0, 1.0).unwrap();
        assert_relative_eq!(out.amp_x(), 0.01);
    }

    #[test]
    fn stokes_examples() {
        let y = stokes_parameters(&env(0.0, 1.0, 0.0));
        assert_eq!((y.s0, y.s1, y.s2, y.s3), (1.0, -1.0, 0.0, 0.0));
        let d = stokes_parameters(&env(1.0, 1.0, 0.0));
        assert_relative_eq!(d.s0, 2.0);
        assert_relative_eq!(d.s2, 2.0);
        assert!(d.s1.abs() < 1e-15 && d.s3.abs() < 1e-15);
        let c = stokes_parameters(&env(1.0, 1.0, FRAC_PI_2));
        assert_relative_eq!(c.s3, -2.0);
        assert!(c.s2.abs() < 1e-15);
    }

    #[test]
    fn state_of_y_polarized_light() {
        let s = polarization_state(&env(0.0, 1.0, 0.0)).unwrap();
        assert_eq!(s.ellipticity, 0.0);
        assert_relative_eq!(s.rotation_angle, FRAC_PI_2);
        let tilted = polarization_state(&env(1.0, 1.0, 0.0)).unwrap();
        assert_relative_eq!(tilted.rotation_angle, FRAC_PI_4);
    }

    proptest! {
        #[test]
        fn common_phase_invariance(ax in 0.0f64..2.0, ay in 0.01f64..2.0, phi in -3.0f64..3.0, common in -3.0f64..3.0) {
            let f = env(ax, ay, phi);
            let (x, y) = f.complex_amplitudes();
            let rot = Complex64::from_polar(1.0, common);
            let g = ComplexFieldEnvelope::from_complex(x * rot, y * rot, 0.0).unwrap();
            let a = ellipticity_exact(&f).unwrap();
            let b = ellipticity_exact(&g).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
        }

        #[test]
        fn small_form_converges_quadratically(r in 1e-4f64..0.05, phi in 0.1f64..3.0) {
            let f = env(r, 1.0, phi);
            let exact = ellipticity_exact(&f).unwrap();
            let small = ellipticity_small(&f).unwrap();
            // |small − exact| / |exact| = O(r²); the constant is below 2.
            prop_assert!(((small - exact) / exact).abs() <= 2.0 * r * r + 1e-12);
        }

        #[test]
        fn stokes_fully_polarized(ax in 0.0f64..3.0, ay in 0.0f64..3.0, phi in -3.2f64..3.2) {
            let s = stokes_parameters(&env(ax, ay, phi));
            prop_assert!(s.depolarization_residual().abs() <= 1e-12 * s.s0 * s.s0 + 1e-300);
        }

        #[test]
        fn homogeneity(ax in 0.0f64..3.0, ay in 0.1f64..3.0, phi in -3.0f64..3.0, c in 0.1f64..10.0) {
            let f = env(ax, ay, phi);
            let g = f.scaled(c).unwrap();
            let (s, t) = (stokes_parameters(&f), stokes_parameters(&g));
            for (a, b) in [(s.s0, t.s0), (s.s1, t.s1), (s.s2, t.s2), (s.s3, t.s3)] {
                prop_assert!((b - c * c * a).abs() <= 1e-12 * c * c * s.s0);
            }
            prop_assert!((ellipticity_exact(&f).unwrap() - ellipticity_exact(&g).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn zero_gain_is_identity(ax in 0.0f64..0.1, phi in -3.0f64..3.0, len in 0.0f64..10.0) {
            let f = env(ax, 1.0, phi);
            prop_assert_eq!(propagate_sr(&f, 0.0, len).unwrap(), f);
        }
    }
}
