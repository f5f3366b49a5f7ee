//! Closed-form optical response of J = 1/2 → 1/2 and J = 1/2 → 3/2
//! transitions, valid for γ ≪ γ₀.
//!
//! Field, dipole and saturation conventions used throughout the crate:
//!
//! * the light field is `E₀ cos(ωt − kz)` with peak amplitude E₀ (V/m);
//! * the reduced dipole moment d (C·m) fixes the matrix elements as
//!   `⟨Je me|d_q|Jg mg⟩ = d ⟨Jg mg; 1 q|Je me⟩ / √(2Je + 1)`,
//!   so that `γ₀ = ω³d² / (3πε₀ħc³(2Je + 1))`;
//! * the saturation parameter is `κ = (dE₀/ħ)² / (γγ₀)` with both rates in s⁻¹;
//! * detunings are given as Δ/γ₀.
//!
//! The X-system absorption and self-rotation are
//!
//! ```text
//! α = α₀ / (1 + 4x² + (γ/γ₀)(κ/3))
//! g = (2/9) α κ x / (1 + 4x² + κ/9)
//! ```
//!
//! with `x = Δ/γ₀`. The absorption saturation term and the self-rotation
//! denominator are kept as they are, not merged. For J = 1/2 → 3/2 the same
//! steady-state calculation gives
//!
//! ```text
//! α = α₀ / (1 + 4x² + (γ/γ₀)(5κ/24))
//! g = −(1/18) α κ x / (1 + 4x² + κ/18)
//! ```

use core::f64::consts::PI;


#[allow(unused_imports)]
use num_traits::Float;

use crate::constants::{BOLTZMANN, EPSILON_0, HBAR, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::flags::ValidityFlags;
use crate::quadrature::to_db;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemKind {
    /// J = 1/2 → 1/2.
    XHalfHalf,
    /// J = 1/2 → 3/2.
    HalfThreeHalves,
}

impl SystemKind {
    pub const fn jg(self) -> f64 {
        0.5
    }

    pub const fn je(self) -> f64 {
        match self {
            Self::XHalfHalf => 0.5,
            Self::HalfThreeHalves => 1.5,
        }
    }

    /// Coefficient of (γ/γ₀)κ in the absorption denominator.
    pub const fn absorption_saturation(self) -> f64 {
        match self {
            Self::XHalfHalf => 1.0 / 3.0,
            Self::HalfThreeHalves => 1.0 / 3.0,
        }
    }

    /// Coefficient of κ in the self-rotation denominator.
    pub const fn rotation_saturation(self) -> f64 {
        match self {
            Self::XHalfHalf => 1.0 / 9.0,
            Self::HalfThreeHalves => 1.0 / 18.0,
        }
    }

    /// Prefactor of ακx in the self-rotation numerator.
    pub const fn rotation_strength(self) -> f64 {
        match self {
            Self::XHalfHalf => 2.0 / 9.0,
            Self::HalfThreeHalves => -1.0 / 18.0,
        }
    }

    /// Prefactor of ακ in the self-elliptization rate.
    pub const fn elliptization_strength(self) -> f64 {
        match self {
            Self::XHalfHalf => 2.0 / 9.0,
            Self::HalfThreeHalves => -1.0 / 36.0,
        }
    }

    /// Constant K in the large-κ squeezing `s = (κ/K)^{1/6}`.
    pub const fn squeezing_constant(self) -> f64 {
        match self {
            Self::XHalfHalf => 972.0,
            Self::HalfThreeHalves => 7776.0,
        }
    }
}

/// A closed transition with its rates and medium density, in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionSpec {
    pub system: SystemKind,
    /// Ground-state depolarization rate γ (s⁻¹).
    pub gamma: f64,
    /// Upper-state decay rate γ₀ (s⁻¹).
    pub gamma0: f64,
    /// Wavelength λ (m).
    pub wavelength: f64,
    /// Atomic number density n (m⁻³).
    pub density: f64,
    /// Reduced dipole moment d (C·m).
    pub dipole: f64,
}

impl TransitionSpec {
    /// Spec with the dipole moment fixed by γ₀ and λ.
    pub fn from_decay_rate(system: SystemKind, gamma: f64, gamma0: f64, wavelength: f64, density: f64) -> Result<Self> {
        let spec = Self {
            system,
            gamma,
            gamma0,
            wavelength,
            density,
            dipole: dipole_from_decay_rate(gamma0, wavelength, system.je())?,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn jg(&self) -> f64 {
        self.system.jg()
    }

    pub fn je(&self) -> f64 {
        self.system.je()
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if !positive(self.gamma) || !positive(self.gamma0) {
            return Err(Error::Domain("γ and γ₀ must be positive"));
        }
        if !positive(self.wavelength) || !positive(self.density) || !positive(self.dipole) {
            return Err(Error::Domain("wavelength, density and dipole must be positive"));
        }
        Ok(())
    }

    /// True when γ/γ₀ is small enough for the closed forms.
    pub fn rates_well_separated(&self) -> bool {
        self.gamma / self.gamma0 < 0.01
    }
}

/// Saturation parameter κ and detuning Δ/γ₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturationPoint {
    pub kappa: f64,
    pub detuning: f64,
}

impl SaturationPoint {
    pub fn new(kappa: f64, detuning: f64) -> Result<Self> {
        if !(kappa >= 0.0) || !kappa.is_finite() || !detuning.is_finite() {
            return Err(Error::Domain("κ must be finite and non-negative, Δ finite"));
        }
        Ok(Self { kappa, detuning })
    }
}

/// Per-length response of the medium (all in m⁻¹).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumResponse {
    pub alpha: f64,
    /// Rotation per unit ellipticity per unit length.
    pub g: f64,
    /// δε/(ε(0)ℓ).
    pub se_rate: f64,
    pub alpha0: f64,
}

/// Peak field amplitude E₀ (V/m) of a beam of `power` (W) spread uniformly
/// over a disc of `beam_diameter` (m): `I = P/(π(D/2)²) = cε₀E₀²/2`.
pub fn field_amplitude_from_power(power: f64, beam_diameter: f64) -> Result<f64> {
    if !(power >= 0.0) || !(beam_diameter > 0.0) || !power.is_finite() {
        return Err(Error::Domain("power must be ≥ 0 and beam diameter > 0"));
    }
    let radius = 0.5 * beam_diameter;
    let intensity = power / (PI * radius * radius);
    Ok((2.0 * intensity / (SPEED_OF_LIGHT * EPSILON_0)).sqrt())
}

/// Reduced dipole moment d (C·m) from the decay rate γ₀ (s⁻¹).
pub fn dipole_from_decay_rate(gamma0: f64, wavelength: f64, je: f64) -> Result<f64> {
    if !(gamma0 > 0.0) || !(wavelength > 0.0) || !(je >= 0.0) {
        return Err(Error::Domain("γ₀, λ must be positive"));
    }
    let omega = 2.0 * PI * SPEED_OF_LIGHT / wavelength;
    let c3 = SPEED_OF_LIGHT * SPEED_OF_LIGHT * SPEED_OF_LIGHT;
    Ok((3.0 * PI * EPSILON_0 * HBAR * c3 * (2.0 * je + 1.0) * gamma0 / (omega * omega * omega)).sqrt())
}

/// Mean thermal speed √(8k_BT/(πm)) (m/s).
pub fn mean_speed(temperature: f64, mass: f64) -> Result<f64> {
    if !(temperature > 0.0) || !(mass > 0.0) {
        return Err(Error::Domain("temperature and mass must be positive"));
    }
    Ok((8.0 * BOLTZMANN * temperature / (PI * mass)).sqrt())
}

/// Transit-time ground-state relaxation v̄/D (s⁻¹).
pub fn transit_rate(temperature: f64, mass: f64, beam_diameter: f64) -> Result<f64> {
    if !(beam_diameter > 0.0) {
        return Err(Error::Domain("beam diameter must be positive"));
    }
    Ok(mean_speed(temperature, mass)? / beam_diameter)
}

/// `κ = (dE₀/ħ)²/(γγ₀)`.
pub fn saturation_kappa(spec: &TransitionSpec, field_amplitude: f64) -> Result<f64> {
    if !(spec.gamma > 0.0 && spec.gamma0 > 0.0) {
        return Err(Error::Domain("κ needs positive γ and γ₀"));
    }
    let rabi = spec.dipole * field_amplitude / HBAR;
    Ok(rabi * rabi / (spec.gamma * spec.gamma0))
}

/// Unsaturated resonant absorption coefficient (m⁻¹) for density `n` (m⁻³).
pub fn alpha0_for(density: f64, wavelength: f64, jg: f64, je: f64) -> f64 {
    density / (2.0 * PI) * wavelength * wavelength * (2.0 * je + 1.0) / (2.0 * jg + 1.0)
}

/// `α₀ = (n/2π) λ² (2Je + 1)/(2Jg + 1)`.
pub fn unsaturated_alpha0(spec: &TransitionSpec) -> f64 {
    alpha0_for(spec.density, spec.wavelength, spec.jg(), spec.je())
}

/// Response of either system at a saturation point.
pub fn response(spec: &TransitionSpec, point: SaturationPoint) -> MediumResponse {
    let sys = spec.system;
    let x = point.detuning;
    let kappa = point.kappa;
    let lorentz = 1.0 + 4.0 * x * x;
    let alpha0 = unsaturated_alpha0(spec);
    let alpha = alpha0 / (lorentz + spec.gamma / spec.gamma0 * sys.absorption_saturation() * kappa);
    let rot_den = lorentz + sys.rotation_saturation() * kappa;
    MediumResponse {
        alpha,
        g: sys.rotation_strength() * alpha * kappa * x / rot_den,
        se_rate: sys.elliptization_strength() * alpha * kappa / rot_den,
        alpha0,
    }
}

/// X-system response; errors for any other system.
pub fn response_x(spec: &TransitionSpec, point: SaturationPoint) -> Result<MediumResponse> {
    if spec.system != SystemKind::XHalfHalf {
        return Err(Error::Usage("response_x called with a J = 1/2 → 3/2 transition"));
    }
    if !spec.rates_well_separated() {
        log::warn!("γ/γ₀ = {} is not small", spec.gamma / spec.gamma0);
    }
    Ok(response(spec, point))
}

/// Squeezing optimised over length and phase at one point, neglecting
/// absorption saturation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingProfile {
    pub s: f64,
    pub s_db: f64,
    /// |g/α| without the absorption-saturation term.
    pub g_over_alpha: f64,
    pub flags: ValidityFlags,
}

/// `s = (1/√3)(|c| κ |x| / (1 + 4x² + bκ))^{1/3}`; for the X-system this is
/// `(1/3)[(2/√3) κx/(1 + 4x² + κ/9)]^{1/3}`.
///
/// The sign of the detuning only moves the optimum phase, so |Δ| is used.
pub fn squeezing_profile(system: SystemKind, point: SaturationPoint) -> SqueezingProfile {
    let x = point.detuning.abs();
    let kappa = point.kappa;
    let goa = system.rotation_strength().abs() * kappa * x / (1.0 + 4.0 * x * x + system.rotation_saturation() * kappa);
    let s = goa.cbrt() / 3f64.sqrt();
    let mut flags = ValidityFlags::empty();
    flags.set(ValidityFlags::G_OVER_ALPHA_LOW, !(goa > 10.0));
    SqueezingProfile {
        s,
        s_db: to_db(s),
        g_over_alpha: goa,
        flags,
    }
}

/// X-system detuning maximizing s, `Δ_opt/γ₀ = ½√(1 + κ/9)`.
pub fn optimal_detuning(kappa: f64) -> f64 {
    optimal_detuning_for(SystemKind::XHalfHalf, kappa)
}

/// Detuning maximizing s for either system.
pub fn optimal_detuning_for(system: SystemKind, kappa: f64) -> f64 {
    0.5 * (1.0 + system.rotation_saturation() * kappa).sqrt()
}

/// Large-κ squeezing at the optimal detuning, `(κ/K)^{1/6}`.
///
/// Flags [`ValidityFlags::KAPPA_REGIME`] for κ ≤ 100.
pub fn asymptotic_squeezing(system: SystemKind, kappa: f64) -> (f64, ValidityFlags) {
    let mut flags = ValidityFlags::empty();
    flags.set(ValidityFlags::KAPPA_REGIME, !(kappa > 100.0));
    ((kappa / system.squeezing_constant()).powf(1.0 / 6.0), flags)
}

/// Unsaturated absorption lengths at the optimum, `α₀ℓ = (4√2κ/9)^{2/3}`.
pub fn optimal_thickness(kappa: f64) -> f64 {
    (4.0 * 2f64.sqrt() * kappa / 9.0).powf(2.0 / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn spec(system: SystemKind, ratio: f64) -> TransitionSpec {
        TransitionSpec {
            system,
            gamma: ratio * 1e7,
            gamma0: 1e7,
            wavelength: 795e-9,
            density: 1e19,
            dipole: 1e-29,
        }
    }

    fn pt(kappa: f64, x: f64) -> SaturationPoint {
        SaturationPoint::new(kappa, x).unwrap()
    }

    #[test]
    fn alpha0_degeneracy_ratios() {
        let x = spec(SystemKind::XHalfHalf, 1e-3);
        let w = spec(SystemKind::HalfThreeHalves, 1e-3);
        let nl2 = x.density * x.wavelength * x.wavelength;
        assert_relative_eq!(unsaturated_alpha0(&x), nl2 / (2.0 * PI), max_relative = 1e-15);
        assert_relative_eq!(unsaturated_alpha0(&w), nl2 / PI, max_relative = 1e-15);
        // 10¹³ cm⁻³ at 795 nm is about 1.0e4 cm⁻¹
        assert_relative_eq!(unsaturated_alpha0(&x) / 100.0, 1.005_888_4e4, max_relative = 1e-4);
    }

    #[test]
    fn x_response_examples() {
        let s = spec(SystemKind::XHalfHalf, 1e-3);
        let r = response_x(&s, pt(0.0, 0.0)).unwrap();
        assert_eq!(r.alpha, r.alpha0);
        assert_eq!(r.g, 0.0);
        assert_eq!(r.se_rate, 0.0);
        let r = response_x(&s, pt(0.0, 0.5)).unwrap();
        assert_relative_eq!(r.alpha, r.alpha0 / 2.0, max_relative = 1e-15);
        let r = response_x(&s, pt(9.0, 0.5)).unwrap();
        assert_relative_eq!(r.alpha, r.alpha0 / 2.003, max_relative = 1e-14);
        assert_relative_eq!(r.g, r.alpha / 3.0, max_relative = 1e-14);
        assert!(response_x(&spec(SystemKind::HalfThreeHalves, 1e-3), pt(1.0, 1.0)).is_err());
    }

    #[test]
    fn kappa_definition() {
        let mut s = spec(SystemKind::XHalfHalf, 1e-3);
        s.dipole = HBAR;
        let e = (s.gamma * s.gamma0).sqrt();
        assert_relative_eq!(saturation_kappa(&s, e).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(saturation_kappa(&s, 2.0 * e).unwrap(), 4.0, max_relative = 1e-14);
        s.gamma = 0.0;
        assert!(saturation_kappa(&s, e).is_err());
    }

    #[test]
    fn one_watt_hundred_micron_beam() {
        let e0 = field_amplitude_from_power(1.0, 100e-6).unwrap();
        // ~3 kV/cm
        assert_relative_eq!(e0, 3.097_314_75e5, max_relative = 1e-8);
        // Rb D1, 87 amu at 100 °C: κ of order 10⁸
        let mass = 86.909_180_527 * 1.660_539_066_6e-27;
        let gamma = transit_rate(373.0, mass, 100e-6).unwrap();
        let s = TransitionSpec::from_decay_rate(SystemKind::XHalfHalf, gamma, 2.0 * PI * 5.75e6, 794.978_851e-9, 1e19).unwrap();
        let kappa = saturation_kappa(&s, e0).unwrap();
        assert_relative_eq!(kappa, 1.020_147e8, max_relative = 1e-4);
    }

    #[test]
    fn optimal_detuning_examples() {
        assert_eq!(optimal_detuning(0.0), 0.5);
        assert_relative_eq!(optimal_detuning(27.0), 1.0, max_relative = 1e-15);
        assert_relative_eq!(optimal_detuning(1e8), 1666.666_741_666_665, max_relative = 1e-12);
    }

    #[test]
    fn asymptotic_examples() {
        let (s, f) = asymptotic_squeezing(SystemKind::XHalfHalf, 1e8);
        assert!(f.is_empty());
        assert_relative_eq!(s, 6.845_244_356_087_051, max_relative = 1e-12);
        assert_relative_eq!(to_db(s), 8.353_889_558_456_21, max_relative = 1e-12);
        let (s, _) = asymptotic_squeezing(SystemKind::HalfThreeHalves, 1e8);
        assert_relative_eq!(s, 4.840_318_703_068_095, max_relative = 1e-12);
        assert_relative_eq!(to_db(s), 6.848_739_580_136_303, max_relative = 1e-12);
        let (s, f) = asymptotic_squeezing(SystemKind::XHalfHalf, 972.0);
        assert_relative_eq!(s, 1.0, max_relative = 1e-15);
        assert!(f.is_empty());
        assert!(asymptotic_squeezing(SystemKind::XHalfHalf, 50.0).1.contains(ValidityFlags::KAPPA_REGIME));
    }

    #[test]
    fn optimal_thickness_examples() {
        assert_relative_eq!(optimal_thickness(1e8), 158_084.146_866_224_9, max_relative = 1e-12);
        assert_relative_eq!(optimal_thickness(9.0 / (4.0 * 2f64.sqrt())), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn thickness_from_composition() {
        for kappa in [1e4, 1e6, 1e8] {
            let s = spec(SystemKind::XHalfHalf, 1e-3);
            let r = response_x(&s, pt(kappa, optimal_detuning(kappa))).unwrap();
            let composed = 2.0 * (r.alpha / r.g).powf(2.0 / 3.0) * r.alpha0 / r.alpha;
            assert_relative_eq!(composed, optimal_thickness(kappa), max_relative = 0.05);
        }
    }

    #[test]
    fn profile_limits() {
        assert_eq!(squeezing_profile(SystemKind::XHalfHalf, pt(1e8, 0.0)).s, 0.0);
        let p = squeezing_profile(SystemKind::XHalfHalf, pt(1e8, optimal_detuning(1e8)));
        assert_relative_eq!(p.s_db, 8.353_889_558_456_21, max_relative = 1e-6);
        assert!(p.flags.is_empty());
    }

    /// Golden-section search over Δ as an independent check of Δ_opt.
    fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        let r = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let c = b - r * (b - a);
            let d = a + r * (b - a);
            if f(c) > f(d) {
                b = d;
            } else {
                a = c;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn detuning_maximizes_profile() {
        for sys in [SystemKind::XHalfHalf, SystemKind::HalfThreeHalves] {
            for kappa in [0.5, 10.0, 1e3, 1e6] {
                let best = golden_max(|x| squeezing_profile(sys, pt(kappa, x)).s, 1e-6, 10.0 * (1.0 + kappa.sqrt()));
                assert_relative_eq!(best, optimal_detuning_for(sys, kappa), max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn asymptotic_closure() {
        for sys in [SystemKind::XHalfHalf, SystemKind::HalfThreeHalves] {
            for e in 4..=9 {
                let kappa = 10f64.powi(e);
                let p = squeezing_profile(sys, pt(kappa, optimal_detuning_for(sys, kappa)));
                assert_relative_eq!(p.s, asymptotic_squeezing(sys, kappa).0, max_relative = 0.01);
            }
        }
    }

    proptest! {
        #[test]
        fn detuning_parity(kappa in 0.0f64..1e6, x in -50.0f64..50.0, ratio in 1e-5f64..1e-2) {
            for sys in [SystemKind::XHalfHalf, SystemKind::HalfThreeHalves] {
                let s = spec(sys, ratio);
                let a = response(&s, pt(kappa, x));
                let b = response(&s, pt(kappa, -x));
                prop_assert_eq!(a.alpha, b.alpha);
                prop_assert_eq!(a.g, -b.g);
                prop_assert_eq!(a.se_rate, b.se_rate);
                prop_assert!(a.alpha <= a.alpha0);
            }
        }

        #[test]
        fn rotation_over_elliptization_is_detuning(kappa in 1e-3f64..1e6, x in 0.01f64..50.0) {
            let r = response(&spec(SystemKind::XHalfHalf, 1e-3), pt(kappa, x));
            prop_assert!((r.g / r.se_rate - x).abs() <= 1e-12 * x);
        }

        #[test]
        fn profile_equals_parameter_of_response(kappa in 1.0f64..1e8, x in 0.01f64..1e4) {
            // with the absorption-saturation term negligible the two routes agree
            let r = response(&spec(SystemKind::XHalfHalf, 1e-12), pt(kappa, x));
            let direct = (r.g / r.alpha).cbrt() / 3f64.sqrt();
            let via = squeezing_profile(SystemKind::XHalfHalf, pt(kappa, x)).s;
            prop_assert!((direct - via).abs() <= 1e-9 * via);
        }
    }

    #[test]
    fn low_and_high_power_scaling() {
        let s = spec(SystemKind::XHalfHalf, 1e-3);
        let g = |k: f64| response(&s, pt(k, 1.0)).g;
        assert_relative_eq!(g(2e-6) / g(1e-6), 2.0, max_relative = 1e-5);
        assert_relative_eq!(g(2e9) * 2e9 / (g(1e9) * 1e9), 1.0, max_relative = 1e-3);
        let x = optimal_detuning(1e8);
        assert_relative_eq!(1.0 / x, 6.0 / 1e4, max_relative = 1e-3);
    }
}
