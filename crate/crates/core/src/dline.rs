//! Alkali D-line scans with resolved hyperfine structure.
//!
//! One ground hyperfine level F is coupled to every allowed excited F′ of
//! the line. The drive strength follows from power and beam diameter, the
//! ground relaxation from the transit time, and the response is averaged
//! over the Doppler distribution.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::constants::{BOLTZMANN, SPEED_OF_LIGHT};
use crate::dm::{doppler_average, DopplerAverage, DopplerOptions, Drive, LevelScheme, EPS_PROBE};
use crate::error::{Error, Result};
use crate::flags::ValidityFlags;
use crate::sweep::ResultRow;
use crate::transitions::{alpha0_for, dipole_from_decay_rate, field_amplitude_from_power, transit_rate};

/// Atomic data for one fine-structure line. SI units, rates in s⁻¹.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperfineLine {
    pub jg: f64,
    pub je: f64,
    pub nuclear_spin: f64,
    pub wavelength: f64,
    pub gamma0: f64,
    /// Atomic mass (kg).
    pub mass: f64,
    /// (F′, energy in rad/s relative to the excited centroid).
    pub excited_shifts: Vec<(f64, f64)>,
}

/// Experimental conditions of a scan. SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConditions {
    pub ground_f: f64,
    /// Light power (W).
    pub power: f64,
    pub beam_diameter: f64,
    /// Atomic density (m⁻³).
    pub density: f64,
    pub cell_length: f64,
    /// Vapour temperature (K), for transit time and default Doppler width.
    pub temperature: f64,
    /// Doppler width ku (rad/s); defaults to k√(2k_BT/m).
    pub doppler_width: Option<f64>,
    /// Intensity (W/m²) above which the ground hyperfine levels are no
    /// longer treated as resolved.
    pub max_intensity: f64,
}

/// Default resolution limit, 2×10⁴ mW/cm².
pub const HYPERFINE_INTENSITY_LIMIT: f64 = 2e8;

/// Doppler width ku = k√(2k_BT/m) (rad/s).
pub fn doppler_width(wavelength: f64, temperature: f64, mass: f64) -> Result<f64> {
    if !(wavelength > 0.0 && temperature > 0.0 && mass > 0.0) {
        return Err(Error::Domain("wavelength, temperature and mass must be > 0"));
    }
    let k = 2.0 * core::f64::consts::PI / wavelength;
    Ok(k * (2.0 * BOLTZMANN * temperature / mass).sqrt())
}

/// Scheme, drive and scale factors shared by every point of a scan.
#[derive(Debug, Clone)]
pub struct PreparedScan {
    scheme: LevelScheme,
    drive: Drive,
    pub kappa: f64,
    /// Transit relaxation γ (s⁻¹).
    pub gamma: f64,
    pub gamma0: f64,
    /// Doppler width ku (rad/s).
    pub doppler_width: f64,
    /// Unsaturated resonant α₀ of the whole line at the scan density (m⁻¹).
    pub alpha0: f64,
    pub cell_length: f64,
    pub intensity: f64,
    base_flags: ValidityFlags,
    pub options: DopplerOptions,
}

impl PreparedScan {
    pub fn new(line: &HyperfineLine, cond: &ScanConditions) -> Result<Self> {
        if !(cond.density > 0.0 && cond.cell_length > 0.0) {
            return Err(Error::Domain("density and cell length must be > 0"));
        }
        let gamma = transit_rate(cond.temperature, line.mass, cond.beam_diameter)?;
        let width = match cond.doppler_width {
            Some(w) if w >= 0.0 && w.is_finite() => w,
            Some(_) => return Err(Error::Domain("Doppler width must be finite and ≥ 0")),
            None => doppler_width(line.wavelength, cond.temperature, line.mass)?,
        };
        let e0 = field_amplitude_from_power(cond.power, cond.beam_diameter)?;
        let d = dipole_from_decay_rate(line.gamma0, line.wavelength, line.je)?;
        let rabi = d * e0 / crate::constants::HBAR;
        if !(line.gamma0 > 0.0) {
            return Err(Error::Domain("γ₀ must be > 0"));
        }
        // rates, shifts and Doppler width are carried in units of γ₀
        let shifts: Vec<(f64, f64)> = line.excited_shifts.iter().map(|&(f, s)| (f, s / line.gamma0)).collect();
        let scheme = LevelScheme::hyperfine(line.jg, line.je, line.nuclear_spin, cond.ground_f, &shifts, gamma / line.gamma0, 1.0)?;
        let intensity = cond.power / (core::f64::consts::PI * 0.25 * cond.beam_diameter * cond.beam_diameter);
        let mut base_flags = ValidityFlags::empty();
        base_flags.set(ValidityFlags::KAPPA_REGIME, intensity > cond.max_intensity);
        Ok(Self {
            scheme,
            drive: Drive::new(rabi / line.gamma0, 0.0, 0.0)?,
            kappa: rabi * rabi / (gamma * line.gamma0),
            gamma,
            gamma0: line.gamma0,
            doppler_width: width,
            alpha0: alpha0_for(cond.density, line.wavelength, line.jg, line.je),
            cell_length: cond.cell_length,
            intensity,
            base_flags,
            options: DopplerOptions::default(),
        })
    }

    pub fn scheme(&self) -> &LevelScheme {
        &self.scheme
    }

    /// Doppler-averaged response at detuning Δ/γ₀ from the ground level to
    /// the excited centroid, in units of α₀.
    pub fn response(&self, detuning_gamma0: f64) -> Result<DopplerAverage> {
        let drive = self.drive.with_detuning(detuning_gamma0);
        doppler_average(&self.scheme, &drive, self.doppler_width / self.gamma0, EPS_PROBE, self.options)
    }

    pub fn row(&self, detuning_gamma0: f64) -> Result<ResultRow> {
        let avg = self.response(detuning_gamma0)?;
        let r = avg.response;
        let scale = self.alpha0 * self.cell_length;
        let mut flags = self.base_flags;
        flags.set(ValidityFlags::DOPPLER_UNCONVERGED, !avg.converged);
        Ok(ResultRow::new(detuning_gamma0, r.alpha * scale, r.g * scale, r.se_rate * scale, flags))
    }
}

/// Rows (Δ/γ₀, αℓ, gℓ, squeezing) over a detuning grid, in grid order.
pub fn rb_d_line_scan(line: &HyperfineLine, cond: &ScanConditions, detunings_gamma0: &[f64]) -> Result<Vec<ResultRow>> {
    let scan = PreparedScan::new(line, cond)?;
    detunings_gamma0.iter().map(|&x| scan.row(x)).collect()
}

/// Wavenumber (rad/m) of a line.
pub fn wavenumber(wavelength: f64) -> f64 {
    2.0 * core::f64::consts::PI / wavelength
}

/// Line frequency (rad/s).
pub fn angular_frequency(wavelength: f64) -> f64 {
    SPEED_OF_LIGHT * wavenumber(wavelength)
}
