//! Atomic-constants files.
//!
//! Frequencies are given as ordinary frequencies in MHz and converted to
//! angular rates on load. Unknown keys are rejected so that a value with
//! the wrong unit suffix cannot be silently ignored.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use srsqueeze_core::constants::ATOMIC_MASS_UNIT;
use srsqueeze_core::dline::HyperfineLine;
use srsqueeze_core::media::BufferGasSpec;

use crate::error::{CliError, Result};

pub const BUNDLED_NAME: &str = "rb87.toml (bundled)";
const BUNDLED: &str = include_str!("../data/rb87.toml");

const MHZ: f64 = 2.0 * PI * 1e6;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExcitedLevel {
    pub f: f64,
    pub shift_mhz: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineConfig {
    pub jg: f64,
    pub je: f64,
    pub wavelength_nm: f64,
    /// γ₀/2π.
    pub gamma0_mhz: f64,
    pub excited: Vec<ExcitedLevel>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BufferGasConfig {
    pub a1_m3_per_s: f64,
    pub a2_m3_per_s: f64,
    pub sigma_m2: f64,
    pub speed_m_per_s: f64,
    pub beam_diameter_m: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomConfig {
    pub isotope: String,
    pub nuclear_spin: f64,
    pub mass_u: f64,
    pub lines: BTreeMap<String, LineConfig>,
    pub buffer_gas: Option<BufferGasConfig>,
    #[serde(skip)]
    pub source: PathBuf,
}

fn half_integer(x: f64) -> bool {
    x >= 0.0 && ((2.0 * x).round() - 2.0 * x).abs() < 1e-9
}

impl AtomConfig {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED, Path::new(BUNDLED_NAME)).expect("bundled constants are valid")
    }

    /// The file at `path`, or the bundled ⁸⁷Rb data when `path` is None.
    pub fn load_or_bundled(path: Option<&Path>) -> Result<Self> {
        match path {
            Some(p) => Self::load(p),
            None => Ok(Self::bundled()),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config { path: path.into(), message: e.to_string() })?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let err = |message: String| CliError::Config { path: path.into(), message };
        let mut cfg: Self = toml::from_str(text).map_err(|e| err(e.to_string().trim_end().to_owned()))?;
        cfg.source = path.into();
        if !half_integer(cfg.nuclear_spin) {
            return Err(err(format!("nuclear_spin = {} is not a non-negative half-integer", cfg.nuclear_spin)));
        }
        if !(cfg.mass_u > 0.0) {
            return Err(err("mass_u must be > 0".into()));
        }
        for (name, line) in &cfg.lines {
            if !(line.wavelength_nm > 0.0 && line.gamma0_mhz > 0.0) {
                return Err(err(format!("lines.{name}: wavelength_nm and gamma0_mhz must be > 0")));
            }
            if !half_integer(line.jg) || !half_integer(line.je) {
                return Err(err(format!("lines.{name}: jg and je must be half-integers")));
            }
            if let Some(l) = line.excited.iter().find(|l| !half_integer(l.f) || !l.shift_mhz.is_finite()) {
                return Err(err(format!("lines.{name}: bad excited level F' = {}", l.f)));
            }
        }
        if let Some(b) = cfg.buffer_gas {
            Self::to_buffer(b).validate().map_err(|e| err(format!("buffer_gas: {e}")))?;
        }
        Ok(cfg)
    }

    pub fn mass(&self) -> f64 {
        self.mass_u * ATOMIC_MASS_UNIT
    }

    pub fn line(&self, name: &str) -> Result<HyperfineLine> {
        let l = self.lines.get(name).ok_or_else(|| CliError::Config {
            path: self.source.clone(),
            message: format!("no line '{name}' (available: {})", self.lines.keys().cloned().collect::<Vec<_>>().join(", ")),
        })?;
        Ok(HyperfineLine {
            jg: l.jg,
            je: l.je,
            nuclear_spin: self.nuclear_spin,
            wavelength: l.wavelength_nm * 1e-9,
            gamma0: l.gamma0_mhz * MHZ,
            mass: self.mass(),
            excited_shifts: l.excited.iter().map(|e| (e.f, e.shift_mhz * MHZ)).collect(),
        })
    }

    fn to_buffer(b: BufferGasConfig) -> BufferGasSpec {
        BufferGasSpec { a1: b.a1_m3_per_s, a2: b.a2_m3_per_s, sigma: b.sigma_m2, speed: b.speed_m_per_s, beam_diameter: b.beam_diameter_m }
    }

    /// Buffer-gas constants from the file, or the documented example set.
    pub fn buffer_gas(&self) -> BufferGasSpec {
        self.buffer_gas.map(Self::to_buffer).unwrap_or(BufferGasSpec::EXAMPLE)
    }
}
