//! Detuning sweeps producing figure-style rows, and the global squeezing
//! optimization: maximize g/α over detuning, then set the density so the
//! cell has the optimum optical depth.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::flags::ValidityFlags;
use crate::optimize::maximize_on_grid;
use crate::quadrature::{small_loss_variance, squeezing_parameter, to_db, SqueezingResult};
use crate::transitions::{self, SaturationPoint, TransitionSpec};

/// Edge of the strong-rotation, weak-loss window.
pub const MIN_G_ELL: f64 = 10.0;
pub const MAX_ALPHA_ELL: f64 = 0.1;
pub const MIN_G_OVER_ALPHA: f64 = 10.0;
/// Self-elliptization counts as large above this fraction of the rotation.
pub const MAX_SE_OVER_G: f64 = 0.1;
/// Closed forms are asymptotic in κ; below this they are flagged.
pub const MIN_KAPPA: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResultRow {
    pub detuning_gamma0: f64,
    pub alpha_ell: f64,
    pub g_ell: f64,
    /// None where g vanishes and no squeezing is defined.
    pub squeezing_db: Option<f64>,
    pub flags: ValidityFlags,
}

impl ResultRow {
    /// Row for a cell with the given gℓ, αℓ and self-elliptization δε/ε.
    ///
    /// Squeezing uses the small-loss variance `4/(gℓ)² + αℓ` at the
    /// optimum phase; the sign of g only selects the phase branch.
    pub fn new(detuning_gamma0: f64, alpha_ell: f64, g_ell: f64, se_ell: f64, mut flags: ValidityFlags) -> Self {
        let g = g_ell.abs();
        let inside = g >= MIN_G_ELL && alpha_ell <= MAX_ALPHA_ELL && g >= MIN_G_OVER_ALPHA * alpha_ell;
        flags.set(ValidityFlags::G_OVER_ALPHA_LOW, !inside);
        flags.set(ValidityFlags::SE_LARGE, se_ell.abs() > MAX_SE_OVER_G * g);
        let squeezing_db = (g > 0.0 && g.is_finite() && alpha_ell.is_finite())
            .then(|| to_db(1.0 / small_loss_variance(g, alpha_ell).sqrt()));
        Self { detuning_gamma0, alpha_ell, g_ell, squeezing_db, flags }
    }
}

/// `points` equally spaced values from `start` to `stop`.
pub fn linear_grid(start: f64, stop: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::Usage("a grid needs at least two points"));
    }
    if !start.is_finite() || !stop.is_finite() {
        return Err(Error::Usage("grid endpoints must be finite"));
    }
    if start == stop {
        return Err(Error::Usage("grid has zero width"));
    }
    let step = (stop - start) / (points - 1) as f64;
    Ok((0..points).map(|k| if k == points - 1 { stop } else { start + step * k as f64 }).collect())
}

/// Closed-form rows for a transition at fixed κ over detunings in units
/// of γ₀.
pub fn analytic_sweep(spec: &TransitionSpec, kappa: f64, cell_length: f64, detunings: &[f64]) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    if !(cell_length > 0.0) {
        return Err(Error::Domain("cell length must be > 0"));
    }
    if !spec.rates_well_separated() {
        log::warn!("γ/γ₀ = {} is not ≪ 1; closed forms are approximate", spec.gamma / spec.gamma0);
    }
    let mut base = ValidityFlags::empty();
    base.set(ValidityFlags::KAPPA_REGIME, !(kappa > MIN_KAPPA));
    detunings
        .iter()
        .map(|&x| {
            let r = transitions::response(spec, SaturationPoint::new(kappa, x)?);
            Ok(ResultRow::new(x, r.alpha * cell_length, r.g * cell_length, r.se_rate * cell_length, base))
        })
        .collect()
}

/// Outcome of the global optimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingOptimum {
    /// Detuning maximizing g/α, in units of γ₀.
    pub detuning_gamma0: f64,
    pub g_over_alpha: f64,
    /// Atomic density (m⁻³) placing the cell at the optimum optical depth.
    pub density: f64,
    /// Unsaturated resonant optical depth α₀ℓ at that density.
    pub alpha0_ell: f64,
    pub squeezing: SqueezingResult,
}

/// Maximize g/α over a detuning grid, then fix the density so that
/// α(Δ*)ℓ equals the optimum `2(α/g)^{2/3}`.
///
/// `response(x)` returns (α/α₀, g/α₀) at detuning x (units of γ₀);
/// `alpha0_per_density` is α₀/n (m²) and converts the required α₀ into a
/// density. Brackets are refined by golden section.
pub fn optimize_squeezing<F>(mut response: F, grid: &[f64], cell_length: f64, alpha0_per_density: f64) -> Result<SqueezingOptimum>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    if !(cell_length > 0.0 && alpha0_per_density > 0.0) {
        return Err(Error::Domain("cell length and α₀/n must be > 0"));
    }
    let (x, _) = maximize_on_grid(
        |x| {
            let (a, g) = response(x)?;
            Ok(if a > 0.0 { g.abs() / a } else { f64::NEG_INFINITY })
        },
        grid,
        1e-10,
    )?;
    let (a, g) = response(x)?;
    let squeezing = squeezing_parameter(g.abs(), a)?;
    let alpha0 = squeezing.ell_opt_alpha / (cell_length * a);
    Ok(SqueezingOptimum {
        detuning_gamma0: x,
        g_over_alpha: g.abs() / a,
        density: alpha0 / alpha0_per_density,
        alpha0_ell: alpha0 * cell_length,
        squeezing,
    })
}

/// Global optimum of a closed-form system at fixed κ.
pub fn optimize_analytic(system: transitions::SystemKind, kappa: f64, gamma_ratio: f64, wavelength: f64, cell_length: f64) -> Result<SqueezingOptimum> {
    let spec = TransitionSpec::from_decay_rate(system, gamma_ratio, 1.0, wavelength, 1.0)?;
    let hi = 10.0 * transitions::optimal_detuning_for(system, kappa).max(1.0);
    let grid = crate::optimize::log_grid(1e-3, hi, 400)?;
    optimize_squeezing(
        |x| {
            let r = transitions::response(&spec, SaturationPoint::new(kappa, x)?);
            Ok((r.alpha / r.alpha0, r.g / r.alpha0))
        },
        &grid,
        cell_length,
        transitions::alpha0_for(1.0, wavelength, system.jg(), system.je()),
    )
}
