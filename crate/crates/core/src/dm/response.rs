use num_complex::Complex64;

use super::liouville::{build_system, steady_state, DensityMatrix, Drive, SteadyStateSystem};
use super::scheme::LevelScheme;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Default probe ellipticity for the small-ε limit.
pub const EPS_PROBE: f64 = 1e-3;

/// Rates of change of the field parameters per unit length, in units of
/// the resonant unsaturated absorption coefficient α₀ of the fine-structure
/// line at the total atomic density.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LocalResponse {
    /// Intensity absorption coefficient.
    pub alpha: f64,
    /// dθ/dz, rotation of the ellipse's major axis.
    pub rotation: f64,
    /// dφ/dz, overall phase shift.
    pub dphi_dz: f64,
    /// dε/dz.
    pub deps_dz: f64,
}

impl LocalResponse {
    pub fn scaled(self, c: f64) -> Self {
        Self {
            alpha: self.alpha * c,
            rotation: self.rotation * c,
            dphi_dz: self.dphi_dz * c,
            deps_dz: self.deps_dz * c,
        }
    }

    pub fn add(self, o: Self) -> Self {
        Self {
            alpha: self.alpha + o.alpha,
            rotation: self.rotation + o.rotation,
            dphi_dz: self.dphi_dz + o.dphi_dz,
            deps_dz: self.deps_dz + o.deps_dz,
        }
    }
}

/// Small-ellipticity response, in units of α₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DmResponse {
    pub alpha: f64,
    /// Self-rotation parameter, rotation per unit ellipticity.
    pub g: f64,
    pub dphi_dz: f64,
    /// dε/dz at the probe ellipticity.
    pub deps_dz: f64,
    /// Self-elliptization per unit ellipticity, (dε/dz)/ε.
    pub se_rate: f64,
    pub eps_probe: f64,
}

/// Field-derivative form of the thin-medium wave equation.
///
/// With `E = Re[𝓔 e^{i(kz − ωt)}]` and `P = Re[𝓟 e^{i(kz − ωt)}]` the
/// slowly varying envelope obeys `d𝓔/dz = (ik/2ε₀) 𝓟`. Writing
/// `𝓟 = 2n Tr(ρ̃ d)` and eliminating d through γ₀ gives, for each circular
/// component,
///
/// ```text
/// da_q/dz = i (3/2)(2Jg + 1) f (γ₀/Ω₀) Σ_{e,g} ρ_eg ⟨e|d_q|g⟩/d   (units of α₀)
/// ```
///
/// with `Ω₀ = dE₀/ħ` and f the share of atoms in the scheme. The
/// absorption, rotation, phase and ellipticity rates follow from the
/// moduli and phases of `a₊`, `a₋`.
pub fn extract_response(scheme: &LevelScheme, drive: &Drive, rho: &DensityMatrix) -> LocalResponse {
    let (a_p, a_m) = drive.circular_components();
    // In the linear regime ρ_eg ∝ Ω₀; evaluate the ratio on a weak field
    // when the drive is off. Linear response has no self-rotation.
    if drive.rabi == 0.0 {
        let weak = Drive { rabi: 1e-6 * scheme.gamma0, ..*drive };
        let rho = steady_state(&build_system(scheme, &weak)).expect("weak-field steady state exists");
        let linear = extract_response(scheme, &weak, &rho);
        return LocalResponse { rotation: 0.0, deps_dz: 0.0, ..linear };
    }
    let mut pol_p = Complex64::new(0.0, 0.0);
    let mut pol_m = Complex64::new(0.0, 0.0);
    for c in scheme.couplings() {
        let z = rho.get(c.excited, c.ground) * c.element;
        match c.q {
            1 => pol_p += z,
            -1 => pol_m += z,
            _ => {}
        }
    }
    let k = 1.5 * (2.0 * scheme.jg + 1.0) * scheme.population_fraction * scheme.gamma0 / drive.rabi;
    let i = Complex64::new(0.0, 1.0);
    derivatives(a_p, a_m, i * k * pol_p, i * k * pol_m)
}

/// Absorption, rotation, phase and ellipticity rates from the circular
/// amplitudes and their z-derivatives.
fn derivatives(a_p: Complex64, a_m: Complex64, da_p: Complex64, da_m: Complex64) -> LocalResponse {
    let (ip, im) = (a_p.norm_sqr(), a_m.norm_sqr());
    let dip = 2.0 * (a_p.conj() * da_p).re;
    let dim = 2.0 * (a_m.conj() * da_m).re;
    let total = ip + im;
    let alpha = -(dip + dim) / total;

    // sin 2ε = (I₋ − I₊)/(I₊ + I₋)
    let s2 = (im - ip) / total;
    let ds2 = ((dim - dip) * total - (im - ip) * (dip + dim)) / (total * total);
    let c2 = (1.0 - s2 * s2).max(0.0).sqrt();
    let deps_dz = if c2 > 0.0 { 0.5 * ds2 / c2 } else { 0.0 };

    // θ = ½ arg(−a₋ a₊*), φ = ½(arg(−a₊) + arg a₋)
    let lp = if ip > 0.0 { (a_p.conj() * da_p / ip).im } else { 0.0 };
    let lm = if im > 0.0 { (a_m.conj() * da_m / im).im } else { 0.0 };
    LocalResponse {
        alpha,
        rotation: 0.5 * (lm - lp),
        dphi_dz: 0.5 * (lp + lm),
        deps_dz,
    }
}

/// Steady-state response at the drive's own ellipticity.
pub fn local_response(scheme: &LevelScheme, drive: &Drive) -> Result<LocalResponse> {
    let rho = steady_state(&build_system(scheme, drive))?;
    Ok(extract_response(scheme, drive, &rho))
}

/// Response for a prebuilt system at a given detuning.
pub fn local_response_at(scheme: &LevelScheme, drive: &Drive, system: &mut SteadyStateSystem, detuning: f64) -> Result<LocalResponse> {
    system.set_detuning(detuning);
    let rho = steady_state(system)?;
    Ok(extract_response(scheme, &drive.with_detuning(detuning), &rho))
}

/// Combine responses at ε and ε/2 into the small-ε limit.
///
/// The rotation is odd in ε with an O(ε³) correction, so g(ε/2) and g(ε)
/// differ by about 3/4 of the remaining error; a relative change above 1%
/// means the probe is not small.
pub fn probe_limit(coarse: LocalResponse, fine: LocalResponse, eps: f64) -> Result<DmResponse> {
    let half = 0.5 * eps;
    let g_coarse = coarse.rotation / eps;
    let g_fine = fine.rotation / half;
    let floor = 1e-9 * fine.alpha.abs().max(1e-300);
    if (g_coarse - g_fine).abs() > 0.01 * g_fine.abs() + floor {
        return Err(Error::ProbeNotConverged { coarse: g_coarse, fine: g_fine });
    }
    Ok(DmResponse {
        alpha: fine.alpha,
        g: (4.0 * g_fine - g_coarse) / 3.0,
        dphi_dz: fine.dphi_dz,
        deps_dz: fine.deps_dz,
        se_rate: (4.0 * fine.deps_dz / half - coarse.deps_dz / eps) / 3.0,
        eps_probe: half,
    })
}

/// Halvings of the probe tried before the limit is declared unsettled.
pub const MAX_PROBE_HALVINGS: usize = 4;

/// Small-ε limit of `at(ε)`, halving the probe while ε and ε/2 disagree.
///
/// Near a zero of g the cubic term dominates at the default probe, so the
/// pair is retried further down.
pub fn probe_search<F>(eps_probe: f64, mut at: F) -> Result<DmResponse>
where
    F: FnMut(f64) -> Result<LocalResponse>,
{
    let mut eps = eps_probe;
    let mut coarse = at(eps)?;
    let mut failure = None;
    for _ in 0..=MAX_PROBE_HALVINGS {
        let fine = at(0.5 * eps)?;
        match probe_limit(coarse, fine, eps) {
            Ok(r) => return Ok(r),
            Err(e) => failure = Some(e),
        }
        coarse = fine;
        eps *= 0.5;
    }
    Err(failure.expect("at least one probe pair"))
}

/// Small-ε response from steady states at ε_probe and ε_probe/2, with the
/// probe halved as needed.
///
/// The drive's own ellipticity is ignored.
pub fn response(scheme: &LevelScheme, drive: &Drive, eps_probe: f64) -> Result<DmResponse> {
    probe_search(eps_probe, |e| local_response(scheme, &drive.with_ellipticity(e)))
}
