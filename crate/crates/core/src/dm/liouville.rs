use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::scheme::LevelScheme;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Monochromatic drive propagating along z.
///
/// The field is `Re[E₀ e^{iφ} u e^{−iωt}]` with Jones vector
/// `u = R(θ)(cos ε, −i sin ε)`. With this handedness ε > 0 puts more
/// power in σ⁻ and g is positive above resonance for the X-system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Drive {
    /// dE₀/ħ (rad/s), with d the reduced dipole moment.
    pub rabi: f64,
    /// Laser detuning Δ = ω − ω_ref (rad/s).
    pub detuning: f64,
    pub ellipticity: f64,
    /// Polarization angle θ of the ellipse's major axis.
    pub angle: f64,
    /// Overall phase φ.
    pub phase: f64,
}

impl Drive {
    pub fn new(rabi: f64, detuning: f64, ellipticity: f64) -> Result<Self> {
        if !(rabi >= 0.0) || !rabi.is_finite() || !detuning.is_finite() {
            return Err(Error::Domain("Rabi frequency must be finite and ≥ 0, detuning finite"));
        }
        if !(ellipticity.abs() <= core::f64::consts::FRAC_PI_4) {
            return Err(Error::Domain("|ε| must not exceed π/4"));
        }
        Ok(Self { rabi, detuning, ellipticity, angle: 0.0, phase: 0.0 })
    }

    /// Drive with `dE₀/ħ = √(κγγ₀)`.
    pub fn from_kappa(scheme: &LevelScheme, kappa: f64, detuning: f64, ellipticity: f64) -> Result<Self> {
        if !(kappa >= 0.0) {
            return Err(Error::Domain("κ must be ≥ 0"));
        }
        Self::new((kappa * scheme.gamma * scheme.gamma0).sqrt(), detuning, ellipticity)
    }

    pub fn with_ellipticity(self, ellipticity: f64) -> Self {
        Self { ellipticity, ..self }
    }

    pub fn with_detuning(self, detuning: f64) -> Self {
        Self { detuning, ..self }
    }

    /// Spherical components `(a₊, a₋) = (ê₊*·u, ê₋*·u) e^{iφ}` with
    /// `ê_± = ∓(x̂ ± iŷ)/√2`.
    pub fn circular_components(&self) -> (Complex64, Complex64) {
        let (c, s) = (self.ellipticity.cos(), self.ellipticity.sin());
        let r = core::f64::consts::FRAC_1_SQRT_2;
        let plus = Complex64::from_polar(-(c - s) * r, self.phase - self.angle);
        let minus = Complex64::from_polar((c + s) * r, self.phase + self.angle);
        (plus, minus)
    }

    /// Component driving Δm = q transitions.
    pub fn component(&self, q: i32) -> Complex64 {
        let (p, m) = self.circular_components();
        match q {
            1 => p,
            -1 => m,
            _ => Complex64::new(0.0, 0.0),
        }
    }
}

/// Steady-state density matrix, normalized to unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(DMatrix<Complex64>);

impl DensityMatrix {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Largest |ρ_ij − ρ_ji*|.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0);
        h.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn population(&self, k: usize) -> f64 {
        self.0[(k, k)].re
    }
}

/// Index map between Hermitian matrices and real vectors: the N diagonal
/// entries first, then (Re, Im) of each upper-triangle element.
#[derive(Debug, Clone)]
struct RealBasis {
    n: usize,
    pair_index: Vec<usize>,
}

impl RealBasis {
    fn new(n: usize) -> Self {
        let mut pair_index = vec![usize::MAX; n * n];
        let mut next = n;
        for i in 0..n {
            for j in (i + 1)..n {
                pair_index[i * n + j] = next;
                next += 2;
            }
        }
        Self { n, pair_index }
    }

    fn len(&self) -> usize {
        self.n * self.n
    }

    fn pair(&self, i: usize, j: usize) -> usize {
        self.pair_index[i * self.n + j]
    }

    /// Hermitian basis matrix for coordinate `k`.
    fn element(&self, k: usize) -> DMatrix<Complex64> {
        let n = self.n;
        let mut m = DMatrix::zeros(n, n);
        if k < n {
            m[(k, k)] = Complex64::new(1.0, 0.0);
            return m;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let p = self.pair(i, j);
                if k == p {
                    m[(i, j)] = Complex64::new(1.0, 0.0);
                    m[(j, i)] = Complex64::new(1.0, 0.0);
                    return m;
                }
                if k == p + 1 {
                    m[(i, j)] = I;
                    m[(j, i)] = -I;
                    return m;
                }
            }
        }
        unreachable!("coordinate {k} out of range")
    }

    fn coordinates(&self, m: &DMatrix<Complex64>, out: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            out[i] = m[(i, i)].re;
            for j in (i + 1)..n {
                let p = self.pair(i, j);
                out[p] = m[(i, j)].re;
                out[p + 1] = m[(i, j)].im;
            }
        }
    }

    fn matrix(&self, x: &DVector<f64>) -> DMatrix<Complex64> {
        let n = self.n;
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(x[i], 0.0);
            for j in (i + 1)..n {
                let p = self.pair(i, j);
                let z = Complex64::new(x[p], x[p + 1]);
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }
}

/// One term `Λ_{gg'} += w ρ_{ee'}` of the spontaneous repopulation.
#[derive(Debug, Clone, Copy)]
struct Repopulation {
    g: usize,
    gp: usize,
    e: usize,
    ep: usize,
    weight: f64,
}

/// The Liouville equation `dρ/dt = −i[H, ρ] − ½{Γ, ρ} + Λ⁰ + Λ^repop(ρ)`
/// in the frame rotating at the laser frequency, written as the real
/// affine system `dx/dt = A x + b` on the Hermitian coordinates of ρ.
///
/// Rates are scaled by γ₀. The laser detuning enters `A` only through
/// the optical coherences, so it can be changed without reassembly.
#[derive(Debug, Clone)]
pub struct SteadyStateSystem {
    basis: RealBasis,
    hamiltonian: DMatrix<Complex64>,
    relaxation: Vec<f64>,
    repopulation: Vec<Repopulation>,
    base: DMatrix<f64>,
    source: DVector<f64>,
    optical_pairs: Vec<(usize, usize)>,
    detuning: f64,
    gamma0: f64,
    n_ground: usize,
}

/// Assemble the Liouvillian for a scheme under a drive.
pub fn build_system(scheme: &LevelScheme, drive: &Drive) -> SteadyStateSystem {
    let n = scheme.dim();
    let unit = scheme.gamma0;
    let basis = RealBasis::new(n);

    let mut hamiltonian = DMatrix::<Complex64>::zeros(n, n);
    for (k, level) in scheme.levels().iter().enumerate() {
        hamiltonian[(k, k)] = Complex64::new(level.energy / unit, 0.0);
    }
    let half_rabi = 0.5 * drive.rabi / unit;
    for c in scheme.couplings() {
        let v = -drive.component(c.q) * (half_rabi * c.element);
        hamiltonian[(c.excited, c.ground)] += v;
        hamiltonian[(c.ground, c.excited)] += v.conj();
    }

    let relaxation: Vec<f64> = (0..n)
        .map(|k| (scheme.gamma + if scheme.is_excited(k) { scheme.gamma0 } else { 0.0 }) / unit)
        .collect();

    let mut repopulation = Vec::new();
    for a in scheme.couplings() {
        for b in scheme.couplings() {
            if a.q == b.q && scheme.same_excited_group(a.excited, b.excited) {
                let scale = (scheme.decay_scale(a.excited) * scheme.decay_scale(b.excited)).sqrt() / unit;
                repopulation.push(Repopulation {
                    g: a.ground,
                    gp: b.ground,
                    e: a.excited,
                    ep: b.excited,
                    weight: scale * a.element * b.element,
                });
            }
        }
    }

    let mut optical_pairs = Vec::new();
    for g in 0..scheme.n_ground() {
        for e in scheme.n_ground()..n {
            let p = basis.pair(g, e);
            optical_pairs.push((p, p + 1));
        }
    }

    let mut sys = SteadyStateSystem {
        base: DMatrix::zeros(basis.len(), basis.len()),
        source: DVector::zeros(basis.len()),
        basis,
        hamiltonian,
        relaxation,
        repopulation,
        optical_pairs,
        detuning: 0.0,
        gamma0: unit,
        n_ground: scheme.n_ground(),
    };

    let len = sys.basis.len();
    let mut column = vec![0.0; len];
    for k in 0..len {
        let lk = sys.apply_homogeneous(&sys.basis.element(k));
        sys.basis.coordinates(&lk, &mut column);
        for (r, v) in column.iter().enumerate() {
            sys.base[(r, k)] = *v;
        }
    }
    let feed = scheme.gamma / unit / scheme.n_ground() as f64;
    for g in 0..scheme.n_ground() {
        sys.source[g] = feed;
    }
    sys.detuning = drive.detuning;
    sys
}

impl SteadyStateSystem {
    pub fn dim(&self) -> usize {
        self.basis.n
    }

    pub fn detuning(&self) -> f64 {
        self.detuning
    }

    pub fn set_detuning(&mut self, detuning: f64) {
        self.detuning = detuning;
    }

    /// Homogeneous part of dρ/dt (in units of γ₀) at zero detuning.
    fn apply_homogeneous(&self, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let h = &self.hamiltonian;
        let mut out = (h * rho - rho * h) * (-I);
        let n = self.basis.n;
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] -= rho[(i, j)] * (0.5 * (self.relaxation[i] + self.relaxation[j]));
            }
        }
        for t in &self.repopulation {
            out[(t.g, t.gp)] += rho[(t.e, t.ep)] * t.weight;
        }
        out
    }

    /// dρ/dt in rad/s, including pumping and the current detuning.
    pub fn apply(&self, rho: &DensityMatrix) -> DMatrix<Complex64> {
        let m = rho.matrix();
        let mut out = self.apply_homogeneous(m);
        let n = self.basis.n;
        let x = self.detuning / self.gamma0;
        for i in 0..n {
            for j in 0..n {
                // −i[−Δ P_e, ρ]
                let sign = match (self.is_excited(i), self.is_excited(j)) {
                    (true, false) => 1.0,
                    (false, true) => -1.0,
                    _ => 0.0,
                };
                out[(i, j)] += I * (sign * x) * m[(i, j)];
            }
        }
        for g in 0..n {
            out[(g, g)] += Complex64::new(self.source[g], 0.0);
        }
        out * Complex64::new(self.gamma0, 0.0)
    }

    fn is_excited(&self, k: usize) -> bool {
        k >= self.n_ground()
    }

    fn n_ground(&self) -> usize {
        self.n_ground
    }

    /// Pumping term Λ⁰ (rad/s).
    pub fn pumping_norm(&self) -> f64 {
        self.source.iter().map(|v| v * v).sum::<f64>().sqrt() * self.gamma0
    }

    fn matrix_at_detuning(&self) -> DMatrix<f64> {
        let mut a = self.base.clone();
        let x = self.detuning / self.gamma0;
        for &(re, im) in &self.optical_pairs {
            // ρ_ge: d/dt (x + iy) ∋ −iΔ(x + iy)
            a[(re, im)] += x;
            a[(im, re)] -= x;
        }
        a
    }
}

/// Solve `L(ρ) = 0` with `Tr ρ = 1`.
///
/// The first population equation is replaced by the trace condition; the
/// remaining equations imply it back.
pub fn steady_state(system: &SteadyStateSystem) -> Result<DensityMatrix> {
    let n = system.dim();
    let mut a = system.matrix_at_detuning();
    let mut rhs = -system.source.clone();
    for c in 0..a.ncols() {
        a[(0, c)] = 0.0;
    }
    for k in 0..n {
        a[(0, k)] = 1.0;
    }
    rhs[0] = 1.0;
    let scale = a.amax();
    let x = a
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or(Error::Singular("steady-state matrix has no inverse (a dark state with γ = 0?)"))?;
    let residual = (&a * &x - &rhs).amax();
    if !residual.is_finite() || residual > 1e-8 * scale.max(1.0) {
        return Err(Error::Singular("steady-state solve lost accuracy (near-degenerate dark state?)"));
    }
    Ok(DensityMatrix(system.basis.matrix(&x)))
}
