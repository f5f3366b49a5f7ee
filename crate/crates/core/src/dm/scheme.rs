use alloc::format;
use alloc::vec::Vec;


#[allow(unused_imports)]
use num_traits::Float;

use crate::angular::clebsch_gordan;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Manifold {
    Ground,
    Excited,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub manifold: Manifold,
    pub j: f64,
    /// Total angular momentum when hyperfine structure is resolved.
    pub f: Option<f64>,
    pub m: f64,
    /// Energy offset (rad/s) from the manifold's reference energy.
    pub energy: f64,
}

impl Level {
    /// The projection carried by the state, m_F when F is set.
    fn label(&self) -> f64 {
        self.f.unwrap_or(self.j)
    }
}

/// ⟨excited|d_q|ground⟩ in units of the reduced dipole moment d.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub excited: usize,
    pub ground: usize,
    pub q: i32,
    pub element: f64,
}

/// Ground levels followed by excited levels, the dipole couplings between
/// them, and the two relaxation rates.
///
/// `decay_scale[e]` multiplies the squared couplings of excited level `e`
/// so that its total spontaneous decay rate is γ₀.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelScheme {
    levels: Vec<Level>,
    couplings: Vec<Coupling>,
    decay_scale: Vec<f64>,
    n_ground: usize,
    /// Ground depolarization rate γ (rad/s).
    pub gamma: f64,
    /// Excited decay rate γ₀ (rad/s).
    pub gamma0: f64,
    /// Angular momentum J of the ground fine-structure level.
    pub jg: f64,
    /// Share of atoms in the ground manifold kept in the scheme.
    pub population_fraction: f64,
}

fn projections(j: f64) -> impl Iterator<Item = f64> {
    let n = (2.0 * j + 1.0).round() as usize;
    (0..n).map(move |k| -j + k as f64)
}

fn check_rates(gamma: f64, gamma0: f64) -> Result<()> {
    if !(gamma >= 0.0 && gamma.is_finite()) || !(gamma0 > 0.0 && gamma0.is_finite()) {
        return Err(Error::Domain("need γ ≥ 0 and γ₀ > 0"));
    }
    Ok(())
}

impl LevelScheme {
    /// Assemble a scheme from explicit levels and couplings.
    ///
    /// Levels must list every ground state before any excited state.
    /// Couplings with |Δm| > 1, or with `q ≠ m_e − m_g`, are rejected.
    pub fn new(levels: Vec<Level>, couplings: Vec<Coupling>, gamma: f64, gamma0: f64, population_fraction: f64) -> Result<Self> {
        check_rates(gamma, gamma0)?;
        let n_ground = levels.iter().take_while(|l| l.manifold == Manifold::Ground).count();
        if n_ground == 0 || levels[n_ground..].iter().any(|l| l.manifold != Manifold::Excited) {
            return Err(Error::Config(format!("levels must be ground states followed by excited states")));
        }
        if n_ground == levels.len() {
            return Err(Error::Config(format!("scheme has no excited states")));
        }
        for c in &couplings {
            let (e, g) = (levels.get(c.excited), levels.get(c.ground));
            let ok = match (e, g) {
                (Some(e), Some(g)) => {
                    e.manifold == Manifold::Excited
                        && g.manifold == Manifold::Ground
                        && (e.m - g.m - c.q as f64).abs() < 1e-9
                        && c.q.abs() <= 1
                }
                _ => false,
            };
            if !ok {
                return Err(Error::SelectionRule { excited: c.excited, ground: c.ground });
            }
        }
        let mut strength = alloc::vec![0.0; levels.len()];
        for c in &couplings {
            strength[c.excited] += c.element * c.element;
        }
        let mut decay_scale = alloc::vec![0.0; levels.len()];
        for e in n_ground..levels.len() {
            if strength[e] <= 0.0 {
                return Err(Error::Config(format!("excited state {e} has no decay channel")));
            }
            decay_scale[e] = gamma0 / strength[e];
        }
        Ok(Self {
            jg: levels[0].j,
            levels,
            couplings,
            decay_scale,
            n_ground,
            gamma,
            gamma0,
            population_fraction,
        })
    }

    /// A closed Jg → Je transition without hyperfine structure.
    pub fn fine_structure(jg: f64, je: f64, gamma: f64, gamma0: f64) -> Result<Self> {
        let mut levels = Vec::new();
        for m in projections(jg) {
            levels.push(Level { manifold: Manifold::Ground, j: jg, f: None, m, energy: 0.0 });
        }
        let n_ground = levels.len();
        for m in projections(je) {
            levels.push(Level { manifold: Manifold::Excited, j: je, f: None, m, energy: 0.0 });
        }
        let norm = 1.0 / (2.0 * je + 1.0).sqrt();
        let mut couplings = Vec::new();
        for g in 0..n_ground {
            for e in n_ground..levels.len() {
                let q = levels[e].m - levels[g].m;
                if q.abs() > 1.0 + 1e-9 {
                    continue;
                }
                let cg = clebsch_gordan(jg, levels[g].m, 1.0, q, je, levels[e].m)?;
                if cg != 0.0 {
                    couplings.push(Coupling { excited: e, ground: g, q: q.round() as i32, element: cg * norm });
                }
            }
        }
        Self::new(levels, couplings, gamma, gamma0, 1.0)
    }

    /// One ground hyperfine level F of a Jg → Je line coupled to every
    /// dipole-allowed excited F′.
    ///
    /// `excited_shifts` lists (F′, energy in rad/s) relative to the excited
    /// fine-structure centroid; every F′ with |F′ − F| ≤ 1 must be present.
    /// Couplings are projected from the uncoupled |J mJ⟩|I mI⟩ basis, and
    /// spontaneous decay of each F′ is renormalized onto F, which keeps the
    /// subsystem closed.
    pub fn hyperfine(jg: f64, je: f64, nuclear_spin: f64, f: f64, excited_shifts: &[(f64, f64)], gamma: f64, gamma0: f64) -> Result<Self> {
        let i = nuclear_spin;
        let allowed = |ff: f64, j: f64| ff >= (j - i).abs() - 1e-9 && ff <= j + i + 1e-9;
        if !allowed(f, jg) {
            return Err(Error::Config(format!("F = {f} not in the ground manifold")));
        }
        let mut targets: Vec<(f64, f64)> = Vec::new();
        let mut fp = (je - i).abs();
        while fp <= je + i + 1e-9 {
            if (fp - f).abs() <= 1.0 + 1e-9 {
                let shift = excited_shifts
                    .iter()
                    .find(|(x, _)| (x - fp).abs() < 1e-9)
                    .map(|(_, s)| *s)
                    .ok_or_else(|| Error::Config(format!("missing hyperfine shift for F' = {fp}")))?;
                targets.push((fp, shift));
            }
            fp += 1.0;
        }
        if targets.is_empty() {
            return Err(Error::Config(format!("no excited level reachable from F = {f}")));
        }

        let mut levels = Vec::new();
        for m in projections(f) {
            levels.push(Level { manifold: Manifold::Ground, j: jg, f: Some(f), m, energy: 0.0 });
        }
        let n_ground = levels.len();
        for &(fp, shift) in &targets {
            for m in projections(fp) {
                levels.push(Level { manifold: Manifold::Excited, j: je, f: Some(fp), m, energy: shift });
            }
        }

        let norm = 1.0 / (2.0 * je + 1.0).sqrt();
        let mut couplings = Vec::new();
        for g in 0..n_ground {
            for e in n_ground..levels.len() {
                let (lg, le) = (levels[g], levels[e]);
                let q = le.m - lg.m;
                if q.abs() > 1.0 + 1e-9 {
                    continue;
                }
                let mut sum = 0.0;
                for mi in projections(i) {
                    let mj = lg.m - mi;
                    let mjp = le.m - mi;
                    if mj.abs() > jg + 1e-9 || mjp.abs() > je + 1e-9 {
                        continue;
                    }
                    let a = clebsch_gordan(jg, mj, i, mi, f, lg.m)?;
                    let b = clebsch_gordan(je, mjp, i, mi, le.label(), le.m)?;
                    let c = clebsch_gordan(jg, mj, 1.0, q, je, mjp)?;
                    sum += a * b * c;
                }
                if sum.abs() > 1e-14 {
                    couplings.push(Coupling { excited: e, ground: g, q: q.round() as i32, element: sum * norm });
                }
            }
        }
        let fraction = (2.0 * f + 1.0) / ((2.0 * i + 1.0) * (2.0 * jg + 1.0));
        Self::new(levels, couplings, gamma, gamma0, fraction)
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    pub fn dim(&self) -> usize {
        self.levels.len()
    }

    pub fn n_ground(&self) -> usize {
        self.n_ground
    }

    pub fn is_excited(&self, k: usize) -> bool {
        k >= self.n_ground
    }

    /// Factor turning squared couplings of excited level `e` into decay rates.
    pub fn decay_scale(&self, e: usize) -> f64 {
        self.decay_scale[e]
    }

    /// Whether spontaneous decay can transfer coherence between two excited
    /// states; only states of the same excited F (or J) do.
    pub fn same_excited_group(&self, a: usize, b: usize) -> bool {
        let (la, lb) = (self.levels[a], self.levels[b]);
        la.label() == lb.label() && la.j == lb.j
    }

    /// The level with every projection m reversed.
    pub fn mirror(&self, k: usize) -> usize {
        let l = self.levels[k];
        self.levels
            .iter()
            .position(|o| o.manifold == l.manifold && o.label() == l.label() && o.j == l.j && (o.m + l.m).abs() < 1e-9)
            .expect("every scheme is built from full m-multiplets")
    }
}
