use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::liouville::{build_system, Drive};
use super::response::{local_response_at, probe_search, DmResponse, LocalResponse};
use super::scheme::LevelScheme;
use crate::error::{Error, Result};

/// Starting Gauss–Hermite order.
pub const DOPPLER_ORDER: usize = 64;
/// Largest order tried by the doubling loop.
pub const MAX_DOPPLER_ORDER: usize = 1024;
/// Relative change between successive orders accepted as converged.
pub const DOPPLER_TOLERANCE: f64 = 1e-3;

/// Nodes and weights of the Gauss–Hermite rule for `∫ e^{−u²} f(u) du`,
/// with weights divided by √π so they sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Orthonormal Hermite recurrence at x: returns (φ_n, φ_{n−1}) sharing an
/// arbitrary positive scale, and ln Σ_{k<n} φ_k² on the true scale.
fn hermite(n: usize, x: f64) -> (f64, f64, f64) {
    const BIG: f64 = 1e100;
    let mut prev = 0.0;
    let mut cur = core::f64::consts::PI.powf(-0.25);
    let mut sum = 0.0;
    let mut log_scale = 0.0;
    for j in 1..=n {
        sum += cur * cur;
        let jf = j as f64;
        let next = x * (2.0 / jf).sqrt() * cur - ((jf - 1.0) / jf).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > BIG {
            cur /= BIG;
            prev /= BIG;
            sum /= BIG * BIG;
            log_scale += BIG.ln();
        }
    }
    (cur, prev, sum.ln() + 2.0 * log_scale)
}

/// Gauss–Hermite rule of order `n`.
///
/// Roots of the orthonormal Hermite polynomial are bracketed by sign
/// changes on a grid finer than the smallest root spacing and polished by
/// safeguarded Newton steps; weights are the Christoffel numbers
/// `1/Σ_{k<n} φ_k(x)²`.
pub fn gauss_hermite(n: usize) -> Result<GaussHermite> {
    if n == 0 {
        return Err(Error::Domain("Gauss–Hermite order must be ≥ 1"));
    }
    let edge = (2.0 * n as f64 + 1.0).sqrt();
    let step = core::f64::consts::PI / (8.0 * edge);
    let mut positive = Vec::with_capacity(n / 2);
    let mut a = 0.5 * step;
    let mut fa = hermite(n, a).0;
    while positive.len() < n / 2 && a < edge + 1.0 {
        let b = a + step;
        let fb = hermite(n, b).0;
        if fa.signum() != fb.signum() {
            positive.push(polish(n, a, b, fa));
        }
        a = b;
        fa = fb;
    }
    if positive.len() != n / 2 {
        return Err(Error::Domain("Gauss–Hermite root bracketing missed a root"));
    }
    let mut nodes = Vec::with_capacity(n);
    nodes.extend(positive.iter().rev().map(|x| -x));
    if n % 2 == 1 {
        nodes.push(0.0);
    }
    nodes.extend(positive.iter().copied());
    let log_pi = core::f64::consts::PI.ln();
    let weights = nodes.iter().map(|&x| (-hermite(n, x).2 - 0.5 * log_pi).exp()).collect();
    Ok(GaussHermite { nodes, weights })
}

fn polish(n: usize, mut a: f64, mut b: f64, fa: f64) -> f64 {
    let sa = fa.signum();
    let mut x = 0.5 * (a + b);
    let scale = (2.0 * n as f64).sqrt();
    for _ in 0..200 {
        let (f, fm1, _) = hermite(n, x);
        if f == 0.0 {
            return x;
        }
        if f.signum() == sa {
            a = x;
        } else {
            b = x;
        }
        let newton = x - f / (scale * fm1);
        let next = if newton > a && newton < b { newton } else { 0.5 * (a + b) };
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs() {
            return next;
        }
        x = next;
    }
    x
}

/// Doppler-averaged response with the order at which it was accepted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopplerAverage {
    pub response: DmResponse,
    pub order: usize,
    /// False when doubling up to the maximum order did not settle.
    pub converged: bool,
}

impl DopplerAverage {
    /// The response, or a non-convergence error suggesting the next order.
    pub fn into_converged(self) -> Result<DmResponse> {
        if self.converged {
            Ok(self.response)
        } else {
            Err(Error::DopplerNotConverged { order: self.order, suggested_order: 2 * self.order })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopplerOptions {
    pub order: usize,
    pub max_order: usize,
    pub tolerance: f64,
}

impl Default for DopplerOptions {
    fn default() -> Self {
        Self { order: DOPPLER_ORDER, max_order: MAX_DOPPLER_ORDER, tolerance: DOPPLER_TOLERANCE }
    }
}

/// Velocity average of the local response at probe ellipticity `eps`.
fn average_one(scheme: &LevelScheme, drive: &Drive, width: f64, eps: f64, rule: &GaussHermite) -> Result<LocalResponse> {
    let probe = drive.with_ellipticity(eps);
    let mut system = build_system(scheme, &probe);
    let mut sum = LocalResponse::default();
    for (u, w) in rule.nodes.iter().zip(&rule.weights) {
        let detuning = drive.detuning - width * u;
        sum = sum.add(local_response_at(scheme, &probe, &mut system, detuning)?.scaled(*w));
    }
    Ok(sum)
}

fn average_at(scheme: &LevelScheme, drive: &Drive, width: f64, eps: f64, rule: &GaussHermite) -> Result<DmResponse> {
    probe_search(eps, |e| average_one(scheme, drive, width, e, rule))
}

/// g is judged against max(|g|, α): only g/α enters the squeezing, and a
/// purely relative test never settles where g crosses zero.
fn settled(a: &DmResponse, b: &DmResponse, tol: f64) -> bool {
    let floor = 1e-12 * b.alpha.abs();
    (a.alpha - b.alpha).abs() <= tol * b.alpha.abs() + floor && (a.g - b.g).abs() <= tol * b.g.abs().max(b.alpha.abs()) + floor
}

/// Response averaged over a one-dimensional Maxwell–Boltzmann distribution.
///
/// `width` is the Doppler width ku (rad/s), the 1/e half-width of the
/// distribution of shifts kv. Each velocity class sees `Δ − kv`. The
/// absorption, rotation, phase and ellipticity rates are linear in the
/// polarization and are averaged directly; g comes from the averaged
/// responses at ε and ε/2. The order doubles from `options.order` until α
/// and g change by less than `options.tolerance`.
pub fn doppler_average(scheme: &LevelScheme, drive: &Drive, width: f64, eps_probe: f64, options: DopplerOptions) -> Result<DopplerAverage> {
    if !(width >= 0.0) || !width.is_finite() {
        return Err(Error::Domain("Doppler width must be finite and ≥ 0"));
    }
    if width == 0.0 {
        return Ok(DopplerAverage { response: super::response::response(scheme, drive, eps_probe)?, order: 1, converged: true });
    }
    let mut order = options.order.max(1);
    let mut previous = average_at(scheme, drive, width, eps_probe, &gauss_hermite(order)?)?;
    while 2 * order <= options.max_order {
        order *= 2;
        let current = average_at(scheme, drive, width, eps_probe, &gauss_hermite(order)?)?;
        if settled(&previous, &current, options.tolerance) {
            return Ok(DopplerAverage { response: current, order, converged: true });
        }
        previous = current;
    }
    log::warn!("Doppler average not converged at order {order}");
    Ok(DopplerAverage { response: previous, order, converged: false })
}
