//! One-dimensional maximization: golden-section search and a coarse scan
//! that brackets every interior local maximum.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizer of a unimodal function on `[a, b]`, to a relative bracket
/// width of `tol`.
pub fn golden_section_max<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= tol * (a.abs() + b.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Best interior maximum of `f` over a sorted grid.
///
/// Every grid point higher than both neighbours opens a bracket that is
/// refined by golden section; the highest refined value wins. Fails when
/// no point is a strict interior maximum, e.g. on a flat or monotone
/// profile.
pub fn maximize_on_grid<F: FnMut(f64) -> Result<f64>>(mut f: F, grid: &[f64], tol: f64) -> Result<(f64, f64)> {
    if grid.len() < 3 {
        return Err(Error::NoBracket("need at least three grid points"));
    }
    let mut values = alloc::vec::Vec::with_capacity(grid.len());
    for &x in grid {
        values.push(f(x)?);
    }
    let mut best: Option<(f64, f64)> = None;
    for i in 1..grid.len() - 1 {
        if values[i] > values[i - 1] && values[i] >= values[i + 1] && values[i].is_finite() {
            let mut failure = None;
            let (x, v) = golden_section_max(
                |x| match f(x) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.get_or_insert(e);
                        f64::NEG_INFINITY
                    }
                },
                grid[i - 1],
                grid[i + 1],
                tol,
            );
            if let Some(e) = failure {
                return Err(e);
            }
            let (x, v) = if v >= values[i] { (x, v) } else { (grid[i], values[i]) };
            if best.map_or(true, |(_, b)| v > b) {
                best = Some((x, v));
            }
        }
    }
    best.ok_or(Error::NoBracket("no interior maximum on the scan grid"))
}

/// `n` points from `a` to `b` equally spaced in log₁₀.
pub fn log_grid(a: f64, b: f64, n: usize) -> Result<alloc::vec::Vec<f64>> {
    if !(a > 0.0 && b > a) || n < 2 {
        return Err(Error::Domain("log grid needs 0 < a < b and at least two points"));
    }
    let (la, lb) = (a.log10(), b.log10());
    Ok((0..n).map(|k| 10f64.powf(la + (lb - la) * k as f64 / (n - 1) as f64)).collect())
}
