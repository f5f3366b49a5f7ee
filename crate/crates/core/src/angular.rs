//! Clebsch–Gordan coefficients in the Condon–Shortley phase convention.
//!
//! Angular momenta are passed as twice their value (`tj = 2j`) so that
//! half-integers are exact.

use alloc::format;


#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

const FACTORIALS: usize = 171;

fn factorial(n: i32) -> f64 {
    debug_assert!(n >= 0 && (n as usize) < FACTORIALS);
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn check_pair(tj: i32, tm: i32) -> Result<()> {
    if tj < 0 || tm.abs() > tj || (tj - tm) % 2 != 0 {
        return Err(Error::AngularMomentum(format!("j = {}/2, m = {}/2", tj, tm)));
    }
    Ok(())
}

/// ⟨j1 m1; j2 m2 | J M⟩ with doubled arguments.
///
/// Returns zero when `m1 + m2 ≠ M`. Errors when a pair (j, m) is not a
/// valid projection or the triangle condition fails.
pub fn clebsch_gordan2(tj1: i32, tm1: i32, tj2: i32, tm2: i32, tj: i32, tm: i32) -> Result<f64> {
    check_pair(tj1, tm1)?;
    check_pair(tj2, tm2)?;
    check_pair(tj, tm)?;
    if tj < (tj1 - tj2).abs() || tj > tj1 + tj2 || (tj1 + tj2 + tj) % 2 != 0 {
        return Err(Error::AngularMomentum(format!(
            "triangle ({}/2, {}/2, {}/2) not satisfied",
            tj1, tj2, tj
        )));
    }
    if tm1 + tm2 != tm {
        return Ok(0.0);
    }
    if (tj1 + tj2 + tj) / 2 + 1 >= FACTORIALS as i32 {
        return Err(Error::AngularMomentum(format!("j too large: {}/2", tj1 + tj2)));
    }

    // Racah's closed form; all arguments below are integers.
    let a = (tj1 + tj2 - tj) / 2;
    let b = (tj1 - tj2 + tj) / 2;
    let c = (-tj1 + tj2 + tj) / 2;
    let big = (tj1 + tj2 + tj) / 2 + 1;
    let pre = ((tj + 1) as f64 * factorial(a) * factorial(b) * factorial(c) / factorial(big)).sqrt();
    let norm = (factorial((tj + tm) / 2)
        * factorial((tj - tm) / 2)
        * factorial((tj1 - tm1) / 2)
        * factorial((tj1 + tm1) / 2)
        * factorial((tj2 - tm2) / 2)
        * factorial((tj2 + tm2) / 2))
    .sqrt();

    let k_min = 0.max((tj2 - tj - tm1) / 2).max((tj1 - tj + tm2) / 2);
    let k_max = a.min((tj1 - tm1) / 2).min((tj2 + tm2) / 2);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let den = factorial(k)
            * factorial(a - k)
            * factorial((tj1 - tm1) / 2 - k)
            * factorial((tj2 + tm2) / 2 - k)
            * factorial((tj - tj2 + tm1) / 2 + k)
            * factorial((tj - tj1 - tm2) / 2 + k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / den;
    }
    Ok(pre * norm * sum)
}

fn doubled(x: f64) -> Result<i32> {
    let t = 2.0 * x;
    if !t.is_finite() || (t - t.round()).abs() > 1e-9 || t.abs() > 1e6 {
        return Err(Error::AngularMomentum(format!("{x} is not an integer or half-integer")));
    }
    Ok(t.round() as i32)
}

/// ⟨j1 m1; j2 m2 | J M⟩ for integer or half-integer arguments.
pub fn clebsch_gordan(j1: f64, m1: f64, j2: f64, m2: f64, j: f64, m: f64) -> Result<f64> {
    clebsch_gordan2(doubled(j1)?, doubled(m1)?, doubled(j2)?, doubled(m2)?, doubled(j)?, doubled(m)?)
}
