//! Bracketed root finding for monotone scalar functions.

use crate::error::{Error, Result};

/// Bisection on `[lo, hi]` with `f(lo)` and `f(hi)` of opposite sign.
/// Runs until the bracket collapses to adjacent floats (or `f` hits zero).
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if !(f_lo.is_finite() && f_hi.is_finite()) || f_lo.signum() == f_hi.signum() {
        return Err(Error::NoRoot(format!(
            "f({lo}) = {f_lo}, f({hi}) = {f_hi} do not bracket a root"
        )));
    }
    for _ in 0..2100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
