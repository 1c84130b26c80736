//! Bracketed scalar root finding: bisection with secant acceleration.
//!
//! Deterministic for a fixed bracket. A forced bisection every other
//! iteration guarantees the bracket width halves at a bounded rate, so the
//! loop converges to machine precision in at most ~110 function
//! evaluations regardless of how the secant steps behave.

use crate::error::{Error, Result};

/// Find x in [lo, hi] with f(x) = 0, given that f changes sign on the
/// bracket. Converges to machine precision.
pub fn bracketed_root<F>(mut f: F, lo: f64, hi: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(Error::Bracket(format!("invalid bracket [{lo}, {hi}]")));
    }
    let (mut lo, mut hi) = (lo, hi);
    let mut flo = f(lo)?;
    if !flo.is_finite() {
        return Err(Error::NonFinite(format!("f({lo})")));
    }
    if flo == 0.0 {
        return Ok(lo);
    }
    let mut fhi = f(hi)?;
    if !fhi.is_finite() {
        return Err(Error::NonFinite(format!("f({hi})")));
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Bracket(format!(
            "no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}"
        )));
    }

    for iter in 0..220 {
        let width = hi - lo;
        if width <= f64::EPSILON * (lo.abs() + hi.abs() + 1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let mut cand = if iter % 2 == 1 {
            mid
        } else {
            let denom = fhi - flo;
            let secant = hi - fhi * (hi - lo) / denom;
            // Reject secant steps that leave the bracket or barely move.
            if secant.is_finite() && secant > lo + 0.001 * width && secant < hi - 0.001 * width {
                secant
            } else {
                mid
            }
        };
        if cand <= lo || cand >= hi {
            cand = mid;
        }
        let fc = f(cand)?;
        if !fc.is_finite() {
            return Err(Error::NonFinite(format!("f({cand})")));
        }
        if fc == 0.0 {
            return Ok(cand);
        }
        if fc.signum() == flo.signum() {
            lo = cand;
            flo = fc;
        } else {
            hi = cand;
            fhi = fc;
        }
    }
    Ok(if flo.abs() <= fhi.abs() { lo } else { hi })
}

/// Expand a bracket geometrically from `seed` upward until `f` changes sign,
/// then solve. The search stays in (0, ∞): used for internal coefficient
/// solves whose unknowns are positive by construction.
pub fn positive_root_expanding<F>(mut f: F, seed: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(seed.is_finite() && seed > 0.0) {
        return Err(Error::Bracket(format!("seed must be positive, got {seed}")));
    }
    let fseed = f(seed)?;
    if fseed == 0.0 {
        return Ok(seed);
    }
    // Walk one endpoint outward (direction chosen by the sign at the seed
    // relative to the sign as the argument grows) until the sign flips.
    let mut lo = seed;
    let mut hi = seed;
    let mut flo = fseed;
    let mut fhi = fseed;
    for _ in 0..200 {
        if flo.signum() != fhi.signum() {
            return bracketed_root(f, lo, hi);
        }
        let new_hi = hi * 2.0;
        let f_new_hi = f(new_hi)?;
        if f_new_hi.is_finite() && f_new_hi.signum() != fhi.signum() {
            return bracketed_root(f, hi, new_hi);
        }
        let new_lo = lo * 0.5;
        let f_new_lo = f(new_lo)?;
        if f_new_lo.is_finite() && f_new_lo.signum() != flo.signum() {
            return bracketed_root(f, new_lo, lo);
        }
        lo = new_lo;
        hi = new_hi;
        flo = f_new_lo;
        fhi = f_new_hi;
    }
    Err(Error::Root(
        "no sign change found while expanding a positive bracket".into(),
    ))
}
