//! Small numeric helpers shared across modules.

use crate::error::{Error, Result};

/// Treat an exponent as an integer when it is within this distance of one.
const INTEGER_EPS: f64 = 1e-9;

pub(crate) fn is_integer(x: f64) -> bool {
    x.is_finite() && (x - x.round()).abs() < INTEGER_EPS
}

/// Real power with domain checking.
///
/// Negative bases are admitted only for (numerically) integer exponents;
/// everything else that would leave the reals is a domain error.
pub(crate) fn checked_pow(base: f64, expo: f64) -> Result<f64> {
    if !base.is_finite() || !expo.is_finite() {
        return Err(Error::NonFinite(format!("pow({base}, {expo})")));
    }
    if base > 0.0 {
        return Ok(base.powf(expo));
    }
    if base == 0.0 {
        if expo > 0.0 {
            return Ok(0.0);
        }
        if expo == 0.0 {
            return Ok(1.0);
        }
        return Err(Error::Domain(format!("zero base with exponent {expo}")));
    }
    if is_integer(expo) {
        let k = expo.round();
        let sign = if (k as i64) % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(sign * (-base).powf(k));
    }
    Err(Error::Domain(format!(
        "negative base {base} with non-integer exponent {expo}"
    )))
}
