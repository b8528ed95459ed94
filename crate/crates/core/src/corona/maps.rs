use num_complex::Complex64;

use crate::error::{Error, Result};

const RADIUS_SLACK: f64 = 1e-12;
const CIRCLE_TOL: f64 = 1e-9;

/// Splits `z` in the slit disk `2·D̄ ∖ (−∞, 0]` into two unimodular numbers
/// whose `s`-th powers sum back to `z`.
///
/// With `r = |z|`, principal `θ = arg z` and `α = arccos(r/2)` the result is
/// `(e^{i(α+θ)/s}, e^{i(θ−α)/s})`.
pub fn g_map(z: Complex64, s: u32) -> Result<(Complex64, Complex64)> {
    if s == 0 {
        return Err(Error::Domain("s must be at least 1".into()));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("non-finite point {z}")));
    }
    let r = z.norm();
    if r > 2.0 * (1.0 + RADIUS_SLACK) {
        return Err(Error::Domain(format!("|z| = {r} exceeds 2")));
    }
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::Domain(format!("{z} lies on the cut (−∞, 0]")));
    }
    let theta = z.im.atan2(z.re);
    let alpha = (r / 2.0).min(1.0).acos();
    let s = s as f64;
    Ok((Complex64::cis((alpha + theta) / s), Complex64::cis((theta - alpha) / s)))
}

/// `z1^s + z2^s` for unimodular inputs.
pub fn f_map(z1: Complex64, z2: Complex64, s: u32) -> Result<Complex64> {
    for z in [z1, z2] {
        if (z.norm() - 1.0).abs() > CIRCLE_TOL {
            return Err(Error::Domain(format!("{z} is off the unit circle")));
        }
    }
    Ok(z1.powu(s) + z2.powu(s))
}
