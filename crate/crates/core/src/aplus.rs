//! The analytic trace: polynomials with nonnegative spectrum, their
//! holomorphic extension to the upper half-plane, and the vanishing of
//! negative Fourier–Bohr coefficients.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::bohr::{fb_numeric, simpson, MeanValueEstimate};
use crate::error::{Error, Result};
use crate::freqmod::{sign_of, Frequency, Sign};
use crate::rational::coeff_to_c64;
use crate::trigpoly::TrigPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AplusVerdict {
    Yes,
    No,
    Uncertain,
}

/// A point `x + iy` of the open upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfPlanePoint {
    x: f64,
    y: f64,
}

impl HalfPlanePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !y.is_finite() || !x.is_finite() {
            return Err(Error::Domain(format!("({x}, {y}) is not in the upper half-plane")));
        }
        Ok(HalfPlanePoint { x, y })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }
}

pub fn is_ap_plus(p: &TrigPoly) -> AplusVerdict {
    let mut verdict = AplusVerdict::Yes;
    for (f, _) in p.terms() {
        match sign_of(f) {
            Sign::Positive | Sign::Zero => {}
            Sign::Negative => return AplusVerdict::No,
            Sign::Uncertain => verdict = AplusVerdict::Uncertain,
        }
    }
    verdict
}

/// `Σ a_j e^{iλ_j z} = Σ a_j e^{−λ_j y} e^{iλ_j x}`.
pub fn extend(p: &TrigPoly, z: HalfPlanePoint) -> Result<Complex64> {
    if is_ap_plus(p) != AplusVerdict::Yes {
        return Err(Error::NotAnalytic);
    }
    Ok(p.terms()
        .map(|(f, a)| {
            let l = f.shadow();
            coeff_to_c64(a) * (-l * z.y).exp() * Complex64::cis(l * z.x)
        })
        .sum())
}

/// Half-width of the Poisson window, in units of `1/y`.
pub const POISSON_WINDOW: f64 = 1_000.0;
pub const POISSON_MIN_PANELS: usize = 100_000;

/// `∫ P_y(x − t) p(t) dt` by composite Simpson over `|t − x| ≤ 10³/y`.
///
/// Outside the window the oscillating terms average out, so the tail is
/// replaced by the missing kernel mass times the mean value of `p`.
///
/// The step never exceeds `y/8` or 1/32 of the shortest period in `p`.
pub fn poisson_quadrature(p: &TrigPoly, z: HalfPlanePoint) -> Complex64 {
    let half = POISSON_WINDOW / z.y;
    let top = p.terms().map(|(f, _)| f.shadow().abs()).fold(0.0, f64::max);
    let mut step = z.y / 8.0;
    if top > 0.0 {
        step = step.min(2.0 * PI / (32.0 * top));
    }
    let panels = ((2.0 * half / step).ceil() as usize).max(POISSON_MIN_PANELS);
    let kernel = |u: f64| z.y / (PI * (u * u + z.y * z.y));
    let integral = simpson(|t| p.eval(t) * kernel(z.x - t), z.x - half, z.x + half, panels);
    let mass = 2.0 / PI * (half / z.y).atan();
    integral + coeff_to_c64(&p.constant_term()) * (1.0 - mass)
}

/// Mean values of `p` against a negative frequency over growing windows.
pub fn negative_spectrum_decay(p: &TrigPoly, lambda: &Frequency, half_lengths: &[f64]) -> Result<Vec<MeanValueEstimate>> {
    if is_ap_plus(p) != AplusVerdict::Yes {
        return Err(Error::NotAnalytic);
    }
    if sign_of(lambda) != Sign::Negative {
        return Err(Error::Domain(format!("{} is not negative", p.table().render(lambda))));
    }
    half_lengths.iter().map(|&t| fb_numeric(p, lambda, t)).collect()
}
