//! Fourier–Bohr coefficients and spectrum containment.
//!
//! For a trigonometric polynomial the coefficient at `λ` is read off exactly,
//! since distinct characters are orthogonal for the mean value. The numeric
//! route evaluates the symmetric mean `(1/2T)∫_{-T}^{T} p(t) e^{-iλt} dt` in
//! closed form as `Σ a_j sinc((λ_j − λ) T)` and bounds its distance to the
//! exact value by `Σ_{λ_j ≠ λ} |a_j| / (|λ_j − λ| T)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::freqmod::{membership_with, Frequency, MembershipOptions, SemigroupSpec, Verdict, EPS_SIGN};
use crate::rational::{coeff_to_c64, real, Coeff};
use num_rational::BigRational;
use num_traits::Zero;
use crate::trigpoly::TrigPoly;

#[derive(Debug, Clone)]
pub struct MeanValueEstimate {
    pub freq: Frequency,
    pub half_length: f64,
    pub value: Complex64,
    pub error_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Containment {
    Yes,
    No,
    Inconclusive,
}

pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// Exact coefficient of `λ` in `p`, zero when `λ ∉ σ(p)`.
pub fn fb_exact(p: &TrigPoly, freq: &Frequency) -> Coeff {
    p.coefficient(freq).cloned().unwrap_or_else(|| real(BigRational::zero()))
}

pub fn fb_numeric(p: &TrigPoly, freq: &Frequency, half_length: f64) -> Result<MeanValueEstimate> {
    if !(half_length > 0.0) || !half_length.is_finite() {
        return Err(Error::Domain(format!("half length must be positive, got {half_length}")));
    }
    let mut value = Complex64::new(0.0, 0.0);
    let mut error_bound = 0.0;
    for (f, a) in p.terms() {
        let a = coeff_to_c64(a);
        if f == freq {
            value += a;
            continue;
        }
        let gap = f.shadow() - freq.shadow();
        if gap.abs() < EPS_SIGN {
            let t = p.table();
            return Err(Error::Indistinguishable(t.render(f), t.render(freq)));
        }
        value += a * sinc(gap * half_length);
        error_bound += a.norm() / (gap.abs() * half_length);
    }
    Ok(MeanValueEstimate { freq: freq.clone(), half_length, value, error_bound })
}

pub fn spectrum_in(p: &TrigPoly, spec: &SemigroupSpec) -> Containment {
    spectrum_in_with(p, spec, &MembershipOptions::default())
}

pub fn spectrum_in_with(p: &TrigPoly, spec: &SemigroupSpec, opts: &MembershipOptions) -> Containment {
    let mut answer = Containment::Yes;
    for (f, _) in p.terms() {
        match membership_with(f, spec, opts) {
            Verdict::Member => {}
            Verdict::NonMember => return Containment::No,
            Verdict::Inconclusive => answer = Containment::Inconclusive,
        }
    }
    answer
}

/// Composite Simpson rule with `panels` (rounded up to even) subintervals.
pub fn simpson<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, panels: usize) -> Complex64 {
    let n = panels.max(2).next_multiple_of(2);
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += f(a + k as f64 * h) * w;
    }
    acc * (h / 3.0)
}

/// Mean value of a black-box sampler over `[-T, T]` against `e^{-iλt}`.
///
/// The step is at most `2π / (64 · max_freq)` where `max_freq` bounds the
/// absolute frequencies present in the sampler (including `λ`).
pub fn mean_value_sampled<F: Fn(f64) -> Complex64>(f: F, lambda: f64, half_length: f64, max_freq: f64) -> Complex64 {
    let top = max_freq.abs().max(lambda.abs()).max(1e-3);
    let step = 2.0 * std::f64::consts::PI / (64.0 * top);
    let panels = ((2.0 * half_length / step).ceil() as usize).max(16);
    let integral = simpson(|t| f(t) * Complex64::cis(-lambda * t), -half_length, half_length, panels);
    integral / (2.0 * half_length)
}
