//! Invertibility and unimodularity of tuples with explicit Bézout data, the
//! non-reducible tuple constructions, and zero witnesses for their
//! perturbations.
//!
//! A tuple `(F_1, …, F_n)` of almost periodic functions is unimodular exactly
//! when `inf Σ|F_j| > 0`. For polynomials that infimum is a torus minimum
//! after the Kronecker transfer, which [`unimodular`] certifies with a
//! Lipschitz bound. The cofactors `Q_j = conj(F_j) / Σ_k |F_k|²` then solve
//! `Σ Q_j F_j = 1` pointwise.

mod examples;
mod maps;
mod witness;

use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{coeff_is_zero, coeff_to_c64, from_f64, real};
use crate::torus::{
    default_grid, torus_min_abs, torus_min_sumabs, transfer, transfer_many, ExtremumReport,
};
use crate::trigpoly::TrigPoly;

pub use examples::{
    approximation_resistance_check, example_fundamental, example_general, stable_rank_reference, FundamentalExample,
    Rank, RankPair, ResistanceReport, StableRankTable,
};
pub use maps::{f_map, g_map};
pub use witness::{reduction_zero_witness, witness_residual, WitnessMethod, WitnessOptions, ZeroWitness};

/// Objective values at or below this count as a found zero.
pub const ZERO_THRESHOLD: f64 = 1e-9;
/// Residual samples: `SAMPLE_COUNT` points evenly spread over `[0, SAMPLE_SPAN]`.
pub const SAMPLE_COUNT: usize = 10_000;
pub const SAMPLE_SPAN: f64 = 1_000.0;

/// Grid and polish parameters for torus searches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchSettings {
    /// Grid density per axis; `None` picks [`default_grid`] for the dimension.
    pub grid: Option<usize>,
    pub refinements: usize,
}

impl Default for SearchSettings {
    fn default() -> Self {
        SearchSettings { grid: None, refinements: 40 }
    }
}

impl SearchSettings {
    pub fn grid_for(&self, dim: usize) -> usize {
        self.grid.unwrap_or_else(|| default_grid(dim))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InvertibilityVerdict {
    Invertible,
    NotInvertible,
    Uncertain,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvertibilityReport {
    pub delta: f64,
    pub certified_delta: f64,
    pub verdict: InvertibilityVerdict,
    pub extremum: ExtremumReport,
}

impl InvertibilityReport {
    fn from_extremum(extremum: ExtremumReport) -> Self {
        let delta = extremum.value;
        let certified_delta = extremum.certified_bound;
        let verdict = classify(delta, certified_delta);
        InvertibilityReport { delta, certified_delta, verdict, extremum }
    }
}

fn classify(delta: f64, certified: f64) -> InvertibilityVerdict {
    if certified > 0.0 {
        InvertibilityVerdict::Invertible
    } else if delta <= ZERO_THRESHOLD {
        InvertibilityVerdict::NotInvertible
    } else {
        InvertibilityVerdict::Uncertain
    }
}

/// Is `F` invertible in AP? Decided through `min |q|` on the torus.
pub fn invertible(f: &TrigPoly, settings: &SearchSettings) -> Result<InvertibilityReport> {
    let t = transfer(f)?;
    let grid = settings.grid_for(t.q.dim());
    let ext = torus_min_abs(&t.q, grid, settings.refinements)?;
    Ok(InvertibilityReport::from_extremum(ext))
}

/// Is `(F_1, …, F_n)` unimodular? One shared basis for the whole tuple.
pub fn unimodular(fs: &[TrigPoly], settings: &SearchSettings) -> Result<InvertibilityReport> {
    if fs.is_empty() {
        return Err(Error::Domain("empty tuple".into()));
    }
    let joint = transfer_many(fs)?;
    let grid = settings.grid_for(joint.basis.dim());
    let ext = torus_min_sumabs(&joint.qs, grid, settings.refinements)?;
    Ok(InvertibilityReport::from_extremum(ext))
}

/// Lower bound on `inf Σ|F_j|` from an exact identity `Σ B_j F_j = c`, `c ≠ 0`:
/// `|c| ≤ max_j ‖B_j‖_W · Σ|F_j|`.
pub fn cofactor_bound(fs: &[TrigPoly], cofactors: &[TrigPoly]) -> Result<f64> {
    if fs.len() != cofactors.len() || fs.is_empty() {
        return Err(Error::Domain("tuple and cofactors must have the same positive length".into()));
    }
    let mut sum = TrigPoly::zero(fs[0].table());
    for (f, b) in fs.iter().zip(cofactors) {
        sum = sum.add(&f.mul(b)?)?;
    }
    let c = sum.constant_term();
    if sum.len() > 1 || coeff_is_zero(&c) {
        return Err(Error::HypothesisViolated("Σ B_j F_j is not a nonzero constant".into()));
    }
    let biggest = cofactors.iter().map(TrigPoly::wiener_norm).fold(0.0, f64::max);
    Ok(coeff_to_c64(&c).norm() / biggest)
}

/// [`unimodular`] with an algebraic certificate from known cofactors; the
/// certified delta is the better of the grid and cofactor bounds.
pub fn unimodular_with_cofactors(
    fs: &[TrigPoly],
    cofactors: &[TrigPoly],
    settings: &SearchSettings,
) -> Result<InvertibilityReport> {
    let bound = cofactor_bound(fs, cofactors)?;
    let mut report = unimodular(fs, settings)?;
    report.certified_delta = report.certified_delta.max(bound);
    report.verdict = classify(report.delta, report.certified_delta);
    Ok(report)
}

/// Pointwise solution of the Bézout equation.
#[derive(Debug, Clone)]
pub struct BezoutSolution {
    pub tuple: Vec<TrigPoly>,
    pub delta: f64,
    pub residual_bound: f64,
}

impl BezoutSolution {
    /// `(Q_1(t), …, Q_n(t))` with `Q_j = conj(F_j) / Σ_k |F_k|²`.
    pub fn solvers_at(&self, t: f64) -> Vec<Complex64> {
        let values: Vec<Complex64> = self.tuple.iter().map(|f| f.eval(t)).collect();
        let denom: f64 = values.iter().map(|v| v.norm_sqr()).sum();
        values.iter().map(|v| v.conj() / denom).collect()
    }

    pub fn solver(&self, j: usize, t: f64) -> Complex64 {
        self.solvers_at(t)[j]
    }

    /// `|Σ Q_j(t) F_j(t) − 1|`.
    pub fn residual_at(&self, t: f64) -> f64 {
        let q = self.solvers_at(t);
        let s: Complex64 = q.iter().zip(&self.tuple).map(|(qj, f)| qj * f.eval(t)).sum();
        (s - 1.0).norm()
    }
}

/// `count` evenly spaced points of `[0, span]`.
pub fn sample_points(count: usize, span: f64) -> impl Iterator<Item = f64> {
    let last = count.max(2) - 1;
    (0..=last).map(move |k| span * k as f64 / last as f64)
}

/// [`bezout_with`] on the standard sample grid.
pub fn bezout(fs: &[TrigPoly], report: &InvertibilityReport) -> Result<BezoutSolution> {
    bezout_with(fs, report, SAMPLE_COUNT, SAMPLE_SPAN)
}

/// Cofactor evaluators, with the residual measured on `count` points of `[0, span]`.
pub fn bezout_with(fs: &[TrigPoly], report: &InvertibilityReport, count: usize, span: f64) -> Result<BezoutSolution> {
    if report.verdict != InvertibilityVerdict::Invertible {
        return Err(Error::NotInvertible);
    }
    if fs.is_empty() {
        return Err(Error::Domain("empty tuple".into()));
    }
    let mut sol = BezoutSolution { tuple: fs.to_vec(), delta: report.delta, residual_bound: 0.0 };
    sol.residual_bound = sample_points(count, span).map(|t| sol.residual_at(t)).fold(0.0, f64::max);
    Ok(sol)
}

/// Bézout cofactors as polynomials: `Q_j ≈ conj(F_j) · p(Σ|F_k|²)` with `p` a
/// Chebyshev interpolant of `1/x` on `[δ²/n, Σ‖F_k‖_W²]`.
#[derive(Debug, Clone)]
pub struct PolynomialBezout {
    pub cofactors: Vec<TrigPoly>,
    pub degree: usize,
    pub interval: (f64, f64),
    /// Sampled `sup |x p(x) − 1|` over the interval, which bounds `|Σ Q_j F_j − 1|`.
    pub uniform_error: f64,
}

pub const MAX_CHEBYSHEV_DEGREE: usize = 48;

pub fn bezout_polynomial(fs: &[TrigPoly], report: &InvertibilityReport, tol: f64) -> Result<PolynomialBezout> {
    if report.verdict != InvertibilityVerdict::Invertible {
        return Err(Error::NotInvertible);
    }
    let table = fs[0].table().clone();
    let n = fs.len() as f64;
    let lo = report.certified_delta.powi(2) / n;
    let hi = fs.iter().map(|f| f.wiener_norm().powi(2)).sum::<f64>().max(lo * (1.0 + 1e-9));
    // sample-based error check of x·p(x) − 1
    let mut chosen = None;
    for degree in 1..=MAX_CHEBYSHEV_DEGREE {
        let c = chebyshev_inverse(lo, hi, degree);
        let err = (0..=4000)
            .map(|k| {
                let x = lo + (hi - lo) * k as f64 / 4000.0;
                (x * chebyshev_eval(&c, lo, hi, x) - 1.0).abs()
            })
            .fold(0.0, f64::max);
        if err <= tol {
            chosen = Some((degree, c, err));
            break;
        }
    }
    let (degree, coeffs, uniform_error) = chosen.ok_or_else(|| {
        Error::Domain(format!("no Chebyshev degree up to {MAX_CHEBYSHEV_DEGREE} reaches {tol:e}"))
    })?;

    let mut energy = TrigPoly::zero(&table);
    for f in fs {
        energy = energy.add(&f.mul(&f.conj())?)?;
    }
    let p_of_energy = clenshaw_exact(&table, &energy, &coeffs, lo, hi)?;
    let cofactors = fs.iter().map(|f| f.conj().mul(&p_of_energy)).collect::<Result<Vec<_>>>()?;
    Ok(PolynomialBezout { cofactors, degree, interval: (lo, hi), uniform_error })
}

/// Chebyshev interpolation coefficients of `1/x` on `[lo, hi]`.
fn chebyshev_inverse(lo: f64, hi: f64, degree: usize) -> Vec<f64> {
    let m = degree + 1;
    let nodes: Vec<f64> = (0..m).map(|k| (std::f64::consts::PI * (k as f64 + 0.5) / m as f64).cos()).collect();
    let values: Vec<f64> = nodes.iter().map(|y| 1.0 / (0.5 * (hi - lo) * y + 0.5 * (hi + lo))).collect();
    (0..m)
        .map(|j| {
            let s: f64 = (0..m)
                .map(|k| values[k] * (j as f64 * std::f64::consts::PI * (k as f64 + 0.5) / m as f64).cos())
                .sum();
            let scale = if j == 0 { 1.0 } else { 2.0 };
            scale * s / m as f64
        })
        .collect()
}

fn chebyshev_eval(c: &[f64], lo: f64, hi: f64, x: f64) -> f64 {
    let y = (2.0 * x - (hi + lo)) / (hi - lo);
    let (mut b1, mut b2) = (0.0, 0.0);
    for ck in c.iter().skip(1).rev() {
        let b0 = ck + 2.0 * y * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    c[0] + y * b1 - b2
}

/// The same Clenshaw recurrence in exact arithmetic, with float coefficients
/// and interval ends pinned to their exact binary values.
fn clenshaw_exact(
    table: &Arc<crate::GeneratorTable>,
    x: &TrigPoly,
    c: &[f64],
    lo: f64,
    hi: f64,
) -> Result<TrigPoly> {
    let exact = |v: f64| from_f64(v).ok_or_else(|| Error::Domain(format!("non-finite value {v}")));
    let lo = exact(lo)?;
    let hi = exact(hi)?;
    let two = BigRational::from_integer(2.into());
    // y = (2x − (hi + lo)) / (hi − lo)
    let width = &hi - &lo;
    let y = x
        .scale(&real(&two / &width))
        .sub(&TrigPoly::constant(table, real((&hi + &lo) / &width)))?;
    let two_y = y.scale(&real(two));
    let mut b1 = TrigPoly::zero(table);
    let mut b2 = TrigPoly::zero(table);
    for ck in c.iter().skip(1).rev() {
        let b0 = TrigPoly::constant(table, real(exact(*ck)?)).add(&two_y.mul(&b1)?)?.sub(&b2)?;
        b2 = b1;
        b1 = b0;
    }
    TrigPoly::constant(table, real(exact(c[0])?)).add(&y.mul(&b1)?)?.sub(&b2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freqmod::GeneratorTable;
    use crate::rational::{coeff, int, rat};

    fn table() -> Arc<GeneratorTable> {
        Arc::new(
            GeneratorTable::from_pairs(&[("w1", "1"), ("w2", "1.41421356237309504880168872420969807")])
                .unwrap(),
        )
    }

    fn ch(t: &Arc<GeneratorTable>, g: &str) -> TrigPoly {
        TrigPoly::character(t, t.generator(g).unwrap())
    }

    fn c(t: &Arc<GeneratorTable>, v: i64) -> TrigPoly {
        TrigPoly::constant(t, real(int(v)))
    }

    #[test]
    fn shifted_character_is_invertible() {
        let t = table();
        let f = ch(&t, "w1").add(&c(&t, 3)).unwrap();
        let r = invertible(&f, &SearchSettings::default()).unwrap();
        assert_eq!(r.verdict, InvertibilityVerdict::Invertible);
        assert!((r.delta - 2.0).abs() < 1e-12);
    }

    #[test]
    fn fundamental_factor_is_not_invertible() {
        let t = table();
        let f = ch(&t, "w1").add(&ch(&t, "w2")).unwrap().sub(&c(&t, 1)).unwrap();
        let r = invertible(&f, &SearchSettings::default()).unwrap();
        assert_eq!(r.verdict, InvertibilityVerdict::NotInvertible);
        assert!(r.delta <= ZERO_THRESHOLD);
        let r2 = invertible(&f.conj(), &SearchSettings::default()).unwrap();
        assert_eq!(r2.verdict, r.verdict);
        let r = unimodular(std::slice::from_ref(&f), &SearchSettings::default()).unwrap();
        assert_eq!(r.verdict, InvertibilityVerdict::NotInvertible);
    }

    #[test]
    fn zero_is_not_invertible() {
        let t = table();
        let r = invertible(&TrigPoly::zero(&t), &SearchSettings::default()).unwrap();
        assert_eq!(r.verdict, InvertibilityVerdict::NotInvertible);
    }

    #[test]
    fn unimodular_pair_with_constant() {
        let t = table();
        let r = unimodular(&[ch(&t, "w1"), c(&t, 1)], &SearchSettings::default()).unwrap();
        assert_eq!(r.verdict, InvertibilityVerdict::Invertible);
        // |e^{it}| + |1| is identically 2
        assert!((r.delta - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bezout_constant_and_shift() {
        let t = table();
        let two = c(&t, 2);
        let r = invertible(&two, &SearchSettings::default()).unwrap();
        let sol = bezout(std::slice::from_ref(&two), &r).unwrap();
        assert_eq!(sol.solver(0, 3.0), Complex64::new(0.5, 0.0));
        assert_eq!(sol.residual_bound, 0.0);

        let f = ch(&t, "w1").add(&c(&t, 3)).unwrap();
        let r = invertible(&f, &SearchSettings::default()).unwrap();
        let sol = bezout(std::slice::from_ref(&f), &r).unwrap();
        assert!(sol.residual_bound <= 1e-12);
        let tt = 0.7;
        let expected = (Complex64::cis(-tt) + 3.0) / (Complex64::cis(tt) + 3.0).norm_sqr();
        assert!((sol.solver(0, tt) - expected).norm() < 1e-15);
    }

    #[test]
    fn bezout_refuses_uncertified() {
        let t = table();
        let f = ch(&t, "w1").add(&ch(&t, "w2")).unwrap().sub(&c(&t, 1)).unwrap();
        let r = invertible(&f, &SearchSettings::default()).unwrap();
        assert!(matches!(bezout(&[f], &r), Err(Error::NotInvertible)));
    }

    #[test]
    fn polynomial_cofactors() {
        let t = table();
        let f = ch(&t, "w1").add(&c(&t, 3)).unwrap();
        let r = invertible(&f, &SearchSettings::default()).unwrap();
        let pb = bezout_polynomial(std::slice::from_ref(&f), &r, 1e-6).unwrap();
        let q = &pb.cofactors[0];
        for k in 0..200 {
            let tt = k as f64 * 0.37;
            let resid = (q.eval(tt) * f.eval(tt) - 1.0).norm();
            assert!(resid <= 1e-6 * 1.01, "t = {tt}: {resid}");
        }
    }

    #[test]
    fn cofactor_certificate() {
        let t = table();
        let a = ch(&t, "w1");
        let b = TrigPoly::constant(&t, coeff(rat(1, 2), int(0)));
        let bound = cofactor_bound(&[a.clone(), c(&t, 1)], &[a.conj(), b.neg()]).unwrap();
        assert!((bound - 0.5).abs() < 1e-15);
        assert!(cofactor_bound(&[a.clone()], &[a.clone()]).is_err());
    }
}
