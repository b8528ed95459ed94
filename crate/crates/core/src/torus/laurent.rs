use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::rational::{coeff_is_zero, coeff_one, coeff_to_c64, real, render_coeff, Coeff};

/// Laurent polynomial in `dim` torus variables with exact coefficients.
#[derive(Clone, PartialEq)]
pub struct LaurentPoly {
    dim: usize,
    terms: BTreeMap<Vec<i64>, Coeff>,
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly[{}]({})", self.dim, self.render())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl LaurentPoly {
    pub fn zero(dim: usize) -> Self {
        LaurentPoly { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Coeff) -> Self {
        Self::monomial(dim, vec![0; dim], c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, coeff_one())
    }

    /// The variable `z_{n+1}` (zero-based `n`).
    pub fn var(dim: usize, n: usize) -> Self {
        let mut e = vec![0; dim];
        e[n] = 1;
        Self::monomial(dim, e, coeff_one())
    }

    pub fn monomial(dim: usize, exponents: Vec<i64>, c: Coeff) -> Self {
        assert_eq!(exponents.len(), dim, "exponent vector length");
        let mut terms = BTreeMap::new();
        if !coeff_is_zero(&c) {
            terms.insert(exponents, c);
        }
        LaurentPoly { dim, terms }
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Vec<i64>, Coeff)>) -> Self {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            assert_eq!(e.len(), dim, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<i64>, c: Coeff) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if !coeff_is_zero(&c) {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if coeff_is_zero(o.get()) {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Coeff)> {
        self.terms.iter()
    }

    fn check(&self, other: &LaurentPoly) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim, found: other.dim })
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LaurentPoly {
        self.scale(&real(-BigRational::one()))
    }

    pub fn scale(&self, c: &Coeff) -> LaurentPoly {
        LaurentPoly::from_terms(self.dim, self.terms.iter().map(|(e, a)| (e.clone(), a * c)))
    }

    pub fn mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check(other)?;
        let mut out = LaurentPoly::zero(self.dim);
        for (e, a) in &self.terms {
            for (f, b) in &other.terms {
                let mut g = Vec::with_capacity(self.dim);
                for (x, y) in e.iter().zip(f) {
                    g.push(x.checked_add(*y).ok_or(Error::ExponentOverflow)?);
                }
                out.add_term(g, a * b);
            }
        }
        Ok(out)
    }

    /// Integer power; negative exponents only for single-term polynomials.
    pub fn pow(&self, n: i64) -> Result<LaurentPoly> {
        if n < 0 {
            if self.terms.len() != 1 {
                return Err(Error::Domain("negative power of a polynomial with more than one term".into()));
            }
            let (e, c) = self.terms.iter().next().unwrap();
            let inv = coeff_one() / c.clone();
            return LaurentPoly::monomial(self.dim, e.iter().map(|x| -x).collect(), inv).pow(-n);
        }
        let mut result = LaurentPoly::one(self.dim);
        let mut base = self.clone();
        let mut k = n as u64;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Conjugation on the torus: `conj(q)(z) = conj(q(z))` with `conj(z) = 1/z`.
    pub fn conj(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.dim,
            self.terms.iter().map(|(e, a)| (e.iter().map(|x| -x).collect(), a.conj())),
        )
    }

    /// `q(z_1^s, …, z_M^s)`.
    pub fn power_substitute(&self, s: i64) -> Result<LaurentPoly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, a) in &self.terms {
            let mut g = Vec::with_capacity(self.dim);
            for x in e {
                g.push(x.checked_mul(s).ok_or(Error::ExponentOverflow)?);
            }
            terms.push((g, a.clone()));
        }
        Ok(LaurentPoly::from_terms(self.dim, terms))
    }

    /// Places the variables into a larger torus: variable `n` becomes `target[n]`.
    pub fn embed(&self, dim: usize, target: &[usize]) -> LaurentPoly {
        LaurentPoly::from_terms(
            dim,
            self.terms.iter().map(|(e, a)| {
                let mut g = vec![0; dim];
                for (n, x) in e.iter().enumerate() {
                    g[target[n]] += x;
                }
                (g, a.clone())
            }),
        )
    }

    /// Evaluation at `z_n = e^{iθ_n}`.
    pub fn eval_angles(&self, theta: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, a)| {
                let phase: f64 = e.iter().zip(theta).map(|(k, t)| *k as f64 * t).sum();
                coeff_to_c64(a) * Complex64::cis(phase)
            })
            .sum()
    }

    /// Evaluation at arbitrary nonzero complex points.
    pub fn eval_point(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, a)| {
                let mut m = coeff_to_c64(a);
                for (k, zn) in e.iter().zip(z) {
                    if *k != 0 {
                        m *= zn.powi(*k as i32);
                    }
                }
                m
            })
            .sum()
    }

    pub fn wiener_norm(&self) -> f64 {
        self.terms.values().map(|a| coeff_to_c64(a).norm()).sum()
    }

    /// `Σ |a_k| ‖k‖₁`, a Lipschitz constant of `q` in the angles (sup norm).
    pub fn lipschitz(&self) -> f64 {
        self.terms
            .iter()
            .map(|(e, a)| coeff_to_c64(a).norm() * e.iter().map(|k| k.unsigned_abs() as f64).sum::<f64>())
            .sum()
    }

    pub fn constant_term(&self) -> Option<&Coeff> {
        self.terms.get(&vec![0; self.dim])
    }

    /// Text in the expression grammar, e.g. `(1+0i)*z1^2*z2 + (-1+0i)`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut s = render_coeff(c);
                for (n, k) in e.iter().enumerate() {
                    match *k {
                        0 => {}
                        1 => s.push_str(&format!("*z{}", n + 1)),
                        k => s.push_str(&format!("*z{}^{}", n + 1, k)),
                    }
                }
                s
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Float copy of a Laurent polynomial for fast repeated evaluation.
#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    pub coeffs: Vec<Complex64>,
    pub exps: Vec<Vec<i64>>,
}

impl Compiled {
    pub fn new(q: &LaurentPoly) -> Self {
        let (exps, coeffs) = q.terms.iter().map(|(e, a)| (e.clone(), coeff_to_c64(a))).unzip();
        Compiled { coeffs, exps }
    }

    pub fn eval(&self, theta: &[f64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, e) in self.coeffs.iter().zip(&self.exps) {
            let phase: f64 = e.iter().zip(theta).map(|(k, t)| *k as f64 * t).sum();
            acc += a * Complex64::cis(phase);
        }
        acc
    }

    /// Evaluation at grid index `idx` using a table of `cis(2π j / grid)`.
    pub fn eval_grid(&self, idx: &[i64], grid: i64, roots: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, e) in self.coeffs.iter().zip(&self.exps) {
            let mut j: i64 = 0;
            for (k, i) in e.iter().zip(idx) {
                j = (j + (k % grid) * i) % grid;
            }
            acc += a * roots[j.rem_euclid(grid) as usize];
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{coeff, int};

    #[test]
    fn arithmetic() {
        let z1 = LaurentPoly::var(2, 0);
        let z2 = LaurentPoly::var(2, 1);
        let q = z1.add(&z2).unwrap().sub(&LaurentPoly::one(2)).unwrap();
        assert_eq!(q.len(), 3);
        let sq = q.mul(&q).unwrap();
        assert_eq!(sq.len(), 6);
        assert_eq!(q.render(), "(-1+0i) + (1+0i)*z2 + (1+0i)*z1");
        let inv = z1.pow(-2).unwrap();
        assert_eq!(inv.mul(&z1.pow(2).unwrap()).unwrap(), LaurentPoly::one(2));
        assert!(q.pow(-1).is_err());
        assert!(z1.add(&LaurentPoly::one(3)).is_err());
    }

    #[test]
    fn evaluation_agrees() {
        let q = LaurentPoly::from_terms(
            2,
            vec![(vec![2, -1], coeff(int(1), int(2))), (vec![0, 3], real(int(-3))), (vec![0, 0], real(int(1)))],
        );
        let th = [0.3, -1.7];
        let z: Vec<_> = th.iter().map(|t| Complex64::cis(*t)).collect();
        assert!((q.eval_angles(&th) - q.eval_point(&z)).norm() < 1e-12);
        assert!((q.eval_angles(&th) - Compiled::new(&q).eval(&th)).norm() < 1e-12);
        assert!((q.conj().eval_angles(&th) - q.eval_angles(&th).conj()).norm() < 1e-12);
        let grid = 16;
        let roots: Vec<_> = (0..grid).map(|j| Complex64::cis(2.0 * std::f64::consts::PI * j as f64 / grid as f64)).collect();
        let idx = [3, 11];
        let ang: Vec<f64> = idx.iter().map(|&i| 2.0 * std::f64::consts::PI * i as f64 / grid as f64).collect();
        assert!((Compiled::new(&q).eval_grid(&idx, grid, &roots) - q.eval_angles(&ang)).norm() < 1e-12);
    }

    #[test]
    fn lipschitz_and_wiener() {
        let q = LaurentPoly::from_terms(2, vec![(vec![2, -1], real(int(2))), (vec![0, 0], real(int(-1)))]);
        assert_eq!(q.lipschitz(), 6.0);
        assert_eq!(q.wiener_norm(), 3.0);
    }

    #[test]
    fn substitution_and_embedding() {
        let q = LaurentPoly::var(1, 0).add(&LaurentPoly::one(1)).unwrap();
        let q2 = q.power_substitute(3).unwrap();
        assert_eq!(q2, LaurentPoly::var(1, 0).pow(3).unwrap().add(&LaurentPoly::one(1)).unwrap());
        let e = q.embed(3, &[2]);
        assert_eq!(e, LaurentPoly::var(3, 2).add(&LaurentPoly::one(3)).unwrap());
    }
}
