//! Generalized trigonometric polynomials `Q(t) = Σ a_j e^{iλ_j t}`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::freqmod::{Frequency, GeneratorTable};
use crate::rational::{coeff_is_zero, coeff_one, coeff_to_c64, real, render_coeff, Coeff};

/// Exact trigonometric polynomial over a shared generator table.
///
/// No stored coefficient is zero, and terms are keyed (and displayed) in
/// lexicographic order of the frequency coordinates.
#[derive(Clone)]
pub struct TrigPoly {
    table: Arc<GeneratorTable>,
    terms: BTreeMap<Frequency, Coeff>,
}

impl PartialEq for TrigPoly {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.table, &other.table) && self.terms == other.terms
    }
}

impl fmt::Debug for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TrigPoly({})", self.render())
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn same_table(a: &Arc<GeneratorTable>, b: &Arc<GeneratorTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl TrigPoly {
    pub fn zero(table: &Arc<GeneratorTable>) -> Self {
        TrigPoly { table: table.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(table: &Arc<GeneratorTable>, c: Coeff) -> Self {
        Self::monomial(table, table.zero(), c)
    }

    pub fn one(table: &Arc<GeneratorTable>) -> Self {
        Self::constant(table, coeff_one())
    }

    /// `c · e^{iλt}`.
    pub fn monomial(table: &Arc<GeneratorTable>, freq: Frequency, c: Coeff) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff_is_zero(&c) {
            terms.insert(freq, c);
        }
        TrigPoly { table: table.clone(), terms }
    }

    /// `e^{iλt}`.
    pub fn character(table: &Arc<GeneratorTable>, freq: Frequency) -> Self {
        Self::monomial(table, freq, coeff_one())
    }

    pub fn from_terms(
        table: &Arc<GeneratorTable>,
        terms: impl IntoIterator<Item = (Frequency, Coeff)>,
    ) -> Self {
        let mut p = Self::zero(table);
        for (f, c) in terms {
            p.add_term(f, c);
        }
        p
    }

    fn add_term(&mut self, f: Frequency, c: Coeff) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(f) {
            Entry::Vacant(e) => {
                if !coeff_is_zero(&c) {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if coeff_is_zero(e.get()) {
                    e.remove();
                }
            }
        }
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Frequency, &Coeff)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn spectrum(&self) -> Vec<Frequency> {
        self.terms.keys().cloned().collect()
    }

    pub fn coefficient(&self, f: &Frequency) -> Option<&Coeff> {
        self.terms.get(f)
    }

    fn check(&self, other: &TrigPoly) -> Result<()> {
        if same_table(&self.table, &other.table) {
            Ok(())
        } else {
            Err(Error::TableMismatch)
        }
    }

    pub fn add(&self, other: &TrigPoly) -> Result<TrigPoly> {
        self.check(other)?;
        let mut out = self.clone();
        for (f, c) in &other.terms {
            out.add_term(f.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TrigPoly) -> Result<TrigPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TrigPoly {
        self.scale(&real(-BigRational::one()))
    }

    pub fn scale(&self, c: &Coeff) -> TrigPoly {
        TrigPoly::from_terms(&self.table, self.terms.iter().map(|(f, a)| (f.clone(), a * c)))
    }

    pub fn mul(&self, other: &TrigPoly) -> Result<TrigPoly> {
        self.check(other)?;
        let mut out = TrigPoly::zero(&self.table);
        for (f, a) in &self.terms {
            for (g, b) in &other.terms {
                out.add_term(self.table.add(f, g), a * b);
            }
        }
        Ok(out)
    }

    /// Integer power. Negative exponents are allowed for single-term polynomials.
    pub fn pow(&self, n: i64) -> Result<TrigPoly> {
        if n < 0 {
            if self.terms.len() != 1 {
                return Err(Error::Domain("negative power of a polynomial with more than one term".into()));
            }
            let (f, c) = self.terms.iter().next().unwrap();
            let inv = coeff_one() / c.clone();
            return TrigPoly::monomial(&self.table, f.neg(), inv).pow(-n);
        }
        let mut result = TrigPoly::one(&self.table);
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Complex conjugate: conjugated coefficients on negated frequencies.
    pub fn conj(&self) -> TrigPoly {
        TrigPoly::from_terms(&self.table, self.terms.iter().map(|(f, a)| (f.neg(), a.conj())))
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|(f, a)| coeff_to_c64(a) * Complex64::cis(f.shadow() * t))
            .sum()
    }

    /// ℓ¹ norm of the coefficients, an upper bound for the sup norm.
    pub fn wiener_norm(&self) -> f64 {
        self.terms.values().map(|a| coeff_to_c64(a).norm()).sum()
    }

    /// The coefficient of frequency 0.
    pub fn constant_term(&self) -> Coeff {
        self.terms.get(&self.table.zero()).cloned().unwrap_or_else(|| real(BigRational::zero()))
    }

    /// Same polynomial over a table that extends this one.
    pub fn widened(&self, table: &Arc<GeneratorTable>) -> TrigPoly {
        TrigPoly::from_terms(table, self.terms.iter().map(|(f, c)| (f.widened(table), c.clone())))
    }

    /// Canonical text: `(re+im i)*e(freq) + …`, constants without `e(…)`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(f, c)| {
                if f.is_zero() {
                    render_coeff(c)
                } else {
                    format!("{}*e({})", render_coeff(c), self.table.render(f))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}
