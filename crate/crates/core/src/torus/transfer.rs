use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::freqmod::{extract_basis, Frequency, FrequencyBasis, GeneratorTable};
use crate::torus::LaurentPoly;
use crate::trigpoly::TrigPoly;

/// A trigonometric polynomial rewritten on the torus over `scaled_freqs`.
#[derive(Debug, Clone)]
pub struct TransferResult {
    pub q: LaurentPoly,
    pub basis: FrequencyBasis,
    pub scaled_freqs: Vec<Frequency>,
}

/// Several polynomials rewritten over one shared basis.
#[derive(Debug, Clone)]
pub struct JointTransfer {
    pub qs: Vec<LaurentPoly>,
    pub basis: FrequencyBasis,
    pub scaled_freqs: Vec<Frequency>,
}

fn to_exponents(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter().map(|x| x.to_i64().ok_or(Error::ExponentOverflow)).collect()
}

/// Rewrites `p` as a Laurent polynomial `q` with `q(e^{i(ω_1/s)t}, …) = p(t)`.
pub fn transfer(p: &TrigPoly) -> Result<TransferResult> {
    transfer_with_frame(p, &[])
}

/// Like [`transfer`], but the frame frequencies enter basis extraction first,
/// so the torus coordinates follow them whenever they are independent.
pub fn transfer_with_frame(p: &TrigPoly, frame: &[Frequency]) -> Result<TransferResult> {
    let mut joint = transfer_many_with_frame(std::slice::from_ref(p), frame)?;
    Ok(TransferResult {
        q: joint.qs.pop().expect("one polynomial in, one out"),
        basis: joint.basis,
        scaled_freqs: joint.scaled_freqs,
    })
}

pub fn transfer_many(ps: &[TrigPoly]) -> Result<JointTransfer> {
    transfer_many_with_frame(ps, &[])
}

pub fn transfer_many_with_frame(ps: &[TrigPoly], frame: &[Frequency]) -> Result<JointTransfer> {
    let table = match ps.first() {
        Some(p) => p.table().clone(),
        None => return Err(Error::Domain("empty polynomial list".into())),
    };
    for p in ps {
        if **p.table() != *table {
            return Err(Error::TableMismatch);
        }
    }
    // frame first, then the nonzero spectrum in canonical order
    let mut freqs: Vec<Frequency> = frame.to_vec();
    for p in ps {
        for (f, _) in p.terms() {
            if !f.is_zero() && !freqs.contains(f) {
                freqs.push(f.clone());
            }
        }
    }
    let basis = extract_basis(&freqs);
    let dim = basis.dim();
    let qs = ps
        .iter()
        .map(|p| {
            let mut terms = Vec::with_capacity(p.len());
            for (f, a) in p.terms() {
                let e = if f.is_zero() {
                    vec![0; dim]
                } else {
                    let j = freqs.iter().position(|g| g == f).expect("frequency collected above");
                    to_exponents(&basis.rewrite[j])?
                };
                terms.push((e, a.clone()));
            }
            Ok(LaurentPoly::from_terms(dim, terms))
        })
        .collect::<Result<Vec<_>>>()?;
    let scaled_freqs = basis.scaled(&table);
    Ok(JointTransfer { qs, basis, scaled_freqs })
}

/// Substitutes `z_n = e^{i μ_n t}` symbolically; exponent vectors become
/// exact frequencies.
pub fn back_substitute(q: &LaurentPoly, freqs: &[Frequency], table: &Arc<GeneratorTable>) -> Result<TrigPoly> {
    if freqs.len() != q.dim() {
        return Err(Error::DimensionMismatch { expected: q.dim(), found: freqs.len() });
    }
    let mut terms = Vec::with_capacity(q.len());
    for (e, a) in q.terms() {
        let mut coords = vec![BigRational::zero(); table.len()];
        for (k, mu) in e.iter().zip(freqs) {
            if *k == 0 {
                continue;
            }
            let k = BigRational::from_integer(BigInt::from(*k));
            for (c, m) in coords.iter_mut().zip(mu.coords()) {
                *c += &k * m;
            }
        }
        terms.push((table.frequency(coords)?, a.clone()));
    }
    Ok(TrigPoly::from_terms(table, terms))
}
