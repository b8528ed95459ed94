//! Real frequencies as exact rational vectors over declared generators.
//!
//! A frequency never exists as a bare float in algebra. It is a vector of
//! rationals, one per generator of a [`GeneratorTable`], and carries a float
//! shadow only for evaluation and sign decisions.

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice;
use crate::rational::{lcm, parse_decimal, parse_rational, render_rational, to_f64};

/// Guard band for sign decisions on float shadows.
pub const EPS_SIGN: f64 = 1e-9;
/// Default coefficient bound for the nonnegative lattice search.
pub const NSPAN_BOUND: i64 = 32;
/// Cap on lattice points visited by the nonnegative search.
const NSPAN_VISIT_CAP: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub value: String,
    pub independent: bool,
}

/// Ordered list of named real generators.
#[derive(Debug, Clone)]
pub struct GeneratorTable {
    entries: Vec<Generator>,
    exact: Vec<BigRational>,
}

impl PartialEq for GeneratorTable {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl GeneratorTable {
    pub fn new(entries: Vec<Generator>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidTable("at least one generator required".into()));
        }
        Self::build(entries)
    }

    /// A table with no generators; only the zero frequency lives here.
    pub fn empty() -> Self {
        GeneratorTable { entries: Vec::new(), exact: Vec::new() }
    }

    /// Convenience constructor from `(name, value)` pairs, all flagged independent.
    pub fn from_pairs(pairs: &[(&str, &str)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|(n, v)| Generator { name: n.to_string(), value: v.to_string(), independent: true })
                .collect(),
        )
    }

    fn build(entries: Vec<Generator>) -> Result<Self> {
        let mut exact = Vec::with_capacity(entries.len());
        for (i, g) in entries.iter().enumerate() {
            if !is_ident(&g.name) || g.name == "e" || g.name == "i" {
                return Err(Error::InvalidTable(format!("bad generator name `{}`", g.name)));
            }
            if entries[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::InvalidTable(format!("duplicate generator `{}`", g.name)));
            }
            let v = parse_decimal(&g.value)
                .ok_or_else(|| Error::InvalidTable(format!("value `{}` is not a decimal", g.value)))?;
            exact.push(v);
        }
        Ok(GeneratorTable { entries, exact })
    }

    /// Appends generators; existing coordinates stay valid as prefixes.
    pub fn extended(&self, more: Vec<Generator>) -> Result<Self> {
        let mut all = self.entries.clone();
        all.extend(more);
        Self::new(all)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Generator] {
        &self.entries
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.entries.iter().position(|g| g.name == name)
    }

    pub fn value(&self, i: usize) -> f64 {
        to_f64(&self.exact[i])
    }

    /// First generator whose declared value is exactly 1, if any. Bare
    /// rationals in the frequency grammar are multiples of it.
    pub fn unit_index(&self) -> Option<usize> {
        self.exact.iter().position(|v| v.is_one())
    }

    pub fn frequency(&self, coords: Vec<BigRational>) -> Result<Frequency> {
        if coords.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: coords.len() });
        }
        let shadow = self.shadow_of(&coords);
        Ok(Frequency { coords, shadow })
    }

    pub fn zero(&self) -> Frequency {
        Frequency { coords: vec![BigRational::zero(); self.len()], shadow: 0.0 }
    }

    /// The frequency `1·name`.
    pub fn generator(&self, name: &str) -> Result<Frequency> {
        let i = self.index_of(name).ok_or_else(|| Error::UnknownGenerator(name.into()))?;
        let mut coords = vec![BigRational::zero(); self.len()];
        coords[i] = BigRational::one();
        self.frequency(coords)
    }

    /// Exact sum of coords times decimal values, rounded once.
    fn shadow_of(&self, coords: &[BigRational]) -> f64 {
        let mut acc = BigRational::zero();
        for (c, v) in coords.iter().zip(&self.exact) {
            if !c.is_zero() {
                acc += c * v;
            }
        }
        to_f64(&acc)
    }

    pub fn add(&self, a: &Frequency, b: &Frequency) -> Frequency {
        let coords: Vec<_> = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        let shadow = self.shadow_of(&coords);
        Frequency { coords, shadow }
    }

    pub fn scale(&self, a: &Frequency, r: &BigRational) -> Frequency {
        let coords: Vec<_> = a.coords.iter().map(|x| x * r).collect();
        let shadow = self.shadow_of(&coords);
        Frequency { coords, shadow }
    }

    /// Renders in the frequency grammar, e.g. `3/2*w1 - w2`.
    pub fn render(&self, f: &Frequency) -> String {
        let mut out = String::new();
        for (c, g) in f.coords.iter().zip(&self.entries) {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            if !mag.is_one() {
                out.push_str(&render_rational(&mag));
                out.push('*');
            }
            out.push_str(&g.name);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// An exact element of the rational span of the generators.
///
/// Equality, ordering and hashing look at the coordinates only.
#[derive(Debug, Clone)]
pub struct Frequency {
    coords: Vec<BigRational>,
    shadow: f64,
}

impl Frequency {
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn shadow(&self) -> f64 {
        self.shadow
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn neg(&self) -> Frequency {
        Frequency { coords: self.coords.iter().map(|c| -c).collect(), shadow: -self.shadow }
    }

    /// Zero-pads the coordinates after the generator table grows.
    pub fn widened(&self, table: &GeneratorTable) -> Frequency {
        let mut coords = self.coords.clone();
        coords.resize(table.len(), BigRational::zero());
        let shadow = table.shadow_of(&coords);
        Frequency { coords, shadow }
    }
}

impl PartialEq for Frequency {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl Eq for Frequency {}

impl Hash for Frequency {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl PartialOrd for Frequency {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frequency {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords.cmp(&other.coords)
    }
}

/// Parses `freq := sterm (("+"|"-") sterm)*`, `sterm := [rational "*"] ident | rational`.
/// A leading sign is accepted.
pub fn freq_parse(text: &str, table: &GeneratorTable) -> Result<Frequency> {
    let mut coords = vec![BigRational::zero(); table.len()];
    let bytes = text.as_bytes();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let syntax = |pos: usize, msg: &str| Error::Syntax { pos, msg: msg.to_string() };
    let mut first = true;
    loop {
        skip_ws(&mut pos);
        let mut sign = BigRational::one();
        if pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
            if bytes[pos] == b'-' {
                sign = -sign;
            }
            pos += 1;
            skip_ws(&mut pos);
        } else if !first {
            if pos >= bytes.len() {
                break;
            }
            return Err(syntax(pos, "expected `+` or `-`"));
        }
        first = false;
        if pos >= bytes.len() {
            return Err(syntax(pos, "expected a term"));
        }
        let start = pos;
        let mut factor = BigRational::one();
        if bytes[pos].is_ascii_digit() {
            while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == b'/') {
                pos += 1;
            }
            factor = parse_rational(&text[start..pos])?;
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
                skip_ws(&mut pos);
            } else {
                // bare rational: a multiple of the unit generator
                if !factor.is_zero() {
                    let u = table.unit_index().ok_or_else(|| {
                        Error::UnknownGenerator(format!(
                            "bare rational `{}` needs a generator with value 1",
                            &text[start..pos].trim()
                        ))
                    })?;
                    coords[u] += sign * factor;
                }
                continue;
            }
        }
        let id_start = pos;
        while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
            pos += 1;
        }
        if id_start == pos {
            return Err(syntax(pos, "expected a generator name"));
        }
        let name = &text[id_start..pos];
        let i = table.index_of(name).ok_or_else(|| Error::UnknownGenerator(name.into()))?;
        coords[i] += sign * factor;
    }
    table.frequency(coords)
}

/// A rational basis of a list of frequencies and the integer rewrite of
/// every input over it.
///
/// For each input `λ_j`: `scale · λ_j = Σ_n rewrite[j][n] · basis[n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyBasis {
    pub basis_indices: Vec<usize>,
    pub basis: Vec<Frequency>,
    pub scale: BigInt,
    pub rewrite: Vec<Vec<BigInt>>,
}

impl FrequencyBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The basis frequencies divided by the scale.
    pub fn scaled(&self, table: &GeneratorTable) -> Vec<Frequency> {
        let inv = BigRational::new(BigInt::one(), self.scale.clone());
        self.basis.iter().map(|w| table.scale(w, &inv)).collect()
    }
}

/// Greedy left-to-right exact elimination; the scale is the lcm of the
/// denominators of the rational combinations.
pub fn extract_basis(freqs: &[Frequency]) -> FrequencyBasis {
    // echelon rows with pivot column and their combination over the basis
    let mut echelon: Vec<(usize, Vec<BigRational>, Vec<BigRational>)> = Vec::new();
    let mut basis_indices = Vec::new();
    let mut combos: Vec<Vec<BigRational>> = Vec::with_capacity(freqs.len());

    for (j, f) in freqs.iter().enumerate() {
        let mut v = f.coords.clone();
        let mut comb: Vec<BigRational> = vec![BigRational::zero(); basis_indices.len()];
        for (pivot, row, row_comb) in &echelon {
            if v[*pivot].is_zero() {
                continue;
            }
            let factor = &v[*pivot] / &row[*pivot];
            for (x, r) in v.iter_mut().zip(row) {
                *x -= &factor * r;
            }
            for (c, rc) in comb.iter_mut().zip(row_comb) {
                *c += &factor * rc;
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => combos.push(comb),
            Some(pivot) => {
                let m = basis_indices.len();
                basis_indices.push(j);
                // v = λ_j − comb·basis, so its combination is e_m − comb
                let mut row_comb: Vec<BigRational> = comb.iter().map(|c| -c).collect();
                row_comb.push(BigRational::one());
                for (_, _, rc) in echelon.iter_mut() {
                    rc.push(BigRational::zero());
                }
                echelon.push((pivot, v, row_comb));
                let mut unit = vec![BigRational::zero(); m + 1];
                unit[m] = BigRational::one();
                combos.push(unit);
            }
        }
    }

    let m = basis_indices.len();
    let mut scale = BigInt::one();
    for c in &combos {
        for x in c {
            scale = lcm(&scale, x.denom());
        }
    }
    let rewrite = combos
        .into_iter()
        .map(|mut c| {
            c.resize(m, BigRational::zero());
            c.into_iter()
                .map(|x| (x * BigRational::from_integer(scale.clone())).to_integer())
                .collect()
        })
        .collect();
    let basis = basis_indices.iter().map(|&i| freqs[i].clone()).collect();
    FrequencyBasis { basis_indices, basis, scale, rewrite }
}

/// True when extraction selects every input, i.e. the list is independent over Q.
pub fn is_independent(freqs: &[Frequency]) -> bool {
    extract_basis(freqs).dim() == freqs.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SemigroupKind {
    NSpan,
    ZSpan,
    NonNegReals,
    AllReals,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SemigroupSpec {
    pub kind: SemigroupKind,
    pub generators: Vec<Frequency>,
}

impl SemigroupSpec {
    pub fn new(kind: SemigroupKind, generators: Vec<Frequency>) -> Result<Self> {
        let needs = matches!(kind, SemigroupKind::NSpan | SemigroupKind::ZSpan);
        if needs && generators.is_empty() {
            return Err(Error::Domain("lattice semigroups need generators".into()));
        }
        Ok(SemigroupSpec { kind, generators })
    }

    pub fn nonneg_reals() -> Self {
        SemigroupSpec { kind: SemigroupKind::NonNegReals, generators: Vec::new() }
    }

    pub fn all_reals() -> Self {
        SemigroupSpec { kind: SemigroupKind::AllReals, generators: Vec::new() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Member,
    NonMember,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
    Zero,
    Uncertain,
}

impl Sign {
    pub fn negate(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
            s => s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipOptions {
    pub eps_sign: f64,
    pub nspan_bound: i64,
}

impl Default for MembershipOptions {
    fn default() -> Self {
        MembershipOptions { eps_sign: EPS_SIGN, nspan_bound: NSPAN_BOUND }
    }
}

pub fn sign_of(f: &Frequency) -> Sign {
    sign_with(f, EPS_SIGN)
}

pub fn sign_with(f: &Frequency, eps: f64) -> Sign {
    if f.is_zero() {
        Sign::Zero
    } else if f.shadow > eps {
        Sign::Positive
    } else if f.shadow < -eps {
        Sign::Negative
    } else {
        Sign::Uncertain
    }
}

pub fn membership(f: &Frequency, spec: &SemigroupSpec) -> Verdict {
    membership_with(f, spec, &MembershipOptions::default())
}

pub fn membership_with(f: &Frequency, spec: &SemigroupSpec, opts: &MembershipOptions) -> Verdict {
    match spec.kind {
        SemigroupKind::AllReals => Verdict::Member,
        SemigroupKind::NonNegReals => match sign_with(f, opts.eps_sign) {
            Sign::Positive | Sign::Zero => Verdict::Member,
            Sign::Negative => Verdict::NonMember,
            Sign::Uncertain => Verdict::Inconclusive,
        },
        SemigroupKind::ZSpan => match integer_solution(f, &spec.generators) {
            Some(_) => Verdict::Member,
            None => Verdict::NonMember,
        },
        SemigroupKind::NSpan => nspan_membership(f, &spec.generators, opts),
    }
}

/// Integer solutions of `Σ x_i g_i = λ`: a particular solution and a kernel basis.
pub fn integer_solution(f: &Frequency, gens: &[Frequency]) -> Option<lattice::Solution> {
    let dim = f.coords.len();
    let mut den = f.coords.iter().fold(BigInt::one(), |acc, c| lcm(&acc, c.denom()));
    for g in gens {
        for c in &g.coords {
            den = lcm(&den, c.denom());
        }
    }
    let d = BigRational::from_integer(den);
    let to_int = |c: &BigRational| (c * &d).to_integer();
    let matrix: Vec<Vec<BigInt>> =
        (0..dim).map(|row| gens.iter().map(|g| to_int(&g.coords[row])).collect()).collect();
    let rhs: Vec<BigInt> = f.coords.iter().map(to_int).collect();
    lattice::solve(&matrix, &rhs, gens.len())
}

fn nspan_membership(f: &Frequency, gens: &[Frequency], opts: &MembershipOptions) -> Verdict {
    let Some(sol) = integer_solution(f, gens) else {
        return Verdict::NonMember;
    };
    let nonneg = |x: &[BigInt]| x.iter().all(|v| !v.is_negative());
    if sol.kernel.is_empty() {
        return if nonneg(&sol.particular) { Verdict::Member } else { Verdict::NonMember };
    }
    // Σ x_i g_i with x ≥ 0 and every g_i > 0 cannot be negative.
    let all_positive = gens.iter().all(|g| sign_with(g, opts.eps_sign) == Sign::Positive);
    if all_positive && sign_with(f, opts.eps_sign) == Sign::Negative {
        return Verdict::NonMember;
    }
    let k = opts.nspan_bound.max(0);
    let r = sol.kernel.len();
    let mut t = vec![-k; r];
    let mut visited = 0u64;
    loop {
        let mut x = sol.particular.clone();
        for (ti, kv) in t.iter().zip(&sol.kernel) {
            if *ti != 0 {
                let ti = BigInt::from(*ti);
                for (xi, ki) in x.iter_mut().zip(kv) {
                    *xi += &ti * ki;
                }
            }
        }
        if nonneg(&x) {
            return Verdict::Member;
        }
        visited += 1;
        if visited >= NSPAN_VISIT_CAP {
            return Verdict::Inconclusive;
        }
        // odometer, last coordinate fastest
        let mut i = r;
        loop {
            if i == 0 {
                return Verdict::Inconclusive;
            }
            i -= 1;
            if t[i] < k {
                t[i] += 1;
                break;
            }
            t[i] = -k;
        }
    }
}
