use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::corona::SearchSettings;
use crate::error::{Error, Result};
use crate::freqmod::{extract_basis, Frequency, GeneratorTable};
use crate::rational::{int, rat, real};
use crate::torus::{torus_max_abs, transfer, LaurentPoly};
use crate::trigpoly::TrigPoly;

/// The invertible tuple `(f_1, …, f_N, g)` on `4N` torus variables with
/// `f_j = z_{2j−1}^s + z_{2j}^s − 1` for `j ≤ 2N` and
/// `g = 1/4 − Σ_{j≤N} f_j f_{N+j}`.
#[derive(Debug, Clone)]
pub struct FundamentalExample {
    pub n: usize,
    pub s: u32,
    /// All `2N` factors; the tuple uses the first `N`.
    pub fs: Vec<LaurentPoly>,
    pub g: LaurentPoly,
}

impl FundamentalExample {
    pub fn dim(&self) -> usize {
        4 * self.n
    }

    /// `(f_1, …, f_N, g)`.
    pub fn tuple(&self) -> Vec<LaurentPoly> {
        let mut t = self.fs[..self.n].to_vec();
        t.push(self.g.clone());
        t
    }

    /// `Σ_{j≤N} f_{N+j} f_j + g`, computed exactly.
    pub fn identity_value(&self) -> Result<LaurentPoly> {
        let mut acc = self.g.clone();
        for j in 0..self.n {
            acc = acc.add(&self.fs[self.n + j].mul(&self.fs[j])?)?;
        }
        Ok(acc)
    }

    pub fn identity_holds(&self) -> bool {
        let quarter = LaurentPoly::constant(self.dim(), real(rat(1, 4)));
        matches!(self.identity_value(), Ok(v) if v == quarter)
    }
}

pub fn example_fundamental(n: usize, s: u32) -> Result<FundamentalExample> {
    if n == 0 || s == 0 {
        return Err(Error::Domain("N and s must be at least 1".into()));
    }
    let dim = 4 * n;
    let s = s as i64;
    let one = LaurentPoly::one(dim);
    let fs = (0..2 * n)
        .map(|j| {
            LaurentPoly::var(dim, 2 * j)
                .pow(s)?
                .add(&LaurentPoly::var(dim, 2 * j + 1).pow(s)?)?
                .sub(&one)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut g = LaurentPoly::constant(dim, real(rat(1, 4)));
    for j in 0..n {
        g = g.sub(&fs[j].mul(&fs[n + j])?)?;
    }
    Ok(FundamentalExample { n, s: s as u32, fs, g })
}

/// `F_j = e^{iλ_{2j−1}t} + e^{iλ_{2j}t} − 1` for independent `λ_1, …, λ_{2N}`.
pub fn example_general(table: &Arc<GeneratorTable>, lambdas: &[Frequency]) -> Result<Vec<TrigPoly>> {
    if lambdas.is_empty() || lambdas.len() % 2 != 0 {
        return Err(Error::Domain(format!("need an even, positive number of frequencies, got {}", lambdas.len())));
    }
    if let Some(f) = lambdas.iter().find(|f| f.coords().len() != table.len()) {
        return Err(Error::DimensionMismatch { expected: table.len(), found: f.coords().len() });
    }
    if extract_basis(lambdas).dim() != lambdas.len() {
        return Err(Error::Dependent);
    }
    let one = TrigPoly::one(table);
    lambdas
        .chunks(2)
        .map(|pair| {
            TrigPoly::character(table, pair[0].clone())
                .add(&TrigPoly::character(table, pair[1].clone()))?
                .sub(&one)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ResistanceReport {
    pub n: usize,
    /// `1/(24N)`.
    pub threshold: f64,
    /// Certified upper bounds on `sup |F_j − H_j|`.
    pub difference_bounds: Vec<f64>,
    /// Best found value of `sup |4F − 1|`.
    pub max_value: f64,
    /// Certified upper bound on `sup |4F − 1|`.
    pub certified_max: f64,
    /// Whether the certified bound is at most `1/2`, which makes `F` invertible.
    pub within_half: bool,
}

/// Checks that an `N`-tuple `H` close to `(F_1, …, F_N)` still produces the
/// invertible combination `F = Σ H_j F_{N+j} + G` with `|4F − 1| ≤ 1/2`.
pub fn approximation_resistance_check(
    lambdas: &[Frequency],
    hs: &[TrigPoly],
    settings: &SearchSettings,
) -> Result<ResistanceReport> {
    let n = hs.len();
    let table = match hs.first() {
        Some(h) => h.table().clone(),
        None => return Err(Error::Domain("empty H tuple".into())),
    };
    if lambdas.len() != 4 * n {
        return Err(Error::DimensionMismatch { expected: 4 * n, found: lambdas.len() });
    }
    let fs = example_general(&table, lambdas)?;
    let threshold = 1.0 / (24.0 * n as f64);
    let mut difference_bounds = Vec::with_capacity(n);
    for j in 0..n {
        let d = transfer(&fs[j].sub(&hs[j])?)?;
        let r = torus_max_abs(&d.q, settings.grid_for(d.q.dim()), settings.refinements)?;
        if r.certified_bound >= threshold {
            return Err(Error::HypothesisViolated(format!(
                "sup |F_{} - H_{}| may reach {:.6e}, not below 1/(24N) = {threshold:.6e}",
                j + 1,
                j + 1,
                r.certified_bound
            )));
        }
        difference_bounds.push(r.certified_bound);
    }
    let mut g = TrigPoly::constant(&table, real(rat(1, 4)));
    for j in 0..n {
        g = g.sub(&fs[j].mul(&fs[n + j])?)?;
    }
    let mut f = g;
    for j in 0..n {
        f = f.add(&hs[j].mul(&fs[n + j])?)?;
    }
    let target = f.scale(&real(int(4))).sub(&TrigPoly::one(&table))?;
    let t = transfer(&target)?;
    let r = torus_max_abs(&t.q, settings.grid_for(t.q.dim()), settings.refinements)?;
    Ok(ResistanceReport {
        n,
        threshold,
        difference_bounds,
        max_value: r.value,
        certified_max: r.certified_bound,
        within_half: r.certified_bound <= 0.5,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank {
    Finite(u64),
    Infinite,
}

impl Serialize for Rank {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Rank::Finite(n) => s.serialize_u64(*n),
            Rank::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl std::fmt::Display for Rank {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rank::Finite(n) => write!(f, "{n}"),
            Rank::Infinite => f.write_str("∞"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RankPair {
    pub bsr: Rank,
    pub tsr: Rank,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StableRankTable {
    pub n: u64,
    /// The polydisk algebra `A(𝔻^N)`.
    pub polydisk: RankPair,
    /// `C(T^N, ℂ)`.
    pub torus: RankPair,
    pub ap: RankPair,
    /// `AP_Λ` with `dim_ℚ [Λ] = ∞`.
    pub ap_lambda: RankPair,
    pub ap_plus: RankPair,
    pub apw_plus: RankPair,
}

/// Known Bass and topological stable ranks of the algebras involved.
pub fn stable_rank_reference(n: u64) -> Result<StableRankTable> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let half = n / 2 + 1;
    let inf = RankPair { bsr: Rank::Infinite, tsr: Rank::Infinite };
    Ok(StableRankTable {
        n,
        polydisk: RankPair { bsr: Rank::Finite(half), tsr: Rank::Finite(n + 1) },
        torus: RankPair { bsr: Rank::Finite(half), tsr: Rank::Finite(half) },
        ap: inf,
        ap_lambda: inf,
        ap_plus: inf,
        apw_plus: inf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::coeff;

    #[test]
    fn fundamental_small() {
        let ex = example_fundamental(1, 1).unwrap();
        let z = |k| LaurentPoly::var(4, k);
        let f1 = z(0).add(&z(1)).unwrap().sub(&LaurentPoly::one(4)).unwrap();
        let f2 = z(2).add(&z(3)).unwrap().sub(&LaurentPoly::one(4)).unwrap();
        assert_eq!(ex.fs[0], f1);
        let g = LaurentPoly::constant(4, real(rat(1, 4))).sub(&f1.mul(&f2).unwrap()).unwrap();
        assert_eq!(ex.g, g);
        assert_eq!(ex.g.len(), 9);
        assert!(ex.identity_holds());
        assert_eq!(ex.tuple().len(), 2);
    }

    #[test]
    fn identity_for_all_small_cases() {
        for n in 1..=3 {
            for s in 1..=3 {
                assert!(example_fundamental(n, s).unwrap().identity_holds(), "N={n} s={s}");
            }
        }
    }

    #[test]
    fn term_counts() {
        let ex = example_fundamental(2, 2).unwrap();
        assert_eq!(ex.fs[0].len(), 3);
        // two products of three-term factors share only the constant
        assert_eq!(ex.g.len(), 17);
    }

    #[test]
    fn rejects_degenerate() {
        assert!(example_fundamental(0, 1).is_err());
        assert!(example_fundamental(1, 0).is_err());
        assert!(stable_rank_reference(0).is_err());
    }

    fn table() -> Arc<GeneratorTable> {
        Arc::new(
            GeneratorTable::from_pairs(&[
                ("w1", "1"),
                ("w2", "1.41421356237309504880168872420969807"),
                ("w3", "1.73205080756887729352744634150587237"),
                ("w4", "2.23606797749978969640917366873127624"),
            ])
            .unwrap(),
        )
    }

    fn gens(t: &GeneratorTable) -> Vec<Frequency> {
        ["w1", "w2", "w3", "w4"].iter().map(|g| t.generator(g).unwrap()).collect()
    }

    #[test]
    fn general_family() {
        let t = table();
        let l = gens(&t);
        let fs = example_general(&t, &l[..2]).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].render(), "(-1+0i) + (1+0i)*e(w2) + (1+0i)*e(w1)");
        assert_eq!(fs[0].wiener_norm(), 3.0);
        let dup = vec![l[0].clone(), l[0].clone()];
        assert!(matches!(example_general(&t, &dup), Err(Error::Dependent)));
        assert!(example_general(&t, &l[..3]).is_err());
    }

    #[test]
    fn resistance_exact_and_perturbed() {
        let t = table();
        let l = gens(&t);
        let fs = example_general(&t, &l).unwrap();
        let settings = SearchSettings::default();
        let r = approximation_resistance_check(&l, &fs[..1], &settings).unwrap();
        assert_eq!(r.max_value, 0.0);
        assert_eq!(r.certified_max, 0.0);

        let c = TrigPoly::constant(&t, coeff(rat(1, 48), int(0)));
        let h = vec![fs[0].add(&c).unwrap()];
        let r = approximation_resistance_check(&l, &h, &settings).unwrap();
        assert!(r.within_half);
        assert!((r.max_value - 0.25).abs() < 1e-9, "{}", r.max_value);
        assert!(r.certified_max <= 0.5 + 1e-9);

        let big = TrigPoly::constant(&t, real(rat(1, 10)));
        let h = vec![fs[0].add(&big).unwrap()];
        assert!(matches!(
            approximation_resistance_check(&l, &h, &settings),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn rank_table() {
        let r = stable_rank_reference(1).unwrap();
        assert_eq!(r.polydisk, RankPair { bsr: Rank::Finite(1), tsr: Rank::Finite(2) });
        assert_eq!(r.torus, RankPair { bsr: Rank::Finite(1), tsr: Rank::Finite(1) });
        let r = stable_rank_reference(4).unwrap();
        assert_eq!(r.polydisk, RankPair { bsr: Rank::Finite(3), tsr: Rank::Finite(5) });
        assert_eq!(r.torus.tsr, Rank::Finite(3));
        assert_eq!(r.ap_plus.bsr, Rank::Infinite);
        assert_eq!(serde_json::to_value(r.ap.bsr).unwrap(), serde_json::json!("infinite"));
    }
}
