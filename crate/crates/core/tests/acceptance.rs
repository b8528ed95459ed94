//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every numeric reference here is computed by code in this file (direct
//! float evaluation, independent quadrature, closed-form formulas) rather
//! than by the library path under test.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use apalg::aplus::{extend, is_ap_plus, negative_spectrum_decay, AplusVerdict, HalfPlanePoint};
use apalg::bohr::{fb_exact, fb_numeric};
use apalg::corona::{
    approximation_resistance_check, bezout, example_fundamental, example_general, f_map, g_map,
    reduction_zero_witness, stable_rank_reference, unimodular, InvertibilityVerdict, Rank, SearchSettings,
    WitnessMethod, WitnessOptions,
};
use apalg::expr::parse_laurent;
use apalg::rational::{coeff, coeff_to_c64, from_f64, rat, real};
use apalg::torus::{back_substitute, torus_max_abs, torus_min_abs, transfer};
use apalg::{Frequency, GeneratorTable, LaurentPoly, TrigPoly};

type Check = Result<String, String>;

const SQRT: [(&str, &str); 8] = [
    ("w1", "1"),
    ("w2", "1.41421356237309504880168872420969807"),
    ("w3", "1.73205080756887729352744634150587237"),
    ("w4", "2.23606797749978969640917366873127624"),
    ("w5", "2.64575131106459059050161575363926043"),
    ("w6", "3.31662479035539984911493273667068668"),
    ("w7", "3.60555127546398929311922126747049594"),
    ("w8", "4.12310562561766054982140985597407702"),
];

fn table(n: usize) -> Arc<GeneratorTable> {
    Arc::new(GeneratorTable::from_pairs(&SQRT[..n]).unwrap())
}

fn gens(t: &GeneratorTable) -> Vec<Frequency> {
    t.entries().iter().map(|g| t.generator(&g.name).unwrap()).collect()
}

/// Float evaluation straight from the terms.
fn eval_oracle(p: &TrigPoly, t: f64) -> Complex64 {
    p.terms().map(|(f, a)| coeff_to_c64(a) * Complex64::new(0.0, f.shadow() * t).exp()).sum()
}

fn random_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> BigRational {
    rat(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

fn random_coeff(rng: &mut ChaCha8Rng, modulus: f64) -> apalg::Coeff {
    let r = modulus * rng.gen::<f64>();
    let a = rng.gen_range(-PI..PI);
    coeff(from_f64(r * a.cos()).unwrap(), from_f64(r * a.sin()).unwrap())
}

fn random_freq(rng: &mut ChaCha8Rng, t: &GeneratorTable, num: i64, den: i64) -> Frequency {
    t.frequency((0..t.len()).map(|_| random_rational(rng, num, den)).collect()).unwrap()
}

fn random_poly(rng: &mut ChaCha8Rng, t: &Arc<GeneratorTable>, max_terms: usize, num: i64, den: i64) -> TrigPoly {
    let k = rng.gen_range(1..=max_terms);
    let terms: Vec<_> = (0..k).map(|_| (random_freq(rng, t, num, den), random_coeff(rng, 2.0))).collect();
    TrigPoly::from_terms(t, terms)
}

/// A polynomial with nonnegative spectrum: nonnegative rational combinations.
fn random_aplus(rng: &mut ChaCha8Rng, t: &Arc<GeneratorTable>, max_terms: usize) -> TrigPoly {
    let k = rng.gen_range(1..=max_terms);
    let terms: Vec<_> = (0..k)
        .map(|_| {
            let coords = (0..t.len()).map(|_| rat(rng.gen_range(0..=3), rng.gen_range(1..=2))).collect();
            (t.frequency(coords).unwrap(), random_coeff(rng, 1.5))
        })
        .collect();
    TrigPoly::from_terms(t, terms)
}

/// 1. Exact identity Σ f_{N+j} f_j + g = 1/4.
fn exact_identity() -> Check {
    for n in 1..=3usize {
        for s in 1..=3u32 {
            let ex = example_fundamental(n, s).map_err(|e| e.to_string())?;
            let dim = 4 * n;
            // rebuild each factor from text, independently of the constructor
            for j in 0..2 * n {
                let text = format!("z{}^{s} + z{}^{s} - 1", 2 * j + 1, 2 * j + 2);
                if parse_laurent(&text, dim).unwrap() != ex.fs[j] {
                    return Err(format!("f_{} differs for N={n} s={s}", j + 1));
                }
            }
            let mut acc = ex.g.clone();
            for j in 0..n {
                acc = acc.add(&ex.fs[n + j].mul(&ex.fs[j]).unwrap()).unwrap();
            }
            if acc != LaurentPoly::constant(dim, real(rat(1, 4))) {
                return Err(format!("identity fails for N={n} s={s}: {}", acc.render()));
            }
        }
    }
    Ok("9 cases exact".into())
}

/// 2. transfer then back-substitution is the identity.
fn transfer_round_trip() -> Check {
    let t = table(3);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for k in 0..100 {
        let p = random_poly(&mut rng, &t, 6, 6, 6);
        let r = transfer(&p).map_err(|e| e.to_string())?;
        let back = back_substitute(&r.q, &r.scaled_freqs, &t).map_err(|e| e.to_string())?;
        if back != p {
            return Err(format!("case {k}: {} came back as {}", p.render(), back.render()));
        }
        // the torus point over t reproduces p(t)
        for tt in [0.3, -7.1, 123.4] {
            let z: Vec<Complex64> =
                r.scaled_freqs.iter().map(|m| Complex64::new(0.0, m.shadow() * tt).exp()).collect();
            worst = worst.max((r.q.eval_point(&z) - eval_oracle(&p, tt)).norm());
        }
    }
    if worst > 1e-9 {
        return Err(format!("pointwise mismatch {worst:e}"));
    }
    Ok(format!("100 polynomials exact, pointwise agreement {worst:.1e}"))
}

/// 3. f_s ∘ g_s = id on the slit disk.
fn maps_inverse() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for s in 1..=3u32 {
        for _ in 0..200 {
            let r = 2.0 * rng.gen::<f64>().sqrt();
            let th = rng.gen_range(-PI + 1e-6..PI - 1e-6);
            let z = Complex64::from_polar(r, th);
            let (a, b) = g_map(z, s).map_err(|e| e.to_string())?;
            let back = f_map(a, b, s).map_err(|e| e.to_string())?;
            // independent s-th powers via angles
            let oracle = Complex64::from_polar(1.0, s as f64 * a.arg()) + Complex64::from_polar(1.0, s as f64 * b.arg());
            worst = worst.max((back - z).norm()).max((oracle - z).norm());
        }
    }
    if worst > 1e-12 {
        return Err(format!("max error {worst:e}"));
    }
    Ok(format!("600 points, max error {worst:.1e}"))
}

/// 4. Torus extrema of F₁ against line sampling.
fn kronecker_extrema() -> Check {
    let t = table(2);
    let g = gens(&t);
    let f1 = example_general(&t, &g).map_err(|e| e.to_string())?.remove(0);
    let q = transfer(&f1).map_err(|e| e.to_string())?.q;
    let lo = torus_min_abs(&q, 64, 40).map_err(|e| e.to_string())?;
    let hi = torus_max_abs(&q, 64, 40).map_err(|e| e.to_string())?;
    if lo.value.abs() > 1e-6 {
        return Err(format!("torus min {:e}", lo.value));
    }
    if (hi.value - 3.0).abs() > 1e-9 {
        return Err(format!("torus max {}", hi.value));
    }
    let w2 = 2f64.sqrt();
    let (mut inf, mut sup) = (f64::INFINITY, 0.0f64);
    for k in 0..=10_000_000u64 {
        let tt = k as f64 * 1e-3;
        let v = (Complex64::cis(tt) + Complex64::cis(w2 * tt) - 1.0).norm();
        inf = inf.min(v);
        sup = sup.max(v);
    }
    if sup < 3.0 - 1e-2 || inf > 1e-2 {
        return Err(format!("line sampling reached inf {inf:e}, sup {sup}"));
    }
    Ok(format!("torus min {:.1e}, max {:.12}; line inf {inf:.2e}, sup {sup:.5}", lo.value, hi.value))
}

/// 5. Fourier–Bohr numeric estimates converge with the stated bound.
fn fourier_bohr() -> Check {
    let t = table(3);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for k in 0..10 {
        let p = random_poly(&mut rng, &t, 5, 4, 3);
        let lambda = if k % 2 == 0 {
            p.spectrum()[rng.gen_range(0..p.len())].clone()
        } else {
            random_freq(&mut rng, &t, 4, 3)
        };
        let exact = coeff_to_c64(&fb_exact(&p, &lambda));
        let mut scaled = Vec::new();
        for big_t in [1e2, 1e3, 1e4] {
            let est = fb_numeric(&p, &lambda, big_t).map_err(|e| e.to_string())?;
            let err = (est.value - exact).norm();
            if err > est.error_bound * (1.0 + 1e-12) + 1e-15 {
                return Err(format!("poly {k}, T={big_t}: error {err:e} above bound {:e}", est.error_bound));
            }
            // closed-form mean of each character over [-T, T]
            let oracle: Complex64 = p
                .terms()
                .map(|(f, a)| {
                    let x = (f.shadow() - lambda.shadow()) * big_t;
                    coeff_to_c64(a) * if x == 0.0 { 1.0 } else { x.sin() / x }
                })
                .sum();
            if (oracle - est.value).norm() > 1e-12 {
                return Err(format!("poly {k}, T={big_t}: value differs from sinc oracle"));
            }
            scaled.push(est.error_bound * big_t);
            checked += 1;
        }
        let (a, b) = (scaled.iter().cloned().fold(f64::INFINITY, f64::min), scaled.iter().cloned().fold(0.0, f64::max));
        if b > 0.0 && b / a > 1.01 {
            return Err(format!("poly {k}: bound·T varies by {}", b / a));
        }
    }
    Ok(format!("{checked} estimates inside their bounds, bound·T constant"))
}

/// 6. Explicit Bézout cofactors on certified tuples.
fn corona_bezout() -> Check {
    let t = table(2);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let settings = SearchSettings::default();
    let mut found = 0;
    let mut worst = 0.0f64;
    for _attempt in 0..400 {
        if found == 20 {
            break;
        }
        let n = rng.gen_range(1..=3);
        let fs: Vec<TrigPoly> = (0..n)
            .map(|_| {
                let c = TrigPoly::constant(&t, random_coeff(&mut rng, 2.0));
                c.add(&random_poly(&mut rng, &t, 2, 2, 2).scale(&real(rat(1, 2)))).unwrap()
            })
            .collect();
        let report = unimodular(&fs, &settings).map_err(|e| e.to_string())?;
        if report.verdict != InvertibilityVerdict::Invertible || report.certified_delta < 0.1 {
            continue;
        }
        found += 1;
        let sol = bezout(&fs, &report).map_err(|e| e.to_string())?;
        for k in 0..10_000 {
            let tt = 1e3 * k as f64 / 9_999.0;
            let q = sol.solvers_at(tt);
            let s: Complex64 = q.iter().zip(&fs).map(|(qj, f)| qj * eval_oracle(f, tt)).sum();
            worst = worst.max((s - 1.0).norm());
        }
    }
    if found < 20 {
        return Err(format!("only {found} certified tuples generated"));
    }
    if worst > 1e-8 {
        return Err(format!("residual {worst:e}"));
    }
    Ok(format!("20 tuples, max residual {worst:.1e}"))
}

/// 7. Zero witnesses for perturbed fundamental pairs.
fn zero_witness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut hs = vec![LaurentPoly::zero(4)];
    for _ in 0..20 {
        let k = rng.gen_range(1..=3);
        let terms: Vec<_> = (0..k)
            .map(|_| ((0..4).map(|_| rng.gen_range(-2..=2)).collect::<Vec<i64>>(), random_coeff(&mut rng, 1.0)))
            .collect();
        hs.push(LaurentPoly::from_terms(4, terms));
    }
    let opts = WitnessOptions { tol: 1e-6, ..WitnessOptions::default() };
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    for (k, h) in hs.iter().enumerate() {
        let start = Instant::now();
        let w = reduction_zero_witness(1, 1, std::slice::from_ref(h), &opts).map_err(|e| format!("instance {k}: {e}"))?;
        slowest = slowest.max(start.elapsed());
        if w.boundary_winding != Some(1) || w.method != WitnessMethod::WindingSubdivision {
            return Err(format!("instance {k}: winding {:?}", w.boundary_winding));
        }
        let z: Vec<Complex64> = w.torus_point.iter().map(|a| Complex64::cis(*a)).collect();
        if (z[2] - z[0].conj()).norm() > 1e-12 || (z[3] - z[1].conj()).norm() > 1e-12 {
            return Err(format!("instance {k}: point is off the conjugate subtorus"));
        }
        // f₁ + h g by hand
        let f1 = z[0] + z[1] - 1.0;
        let f2 = z[2] + z[3] - 1.0;
        let g = 0.25 - f1 * f2;
        let hv: Complex64 = h
            .terms()
            .map(|(e, a)| coeff_to_c64(a) * e.iter().zip(&z).map(|(k, zi)| zi.powi(*k as i32)).product::<Complex64>())
            .sum();
        let r = (f1 + hv * g).norm();
        if r > 1e-6 || (r - w.residual).abs() > 1e-12 {
            return Err(format!("instance {k}: residual {r:e} (reported {:e})", w.residual));
        }
        worst = worst.max(r);
    }
    if slowest > Duration::from_secs(10) {
        return Err(format!("slowest instance took {slowest:?}"));
    }
    Ok(format!("21 instances, winding 1 each, max residual {worst:.1e}, slowest {:.2} s", slowest.as_secs_f64()))
}

/// 8. Approximation resistance with H = F + c, |c| = 1/(48N).
fn approximation_resistance() -> Check {
    let mut lines = Vec::new();
    for n in 1..=2usize {
        let t = table(4 * n);
        let lambdas = gens(&t);
        let fs = example_general(&t, &lambdas).map_err(|e| e.to_string())?;
        for c in [coeff(rat(1, 48 * n as i64), rat(0, 1)), coeff(rat(0, 1), rat(-1, 48 * n as i64))] {
            let hs: Vec<TrigPoly> =
                fs[..n].iter().map(|f| f.add(&TrigPoly::constant(&t, c.clone())).unwrap()).collect();
            let r = approximation_resistance_check(&lambdas, &hs, &SearchSettings::default())
                .map_err(|e| e.to_string())?;
            if r.certified_max > 0.5 + 1e-9 {
                return Err(format!("N={n}: certified max {}", r.certified_max));
            }
            // 4F − 1 = 4c Σ F_{N+j}, whose modulus peaks at 4|c|·3N = 1/4
            if (r.max_value - 0.25).abs() > 1e-6 || r.certified_max < r.max_value {
                return Err(format!("N={n}: max {} certified {}", r.max_value, r.certified_max));
            }
            lines.push(format!("N={n}: {:.6}", r.certified_max));
        }
    }
    Ok(format!("certified max of |4F-1|: {}", lines.join(", ")))
}

/// 9. Negative Fourier–Bohr coefficients of AP⁺ polynomials decay like 1/T.
fn negative_decay() -> Check {
    let t = table(2);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let lambda = t.generator("w1").unwrap().neg();
    for k in 0..10 {
        let p = random_aplus(&mut rng, &t, 4);
        if is_ap_plus(&p) != AplusVerdict::Yes {
            return Err(format!("poly {k} is not in AP+"));
        }
        let wiener: f64 = p.terms().map(|(_, a)| coeff_to_c64(a).norm()).sum();
        let gap = p.terms().map(|(f, _)| (f.shadow() - lambda.shadow()).abs()).fold(f64::INFINITY, f64::min);
        let c = wiener / gap;
        let est = negative_spectrum_decay(&p, &lambda, &[1e2, 1e3, 1e4]).map_err(|e| e.to_string())?;
        for e in est {
            if e.value.norm() > c / e.half_length {
                return Err(format!("poly {k}, T={}: |value| {:e} above C/T", e.half_length, e.value.norm()));
            }
        }
    }
    Ok("10 polynomials, |mean| <= C/T at T = 1e2, 1e3, 1e4".into())
}

/// 10. Stable-rank reference values.
fn stable_ranks() -> Check {
    for n in 1..=8u64 {
        let r = stable_rank_reference(n).map_err(|e| e.to_string())?;
        let half = Rank::Finite(n / 2 + 1);
        let ok = r.polydisk.bsr == half
            && r.polydisk.tsr == Rank::Finite(n + 1)
            && r.torus.bsr == half
            && r.torus.tsr == half
            && [r.ap, r.ap_lambda, r.ap_plus, r.apw_plus].iter().all(|p| p.bsr == Rank::Infinite && p.tsr == Rank::Infinite);
        if !ok {
            return Err(format!("N={n}: {r:?}"));
        }
    }
    Ok("N = 1..8 match".into())
}

/// Truncated Poisson integral by Simpson's rule; the tail outside the
/// window contributes its kernel mass times the mean of `p`.
fn poisson_oracle(p: &TrigPoly, x: f64, y: f64) -> Complex64 {
    let half = 1e3 / y;
    let top = p.terms().map(|(f, _)| f.shadow().abs()).fold(0.0, f64::max);
    let h0 = (y / 8.0).min(if top > 0.0 { 2.0 * PI / (32.0 * top) } else { f64::INFINITY });
    let n = ((2.0 * half / h0).ceil() as usize).next_multiple_of(2);
    let h = 2.0 * half / n as f64;
    let f = |t: f64| eval_oracle(p, t) * (y / PI / ((x - t).powi(2) + y * y));
    let mut acc = f(x - half) + f(x + half);
    for k in 1..n {
        acc += f(x - half + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    let mean: Complex64 = p.terms().filter(|(f, _)| f.is_zero()).map(|(_, a)| coeff_to_c64(a)).sum();
    acc * (h / 3.0) + mean * (1.0 - 2.0 / PI * (half / y).atan())
}

/// 11. Holomorphic extension against the Poisson integral.
fn poisson_consistency() -> Check {
    let t = table(2);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let p = random_aplus(&mut rng, &t, 3);
        for _ in 0..5 {
            let x = rng.gen_range(-5.0..5.0);
            let y = rng.gen_range(0.25..2.0);
            let v = extend(&p, HalfPlanePoint::new(x, y).unwrap()).map_err(|e| e.to_string())?;
            worst = worst.max((v - poisson_oracle(&p, x, y)).norm());
        }
    }
    if worst > 1e-3 {
        return Err(format!("max difference {worst:e}"));
    }
    Ok(format!("100 points, max difference {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check, u64); 11] = [
        ("exact Bezout identity", exact_identity, 1),
        ("transfer round-trip", transfer_round_trip, 5),
        ("f_s after g_s is the identity", maps_inverse, 1),
        ("Kronecker transfer extrema", kronecker_extrema, 30),
        ("Fourier-Bohr convergence", fourier_bohr, 1),
        ("corona Bezout residuals", corona_bezout, 10),
        ("zero witnesses", zero_witness, 220),
        ("approximation resistance", approximation_resistance, 20),
        ("negative-coefficient decay", negative_decay, 1),
        ("stable-rank reference", stable_ranks, 1),
        ("Poisson consistency", poisson_consistency, 30),
    ];
    let mut failures = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        let outcome = match outcome {
            Ok(d) if secs > *budget as f64 => Err(format!("{d}; took {secs:.2} s, budget {budget} s")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.2} s): {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2} s): {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
