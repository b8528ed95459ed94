//! Common zeros of `f_j + h_j g` for the fundamental example.
//!
//! On the subtorus `z_{j+2N} = conj(z_j)`, with `(z_{2j−1}, z_{2j}) = g_s(w_j + 1)`,
//! the tuple becomes `Φ(w)_j = w_j + h_j(z(w)) (1/4 − Σ|w_k|²)` on the ball
//! `Σ|w_k|² ≤ 1/4`. `Φ` is the identity on the boundary sphere, so it has an
//! interior zero. For `N = 1` the zero is located by winding-number
//! subdivision; for larger `N` by multistart Nelder–Mead.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::corona::examples::{example_fundamental, FundamentalExample};
use crate::corona::maps::g_map;
use crate::error::{Error, Result};
use crate::torus::LaurentPoly;

const EDGE_SAMPLES: usize = 512;
const MAX_EDGE_BISECTIONS: u32 = 40;
const MAX_JITTER_RETRIES: usize = 5;
const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WitnessMethod {
    WindingSubdivision,
    MultistartDescent,
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroWitness {
    /// Angles on `T^{4N}` in `[0, 2π)`.
    pub torus_point: Vec<f64>,
    pub line_t: Option<f64>,
    /// `max_j |f_j + h_j g|` evaluated from `torus_point`.
    pub residual: f64,
    pub method: WitnessMethod,
    /// `true` only for the degree-backed search; descent is a heuristic.
    pub certified: bool,
    /// Winding number of `Φ` around the boundary circle (`N = 1` only).
    pub boundary_winding: Option<i64>,
    /// Ball coordinates `w_j` as `[re, im]`.
    pub w: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessOptions {
    pub tol: f64,
    pub seed: u64,
    /// Starts for multistart descent.
    pub starts: usize,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions { tol: 1e-6, seed: 0x5eed, starts: 64 }
    }
}

struct Reduced<'a> {
    n: usize,
    s: u32,
    hs: &'a [LaurentPoly],
}

impl Reduced<'_> {
    /// The `4N` torus coordinates over `w`.
    fn lift(&self, w: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut z = vec![Complex64::new(0.0, 0.0); 4 * self.n];
        for (j, wj) in w.iter().enumerate() {
            let (a, b) = g_map(wj + 1.0, self.s)?;
            z[2 * j] = a;
            z[2 * j + 1] = b;
        }
        for k in 0..2 * self.n {
            z[k + 2 * self.n] = z[k].conj();
        }
        Ok(z)
    }

    fn phi(&self, w: &[Complex64]) -> Result<Vec<Complex64>> {
        let z = self.lift(w)?;
        let damp = 0.25 - w.iter().map(|x| x.norm_sqr()).sum::<f64>();
        Ok(w.iter().zip(self.hs).map(|(wj, h)| wj + h.eval_point(&z) * damp).collect())
    }
}

pub fn reduction_zero_witness(n: usize, s: u32, hs: &[LaurentPoly], opts: &WitnessOptions) -> Result<ZeroWitness> {
    let example = example_fundamental(n, s)?;
    if hs.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: hs.len() });
    }
    if let Some(h) = hs.iter().find(|h| h.dim() != 4 * n) {
        return Err(Error::DimensionMismatch { expected: 4 * n, found: h.dim() });
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let red = Reduced { n, s, hs };
    let (w, method, winding) = if n == 1 {
        let winding = boundary_winding(&red)?;
        if winding != 1 {
            return Err(Error::WindingAmbiguous(format!("boundary winding {winding}, expected 1")));
        }
        let w = subdivide(&red, opts)?;
        (vec![w], WitnessMethod::WindingSubdivision, Some(winding))
    } else {
        (descend(&red, opts)?, WitnessMethod::MultistartDescent, None)
    };
    let z = red.lift(&w)?;
    let torus_point: Vec<f64> = z.iter().map(|x| x.arg().rem_euclid(2.0 * PI)).collect();
    let residual = witness_residual(&example, hs, &torus_point);
    if !(residual <= opts.tol) {
        return Err(Error::DescentFailed { best: residual, tol: opts.tol });
    }
    Ok(ZeroWitness {
        torus_point,
        line_t: None,
        residual,
        method,
        certified: method == WitnessMethod::WindingSubdivision,
        boundary_winding: winding,
        w: w.iter().map(|x| [x.re, x.im]).collect(),
    })
}

/// `max_j |f_j + h_j g|` at a torus point, from the polynomials themselves.
pub fn witness_residual(example: &FundamentalExample, hs: &[LaurentPoly], angles: &[f64]) -> f64 {
    let g = example.g.eval_angles(angles);
    hs.iter()
        .zip(&example.fs)
        .map(|(h, f)| (f.eval_angles(angles) + h.eval_angles(angles) * g).norm())
        .fold(0.0, f64::max)
}

/// Square `[−1, 1]²` onto the disk of radius `1/2`, boundary onto boundary.
fn square_to_disk(x: f64, y: f64) -> Complex64 {
    let r2 = x.hypot(y);
    if r2 == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let scale = x.abs().max(y.abs()) / r2 / 2.0;
    Complex64::new(x * scale, y * scale)
}

/// Outcome of tracking `arg Φ` along a closed path.
enum Track {
    Turns(f64),
    /// A sample where `|Φ|` already meets the tolerance.
    Zero(Complex64),
    Ambiguous,
}

struct Planar<'a> {
    red: &'a Reduced<'a>,
    hit: f64,
}

impl Planar<'_> {
    fn value(&self, x: f64, y: f64) -> Result<(Complex64, Complex64)> {
        let w = square_to_disk(x, y);
        Ok((w, self.red.phi(&[w])?[0]))
    }

    fn edge(&self, a: (f64, f64), b: (f64, f64)) -> Result<Track> {
        let mut total = 0.0;
        let point = |t: f64| (a.0 + (b.0 - a.0) * t, a.1 + (b.1 - a.1) * t);
        let (w0, mut prev) = self.value(a.0, a.1)?;
        if prev.norm() <= self.hit {
            return Ok(Track::Zero(w0));
        }
        for k in 1..=EDGE_SAMPLES {
            let t1 = k as f64 / EDGE_SAMPLES as f64;
            let t0 = (k - 1) as f64 / EDGE_SAMPLES as f64;
            let p = point(t1);
            let (w, next) = self.value(p.0, p.1)?;
            if next.norm() <= self.hit {
                return Ok(Track::Zero(w));
            }
            match self.segment(&point, t0, prev, t1, next, 0)? {
                Track::Turns(d) => total += d,
                other => return Ok(other),
            }
            prev = next;
        }
        Ok(Track::Turns(total))
    }

    fn segment(
        &self,
        point: &dyn Fn(f64) -> (f64, f64),
        t0: f64,
        v0: Complex64,
        t1: f64,
        v1: Complex64,
        depth: u32,
    ) -> Result<Track> {
        let d = (v1 / v0).arg();
        if d.abs() <= PI / 2.0 {
            return Ok(Track::Turns(d));
        }
        if depth >= MAX_EDGE_BISECTIONS {
            return Ok(Track::Ambiguous);
        }
        let tm = 0.5 * (t0 + t1);
        let p = point(tm);
        let (w, vm) = self.value(p.0, p.1)?;
        if vm.norm() <= self.hit {
            return Ok(Track::Zero(w));
        }
        let left = match self.segment(point, t0, v0, tm, vm, depth + 1)? {
            Track::Turns(x) => x,
            other => return Ok(other),
        };
        match self.segment(point, tm, vm, t1, v1, depth + 1)? {
            Track::Turns(x) => Ok(Track::Turns(left + x)),
            other => Ok(other),
        }
    }

    /// Winding number around the rectangle `[x0, x1] × [y0, y1]`.
    fn winding(&self, x0: f64, x1: f64, y0: f64, y1: f64) -> Result<std::result::Result<i64, Complex64>> {
        let corners = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)];
        let mut total = 0.0;
        for k in 0..4 {
            match self.edge(corners[k], corners[(k + 1) % 4])? {
                Track::Turns(d) => total += d,
                Track::Zero(w) => return Ok(Err(w)),
                Track::Ambiguous => {
                    return Err(Error::WindingAmbiguous(format!(
                        "argument jump unresolved on [{x0}, {x1}] x [{y0}, {y1}]"
                    )))
                }
            }
        }
        let turns = total / (2.0 * PI);
        let rounded = turns.round();
        if (turns - rounded).abs() > 0.25 {
            return Err(Error::WindingAmbiguous(format!("non-integral winding {turns}")));
        }
        Ok(Ok(rounded as i64))
    }
}

/// Winding number of `Φ` around `|w| = 1/2` (`N = 1`).
fn boundary_winding(red: &Reduced) -> Result<i64> {
    let planar = Planar { red, hit: 0.0 };
    match planar.winding(-1.0, 1.0, -1.0, 1.0)? {
        Ok(k) => Ok(k),
        Err(w) => Err(Error::WindingAmbiguous(format!("zero on the boundary at {w}"))),
    }
}

/// Bisection of the square keeping a child with nonzero winding.
fn subdivide(red: &Reduced, opts: &WitnessOptions) -> Result<Complex64> {
    let planar = Planar { red, hit: opts.tol / 4.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (mut x0, mut x1, mut y0, mut y1) = (-1.0f64, 1.0f64, -1.0f64, 1.0f64);
    let mut winding = 1i64;
    for _ in 0..MAX_DEPTH {
        let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
        let (wc, vc) = planar.value(cx, cy)?;
        if vc.norm() <= planar.hit || (x1 - x0) < 1e-15 {
            return Ok(wc);
        }
        let mut attempt = 0;
        let next = loop {
            let (fx, fy) = if attempt == 0 {
                (0.5, 0.5)
            } else {
                (rng.gen_range(0.35..0.65), rng.gen_range(0.35..0.65))
            };
            match split(&planar, (x0, x1, y0, y1), (fx, fy), winding) {
                Ok(found) => break found,
                Err(e @ Error::WindingAmbiguous(_)) => {
                    attempt += 1;
                    if attempt > MAX_JITTER_RETRIES {
                        return Err(e);
                    }
                }
                Err(e) => return Err(e),
            }
        };
        match next {
            Split::Zero(w) => return Ok(w),
            Split::Child(rect, k) => {
                (x0, x1, y0, y1) = rect;
                winding = k;
            }
        }
    }
    Ok(planar.value(0.5 * (x0 + x1), 0.5 * (y0 + y1))?.0)
}

enum Split {
    Zero(Complex64),
    Child((f64, f64, f64, f64), i64),
}

fn split(planar: &Planar, rect: (f64, f64, f64, f64), frac: (f64, f64), parent: i64) -> Result<Split> {
    let (x0, x1, y0, y1) = rect;
    let xm = x0 + (x1 - x0) * frac.0;
    let ym = y0 + (y1 - y0) * frac.1;
    let children = [(x0, xm, y0, ym), (xm, x1, y0, ym), (x0, xm, ym, y1), (xm, x1, ym, y1)];
    let mut windings = [0i64; 4];
    for (k, c) in children.iter().enumerate() {
        match planar.winding(c.0, c.1, c.2, c.3)? {
            Ok(w) => windings[k] = w,
            Err(w) => return Ok(Split::Zero(w)),
        }
    }
    if windings.iter().sum::<i64>() != parent {
        return Err(Error::WindingAmbiguous(format!("children wind {windings:?}, parent {parent}")));
    }
    let k = windings.iter().position(|&w| w != 0).expect("nonzero parent winding");
    Ok(Split::Child(children[k], windings[k]))
}

/// Multistart Nelder–Mead on `Σ|Φ_j|²` over the ball; heuristic.
fn descend(red: &Reduced, opts: &WitnessOptions) -> Result<Vec<Complex64>> {
    let n = red.n;
    let dim = 2 * n;
    let objective = |x: &[f64]| -> f64 {
        let mut w: Vec<Complex64> = x.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect();
        let r = w.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        // outside the ball Φ would be evaluated at the projection, plus a penalty
        let excess = (r - 0.5).max(0.0);
        if excess > 0.0 {
            for v in w.iter_mut() {
                *v *= 0.5 / r;
            }
        }
        match red.phi(&w) {
            Ok(v) => v.iter().map(|c| c.norm_sqr()).sum::<f64>() + excess * excess,
            Err(_) => f64::INFINITY,
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let starts: Vec<Vec<f64>> = (0..opts.starts.max(1))
        .map(|_| {
            let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt().max(1e-12);
            let radius = 0.45 * rng.gen::<f64>().powf(1.0 / dim as f64);
            v.iter().map(|a| a * radius / norm).collect()
        })
        .collect();
    let results: Vec<(f64, usize, Vec<f64>)> = starts
        .par_iter()
        .enumerate()
        .map(|(i, x0)| {
            let (x, fx) = nelder_mead(&objective, x0, 0.05, 20_000, 1e-30);
            (fx, i, x)
        })
        .collect();
    let best = results
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .expect("at least one start");
    let residual = best.0.sqrt();
    if !(residual <= opts.tol) {
        return Err(Error::DescentFailed { best: residual, tol: opts.tol });
    }
    let mut w: Vec<Complex64> = best.2.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect();
    let r = w.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if r > 0.5 {
        for v in w.iter_mut() {
            *v *= 0.5 / r;
        }
    }
    Ok(w)
}

/// Standard Nelder–Mead with restarts around the incumbent.
fn nelder_mead<F: Fn(&[f64]) -> f64>(f: &F, x0: &[f64], step: f64, max_evals: usize, ftol: f64) -> (Vec<f64>, f64) {
    let dim = x0.len();
    let mut best = (x0.to_vec(), f(x0));
    let mut evals = 1;
    let mut step = step;
    while evals < max_evals {
        let mut simplex: Vec<(Vec<f64>, f64)> = vec![best.clone()];
        for k in 0..dim {
            let mut x = best.0.clone();
            x[k] += step;
            let fx = f(&x);
            simplex.push((x, fx));
        }
        evals += dim;
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let spread = simplex[dim].1 - simplex[0].1;
            if spread <= ftol * (1.0 + simplex[0].1.abs()) || evals >= max_evals || simplex[0].1 <= ftol {
                break;
            }
            let centroid: Vec<f64> =
                (0..dim).map(|k| simplex[..dim].iter().map(|p| p.0[k]).sum::<f64>() / dim as f64).collect();
            let along = |t: f64| -> Vec<f64> {
                centroid.iter().zip(&simplex[dim].0).map(|(c, w)| c + t * (w - c)).collect()
            };
            let xr = along(-1.0);
            let fr = f(&xr);
            evals += 1;
            if fr < simplex[0].1 {
                let xe = along(-2.0);
                let fe = f(&xe);
                evals += 1;
                simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[dim - 1].1 {
                simplex[dim] = (xr, fr);
            } else {
                let xc = if fr < simplex[dim].1 { along(-0.5) } else { along(0.5) };
                let fc = f(&xc);
                evals += 1;
                if fc < fr.min(simplex[dim].1) {
                    simplex[dim] = (xc, fc);
                } else {
                    let lead = simplex[0].0.clone();
                    for p in simplex.iter_mut().skip(1) {
                        p.0 = lead.iter().zip(&p.0).map(|(a, b)| a + 0.5 * (b - a)).collect();
                        p.1 = f(&p.0);
                    }
                    evals += dim;
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let improved = simplex[0].1 < best.1;
        if improved {
            best = simplex[0].clone();
        }
        if best.1 <= ftol {
            break;
        }
        step *= 0.1;
        if step < 1e-14 {
            break;
        }
    }
    best
}
