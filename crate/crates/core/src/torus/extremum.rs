//! Certified extrema of `|q|` and `Σ_j |q_j|` on the torus.
//!
//! A uniform grid locates the best lattice point, coordinate-wise
//! golden-section search polishes it, and a Lipschitz bound turns the grid
//! optimum into a certificate: every torus point lies within `h√M/2` of a
//! grid point, and the objective moves by at most `L` per unit of angle.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::torus::laurent::Compiled;
use crate::torus::LaurentPoly;

/// Hard cap on grid evaluations.
pub const MAX_EVALUATIONS: u64 = 100_000_000;
const GOLDEN_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExtremumKind {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Objective {
    Abs,
    SumAbs { count: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremumReport {
    pub kind: ExtremumKind,
    pub objective: Objective,
    pub value: f64,
    pub point: Vec<f64>,
    /// Lower bound on the true minimum, or upper bound on the true maximum.
    pub certified_bound: f64,
    pub grid_density: usize,
    pub refinements: usize,
}

/// Grid density used when the caller does not pick one.
pub fn default_grid(dim: usize) -> usize {
    match dim {
        0..=3 => 64,
        4..=6 => 16,
        _ => 8,
    }
}

pub fn torus_min_abs(q: &LaurentPoly, grid: usize, refinements: usize) -> Result<ExtremumReport> {
    search(std::slice::from_ref(q), ExtremumKind::Min, Objective::Abs, grid, refinements)
}

pub fn torus_max_abs(q: &LaurentPoly, grid: usize, refinements: usize) -> Result<ExtremumReport> {
    search(std::slice::from_ref(q), ExtremumKind::Max, Objective::Abs, grid, refinements)
}

pub fn torus_min_sumabs(qs: &[LaurentPoly], grid: usize, refinements: usize) -> Result<ExtremumReport> {
    let objective = Objective::SumAbs { count: qs.len() };
    search(qs, ExtremumKind::Min, objective, grid, refinements)
}

pub fn torus_max_sumabs(qs: &[LaurentPoly], grid: usize, refinements: usize) -> Result<ExtremumReport> {
    let objective = Objective::SumAbs { count: qs.len() };
    search(qs, ExtremumKind::Max, objective, grid, refinements)
}

struct Problem {
    polys: Vec<Compiled>,
    dim: usize,
    sign: f64,
}

impl Problem {
    fn objective(&self, theta: &[f64]) -> f64 {
        self.polys.iter().map(|p| p.eval(theta).norm()).sum()
    }

    /// Quantity minimized internally.
    fn cost(&self, theta: &[f64]) -> f64 {
        self.sign * self.objective(theta)
    }
}

fn search(
    qs: &[LaurentPoly],
    kind: ExtremumKind,
    objective: Objective,
    grid: usize,
    refinements: usize,
) -> Result<ExtremumReport> {
    if qs.is_empty() {
        return Err(Error::Domain("no polynomials to optimize".into()));
    }
    let dim = qs[0].dim();
    if let Some(q) = qs.iter().find(|q| q.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: q.dim() });
    }
    if grid < 8 {
        return Err(Error::Domain(format!("grid density {grid} below 8")));
    }
    let evaluations = (grid as f64).powi(dim as i32);
    if evaluations > MAX_EVALUATIONS as f64 {
        return Err(Error::GridTooLarge { evaluations, cap: MAX_EVALUATIONS });
    }
    let problem = Problem {
        polys: qs.iter().map(Compiled::new).collect(),
        dim,
        sign: match kind {
            ExtremumKind::Min => 1.0,
            ExtremumKind::Max => -1.0,
        },
    };
    let lipschitz: f64 = qs.iter().map(|q| q.lipschitz()).sum();
    // Wiener bound widened by the float rounding of a term-by-term evaluation
    let terms: usize = qs.iter().map(|q| q.len()).sum();
    let wiener: f64 =
        qs.iter().map(|q| q.wiener_norm()).sum::<f64>() * (1.0 + 4.0 * f64::EPSILON * terms as f64);

    if dim == 0 {
        let value = problem.objective(&[]);
        return Ok(ExtremumReport {
            kind,
            objective,
            value,
            point: Vec::new(),
            certified_bound: value,
            grid_density: grid,
            refinements,
        });
    }

    let (grid_cost, grid_index) = grid_scan(&problem, grid);
    let h = 2.0 * PI / grid as f64;
    let mut point = index_to_angles(grid_index, dim, grid);
    polish(&problem, &mut point, h, refinements);
    for a in point.iter_mut() {
        *a = a.rem_euclid(2.0 * PI);
    }
    let mut value = problem.objective(&point);
    let grid_value = problem.sign * grid_cost;
    // the polish never loses ground on the grid optimum
    if problem.sign * value > grid_cost {
        point = index_to_angles(grid_index, dim, grid);
        value = problem.objective(&point);
    }
    let slack = lipschitz * h * (dim as f64).sqrt() / 2.0;
    let certified_bound = match kind {
        ExtremumKind::Min => grid_value - slack,
        ExtremumKind::Max => (grid_value + slack).min(wiener),
    };
    Ok(ExtremumReport {
        kind,
        objective,
        value,
        point,
        certified_bound,
        grid_density: grid,
        refinements,
    })
}

fn index_to_angles(mut index: u64, dim: usize, grid: usize) -> Vec<f64> {
    let mut digits = vec![0u64; dim];
    for d in (0..dim).rev() {
        digits[d] = index % grid as u64;
        index /= grid as u64;
    }
    digits.iter().map(|&i| 2.0 * PI * i as f64 / grid as f64).collect()
}

/// Minimum cost over the grid and its lexicographically smallest index.
fn grid_scan(problem: &Problem, grid: usize) -> (f64, u64) {
    let dim = problem.dim;
    let total = (grid as u64).pow(dim as u32);
    let g = grid as i64;
    let roots: Vec<Complex64> = (0..grid).map(|j| Complex64::cis(2.0 * PI * j as f64 / grid as f64)).collect();
    // exponents reduced once so index arithmetic stays small
    let polys: Vec<Compiled> = problem
        .polys
        .iter()
        .map(|p| Compiled {
            coeffs: p.coeffs.clone(),
            exps: p.exps.iter().map(|e| e.iter().map(|k| k.rem_euclid(g)).collect()).collect(),
        })
        .collect();
    let chunk = 4096u64;
    let chunks = total.div_ceil(chunk);
    let pick = |a: (f64, u64), b: (f64, u64)| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a };
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * chunk;
            let end = (start + chunk).min(total);
            let mut digits = vec![0i64; dim];
            let mut rest = start;
            for d in (0..dim).rev() {
                digits[d] = (rest % grid as u64) as i64;
                rest /= grid as u64;
            }
            let mut best = (f64::INFINITY, u64::MAX);
            for index in start..end {
                let val: f64 = polys.iter().map(|p| p.eval_grid(&digits, g, &roots).norm()).sum();
                let cost = problem.sign * val;
                if cost < best.0 || (cost == best.0 && index < best.1) {
                    best = (cost, index);
                }
                for d in (0..dim).rev() {
                    digits[d] += 1;
                    if digits[d] < g {
                        break;
                    }
                    digits[d] = 0;
                }
            }
            best
        })
        .reduce(|| (f64::INFINITY, u64::MAX), pick)
}

/// Rounds of coordinate descent, each a golden-section line search over
/// `[θ_n − h, θ_n + h]` per coordinate.
fn polish(problem: &Problem, point: &mut [f64], h: f64, rounds: usize) {
    let mut current = problem.cost(point);
    for _ in 0..rounds {
        let before = current;
        for n in 0..point.len() {
            let centre = point[n];
            let mut probe = point.to_vec();
            let mut line = |x: f64| {
                probe[n] = x;
                problem.cost(&probe)
            };
            let (x, fx) = golden_section(&mut line, centre - h, centre + h);
            if fx < current {
                point[n] = x;
                current = fx;
            }
        }
        if before - current <= 0.0 {
            break;
        }
    }
}

pub(crate) fn golden_section<F: FnMut(f64) -> f64>(f: &mut F, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > GOLDEN_TOL {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
