use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::freqmod::{is_independent, Frequency};

/// Largest torus dimension the cell diagnostic accepts (8^8 cells).
pub const MAX_ORBIT_DIM: usize = 8;
const CELLS_PER_AXIS: usize = 8;

/// Occupancy of a coarse cell partition of the torus by a sampled line orbit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitReport {
    pub dim: usize,
    pub samples: u64,
    pub dt: f64,
    pub cells: u64,
    pub occupied: u64,
    pub fraction: f64,
}

/// Samples `t ↦ (e^{iλ_1 t}, …, e^{iλ_M t})` at `t = k·dt`, `k < count`, and
/// counts the occupied cells of the `8^M` partition. A density diagnostic,
/// not a proof; it refuses rationally dependent frequencies.
pub fn kronecker_orbit_sample(freqs: &[Frequency], count: u64, dt: f64) -> Result<OrbitReport> {
    if freqs.is_empty() || freqs.len() > MAX_ORBIT_DIM {
        return Err(Error::Domain(format!(
            "orbit dimension must be between 1 and {MAX_ORBIT_DIM}, got {}",
            freqs.len()
        )));
    }
    if !is_independent(freqs) {
        return Err(Error::Dependent);
    }
    if !(dt > 0.0) {
        return Err(Error::Domain("dt must be positive".into()));
    }
    let dim = freqs.len();
    let cells = (CELLS_PER_AXIS as u64).pow(dim as u32);
    let mut seen = vec![false; cells as usize];
    let two_pi = 2.0 * PI;
    for k in 0..count {
        let t = k as f64 * dt;
        let mut cell = 0usize;
        for f in freqs {
            let angle = (f.shadow() * t).rem_euclid(two_pi);
            let bin = ((angle / two_pi * CELLS_PER_AXIS as f64) as usize).min(CELLS_PER_AXIS - 1);
            cell = cell * CELLS_PER_AXIS + bin;
        }
        seen[cell] = true;
    }
    let occupied = seen.iter().filter(|s| **s).count() as u64;
    Ok(OrbitReport { dim, samples: count, dt, cells, occupied, fraction: occupied as f64 / cells as f64 })
}

/// Smallest `t` in `[0, t_max]` on a `dt` lattice whose orbit point is
/// closest (sup distance in angle) to `target`.
pub fn nearest_orbit_time(freqs: &[f64], target: &[f64], t_max: f64, dt: f64) -> (f64, f64) {
    let steps = (t_max / dt).floor() as u64;
    let mut best = (0.0, f64::INFINITY);
    for k in 0..=steps {
        let t = k as f64 * dt;
        let d = freqs
            .iter()
            .zip(target)
            .map(|(w, a)| {
                let x = (w * t - a).rem_euclid(2.0 * PI);
                x.min(2.0 * PI - x)
            })
            .fold(0.0, f64::max);
        if d < best.1 {
            best = (t, d);
        }
    }
    best
}
