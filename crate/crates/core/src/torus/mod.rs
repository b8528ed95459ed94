//! The Kronecker transfer from trigonometric polynomials to Laurent
//! polynomials on a torus, and certified extrema there.
//!
//! When the basis frequencies are independent over Q the line orbit is dense
//! in the torus, so the supremum and infimum over the real line equal the
//! maximum and minimum over the torus.

mod extremum;
mod laurent;
mod orbit;
mod transfer;

pub use extremum::{
    default_grid, torus_max_abs, torus_max_sumabs, torus_min_abs, torus_min_sumabs, ExtremumKind,
    ExtremumReport, Objective, MAX_EVALUATIONS,
};
pub use laurent::LaurentPoly;
pub use orbit::{kronecker_orbit_sample, nearest_orbit_time, OrbitReport, MAX_ORBIT_DIM};
pub use transfer::{
    back_substitute, transfer, transfer_many, transfer_many_with_frame, transfer_with_frame, JointTransfer,
    TransferResult,
};
