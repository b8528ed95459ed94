//! Exact and numerical computation with almost periodic trigonometric
//! polynomials.
//!
//! Frequencies are exact rational vectors over declared real generators
//! ([`freqmod`]); polynomials `Σ a_j e^{iλ_j t}` carry exact complex-rational
//! coefficients ([`trigpoly`]). The [`torus`] module rewrites a polynomial as
//! a Laurent polynomial over a rational basis of its spectrum and computes
//! certified extrema there; [`corona`] builds invertibility reports, Bézout
//! cofactors and the non-reducible tuple constructions; [`aplus`] covers the
//! analytic trace.

pub mod aplus;
pub mod bohr;
pub mod corona;
pub mod error;
pub mod expr;
pub mod freqmod;
pub mod lattice;
pub mod rational;
pub mod torus;
pub mod trigpoly;
pub mod workspace;

pub use error::{Error, Result};
pub use freqmod::{Frequency, FrequencyBasis, GeneratorTable};
pub use rational::Coeff;
pub use torus::LaurentPoly;
pub use trigpoly::TrigPoly;
