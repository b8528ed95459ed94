//! Compiles the listings of the guide in `book/src` as doctests, one module
//! per chapter so a failure points at its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/frequencies.md")]
pub mod frequencies {}
#[doc = include_str!("../../../book/src/polynomials.md")]
pub mod polynomials {}
#[doc = include_str!("../../../book/src/mean-values.md")]
pub mod mean_values {}
#[doc = include_str!("../../../book/src/torus.md")]
pub mod torus {}
#[doc = include_str!("../../../book/src/corona.md")]
pub mod corona {}
#[doc = include_str!("../../../book/src/witnesses.md")]
pub mod witnesses {}
#[doc = include_str!("../../../book/src/half-plane.md")]
pub mod half_plane {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
