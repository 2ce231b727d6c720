//! Numerical toolkit for semiclassical Hermite-Gaussian and Laguerre-Gaussian
//! modes.
//!
//! The crate is organised bottom-up:
//!
//! - [`special`]: Hermite functions, Laguerre polynomials, Jacobi and
//!   Weierstrass elliptic functions.
//! - [`modes`]: HG/LG mode fields and ladder operators on HG coefficient
//!   expansions.
//! - [`grid`]: uniform sampling grids shared by every field-valued routine.
//! - [`wigner`]: standard and extended semiclassical Wigner transforms and
//!   the Weyl pairing identities.
//! - [`operator`]: the cubic model operator as a Jacobi matrix, its
//!   propagator and the pullback action on LG modes.
//! - [`su3`]: the eight two-mode generators and their commutator algebra.
//! - [`flow`]: the Hamilton flow of the operator's Weyl symbol, closed form
//!   and integrated.
//! - [`harness`]: transport-error studies and figure reproduction.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod flow;
pub mod grid;
pub mod harness;
pub mod modes;
pub mod operator;
pub mod special;
pub mod su3;
pub mod wigner;

mod par;

pub use error::{Error, Result};
pub use num_complex::Complex64;
