//! Scalar special functions.
//!
//! Everything here is a pure function of its arguments. Hermite functions are
//! the semiclassical (h-scaled, L²-normalised) ones; the elliptic machinery
//! only covers real parameters and the two real lines of a real lattice,
//! which is all the Hamilton flow needs.

mod elliptic;
mod hermite;
mod laguerre;
mod weierstrass;

pub use elliptic::{carlson_rf, complete_k, incomplete_f, jacobi_elliptic, JacobiTriple};
pub use hermite::{hermite_function, hermite_functions, ln_factorial};
pub use laguerre::laguerre_polynomial;
pub use weierstrass::{
    elliptic_invariants, weierstrass_p, weierstrass_p_complex, DiscriminantSign, EllipticInvariants, Line, Weierstrass,
    POLE_EXCLUSION_RADIUS,
};

pub(crate) use hermite::fill_hermite_scaled;
