//! Grids, quadrature rules and special functions.

mod airy;
mod gauss_hermite;
mod grid;
mod hermite;
mod quadrature;

pub use airy::{airy_ai, airy_ai_prime, airy_pair, airy_roots, AIRY_WINDOW};
pub use gauss_hermite::{gauss_hermite, GaussHermite};
pub use grid::Grid1D;
pub use hermite::{hermite_function, hermite_functions, HERMITE_MAX_ORDER};
pub use quadrature::{integrate_1d, integrate_2d, QuadratureKind, QuadratureRule};
