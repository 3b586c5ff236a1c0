//! Exact arithmetic: prime fields, Laurent polynomials, and matrices.

pub mod fp;
pub mod fpmat;
pub mod json;
pub mod matrix;
pub mod poly;

pub use fp::{is_prime, FpScalar};
pub use matrix::PolyMatrix;
pub use poly::{poly_arith, Exps, LaurentPoly, PolyOp, Ring, RingDesc};
