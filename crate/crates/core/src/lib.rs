//! Exact computer algebra for translation-invariant Clifford QCA.
//!
//! A Clifford QCA on a D-dimensional lattice of prime-p qudits is represented
//! by a symplectic matrix over the Laurent polynomial ring F_p[x1^±, ..., xD^±]
//! equipped with the involution that transposes and inverts every variable.
//! This crate provides the exact arithmetic, the boundary-algebra machinery
//! that extracts an antihermitian form from a circuit-like QCA, Witt-group
//! witness computations on such forms, and a catalog of three-dimensional
//! examples with verified properties.

pub mod boundary;
pub mod catalog;
pub mod error;
pub mod groebner;
pub mod ring;
pub mod symplectic;
pub mod witt;

pub use error::{CaError, Result};
