//! Groebner-basis engine and the commutative-algebra invariants built on it.

pub mod buchberger;
pub mod invariants;
pub mod module;
pub mod order;

pub use buchberger::{groebner_basis, leading_term, reduce, Caps};
pub use invariants::{
    check_complex_exact, determinantal_ideal, grade, is_unit_ideal, krull_dimension,
    laurent_ideal_gb, laurent_module_membership, rank, ExactnessReport,
};
pub use module::ModuleBasis;
pub use order::MonOrder;
