//! Circular units and their derived (Solomon) refinements.
//!
//! Units are carried as formal products of cyclotomic generators 1 - zeta^a
//! with exact cyclotomic exponents, so norm maps, Galois action, and the
//! derivative operator are exact bookkeeping on exponent vectors. Numbers
//! enter only at the boundary: weighted p-adic logarithms and valuations of
//! a formal unit, which feed the limit-formula checks.

pub mod checks;
pub mod formal;
pub mod logs;

pub use checks::{verify_buyukboduk, verify_leopoldt, verify_norm_tower, verify_solomon};
pub use formal::{
    chi_project, circular_unit, crt_pair, norm_map, solomon_derived, solomon_derived_with,
    xi_unit, DerivedUnit, FormalUnit,
};
pub use logs::{weighted_log, weighted_log_scalar, weighted_valuation};
