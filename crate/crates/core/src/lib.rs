//! Explicit arithmetic around the exceptional zero phenomenon for p-adic
//! L-functions: Kubota-Leopoldt values and derivatives, circular and
//! elliptic units, Morita's p-adic gamma function, derived (Solomon) units
//! and L-invariants.
//!
//! Everything computes with explicit finite-precision objects. p-adic
//! numbers carry their own precision, complex numbers are fixed-point over
//! `BigInt`, and identity checks report the p-adic depth to which the two
//! sides agree rather than a bare boolean.

pub mod chars;
pub mod circ;
pub mod error;
pub mod exact;
pub mod kl;
pub mod padic;
pub mod report;

pub use error::{Error, Result};
pub use exact::bigfloat::{BigComplex, BigFixed};
pub use padic::algebra::{AlgCtx, AlgEl};
pub use padic::number::{Depth, Padic};
