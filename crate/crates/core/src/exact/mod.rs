//! Exact arithmetic shared by every pipeline: rationals, dense polynomials
//! over Q, cyclotomic fields, Bernoulli numbers, fixed-point real/complex
//! numbers, and lattice reduction.

pub mod bernoulli;
pub mod bigfloat;
pub mod cyclotomic;
pub mod lll;
pub mod poly;
pub mod rational;
