//! The Kubota-Leopoldt p-adic L-function: exact values at non-positive
//! integers, Taylor expansions at integer centers, and the branch
//! conventions relating the two interpolation normalizations.

pub mod branches;
pub mod derivative;
pub mod washington;

pub use branches::{
    interpolated_in, interpolated_value, kl_derivative, kl_series, kl_value, pr_euler_factor,
    split_omega, Branch, EulerFactorPair, LSeries,
};
pub use derivative::{verify_washington, weighted_gamma_log};
pub use washington::{
    euler_bernoulli_in, euler_bernoulli_value, exact_value_at_nonpositive, series,
    series_twisted, teich_twist,
};
