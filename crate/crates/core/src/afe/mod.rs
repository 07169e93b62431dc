//! Numerical L-values from Dirichlet coefficients: the approximate functional
//! equation, direct summation, logarithmic derivatives and identity checks.

mod engine;
mod incgamma;
mod series;

pub use engine::{
    afe_l, afe_lambda, afe_terms, complete_l, direct_l, log_derivative, verify_identity, AFEConfig, DirectValue, DEFAULT_CUTOFF, GammaData,
    IdentityReport,
};
pub use incgamma::upper_incomplete_gamma;
pub use series::{delta_hilbert, delta_series, delta_twisted, kronecker, ramanujan_tau, real_character, CoefficientSeries};
