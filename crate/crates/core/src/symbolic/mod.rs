//! Exact arithmetic over a basis of transcendental constants: polygamma
//! values at rationals, logs of primes, γ, π, odd zeta values.

mod arith;
mod expr;
mod rank;
mod reduce;

pub use arith::{euler_phi, factorize, gcd, is_prime};
pub use expr::{rat, ConstExpr, ConstSymbol};
pub use rank::{bareiss_rank, coefficient_matrix, exact_rank, rank_lower_bound};
pub use reduce::{
    delta_k, log_n_expand, property_a_check, psik2_expand, r_rational, reduce_polygamma, reduce_psi, IntegerSet,
};
