//! Arbitrary-precision evaluation and certification of closed-form identities
//! for logarithmic derivatives of L-functions inside the critical strip.

pub mod afe;
pub mod certificates;
pub mod error;
pub mod precision;
pub mod lfamilies;
pub mod symbolic;

pub use error::{Error, Result};
