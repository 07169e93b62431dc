//! Arbitrary-precision real and complex arithmetic plus the gamma family
//! (Γ, log Γ, ψ, ψ^(m)) on ℂ minus the non-positive integers.

mod bernoulli;
mod complex;
mod consts;
mod gamma;
mod real;

pub use bernoulli::bernoulli_b2n;
pub use complex::BigComplex;
pub use consts::{euler_gamma, log_bigint, log_const, pi_const, zeta_odd};
pub use gamma::{digamma, gamma, ln_gamma, pole_check, polygamma, PolygammaOrder};
pub use real::{format_rational, parse_rational, Real};

use crate::error::{Error, Result};

/// Working precision: `bits` of mantissa, plus `guard_bits` used internally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Precision {
    bits: usize,
    guard_bits: usize,
}

impl Precision {
    pub const MIN_BITS: usize = 64;

    /// Precision with the default guard `max(32, bits/8)`.
    pub fn new(bits: usize) -> Result<Self> {
        Self::with_guard(bits, (bits / 8).max(32))
    }

    pub fn with_guard(bits: usize, guard_bits: usize) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::Domain(format!("precision must be at least {} bits, got {bits}", Self::MIN_BITS)));
        }
        if guard_bits > bits {
            return Err(Error::Domain(format!("guard bits {guard_bits} exceed precision {bits}")));
        }
        Ok(Precision { bits, guard_bits })
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn guard_bits(&self) -> usize {
        self.guard_bits
    }

    /// Internal evaluation precision.
    pub fn working_bits(&self) -> usize {
        self.bits + self.guard_bits
    }

    /// Same guard rule at `factor` times the bits (used for cross-checks).
    pub fn scaled(&self, factor: usize) -> Self {
        Precision::new(self.bits * factor).expect("scaled precision is valid")
    }

    pub(crate) fn elevated(&self, extra: usize) -> Self {
        let bits = self.working_bits() + extra;
        Precision { bits, guard_bits: (bits / 8).max(32).min(bits) }
    }

    /// `2^(-bits/2)`: the tolerance used for identity checks and pole detection.
    pub fn half_tolerance(&self) -> Real {
        Real::one(64).ldexp(-((self.bits / 2) as i32))
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::new(128).expect("128 bits is valid")
    }
}
