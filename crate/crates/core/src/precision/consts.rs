use std::sync::RwLock;

use num_bigint::BigInt;

use super::bernoulli::factorial;
use super::{polygamma, BigComplex, PolygammaOrder, Precision, Real};
use crate::error::{Error, Result};

static EULER_CACHE: RwLock<Option<Real>> = RwLock::new(None);

/// Euler's constant γ, by the Brent–McMillan Bessel-function formula.
pub fn euler_gamma(prec: Precision) -> BigComplex {
    let want = prec.working_bits();
    if let Some(c) = EULER_CACHE.read().expect("gamma cache").as_ref() {
        if c.bits() >= want {
            return BigComplex::from_real(c.round_to(want), prec);
        }
    }
    let v = brent_mcmillan(want);
    let mut cache = EULER_CACHE.write().expect("gamma cache");
    if cache.as_ref().is_none_or(|c| c.bits() < want) {
        *cache = Some(v.clone());
    }
    BigComplex::from_real(v, prec)
}

fn brent_mcmillan(bits: usize) -> Real {
    // error ~ e^(-4n); terms grow to ~ e^(2n) before decaying.
    let n = ((bits as f64) * std::f64::consts::LN_2 / 4.0).ceil() as i64 + 2;
    let wp = bits + bits / 2 + 64;
    let n2 = Real::from_i64(n * n, wp);
    let ln_n = Real::from_i64(n, wp).ln();
    let mut a = -&ln_n;
    let mut b = Real::one(wp);
    let mut u = a.clone();
    let mut v = b.clone();
    let kmax = (3.6 * n as f64).ceil() as i64 + 10;
    for k in 1..=kmax {
        b = (&b * &n2).div_i64(k * k);
        a = (&(&a * &n2).div_i64(k) + &b).div_i64(k);
        u = &u + &a;
        v = &v + &b;
    }
    (&u / &v).round_to(bits)
}

/// `log n` for a positive integer, as a real `BigComplex`.
pub fn log_const(n: u64, prec: Precision) -> Result<BigComplex> {
    if n == 0 {
        return Err(Error::Domain("log of zero".into()));
    }
    let wb = prec.working_bits();
    Ok(BigComplex::from_real(Real::from_u64(n, wb).ln(), prec))
}

pub fn pi_const(prec: Precision) -> BigComplex {
    BigComplex::from_real(Real::pi(prec.working_bits()), prec)
}

/// ζ(n) for odd `n ≥ 3`, via ζ(n) = -ψ^(n-1)(1)/(n-1)!.
pub fn zeta_odd(n: u32, prec: Precision) -> Result<BigComplex> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::Domain(format!("zeta_odd needs an odd argument >= 3, got {n}")));
    }
    let psi = polygamma(PolygammaOrder::new(n - 1), &BigComplex::one(prec))?;
    let f = Real::from_bigint(&factorial(n as u64 - 1), prec.working_bits());
    Ok(-psi.scale(&f.recip()))
}

/// Exact-integer variant of [`log_const`] for arguments beyond `u64`.
pub fn log_bigint(n: &BigInt, prec: Precision) -> Result<BigComplex> {
    if *n <= BigInt::from(0) {
        return Err(Error::Domain(format!("log of non-positive integer {n}")));
    }
    let wb = prec.working_bits();
    Ok(BigComplex::from_real(Real::from_bigint(n, wb).ln(), prec))
}
