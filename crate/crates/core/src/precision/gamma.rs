//! Γ, log Γ, ψ and ψ^(m) by the Stirling series after an upward shift.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::bernoulli::{bernoulli_b2n, factorial};
use super::{BigComplex, Precision, Real};
use crate::error::{Error, Result};

/// Derivative order of the polygamma function; `m = 0` is the digamma function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolygammaOrder(u32);

impl PolygammaOrder {
    pub fn new(m: u32) -> Self {
        PolygammaOrder(m)
    }

    pub fn m(&self) -> u32 {
        self.0
    }
}

/// Fails with [`Error::Pole`] when `z` is within `2^(-bits/2)` of a non-positive integer.
pub fn pole_check(z: &BigComplex) -> Result<()> {
    if !z.is_finite() {
        return Err(Error::NonFinite("gamma-family argument"));
    }
    let tol = z.prec().half_tolerance();
    if z.im().abs() >= tol {
        return Ok(());
    }
    let n = z.re().round_bigint();
    if n > BigInt::from(0) {
        return Ok(());
    }
    let d = (z.re() - &Real::from_bigint(&n, z.prec().working_bits())).abs();
    if d < tol {
        Err(Error::Pole(z.to_decimal(20)))
    } else {
        Ok(())
    }
}

// Number of unit shifts that moves z into the region where the asymptotic
// series converges to the working precision.
fn shift_count(z: &BigComplex, wbits: usize, m: u32) -> u64 {
    let target = 0.4 * wbits as f64 + m as f64;
    let x = z.re().to_f64();
    let y = z.im().to_f64().abs();
    let mut t = if x < 0.0 { (-x).ceil() } else { 0.0 };
    if y < target {
        let need = (target * target - y * y).sqrt() - x;
        t = t.max(need.ceil());
    }
    t.max(0.0) as u64
}

// log2 of |z|^2, or None for zero.
fn mag2(z: &BigComplex) -> Option<i64> {
    z.norm_sqr().exponent()
}

fn term_small(term: &BigComplex, lead: Option<i64>, wbits: usize) -> bool {
    match (mag2(term), lead) {
        (None, _) => true,
        (Some(t), Some(l)) => t < l - 2 * wbits as i64 - 8,
        (Some(t), None) => t < -2 * wbits as i64 - 8,
    }
}

const MAX_TERMS: usize = 400;

fn rational_c(q: &BigRational, p: Precision) -> BigComplex {
    BigComplex::from_rational(q, p)
}

// log Γ(w) for Re w large: (w-1/2) ln w - w + ln(2π)/2 + Σ B_2j / (2j(2j-1) w^(2j-1)).
fn ln_gamma_asymptotic(w: &BigComplex) -> BigComplex {
    let p = w.prec();
    let bits = p.bits();
    let lnw = w.ln();
    let half = BigComplex::from_f64(0.5, 0.0, p);
    let two_pi = Real::pi(bits).ldexp(1);
    let mut acc = &(&(w - &half) * &lnw) - w;
    acc = acc.add_real(&two_pi.ln().ldexp(-1));
    let lead = mag2(&acc);
    let winv = w.recip();
    let winv2 = &winv * &winv;
    let mut pw = winv.clone();
    for j in 1..MAX_TERMS {
        let jj = (2 * j) as i64;
        let c = bernoulli_b2n(j) / BigRational::from_integer(BigInt::from(jj * (jj - 1)));
        let term = &rational_c(&c, p) * &pw;
        acc = &acc + &term;
        if term_small(&term, lead, bits) {
            break;
        }
        pw = &pw * &winv2;
    }
    acc
}

// ψ^(m)(w) for Re w large.
fn polygamma_asymptotic(m: u32, w: &BigComplex) -> BigComplex {
    let p = w.prec();
    let bits = p.bits();
    let winv = w.recip();
    let winv2 = &winv * &winv;
    let mut acc;
    let mut pw;
    if m == 0 {
        acc = &w.ln() - &winv.div_i64(2);
        pw = winv2.clone();
    } else {
        let wm = winv.powi(m as i64);
        let fm1 = Real::from_bigint(&factorial(m as u64 - 1), bits);
        let fm = Real::from_bigint(&factorial(m as u64), bits);
        acc = &wm.scale(&fm1) + &(&wm * &winv).scale(&fm.ldexp(-1));
        pw = &wm * &winv2;
    }
    let lead = mag2(&acc);
    for j in 1..MAX_TERMS {
        let jj = 2 * j as u64;
        let c = if m == 0 {
            -bernoulli_b2n(j) / BigRational::from_integer(BigInt::from(jj))
        } else {
            bernoulli_b2n(j) * BigRational::new(factorial(jj + m as u64 - 1), factorial(jj))
        };
        let term = &rational_c(&c, p) * &pw;
        acc = &acc + &term;
        if term_small(&term, lead, bits) {
            break;
        }
        pw = &pw * &winv2;
    }
    if m > 0 && m.is_multiple_of(2) {
        -acc
    } else {
        acc
    }
}

/// Γ(z) on ℂ minus the non-positive integers.
pub fn gamma(z: &BigComplex) -> Result<BigComplex> {
    pole_check(z)?;
    let prec = z.prec();
    let w = z.elevated(16);
    let t = shift_count(&w, w.prec().bits(), 0);
    let mut prod = BigComplex::one(w.prec());
    for j in 0..t {
        prod = &prod * &w.add_i64(j as i64);
    }
    let big = ln_gamma_asymptotic(&w.add_i64(t as i64)).exp();
    (&big / &prod).with_prec(prec).ensure_finite("gamma")
}

/// log Γ(z): the branch analytic on ℂ minus the non-positive real axis,
/// real for positive real `z`.
pub fn ln_gamma(z: &BigComplex) -> Result<BigComplex> {
    pole_check(z)?;
    let prec = z.prec();
    let w = z.elevated(16);
    let t = shift_count(&w, w.prec().bits(), 0);
    let mut acc = ln_gamma_asymptotic(&w.add_i64(t as i64));
    for j in 0..t {
        acc = &acc - &w.add_i64(j as i64).ln();
    }
    acc.with_prec(prec).ensure_finite("ln_gamma")
}

/// Digamma ψ(z) = Γ'(z)/Γ(z).
pub fn digamma(z: &BigComplex) -> Result<BigComplex> {
    polygamma(PolygammaOrder(0), z)
}

/// Polygamma ψ^(m)(z); `m = 0` gives the digamma function.
pub fn polygamma(m: PolygammaOrder, z: &BigComplex) -> Result<BigComplex> {
    pole_check(z)?;
    let m = m.0;
    let prec = z.prec();
    let w = z.elevated(16 + 2 * m as usize);
    let t = shift_count(&w, w.prec().bits(), m);
    let mut acc = polygamma_asymptotic(m, &w.add_i64(t as i64));
    // ψ^(m)(z) = ψ^(m)(z+t) - (-1)^m m! Σ_{j<t} (z+j)^(-m-1)
    let mut sum = BigComplex::zero(w.prec());
    for j in 0..t {
        let r = w.add_i64(j as i64).recip();
        sum = &sum + &r.powi(m as i64 + 1);
    }
    let fm = Real::from_bigint(&factorial(m as u64), w.prec().bits());
    let sum = sum.scale(&fm);
    acc = if m.is_multiple_of(2) { &acc - &sum } else { &acc + &sum };
    acc.with_prec(prec).ensure_finite("polygamma")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(bits: usize) -> Precision {
        Precision::new(bits).unwrap()
    }

    fn close(a: &BigComplex, b: &BigComplex, tol: f64) -> bool {
        a.dist(b).to_f64() <= tol
    }

    #[test]
    fn gamma_small_values() {
        let pr = p(128);
        let g = gamma(&BigComplex::from_i64(5, pr)).unwrap();
        assert!(close(&g, &BigComplex::from_i64(24, pr), 1e-33));
        let h = gamma(&BigComplex::from_f64(0.5, 0.0, pr)).unwrap();
        let sp = BigComplex::from_real(Real::pi(128).sqrt(), pr);
        assert!(close(&h, &sp, 1e-35));
        let n = gamma(&BigComplex::from_f64(-0.5, 0.0, pr)).unwrap();
        assert!(close(&n, &sp.mul_i64(-2), 1e-35));
    }

    #[test]
    fn poles_are_errors() {
        let pr = p(128);
        for v in [0i64, -1, -7] {
            assert!(matches!(gamma(&BigComplex::from_i64(v, pr)), Err(Error::Pole(_))));
            assert!(matches!(digamma(&BigComplex::from_i64(v, pr)), Err(Error::Pole(_))));
        }
        assert!(digamma(&BigComplex::from_f64(-3.0, 1e-30, pr)).is_err());
        assert!(digamma(&BigComplex::from_f64(-3.0, 1e-10, pr)).is_ok());
    }

    #[test]
    fn digamma_recurrence_complex() {
        let pr = p(192);
        let z = BigComplex::from_f64(-2.3, 0.7, pr);
        let lhs = &digamma(&z.add_i64(1)).unwrap() - &digamma(&z).unwrap();
        assert!(close(&lhs, &z.recip(), 1e-50));
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        let pr = p(128);
        let z = BigComplex::from_f64(3.25, -1.5, pr);
        let a = ln_gamma(&z).unwrap().exp();
        let b = gamma(&z).unwrap();
        assert!(close(&a, &b, 1e-33));
        // branch: imaginary part of ln Γ is continuous across Re z < 0 in the upper half plane
        let w = BigComplex::from_f64(-4.5, 0.1, pr);
        let lg = ln_gamma(&w).unwrap();
        assert!(close(&lg.exp(), &gamma(&w).unwrap(), 1e-30));
        assert!(lg.im().to_f64() < -3.0 * std::f64::consts::PI);
    }

    #[test]
    fn trigamma_at_one() {
        let pr = p(128);
        let v = polygamma(PolygammaOrder::new(1), &BigComplex::one(pr)).unwrap();
        let pi = Real::pi(128);
        let want = BigComplex::from_real((&pi * &pi).div_i64(6), pr);
        assert!(close(&v, &want, 1e-35));
    }
}
