//! Upper incomplete gamma Γ(a, y) for complex `a` and real `y > 0`.

use crate::error::{Error, Result};
use crate::precision::{gamma, BigComplex, Real};

const MAX_ITER: usize = 20_000;

/// Γ(a, y) = ∫_y^∞ e^(-t) t^(a-1) dt.
///
/// Uses the power series of γ(a, y) subtracted from Γ(a) when `y < |a| + 4`,
/// and a continued fraction (modified Lentz) otherwise.
pub fn upper_incomplete_gamma(a: &BigComplex, y: &Real) -> Result<BigComplex> {
    if !y.is_positive() {
        return Err(Error::Domain("incomplete gamma needs y > 0".into()));
    }
    let yf = y.to_f64();
    let af = a.abs().to_f64();
    // the series goes through Γ(a), so it is unusable next to the poles of Γ
    let near_pole = {
        let (re, im) = a.to_f64_pair();
        re < 0.5 && im.abs() < 1e-6 && (re - re.round()).abs() < 1e-6
    };
    if yf < af + 4.0 && !near_pole {
        series(a, y)
    } else {
        continued_fraction(a, y)
    }
}

fn series(a: &BigComplex, y: &Real) -> Result<BigComplex> {
    let prec = a.prec();
    // Γ(a) - γ(a, y) cancels roughly y/ln 2 bits when the result is small.
    let extra = (y.to_f64() / std::f64::consts::LN_2).ceil() as usize + 16;
    let wp = prec.elevated(extra);
    let a = a.with_prec(wp);
    let y = y.round_to(wp.bits());
    let yc = BigComplex::from_real(y.clone(), wp);
    let mut term = a.recip();
    let mut sum = term.clone();
    let mut ap = a.clone();
    for _ in 0..MAX_ITER {
        ap = ap.add_i64(1);
        term = &(&term * &yc) / &ap;
        sum = &sum + &term;
        let small = match (term.norm_sqr().exponent(), sum.norm_sqr().exponent()) {
            (None, _) => true,
            (Some(t), Some(s)) => t < s - 2 * wp.bits() as i64,
            _ => false,
        };
        if small {
            let lower = &(&(&a * &BigComplex::from_real(y.ln(), wp)).exp() * &BigComplex::from_real((-&y).exp(), wp)) * &sum;
            let full = gamma(&a)?;
            return (&full - &lower).with_prec(prec).ensure_finite("incomplete gamma series");
        }
    }
    Err(Error::NonFinite("incomplete gamma series did not converge"))
}

fn continued_fraction(a: &BigComplex, y: &Real) -> Result<BigComplex> {
    let prec = a.prec();
    let wp = prec.elevated(16);
    let a = a.with_prec(wp);
    let y = y.round_to(wp.bits());
    let tiny = BigComplex::from_real(Real::one(wp.bits()).ldexp(-(4 * wp.bits() as i32)), wp);
    let one = BigComplex::one(wp);
    let mut b = (&BigComplex::from_real(y.clone(), wp) - &a).add_i64(1);
    let mut c = tiny.recip();
    let mut d = b.recip();
    let mut h = d.clone();
    for i in 1..MAX_ITER as i64 {
        // a_i = -i (i - a)
        let an = (&a - &BigComplex::from_i64(i, wp)).mul_i64(i);
        b = b.add_i64(2);
        d = &(&an * &d) + &b;
        if d.norm_sqr().is_zero() {
            d = tiny.clone();
        }
        c = &b + &(&an / &c);
        if c.norm_sqr().is_zero() {
            c = tiny.clone();
        }
        d = d.recip();
        let del = &d * &c;
        h = &h * &del;
        let done = match (&del - &one).norm_sqr().exponent() {
            None => true,
            Some(e) => e < -2 * wp.bits() as i64,
        };
        if done {
            let pre = &(&a.add_i64(-1) * &BigComplex::from_real(y.ln(), wp)).exp() * &BigComplex::from_real((-&y).exp(), wp);
            // Γ(a, y) = e^-y y^a h
            let v = &(&pre * &h) * &BigComplex::from_real(y.clone(), wp);
            return v.with_prec(prec).ensure_finite("incomplete gamma continued fraction");
        }
    }
    Err(Error::NonFinite("incomplete gamma continued fraction did not converge"))
}
