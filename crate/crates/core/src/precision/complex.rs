use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;

use super::{Precision, Real};
use crate::error::{Error, Result};

/// Precision-tagged arbitrary-precision complex number.
///
/// Components are stored with `prec.bits()` mantissa bits. Binary operations
/// between numbers of different precision produce the smaller precision.
#[derive(Clone)]
pub struct BigComplex {
    re: Real,
    im: Real,
    prec: Precision,
}

impl BigComplex {
    pub fn new(re: Real, im: Real, prec: Precision) -> Self {
        let b = prec.bits();
        BigComplex { re: re.round_to(b), im: im.round_to(b), prec }
    }

    pub fn from_real(re: Real, prec: Precision) -> Self {
        Self::new(re, Real::zero(prec.bits()), prec)
    }

    pub fn zero(prec: Precision) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn one(prec: Precision) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn i(prec: Precision) -> Self {
        Self::new(Real::zero(prec.bits()), Real::one(prec.bits()), prec)
    }

    pub fn from_i64(v: i64, prec: Precision) -> Self {
        Self::from_real(Real::from_i64(v, prec.bits()), prec)
    }

    pub fn from_f64(re: f64, im: f64, prec: Precision) -> Self {
        Self::new(Real::from_f64(re, prec.bits()), Real::from_f64(im, prec.bits()), prec)
    }

    pub fn from_rational(q: &BigRational, prec: Precision) -> Self {
        Self::from_real(Real::from_rational(q, prec.bits()), prec)
    }

    pub fn from_rationals(re: &BigRational, im: &BigRational, prec: Precision) -> Self {
        Self::new(Real::from_rational(re, prec.bits()), Real::from_rational(im, prec.bits()), prec)
    }

    pub fn re(&self) -> &Real {
        &self.re
    }

    pub fn im(&self) -> &Real {
        &self.im
    }

    pub fn prec(&self) -> Precision {
        self.prec
    }

    /// Re-tags the value with another precision (extends or rounds the components).
    pub fn with_prec(&self, prec: Precision) -> Self {
        Self::new(self.re.clone(), self.im.clone(), prec)
    }

    pub(crate) fn elevated(&self, extra: usize) -> Self {
        self.with_prec(self.prec.elevated(extra))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// Turns NaN/∞ into an error instead of letting it propagate.
    pub fn ensure_finite(self, ctx: &'static str) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::NonFinite(ctx))
        }
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im, self.prec)
    }

    pub fn norm_sqr(&self) -> Real {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    pub fn arg(&self) -> Real {
        self.im.atan2(&self.re)
    }

    pub fn scale(&self, k: &Real) -> Self {
        Self::new(&self.re * k, &self.im * k, self.prec)
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        self.scale(&Real::from_i64(k, self.prec.bits()))
    }

    pub fn div_i64(&self, k: i64) -> Self {
        let d = Real::from_i64(k, self.prec.bits());
        Self::new(&self.re / &d, &self.im / &d, self.prec)
    }

    pub fn add_real(&self, x: &Real) -> Self {
        Self::new(&self.re + x, self.im.clone(), self.prec)
    }

    pub fn add_i64(&self, k: i64) -> Self {
        self.add_real(&Real::from_i64(k, self.prec.bits()))
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        Self::new(&self.re / &n, -(&self.im / &n), self.prec)
    }

    pub fn exp(&self) -> Self {
        let r = self.re.exp();
        Self::new(&r * &self.im.cos(), &r * &self.im.sin(), self.prec)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        Self::new(self.norm_sqr().ln().ldexp(-1), self.arg(), self.prec)
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        if self.re.is_zero() && self.im.is_zero() {
            return self.clone();
        }
        let m = self.abs();
        let a = (&m + &self.re).abs().ldexp(-1).sqrt();
        let b = (&m - &self.re).abs().ldexp(-1).sqrt();
        let b = if self.im.is_negative() { -b } else { b };
        Self::new(a, b, self.prec)
    }

    /// Principal power `self^w = exp(w log self)`.
    pub fn pow(&self, w: &BigComplex) -> Self {
        (&self.ln() * w).exp()
    }

    pub fn powi(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one(self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn sin(&self) -> Self {
        let (ch, sh) = cosh_sinh(&self.im);
        Self::new(&self.re.sin() * &ch, &self.re.cos() * &sh, self.prec)
    }

    pub fn cos(&self) -> Self {
        let (ch, sh) = cosh_sinh(&self.im);
        Self::new(&self.re.cos() * &ch, -(&self.re.sin() * &sh), self.prec)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// `|self - other|`.
    pub fn dist(&self, other: &BigComplex) -> Real {
        (self - other).abs()
    }

    /// Decimal rendering: `a`, `a+bi` or `a-bi` with `digits` significant digits per part.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.im.is_zero() {
            return self.re.to_decimal(digits);
        }
        let im = self.im.abs().to_decimal(digits);
        let sign = if self.im.is_negative() { '-' } else { '+' };
        format!("{}{}{}i", self.re.to_decimal(digits), sign, im)
    }
}

fn cosh_sinh(x: &Real) -> (Real, Real) {
    let e = x.exp();
    let ei = e.recip();
    ((&e + &ei).ldexp(-1), (&e - &ei).ldexp(-1))
}

fn min_prec(a: &BigComplex, b: &BigComplex) -> Precision {
    if a.prec.bits() <= b.prec.bits() {
        a.prec
    } else {
        b.prec
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &'a BigComplex) -> BigComplex {
        BigComplex::new(&self.re + &rhs.re, &self.im + &rhs.im, min_prec(self, rhs))
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &'a BigComplex) -> BigComplex {
        BigComplex::new(&self.re - &rhs.re, &self.im - &rhs.im, min_prec(self, rhs))
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &'a BigComplex) -> BigComplex {
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        BigComplex::new(re, im, min_prec(self, rhs))
    }
}

impl<'a> Div<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: &'a BigComplex) -> BigComplex {
        if rhs.im.is_zero() {
            return BigComplex::new(&self.re / &rhs.re, &self.im / &rhs.re, min_prec(self, rhs));
        }
        let n = rhs.norm_sqr();
        let re = &(&(&self.re * &rhs.re) + &(&self.im * &rhs.im)) / &n;
        let im = &(&(&self.im * &rhs.re) - &(&self.re * &rhs.im)) / &n;
        BigComplex::new(re, im, min_prec(self, rhs))
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: BigComplex) -> BigComplex {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: &'a BigComplex) -> BigComplex {
                (&self).$m(rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(-&self.re, -&self.im, self.prec)
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        -&self
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigComplex({} @{})", self.to_decimal(30), self.prec.bits())
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(f.precision().unwrap_or(25)))
    }
}
