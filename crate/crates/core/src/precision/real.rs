//! Arbitrary-precision real numbers.
//!
//! `Real` is a thin wrapper over [`astro_float::BigFloat`] that remembers the
//! mantissa precision it was produced at. Binary operations run at the smaller
//! of the two operand precisions.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word, WORD_BIT_SIZE};
use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    // astro-float caches pi/ln2 inside `Consts`; one cache per thread.
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    bits: usize,
}

impl Real {
    fn wrap(v: BigFloat, bits: usize) -> Self {
        Real { v, bits }
    }

    pub fn zero(bits: usize) -> Self {
        Self::from_i64(0, bits)
    }

    pub fn one(bits: usize) -> Self {
        Self::from_i64(1, bits)
    }

    pub fn from_i64(v: i64, bits: usize) -> Self {
        Self::wrap(BigFloat::from_i64(v, bits), bits)
    }

    pub fn from_u64(v: u64, bits: usize) -> Self {
        Self::wrap(BigFloat::from_u64(v, bits), bits)
    }

    /// Exact conversion of an `f64` (then rounded to `bits`, which is a no-op
    /// for `bits >= 53`).
    pub fn from_f64(v: f64, bits: usize) -> Self {
        Self::wrap(BigFloat::from_f64(v, bits), bits)
    }

    pub fn from_bigint(n: &BigInt, bits: usize) -> Self {
        if n.is_zero() {
            return Self::zero(bits);
        }
        let (sign, mag) = n.to_u64_digits();
        let words = u64_digits_to_words(&mag);
        let e = (words.len() * WORD_BIT_SIZE) as i32;
        let s = if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos };
        let mut v = BigFloat::from_words(&words, s, e);
        let _ = v.set_precision(bits, RM);
        Self::wrap(v, bits)
    }

    pub fn from_rational(q: &BigRational, bits: usize) -> Self {
        let wp = bits + 16;
        let num = Self::from_bigint(q.numer(), wp);
        let den = Self::from_bigint(q.denom(), wp);
        (&num / &den).round_to(bits)
    }

    pub fn pi(bits: usize) -> Self {
        Self::wrap(with_consts(|cc| cc.pi(bits, RM)), bits)
    }

    pub fn ln2(bits: usize) -> Self {
        Self::wrap(with_consts(|cc| cc.ln_2(bits, RM)), bits)
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    /// Same value at a different mantissa precision (rounds when shrinking).
    pub fn round_to(&self, bits: usize) -> Self {
        let mut v = self.v.clone();
        let _ = v.set_precision(bits, RM);
        Self::wrap(v, bits)
    }

    pub fn is_finite(&self) -> bool {
        !(self.v.is_nan() || self.v.is_inf())
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.v.is_zero() && self.v.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        !self.v.is_zero() && self.v.is_positive()
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.v.abs(), self.bits)
    }

    pub fn recip(&self) -> Self {
        Self::wrap(self.v.reciprocal(self.bits, RM), self.bits)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.v.sqrt(self.bits, RM), self.bits)
    }

    pub fn exp(&self) -> Self {
        let v = with_consts(|cc| self.v.exp(self.bits, RM, cc));
        Self::wrap(v, self.bits)
    }

    pub fn ln(&self) -> Self {
        let v = with_consts(|cc| self.v.ln(self.bits, RM, cc));
        Self::wrap(v, self.bits)
    }

    pub fn sin(&self) -> Self {
        let v = with_consts(|cc| self.v.sin(self.bits, RM, cc));
        Self::wrap(v, self.bits)
    }

    pub fn cos(&self) -> Self {
        let v = with_consts(|cc| self.v.cos(self.bits, RM, cc));
        Self::wrap(v, self.bits)
    }

    pub fn atan(&self) -> Self {
        let v = with_consts(|cc| self.v.atan(self.bits, RM, cc));
        Self::wrap(v, self.bits)
    }

    /// Principal argument of `x + i*self` in `(-pi, pi]`.
    pub fn atan2(&self, x: &Real) -> Self {
        let y = self;
        let bits = y.bits.min(x.bits);
        if x.is_zero() {
            let half_pi = Self::pi(bits).ldexp(-1);
            return if y.is_negative() {
                -half_pi
            } else if y.is_zero() {
                Self::zero(bits)
            } else {
                half_pi
            };
        }
        let base = (y / x).atan();
        if x.is_positive() {
            base
        } else if y.is_negative() {
            &base - &Self::pi(bits)
        } else {
            &base + &Self::pi(bits)
        }
    }

    pub fn powi(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one(self.bits);
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

    pub fn mul_i64(&self, k: i64) -> Self {
        self * &Self::from_i64(k, self.bits)
    }

    pub fn div_i64(&self, k: i64) -> Self {
        self / &Self::from_i64(k, self.bits)
    }

    /// Multiplies by `2^k` exactly.
    pub fn ldexp(&self, k: i32) -> Self {
        if self.v.is_zero() || !self.is_finite() {
            return self.clone();
        }
        let mut v = self.v.clone();
        let e = v.exponent().unwrap_or(0);
        v.set_exponent(e.saturating_add(k));
        Self::wrap(v, self.bits)
    }

    /// Binary exponent `e` with `|self| = 0.m * 2^e`, `None` for zero.
    pub fn exponent(&self) -> Option<i64> {
        if self.is_zero() || !self.is_finite() {
            None
        } else {
            self.v.exponent().map(i64::from)
        }
    }

    /// Approximate value as `f64` (saturates to +-inf / 0 outside the range).
    pub fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf() {
            return if self.v.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        let Some((m, _, s, e, _)) = self.v.as_raw_parts() else {
            return 0.0;
        };
        if m.iter().all(|w| *w == 0) {
            return 0.0;
        }
        let mut frac = 0.0f64;
        let mut scale = 1.0f64;
        for w in m.iter().rev().take(128 / WORD_BIT_SIZE + 1) {
            scale /= 2f64.powi(WORD_BIT_SIZE as i32);
            frac += (*w as f64) * scale;
        }
        let mag = ldexp_f64(frac, e);
        if s == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    /// Floor as a big integer.
    pub fn floor_bigint(&self) -> BigInt {
        let Some((m, _, s, e, _)) = self.v.as_raw_parts() else {
            return BigInt::zero();
        };
        let mant = words_to_biguint(m);
        let shift = e as i64 - (m.len() * WORD_BIT_SIZE) as i64;
        let (int, exact) = if shift >= 0 {
            (BigInt::from(mant << shift as usize), true)
        } else {
            let sh = (-shift) as usize;
            let q = &mant >> sh;
            let exact = (&q << sh) == mant;
            (BigInt::from(q), exact)
        };
        if s == Sign::Neg {
            if exact {
                -int
            } else {
                -int - 1
            }
        } else {
            int
        }
    }

    /// Nearest integer (ties away from zero).
    pub fn round_bigint(&self) -> BigInt {
        let half = Self::from_f64(0.5, self.bits + 2);
        if self.is_negative() {
            -(&self.abs() + &half).floor_bigint()
        } else {
            (self + &half).floor_bigint()
        }
    }

    pub fn to_i64_round(&self) -> Option<i64> {
        self.round_bigint().to_i64()
    }

    /// Exact rational value of the stored binary float.
    pub fn to_rational(&self) -> Option<BigRational> {
        let (m, _, s, e, _) = self.v.as_raw_parts()?;
        let mant = BigInt::from(words_to_biguint(m));
        let shift = e as i64 - (m.len() * WORD_BIT_SIZE) as i64;
        let mut q = if shift >= 0 {
            BigRational::from_integer(mant << shift as usize)
        } else {
            BigRational::new(mant, BigInt::one() << (-shift) as usize)
        };
        if s == Sign::Neg {
            q = -q;
        }
        Some(q)
    }

    /// Decimal rendering rounded to `digits` significant digits, trailing zeros dropped.
    pub fn to_decimal(&self, digits: usize) -> String {
        if !self.is_finite() {
            return if self.v.is_nan() { "NaN".into() } else if self.is_negative() { "-inf".into() } else { "inf".into() };
        }
        if self.is_zero() {
            return "0".into();
        }
        let digits = digits.max(1);
        let wp = self.bits.max(64) + 2 * digits * 4;
        let x = self.abs().round_to(wp);
        // log10|x| estimate from the binary exponent and the leading bits.
        let e2 = x.exponent().unwrap_or(0) as f64;
        let lead = x.ldexp(-(e2 as i32)).to_f64();
        let mut e10 = ((e2 + lead.log2()) * std::f64::consts::LOG10_2).floor() as i64;
        let mut int;
        loop {
            let shift = digits as i64 - 1 - e10;
            let ten = Real::from_i64(10, wp);
            let scaled = &x * &ten.powi(shift);
            int = scaled.round_bigint();
            let s = int.to_string();
            if s.len() > digits {
                e10 += 1;
                continue;
            }
            if s.len() < digits {
                e10 -= 1;
                continue;
            }
            break;
        }
        let mut s = int.to_string();
        while s.len() > 1 && s.ends_with('0') {
            s.pop();
        }
        let sign = if self.is_negative() { "-" } else { "" };
        if (-6..21).contains(&e10) {
            if e10 >= 0 {
                let e = e10 as usize;
                if e + 1 >= s.len() {
                    format!("{sign}{}{}", s, "0".repeat(e + 1 - s.len()))
                } else {
                    format!("{sign}{}.{}", &s[..=e], &s[e + 1..])
                }
            } else {
                format!("{sign}0.{}{}", "0".repeat((-e10 - 1) as usize), s)
            }
        } else {
            let rest = if s.len() > 1 { format!(".{}", &s[1..]) } else { String::new() };
            format!("{sign}{}{}e{}", &s[..1], rest, e10)
        }
    }

    pub fn max_of(a: &Real, b: &Real) -> Real {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

fn ldexp_f64(x: f64, e: i32) -> f64 {
    // split to avoid overflow of the intermediate power
    let mut r = x;
    let mut e = e;
    while e > 1000 {
        r *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        r *= 2f64.powi(-1000);
        e += 1000;
    }
    r * 2f64.powi(e)
}

fn u64_digits_to_words(d: &[u64]) -> Vec<Word> {
    if WORD_BIT_SIZE == 64 {
        d.iter().map(|x| *x as Word).collect()
    } else {
        d.iter().flat_map(|x| [(*x & 0xffff_ffff) as Word, (*x >> 32) as Word]).collect()
    }
}

fn words_to_biguint(m: &[Word]) -> BigUint {
    if WORD_BIT_SIZE == 64 {
        #[allow(clippy::unnecessary_cast)]
        let d: Vec<u64> = m.iter().map(|w| *w as u64).collect();
        let mut r = BigUint::zero();
        for w in d.iter().rev() {
            r = (r << 64usize) + BigUint::from(*w);
        }
        r
    } else {
        #[allow(clippy::unnecessary_cast)]
        let d: Vec<u32> = m.iter().map(|w| *w as u32).collect();
        BigUint::from_slice(&d)
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({} @{})", self.to_decimal(30), self.bits)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(25);
        f.write_str(&self.to_decimal(digits))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if !self.is_finite() || !other.is_finite() {
            return None;
        }
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

macro_rules! real_binop {
    ($tr:ident, $m:ident, $op:ident) => {
        impl<'a> $tr<&'a Real> for &'a Real {
            type Output = Real;
            fn $m(self, rhs: &'a Real) -> Real {
                let bits = self.bits.min(rhs.bits);
                Real::wrap(self.v.$op(&rhs.v, bits, RM), bits)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &'a Real) -> Real {
                (&self).$m(rhs)
            }
        }
    };
}

real_binop!(Add, add, add);
real_binop!(Sub, sub, sub);
real_binop!(Mul, mul, mul);
real_binop!(Div, div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(self.v.neg(), self.bits)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(self.v.clone().neg(), self.bits)
    }
}

/// Parses `p`, `p/q`, or a decimal literal such as `-1.25e-3` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.as_bytes().first()? {
        b'-' => (true, &mant[1..]),
        b'+' => (false, &mant[1..]),
        _ => (false, mant),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.bytes().chain(fp.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("0{ip}{fp}").parse().ok()?;
    let e10 = exp - fp.len() as i64;
    let ten = BigInt::from(10);
    let mut q = if e10 >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, e10 as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-e10) as usize))
    };
    if neg {
        q = -q;
    }
    Some(q)
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
