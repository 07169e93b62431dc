//! Reduction of polygamma values at rational points to the canonical basis.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::arith::factorize;
use super::expr::{ConstExpr, ConstSymbol};
use crate::error::{Error, Result};
use crate::precision::format_rational;

fn factorial(m: u32) -> BigInt {
    (1..=m as u64).fold(BigInt::one(), |a, j| a * BigInt::from(j))
}

fn r_int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `log n = Σ e_p log p` over the prime factorization of `n`.
pub fn log_n_expand(n: u64) -> Result<ConstExpr> {
    if n == 0 {
        return Err(Error::Domain("log of zero".into()));
    }
    let mut e = ConstExpr::zero();
    for (p, k) in factorize(n) {
        e.add_term(ConstSymbol::LogPrime(p), r_int(k));
    }
    Ok(e)
}

/// ψ^(m)(a/q + shift) over the canonical basis, for `0 < a < q`, `gcd(a, q) = 1`, `shift >= 0`.
pub fn reduce_polygamma(m: u32, a: i64, q: i64, shift: i64) -> Result<ConstExpr> {
    if !(0 < a && a < q) || a.gcd(&q) != 1 || shift < 0 {
        return Err(Error::Domain(format!(
            "reduce_polygamma needs 0 < a < q, gcd(a, q) = 1 and shift >= 0 (got a={a}, q={q}, shift={shift})"
        )));
    }
    reduce_psi(m, &(BigRational::new(a.into(), q.into()) + r_int(shift)))
}

/// ψ^(m)(x) over the canonical basis for any rational `x` off the non-positive integers.
pub fn reduce_psi(m: u32, x: &BigRational) -> Result<ConstExpr> {
    if x.is_integer() && !x.is_positive() {
        return Err(Error::Pole(format_rational(x)));
    }
    // x = y + n with y in (0, 1]
    let n = x.ceil().to_integer() - BigInt::one();
    let y = x - BigRational::from_integer(n.clone());
    let mut out = base_value(m, &y)?;
    out.add_term(ConstSymbol::One, shift_sum(m, &y, &n)?);
    Ok(out)
}

// ψ^(m)(y + n) - ψ^(m)(y) = (-1)^m m! Σ_{j=0}^{n-1} (y+j)^(-m-1), extended to n < 0.
fn shift_sum(m: u32, y: &BigRational, n: &BigInt) -> Result<BigRational> {
    let n = n.to_i64().ok_or_else(|| Error::Domain("shift too large".into()))?;
    let mut s = BigRational::zero();
    let (lo, hi, sign) = if n >= 0 { (0, n, 1) } else { (n, 0, -1) };
    for j in lo..hi {
        let t = y + r_int(j);
        s += num_traits::pow(t.recip(), m as usize + 1);
    }
    let mut c = r_int(factorial(m)) * s * r_int(sign);
    if m % 2 == 1 {
        c = -c;
    }
    Ok(c)
}

// ψ^(m)(y) for y in (0, 1].
fn base_value(m: u32, y: &BigRational) -> Result<ConstExpr> {
    let a = y.numer().to_u64().expect("numerator in range");
    let q = y.denom().to_u64().ok_or_else(|| Error::Domain("denominator too large".into()))?;
    if q == 1 {
        return Ok(at_one(m));
    }
    if q == 2 {
        if m == 0 {
            let mut e = ConstExpr::symbol(ConstSymbol::EulerGamma).scale_i64(-1);
            e.add_term(ConstSymbol::LogPrime(2), r_int(-2));
            return Ok(e);
        }
        let f = (BigInt::one() << (m as usize + 1)) - BigInt::one();
        return Ok(at_one(m).scale(&r_int(f)));
    }
    if q % 4 == 2 {
        // ψ^(m)(z + 1/2) = 2^(m+1) ψ^(m)(2z) - ψ^(m)(z) - [m = 0] 2 log 2, y = z + 1/2
        let h = (q / 2) as i64;
        let z = BigRational::new(BigInt::from((a as i64 - h) / 2), BigInt::from(h));
        let two_z = &z * r_int(2);
        let mut e = reduce_psi(m, &two_z)?.scale(&r_int(BigInt::one() << (m as usize + 1)));
        e = &e - &reduce_psi(m, &z)?;
        if m == 0 {
            e.add_term(ConstSymbol::LogPrime(2), r_int(-2));
        }
        return Ok(e);
    }
    if q == 4 && a == 3 && m == 0 {
        // reflection: ψ(3/4) = ψ(1/4) + π cot(π/4)
        let mut e = ConstExpr::symbol(ConstSymbol::PsiRat { m: 0, q: 4, a: 1 });
        e.add_term(ConstSymbol::Pi, BigRational::one());
        return Ok(e);
    }
    if m == 0 && q != 4 && 2 * a > q {
        // ψ(a/q) = [ψ(a'/q) + ψ(1 - a'/q)] - ψ(a'/q), a' = q - a
        let mut e = ConstExpr::symbol(ConstSymbol::PsiPair { q, a: q - a });
        e.add_term(ConstSymbol::PsiRat { m: 0, q, a: q - a }, -BigRational::one());
        return Ok(e);
    }
    Ok(ConstExpr::symbol(ConstSymbol::PsiRat { m, q, a }))
}

fn at_one(m: u32) -> ConstExpr {
    if m == 0 {
        ConstExpr::symbol(ConstSymbol::EulerGamma).scale_i64(-1)
    } else if m.is_multiple_of(2) {
        ConstExpr::term(ConstSymbol::ZetaOdd(m + 1), -r_int(factorial(m)))
    } else {
        ConstExpr::symbol(ConstSymbol::PsiRat { m, q: 1, a: 1 })
    }
}

/// `r(k, a, q) = Σ_{j=1}^{k-1} 1/(j - a/q)`.
pub fn r_rational(k: i64, a: i64, q: i64) -> Result<BigRational> {
    if k < 1 || !(0 < a && a < q) || a.gcd(&q) != 1 {
        return Err(Error::Domain(format!("r_rational needs k >= 1, 0 < a < q, gcd(a, q) = 1 (got {k}, {a}, {q})")));
    }
    let x = BigRational::new(a.into(), q.into());
    Ok((1..k).map(|j| (r_int(j) - &x).recip()).sum())
}

/// True when `k` is a positive even integer.
pub fn delta_k(k: &BigRational) -> bool {
    k.is_integer() && k.is_positive() && k.to_integer().is_even()
}

/// ψ^(2m)(k/2) as the base value at `beta/4` plus the rational
/// `4^(2m+1) (2m)! Σ_{j=0}^{[k/2]-1} (4j+beta)^(-2m-1) - δ_k 2^(2m+1) (2m)! / k^(2m+1)`.
pub fn psik2_expand(m: u32, k: &BigRational, beta: u32) -> Result<ConstExpr> {
    if m < 1 || !(1..=4).contains(&beta) {
        return Err(Error::Domain(format!("psik2_expand needs m >= 1 and beta in 1..4 (got m={m}, beta={beta})")));
    }
    let two_k = k * r_int(2);
    if !two_k.is_integer() || two_k < BigRational::one() {
        return Err(Error::Domain(format!("weight {} is not a positive half-integer", format_rational(k))));
    }
    let tk = two_k.to_integer();
    if tk.mod_floor(&BigInt::from(4)) != BigInt::from(beta % 4) {
        return Err(Error::Domain(format!("2k = {tk} is not congruent to {beta} mod 4")));
    }
    let mm = 2 * m;
    let fact = r_int(factorial(mm));
    let half_floor = (k / r_int(2)).floor().to_integer().to_i64().ok_or_else(|| Error::Domain("weight too large".into()))?;
    let mut sum = BigRational::zero();
    for j in 0..half_floor {
        let d = r_int(4 * j + beta as i64);
        sum += num_traits::pow(d.recip(), mm as usize + 1);
    }
    let mut rem = num_traits::pow(r_int(4), mm as usize + 1) * &fact * sum;
    if delta_k(k) {
        rem -= num_traits::pow(r_int(2), mm as usize + 1) * &fact / num_traits::pow(k.clone(), mm as usize + 1);
    }
    let mut out = reduce_psi(mm, &BigRational::new(beta.into(), 4.into()))?;
    out.add_term(ConstSymbol::One, rem);
    Ok(out)
}

/// Finite set of distinct positive integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerSet {
    elems: Vec<u64>,
}

impl IntegerSet {
    pub fn new(elems: Vec<u64>) -> Result<Self> {
        if elems.is_empty() {
            return Err(Error::Domain("integer set is empty".into()));
        }
        if elems.contains(&0) {
            return Err(Error::Domain("0 is divisible by every prime; property A is undefined".into()));
        }
        let mut sorted = elems.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != elems.len() {
            return Err(Error::Domain("integer set has repeated elements".into()));
        }
        Ok(IntegerSet { elems })
    }

    pub fn elems(&self) -> &[u64] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }
}

/// Property A: every element has a prime divisor that divides no other element.
pub fn property_a_check(s: &IntegerSet) -> bool {
    s.elems.iter().enumerate().all(|(i, &n)| {
        factorize(n)
            .iter()
            .any(|(p, _)| s.elems.iter().enumerate().all(|(j, &m)| i == j || m % p != 0))
    })
}
