use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::arith::is_prime;
use crate::error::{Error, Result};
use crate::precision::{
    digamma, euler_gamma, format_rational, log_const, parse_rational, pi_const, polygamma, zeta_odd, BigComplex,
    PolygammaOrder, Precision,
};

/// Basis element of the constant space.
///
/// The derived order (variant, then fields in declaration order) is the
/// canonical order used for printing and for matrix columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstSymbol {
    One,
    EulerGamma,
    Pi,
    LogPi,
    LogPrime(u64),
    /// ψ(a/q) + ψ(1 - a/q) with `a < q/2`.
    PsiPair { q: u64, a: u64 },
    /// ψ^(m)(a/q); `a = q = 1` is allowed for odd `m`.
    PsiRat { m: u32, q: u64, a: u64 },
    ZetaOdd(u32),
}

fn coprime_fraction(a: u64, q: u64) -> bool {
    a > 0 && a < q && a.gcd(&q) == 1
}

impl ConstSymbol {
    pub fn log_prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(ConstSymbol::LogPrime(p))
        } else {
            Err(Error::Domain(format!("log({p}): {p} is not prime")))
        }
    }

    pub fn psi_pair(a: u64, q: u64) -> Result<Self> {
        if coprime_fraction(a, q) && 2 * a < q {
            Ok(ConstSymbol::PsiPair { q, a })
        } else {
            Err(Error::Domain(format!("psipair({a}/{q}) needs 0 < a < q/2 and gcd(a, q) = 1")))
        }
    }

    pub fn psi_rat(m: u32, a: u64, q: u64) -> Result<Self> {
        if coprime_fraction(a, q) || (a == 1 && q == 1 && m % 2 == 1) {
            Ok(ConstSymbol::PsiRat { m, q, a })
        } else {
            Err(Error::Domain(format!("psi[{m}]({a}/{q}) is not a canonical symbol")))
        }
    }

    pub fn zeta_odd(n: u32) -> Result<Self> {
        if n >= 3 && n % 2 == 1 {
            Ok(ConstSymbol::ZetaOdd(n))
        } else {
            Err(Error::Domain(format!("zeta({n}) needs an odd argument >= 3")))
        }
    }

    /// Numerical value of the symbol.
    pub fn eval(&self, prec: Precision) -> Result<BigComplex> {
        let frac = |a: u64, q: u64| BigComplex::from_rational(&BigRational::new(a.into(), q.into()), prec);
        match *self {
            ConstSymbol::One => Ok(BigComplex::one(prec)),
            ConstSymbol::EulerGamma => Ok(euler_gamma(prec)),
            ConstSymbol::Pi => Ok(pi_const(prec)),
            ConstSymbol::LogPi => Ok(pi_const(prec).ln()),
            ConstSymbol::LogPrime(p) => log_const(p, prec),
            ConstSymbol::PsiPair { q, a } => Ok(&digamma(&frac(a, q))? + &digamma(&frac(q - a, q))?),
            ConstSymbol::PsiRat { m, q, a } => polygamma(PolygammaOrder::new(m), &frac(a, q)),
            ConstSymbol::ZetaOdd(n) => zeta_odd(n, prec),
        }
    }
}

impl fmt::Display for ConstSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstSymbol::One => f.write_str("1"),
            ConstSymbol::EulerGamma => f.write_str("gamma"),
            ConstSymbol::Pi => f.write_str("pi"),
            ConstSymbol::LogPi => f.write_str("log(pi)"),
            ConstSymbol::LogPrime(p) => write!(f, "log({p})"),
            ConstSymbol::PsiPair { q, a } => write!(f, "psipair({a}/{q})"),
            ConstSymbol::PsiRat { m, q, a } => write!(f, "psi[{m}]({a}/{q})"),
            ConstSymbol::ZetaOdd(n) => write!(f, "zeta({n})"),
        }
    }
}

fn parse_fraction(s: &str) -> Option<(u64, u64)> {
    match s.split_once('/') {
        Some((a, q)) => Some((a.trim().parse().ok()?, q.trim().parse().ok()?)),
        None => Some((s.trim().parse().ok()?, 1)),
    }
}

impl FromStr for ConstSymbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::parse(1, format!("unknown symbol `{s}`"));
        let inner = |prefix: &str| -> Option<&str> { s.strip_prefix(prefix)?.strip_suffix(')') };
        match s {
            "1" => return Ok(ConstSymbol::One),
            "gamma" => return Ok(ConstSymbol::EulerGamma),
            "pi" => return Ok(ConstSymbol::Pi),
            "log(pi)" => return Ok(ConstSymbol::LogPi),
            _ => {}
        }
        if let Some(p) = inner("log(") {
            return ConstSymbol::log_prime(p.trim().parse().map_err(|_| bad())?);
        }
        if let Some(n) = inner("zeta(") {
            return ConstSymbol::zeta_odd(n.trim().parse().map_err(|_| bad())?);
        }
        if let Some(x) = inner("psipair(") {
            let (a, q) = parse_fraction(x).ok_or_else(bad)?;
            return ConstSymbol::psi_pair(a, q);
        }
        if let Some(rest) = s.strip_prefix("psi[") {
            let (m, rest) = rest.split_once(']').ok_or_else(bad)?;
            let x = rest.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
            let m: u32 = m.trim().parse().map_err(|_| bad())?;
            let (a, q) = parse_fraction(x).ok_or_else(bad)?;
            return ConstSymbol::psi_rat(m, a, q);
        }
        Err(bad())
    }
}

/// Exact ℚ-linear combination of [`ConstSymbol`]s.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ConstExpr {
    terms: BTreeMap<ConstSymbol, BigRational>,
}

impl ConstExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn symbol(s: ConstSymbol) -> Self {
        Self::term(s, BigRational::one())
    }

    pub fn term(s: ConstSymbol, c: BigRational) -> Self {
        let mut e = Self::zero();
        e.add_term(s, c);
        e
    }

    pub fn rational(c: BigRational) -> Self {
        Self::term(ConstSymbol::One, c)
    }

    pub fn integer(c: i64) -> Self {
        Self::rational(BigRational::from_integer(c.into()))
    }

    pub fn add_term(&mut self, s: ConstSymbol, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(s).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn add_expr(&mut self, other: &ConstExpr, scale: &BigRational) {
        for (s, c) in &other.terms {
            self.add_term(*s, c * scale);
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let mut out = Self::zero();
        out.add_expr(self, k);
        out
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        self.scale(&BigRational::from_integer(k.into()))
    }

    pub fn coeff(&self, s: &ConstSymbol) -> BigRational {
        self.terms.get(s).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Coefficient of `One`.
    pub fn rational_part(&self) -> BigRational {
        self.coeff(&ConstSymbol::One)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ConstSymbol, &BigRational)> {
        self.terms.iter()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &ConstSymbol> {
        self.terms.keys()
    }

    /// Numerical value, substituting each symbol's value.
    pub fn eval(&self, prec: Precision) -> Result<BigComplex> {
        let wp = prec.elevated(8);
        let mut acc = BigComplex::zero(wp);
        for (s, c) in &self.terms {
            let v = s.eval(wp)?;
            acc = &acc + &(&v * &BigComplex::from_rational(c, wp));
        }
        Ok(acc.with_prec(prec))
    }
}

impl Add for &ConstExpr {
    type Output = ConstExpr;
    fn add(self, rhs: &ConstExpr) -> ConstExpr {
        let mut out = self.clone();
        out.add_expr(rhs, &BigRational::one());
        out
    }
}

impl Sub for &ConstExpr {
    type Output = ConstExpr;
    fn sub(self, rhs: &ConstExpr) -> ConstExpr {
        let mut out = self.clone();
        out.add_expr(rhs, &-BigRational::one());
        out
    }
}

impl Add for ConstExpr {
    type Output = ConstExpr;
    fn add(self, rhs: ConstExpr) -> ConstExpr {
        &self + &rhs
    }
}

impl Sub for ConstExpr {
    type Output = ConstExpr;
    fn sub(self, rhs: ConstExpr) -> ConstExpr {
        &self - &rhs
    }
}

impl Neg for &ConstExpr {
    type Output = ConstExpr;
    fn neg(self) -> ConstExpr {
        self.scale_i64(-1)
    }
}

impl Neg for ConstExpr {
    type Output = ConstExpr;
    fn neg(self) -> ConstExpr {
        -&self
    }
}

/// Text form: `c*sym` terms joined by ` + ` / ` - `, symbols in canonical order
/// with the rational part last; `1*` is omitted and the empty sum prints as `0`.
impl fmt::Display for ConstExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let ordered = self
            .terms
            .iter()
            .filter(|(s, _)| **s != ConstSymbol::One)
            .chain(self.terms.iter().filter(|(s, _)| **s == ConstSymbol::One));
        for (i, (s, c)) in ordered.enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if *s == ConstSymbol::One {
                f.write_str(&format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{s}")?;
            } else {
                write!(f, "{}*{s}", format_rational(&a))?;
            }
        }
        Ok(())
    }
}

// Splits at top-level `+`/`-` (outside brackets), keeping the sign with each term.
fn split_terms(s: &str) -> Result<Vec<(bool, String)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    let mut seen_any = false;
    for ch in s.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(Error::parse(1, "unbalanced brackets"));
        }
        if depth == 0 && (ch == '+' || ch == '-') {
            let prev_exp = cur.trim_end().ends_with(['e', 'E']) && cur.trim().chars().next().is_some_and(|c| c.is_ascii_digit());
            if !prev_exp {
                if !cur.trim().is_empty() {
                    out.push((neg, cur.trim().to_string()));
                } else if seen_any {
                    return Err(Error::parse(1, "dangling sign"));
                }
                seen_any = true;
                neg = ch == '-';
                cur.clear();
                continue;
            }
        }
        cur.push(ch);
    }
    if depth != 0 {
        return Err(Error::parse(1, "unbalanced brackets"));
    }
    if cur.trim().is_empty() {
        return Err(Error::parse(1, "empty term"));
    }
    out.push((neg, cur.trim().to_string()));
    Ok(out)
}

impl FromStr for ConstExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = ConstExpr::zero();
        for (neg, t) in split_terms(s)? {
            let (c, sym) = match t.split_once('*') {
                Some((c, sym)) => {
                    let c = parse_rational(c).ok_or_else(|| Error::parse(1, format!("bad coefficient `{c}`")))?;
                    (c, sym.parse::<ConstSymbol>()?)
                }
                None => match parse_rational(&t) {
                    Some(c) => (c, ConstSymbol::One),
                    None => (BigRational::one(), t.parse::<ConstSymbol>()?),
                },
            };
            out.add_term(sym, if neg { -c } else { c });
        }
        Ok(out)
    }
}

/// `n/d` as a `BigRational`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let mut e = ConstExpr::zero();
        e.add_term(ConstSymbol::ZetaOdd(3), rat(-2, 1));
        assert_eq!(e.to_string(), "-2*zeta(3)");
        e.add_term(ConstSymbol::One, rat(-3, 2));
        e.add_term(ConstSymbol::LogPrime(2), rat(2, 1));
        e.add_term(ConstSymbol::LogPi, rat(2, 1));
        e.add_term(ConstSymbol::PsiPair { q: 3, a: 1 }, rat(-1, 1));
        e.add_term(ConstSymbol::PsiRat { m: 1, q: 1, a: 1 }, rat(7, 3));
        let s = e.to_string();
        assert_eq!(s, "2*log(pi) + 2*log(2) - psipair(1/3) + 7/3*psi[1](1/1) - 2*zeta(3) - 3/2");
        assert_eq!(s.parse::<ConstExpr>().unwrap(), e);
        assert_eq!("0".parse::<ConstExpr>().unwrap(), ConstExpr::zero());
        assert_eq!(ConstExpr::zero().to_string(), "0");
    }

    #[test]
    fn parse_accepts_loose_forms() {
        assert!("gamma + -3".parse::<ConstExpr>().is_err());
        assert!("gamma - gamma".parse::<ConstExpr>().unwrap().is_zero());
        let f: ConstExpr = "1/2*pi + 0.25 - 3 + psi[2](1/4)".parse().unwrap();
        assert_eq!(f.coeff(&ConstSymbol::One), rat(-11, 4));
        assert_eq!(f.coeff(&ConstSymbol::Pi), rat(1, 2));
        assert!("psipair(2/3)".parse::<ConstExpr>().is_err());
        assert!("log(4)".parse::<ConstExpr>().is_err());
        assert!("foo".parse::<ConstExpr>().is_err());
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let a = ConstExpr::symbol(ConstSymbol::EulerGamma);
        assert!((&a - &a).is_zero());
        assert_eq!((&a + &a).coeff(&ConstSymbol::EulerGamma), rat(2, 1));
    }

    #[test]
    fn symbol_validation() {
        assert!(ConstSymbol::psi_pair(1, 2).is_err());
        assert!(ConstSymbol::psi_pair(2, 9).is_ok());
        assert!(ConstSymbol::psi_rat(0, 1, 1).is_err());
        assert!(ConstSymbol::psi_rat(3, 1, 1).is_ok());
        assert!(ConstSymbol::zeta_odd(4).is_err());
    }
}
