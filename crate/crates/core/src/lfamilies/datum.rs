use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::precision::{format_rational, parse_rational, BigComplex, Precision};
use crate::symbolic::factorize;

/// Complex number with exact rational parts, used for local parameters κ_j.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactComplex {
    pub fn real(re: BigRational) -> Self {
        ExactComplex { re, im: BigRational::zero() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn to_complex(&self, prec: Precision) -> BigComplex {
        BigComplex::from_rationals(&self.re, &self.im, prec)
    }
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return f.write_str(&format_rational(&self.re));
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        let im = self.im.abs();
        let im_s = if im.is_one() { String::new() } else { format_rational(&im) };
        if self.re.is_zero() {
            let lead = if self.im.is_negative() { "-" } else { "" };
            write!(f, "{lead}{im_s}i")
        } else {
            write!(f, "{}{sign}{im_s}i", format_rational(&self.re))
        }
    }
}

impl FromStr for ExactComplex {
    type Err = Error;

    /// Accepts `x`, `yi`, `x+yi`, `x-yi` with rational or decimal parts.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::parse(1, format!("cannot parse complex number `{s}`"));
        let Some(body) = s.strip_suffix('i') else {
            return Ok(ExactComplex::real(parse_rational(&s).ok_or_else(bad)?));
        };
        // split point: last +/- not at the start and not following an exponent marker
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
                split = Some(i);
                break;
            }
        }
        let (re_s, im_s) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im = match im_s {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            t => parse_rational(t).ok_or_else(bad)?,
        };
        Ok(ExactComplex { re: parse_rational(re_s).ok_or_else(bad)?, im })
    }
}

/// Evaluation point: exact rational, or an arbitrary complex number.
#[derive(Clone, Debug)]
pub enum CriticalPoint {
    Rational(BigRational),
    Numeric(BigComplex),
}

impl CriticalPoint {
    pub fn rational(n: i64, d: i64) -> Self {
        CriticalPoint::Rational(BigRational::new(n.into(), d.into()))
    }

    /// Rational when `s` is a plain number, complex otherwise.
    pub fn parse(s: &str, prec: Precision) -> Result<Self> {
        if let Some(q) = parse_rational(s) {
            return Ok(CriticalPoint::Rational(q));
        }
        let z: ExactComplex = s.parse()?;
        if z.is_real() {
            Ok(CriticalPoint::Rational(z.re))
        } else {
            Ok(CriticalPoint::Numeric(z.to_complex(prec)))
        }
    }

    pub fn to_complex(&self, prec: Precision) -> BigComplex {
        match self {
            CriticalPoint::Rational(q) => BigComplex::from_rational(q, prec),
            CriticalPoint::Numeric(z) => z.with_prec(prec),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            CriticalPoint::Rational(q) => Some(q),
            CriticalPoint::Numeric(_) => None,
        }
    }

    pub fn re_f64(&self) -> f64 {
        match self {
            CriticalPoint::Rational(q) => q.to_f64().unwrap_or(f64::NAN),
            CriticalPoint::Numeric(z) => z.re().to_f64(),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            CriticalPoint::Rational(q) => format_rational(q),
            CriticalPoint::Numeric(z) => z.to_decimal(25),
        }
    }
}

/// Functional-equation data for one of the four families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyDatum {
    /// Degree-d automorphic L-function, gamma factor Π Γ((s+κ_j)/2), s ↔ 1-s.
    AutomorphicGLd { conductor: u64, kappa: Vec<ExactComplex> },
    /// Weight-k form on Γ0(N) twisted by the quadratic character of D, s ↔ k-s.
    ModularTwisted { k: BigRational, level: u64, disc: i64 },
    /// Parallel weight-k Hilbert form over a totally real field of degree n.
    Hilbert { k: u64, n: u32, df: u64, norm_n: u64 },
    /// Koecher–Maass series of a genus-g Siegel cusp form of weight k.
    Siegel { g: u32, k: u64 },
}

/// Family tag as used in the text formats and on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Gld,
    Modular,
    Hilbert,
    Siegel,
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Gld => "gld",
            FamilyKind::Modular => "modular",
            FamilyKind::Hilbert => "hilbert",
            FamilyKind::Siegel => "siegel",
        }
    }
}

impl FromStr for FamilyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gld" | "automorphic" | "automorphicgld" => Ok(FamilyKind::Gld),
            "modular" | "modulartwisted" => Ok(FamilyKind::Modular),
            "hilbert" => Ok(FamilyKind::Hilbert),
            "siegel" => Ok(FamilyKind::Siegel),
            other => Err(Error::parse(1, format!("unknown family `{other}`"))),
        }
    }
}

/// True for 1 and for discriminants of quadratic fields.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 1 {
        return true;
    }
    if d == 0 {
        return false;
    }
    let squarefree = |n: u64| factorize(n).iter().all(|(_, e)| *e == 1);
    let m4 = d.rem_euclid(4);
    if m4 == 1 {
        return squarefree(d.unsigned_abs());
    }
    if m4 == 0 {
        let m = d / 4;
        let r = m.rem_euclid(4);
        return (r == 2 || r == 3) && squarefree(m.unsigned_abs());
    }
    false
}

fn factorial_big(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |a, j| a * BigInt::from(j))
}

/// Minkowski: `d_F >= (n^n / n!)^2`, i.e. `log d_F >= 2n log n - 2 log n!`.
pub fn minkowski_consistent(n: u32, df: u64) -> bool {
    let lhs = BigInt::from(df) * factorial_big(n).pow(2);
    let rhs = BigInt::from(n).pow(2 * n);
    lhs >= rhs
}

impl FamilyDatum {
    pub fn kind(&self) -> FamilyKind {
        match self {
            FamilyDatum::AutomorphicGLd { .. } => FamilyKind::Gld,
            FamilyDatum::ModularTwisted { .. } => FamilyKind::Modular,
            FamilyDatum::Hilbert { .. } => FamilyKind::Hilbert,
            FamilyDatum::Siegel { .. } => FamilyKind::Siegel,
        }
    }

    /// `k` for weight-k families (functional equation s ↔ k - s), 1 for GL(d).
    pub fn reflection_point(&self) -> BigRational {
        match self {
            FamilyDatum::AutomorphicGLd { .. } => BigRational::one(),
            FamilyDatum::ModularTwisted { k, .. } => k.clone(),
            FamilyDatum::Hilbert { k, .. } | FamilyDatum::Siegel { k, .. } => BigRational::from_integer((*k).into()),
        }
    }

    /// Checks the family invariants.
    pub fn validate(&self) -> Result<()> {
        match self {
            FamilyDatum::AutomorphicGLd { conductor, kappa } => {
                if *conductor == 0 {
                    return Err(Error::Domain("conductor must be >= 1".into()));
                }
                if kappa.is_empty() {
                    return Err(Error::Domain("degree d must be >= 1 (kappa is empty)".into()));
                }
                if let Some(bad) = kappa.iter().find(|z| z.re <= -BigRational::one()) {
                    return Err(Error::Domain(format!("local parameter {bad} has real part <= -1")));
                }
            }
            FamilyDatum::ModularTwisted { k, level, disc } => {
                let two_k = k * BigRational::from_integer(2.into());
                if !two_k.is_integer() || !k.is_positive() {
                    return Err(Error::Domain(format!("weight {} is not a positive half-integer", format_rational(k))));
                }
                if *level == 0 {
                    return Err(Error::Domain("level must be >= 1".into()));
                }
                if !is_fundamental_discriminant(*disc) {
                    return Err(Error::Domain(format!("{disc} is not a fundamental discriminant")));
                }
                if (disc.unsigned_abs()).gcd(level) != 1 {
                    return Err(Error::Domain(format!("gcd(D, N) = gcd({disc}, {level}) is not 1")));
                }
                if !k.is_integer() && level % 4 != 0 {
                    return Err(Error::Domain(format!("half-integral weight needs 4 | N, got N = {level}")));
                }
            }
            FamilyDatum::Hilbert { k, n, df, norm_n } => {
                if *k == 0 || *n == 0 || *df == 0 || *norm_n == 0 {
                    return Err(Error::Domain("Hilbert datum needs k, n, dF, normN >= 1".into()));
                }
                if !minkowski_consistent(*n, *df) {
                    return Err(Error::Hypothesis(format!(
                        "dF = {df} is below the Minkowski bound for a field of degree {n}"
                    )));
                }
            }
            FamilyDatum::Siegel { g, k } => {
                if *g < 2 {
                    return Err(Error::Domain(format!("genus must be >= 2, got {g}")));
                }
                if k % 2 != 0 || *k <= 2 * (*g as u64 + 1) {
                    return Err(Error::Domain(format!("Siegel weight must be even and > 2(g+1), got k = {k}, g = {g}")));
                }
            }
        }
        Ok(())
    }

    /// Checks that `s0` lies inside the critical strip.
    pub fn check_strip(&self, s0: &CriticalPoint) -> Result<()> {
        let top = self.reflection_point().to_f64().unwrap_or(f64::INFINITY);
        let inside = match s0 {
            CriticalPoint::Rational(q) => q.is_positive() && *q < self.reflection_point(),
            CriticalPoint::Numeric(z) => {
                let x = z.re().to_f64();
                x > 0.0 && x < top
            }
        };
        if inside {
            Ok(())
        } else {
            Err(Error::Domain(format!("s0 = {} is outside the critical strip 0 < Re s < {}", s0.to_text(), format_rational(&self.reflection_point()))))
        }
    }

    /// Flat `key: value` block.
    pub fn to_text(&self) -> String {
        let mut out = format!("family: {}\n", self.kind().name());
        match self {
            FamilyDatum::AutomorphicGLd { conductor, kappa } => {
                let ks: Vec<String> = kappa.iter().map(|z| z.to_string()).collect();
                out += &format!("d: {}\nN: {conductor}\nkappa: {}\n", kappa.len(), ks.join(", "));
            }
            FamilyDatum::ModularTwisted { k, level, disc } => {
                out += &format!("k: {}\nN: {level}\nD: {disc}\n", format_rational(k));
            }
            FamilyDatum::Hilbert { k, n, df, norm_n } => {
                out += &format!("k: {k}\nn: {n}\ndF: {df}\nnormN: {norm_n}\n");
            }
            FamilyDatum::Siegel { g, k } => {
                out += &format!("g: {g}\nk: {k}\n");
            }
        }
        out
    }

    /// Parses a `key: value` block (blank lines and `#` comments ignored).
    pub fn parse_block(text: &str) -> Result<Self> {
        let mut fields: Vec<(usize, String, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once(':')
                .or_else(|| line.split_once('='))
                .ok_or_else(|| Error::parse(i + 1, format!("expected `key: value`, got `{line}`")))?;
            let key = k.trim().to_string();
            if fields.iter().any(|(_, k2, _)| *k2 == key) {
                return Err(Error::parse(i + 1, format!("duplicate key `{key}`")));
            }
            fields.push((i + 1, key, v.trim().to_string()));
        }
        let end = text.lines().count() + 1;
        let get = |key: &str| fields.iter().find(|(_, k, _)| k == key).map(|(l, _, v)| (*l, v.as_str()));
        let need = |key: &str| get(key).ok_or_else(|| Error::parse(end, format!("missing key `{key}`")));
        fn num<T: FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| Error::parse(line, format!("bad value `{v}` for `{key}`")))
        }
        let (fl, fam) = need("family")?;
        let kind: FamilyKind = fam.parse().map_err(|_| Error::parse(fl, format!("unknown family `{fam}`")))?;
        let allowed: &[&str] = match kind {
            FamilyKind::Gld => &["family", "d", "N", "kappa"],
            FamilyKind::Modular => &["family", "k", "N", "D"],
            FamilyKind::Hilbert => &["family", "k", "n", "dF", "normN"],
            FamilyKind::Siegel => &["family", "g", "k"],
        };
        if let Some((l, k, _)) = fields.iter().find(|(_, k, _)| !allowed.contains(&k.as_str())) {
            return Err(Error::parse(*l, format!("key `{k}` does not apply to family {}", kind.name())));
        }
        let datum = match kind {
            FamilyKind::Gld => {
                let (nl, n) = need("N")?;
                let (kl, ks) = need("kappa")?;
                let kappa = ks
                    .split(',')
                    .map(|t| t.parse::<ExactComplex>().map_err(|_| Error::parse(kl, format!("bad local parameter `{}`", t.trim()))))
                    .collect::<Result<Vec<_>>>()?;
                if let Some((dl, d)) = get("d") {
                    let d: usize = num(dl, "d", d)?;
                    if d != kappa.len() {
                        return Err(Error::parse(dl, format!("d = {d} but {} local parameters given", kappa.len())));
                    }
                }
                FamilyDatum::AutomorphicGLd { conductor: num(nl, "N", n)?, kappa }
            }
            FamilyKind::Modular => {
                let (kl, k) = need("k")?;
                let (nl, n) = need("N")?;
                let disc = match get("D") {
                    Some((dl, d)) => num(dl, "D", d)?,
                    None => 1,
                };
                let k = parse_rational(k).ok_or_else(|| Error::parse(kl, format!("bad weight `{k}`")))?;
                FamilyDatum::ModularTwisted { k, level: num(nl, "N", n)?, disc }
            }
            FamilyKind::Hilbert => {
                let (kl, k) = need("k")?;
                let (nl, n) = need("n")?;
                let (dl, df) = need("dF")?;
                let norm_n = match get("normN") {
                    Some((l, v)) => num(l, "normN", v)?,
                    None => 1,
                };
                FamilyDatum::Hilbert { k: num(kl, "k", k)?, n: num(nl, "n", n)?, df: num(dl, "dF", df)?, norm_n }
            }
            FamilyKind::Siegel => {
                let (gl, g) = need("g")?;
                let (kl, k) = need("k")?;
                FamilyDatum::Siegel { g: num(gl, "g", g)?, k: num(kl, "k", k)? }
            }
        };
        Ok(datum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        let z: ExactComplex = "1/2-3i".parse().unwrap();
        assert_eq!(z.to_string(), "1/2-3i");
        let w: ExactComplex = "-i".parse().unwrap();
        assert_eq!(w.to_string(), "-i");
        let v: ExactComplex = "2.5e-1+0.5i".parse().unwrap();
        assert_eq!(v.to_string(), "1/4+1/2i");
        assert!("1+2j".parse::<ExactComplex>().is_err());
    }

    #[test]
    fn fundamental_discriminants() {
        for d in [1, 5, -3, -4, 8, -8, 12, 13, -11, -7] {
            assert!(is_fundamental_discriminant(d), "{d}");
        }
        for d in [0, 2, 3, 9, -1, 16, 25, 20] {
            assert!(!is_fundamental_discriminant(d), "{d}");
        }
    }

    #[test]
    fn minkowski() {
        assert!(minkowski_consistent(1, 1));
        assert!(minkowski_consistent(2, 5));
        assert!(!minkowski_consistent(3, 1));
        assert!(minkowski_consistent(3, 49));
        assert!(minkowski_consistent(4, 725));
    }

    #[test]
    fn block_round_trip() {
        let data = [
            FamilyDatum::AutomorphicGLd { conductor: 5, kappa: vec!["0".parse().unwrap(), "1/2+2i".parse().unwrap()] },
            FamilyDatum::ModularTwisted { k: BigRational::new(13.into(), 2.into()), level: 8, disc: 1 },
            FamilyDatum::Hilbert { k: 6, n: 3, df: 49, norm_n: 7 },
            FamilyDatum::Siegel { g: 2, k: 20 },
        ];
        for d in data {
            let t = d.to_text();
            assert_eq!(FamilyDatum::parse_block(&t).unwrap(), d, "{t}");
            d.validate().unwrap();
        }
    }

    #[test]
    fn block_errors_carry_lines() {
        let e = FamilyDatum::parse_block("family: modular\nk: 12\nN: x\n").unwrap_err();
        assert_eq!(e, Error::parse(3, "bad value `x` for `N`"));
        let e = FamilyDatum::parse_block("family: siegel\ng: 2\nn: 3\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        assert!(FamilyDatum::parse_block("family: modular\nk: 12\n").is_err());
    }

    #[test]
    fn invariants() {
        let m = |k: i64, d: i64, n: u64, disc: i64| FamilyDatum::ModularTwisted { k: BigRational::new(k.into(), d.into()), level: n, disc };
        assert!(m(12, 1, 1, 5).validate().is_ok());
        assert!(m(12, 1, 5, 5).validate().is_err());
        assert!(m(13, 2, 6, 1).validate().is_err());
        assert!(m(13, 2, 8, 1).validate().is_ok());
        assert!(FamilyDatum::Siegel { g: 2, k: 6 }.validate().is_err());
        assert!(matches!(FamilyDatum::Hilbert { k: 6, n: 3, df: 1, norm_n: 1 }.validate(), Err(Error::Hypothesis(_))));
        let s = CriticalPoint::rational(13, 1);
        assert!(m(12, 1, 1, 1).check_strip(&s).is_err());
        assert!(m(12, 1, 1, 1).check_strip(&CriticalPoint::rational(6, 1)).is_ok());
    }
}
