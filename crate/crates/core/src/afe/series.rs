//! Dirichlet coefficient tables with family metadata, the text file format,
//! and the bundled example series.

use std::fmt::Write as _;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lfamilies::{ExactComplex, FamilyDatum, FamilyKind};
use crate::precision::{format_rational, parse_rational};

/// Coefficients `a(1..=Nmax)` in arithmetic normalization, a growth bound
/// `|a(n)| <= C n^θ`, the functional-equation datum and the root number.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSeries {
    coeffs: Vec<BigRational>,
    growth_exponent: BigRational,
    growth_constant: BigRational,
    meta: FamilyDatum,
    root_number: ExactComplex,
}

impl CoefficientSeries {
    pub fn new(
        coeffs: Vec<BigRational>,
        meta: FamilyDatum,
        growth_exponent: BigRational,
        growth_constant: BigRational,
        root_number: ExactComplex,
    ) -> Result<Self> {
        meta.validate()?;
        if coeffs.is_empty() {
            return Err(Error::Domain("coefficient series is empty".into()));
        }
        if !coeffs[0].is_one() {
            return Err(Error::Domain(format!("a(1) = {} but normalized series need a(1) = 1", format_rational(&coeffs[0]))));
        }
        if !growth_constant.is_positive() {
            return Err(Error::Domain("growth constant must be positive".into()));
        }
        let n2 = &root_number.re * &root_number.re + &root_number.im * &root_number.im;
        if !n2.is_one() {
            return Err(Error::Domain(format!("root number {root_number} does not have modulus 1")));
        }
        Ok(CoefficientSeries { coeffs, growth_exponent, growth_constant, meta, root_number })
    }

    /// `a(n)` for `1 <= n <= Nmax`.
    pub fn coeff(&self, n: usize) -> Option<&BigRational> {
        n.checked_sub(1).and_then(|i| self.coeffs.get(i))
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn nmax(&self) -> usize {
        self.coeffs.len()
    }

    pub fn meta(&self) -> &FamilyDatum {
        &self.meta
    }

    pub fn growth_exponent(&self) -> &BigRational {
        &self.growth_exponent
    }

    pub fn growth_constant(&self) -> &BigRational {
        &self.growth_constant
    }

    pub fn root_number(&self) -> &ExactComplex {
        &self.root_number
    }

    /// Keeps the first `n` coefficients.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.nmax() {
            return Err(Error::Truncation { needed: n, available: self.nmax() });
        }
        let mut out = self.clone();
        out.coeffs.truncate(n);
        Ok(out)
    }

    /// Parses the coefficient file format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut meta: Vec<(usize, String, String)> = Vec::new();
        let mut coeffs = Vec::new();
        let mut last_line = 0;
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            last_line = ln;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('#') {
                let Some((k, v)) = c.split_once(':') else { continue };
                let key = k.trim().to_ascii_lowercase();
                if !METADATA_KEYS.contains(&key.as_str()) {
                    return Err(Error::parse(ln, format!("unknown metadata key `{}`", k.trim())));
                }
                if meta.iter().any(|(_, k2, _)| *k2 == key) {
                    return Err(Error::parse(ln, format!("duplicate metadata key `{key}`")));
                }
                if !coeffs.is_empty() {
                    return Err(Error::parse(ln, "metadata must precede the coefficient lines"));
                }
                meta.push((ln, key, v.trim().to_string()));
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(n), Some(a), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::parse(ln, format!("expected `n a(n)`, got `{line}`")));
            };
            let n: usize = n.parse().map_err(|_| Error::parse(ln, format!("bad index `{n}`")))?;
            if n != coeffs.len() + 1 {
                return Err(Error::parse(ln, format!("index {n} out of sequence, expected {}", coeffs.len() + 1)));
            }
            let a = parse_rational(a).ok_or_else(|| Error::parse(ln, format!("bad coefficient `{a}`")))?;
            coeffs.push(a);
        }
        let end = last_line + 1;
        let get = |key: &str| meta.iter().find(|(_, k, _)| k == key).map(|(l, _, v)| (*l, v.as_str()));
        let need = |key: &str| get(key).ok_or_else(|| Error::parse(end, format!("missing metadata key `{key}`")));
        let rat = |key: &str| -> Result<Option<BigRational>> {
            match get(key) {
                None => Ok(None),
                Some((l, v)) => parse_rational(v).map(Some).ok_or_else(|| Error::parse(l, format!("bad value `{v}` for `{key}`"))),
            }
        };
        let int = |key: &str| -> Result<Option<i64>> {
            match get(key) {
                None => Ok(None),
                Some((l, v)) => v.parse().map(Some).map_err(|_| Error::parse(l, format!("bad value `{v}` for `{key}`"))),
            }
        };
        let pos = |key: &str, v: Option<i64>| -> Result<Option<u64>> {
            match v {
                Some(x) if x < 1 => Err(Error::parse(get(key).map_or(end, |g| g.0), format!("`{key}` must be >= 1"))),
                Some(x) => Ok(Some(x as u64)),
                None => Ok(None),
            }
        };

        let (nl, norm) = need("normalization")?;
        if norm != "arithmetic" {
            return Err(Error::parse(nl, format!("normalization must be `arithmetic`, got `{norm}`")));
        }
        if coeffs.is_empty() {
            return Err(Error::parse(end, "no coefficient lines"));
        }
        let (fl, fam) = need("family")?;
        let kind: FamilyKind = fam.parse().map_err(|_| Error::parse(fl, format!("unknown family `{fam}`")))?;
        let level = pos("level", int("level")?)?.unwrap_or(1);
        let datum = match kind {
            FamilyKind::Gld => {
                let (kl, ks) = need("kappa")?;
                let kappa = ks
                    .split(',')
                    .map(|t| t.parse::<ExactComplex>().map_err(|_| Error::parse(kl, format!("bad local parameter `{}`", t.trim()))))
                    .collect::<Result<Vec<_>>>()?;
                if let Some(d) = int("degree")? {
                    if d as usize != kappa.len() {
                        let l = get("degree").map_or(end, |g| g.0);
                        return Err(Error::parse(l, format!("degree {d} but {} local parameters given", kappa.len())));
                    }
                }
                FamilyDatum::AutomorphicGLd { conductor: level, kappa }
            }
            FamilyKind::Modular => {
                let k = rat("weight")?.ok_or_else(|| Error::parse(end, "missing metadata key `weight`"))?;
                FamilyDatum::ModularTwisted { k, level, disc: int("discriminant")?.unwrap_or(1) }
            }
            FamilyKind::Hilbert => {
                let k = pos("weight", int("weight")?)?.ok_or_else(|| Error::parse(end, "missing metadata key `weight`"))?;
                let n = pos("degree", int("degree")?)?.unwrap_or(1) as u32;
                let df = pos("discriminant", int("discriminant")?)?.unwrap_or(1);
                FamilyDatum::Hilbert { k, n, df, norm_n: level }
            }
            FamilyKind::Siegel => {
                let k = pos("weight", int("weight")?)?.ok_or_else(|| Error::parse(end, "missing metadata key `weight`"))?;
                let g = pos("degree", int("degree")?)?.ok_or_else(|| Error::parse(end, "missing metadata key `degree`"))? as u32;
                FamilyDatum::Siegel { g, k }
            }
        };
        let theta = rat("growth-exponent")?.ok_or_else(|| Error::parse(end, "missing metadata key `growth-exponent`"))?;
        let c = rat("growth-constant")?.unwrap_or_else(BigRational::one);
        let eps = match get("root-number") {
            None => ExactComplex::real(BigRational::one()),
            Some((l, v)) => v.parse().map_err(|_| Error::parse(l, format!("bad root number `{v}`")))?,
        };
        CoefficientSeries::new(coeffs, datum, theta, c, eps)
    }

    /// Serializes to the coefficient file format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# family: {}", self.meta.kind().name());
        match &self.meta {
            FamilyDatum::AutomorphicGLd { conductor, kappa } => {
                let ks: Vec<String> = kappa.iter().map(|z| z.to_string()).collect();
                let _ = writeln!(out, "# degree: {}\n# level: {conductor}\n# kappa: {}", kappa.len(), ks.join(", "));
            }
            FamilyDatum::ModularTwisted { k, level, disc } => {
                let _ = writeln!(out, "# weight: {}\n# level: {level}\n# discriminant: {disc}", format_rational(k));
            }
            FamilyDatum::Hilbert { k, n, df, norm_n } => {
                let _ = writeln!(out, "# weight: {k}\n# degree: {n}\n# level: {norm_n}\n# discriminant: {df}");
            }
            FamilyDatum::Siegel { g, k } => {
                let _ = writeln!(out, "# weight: {k}\n# degree: {g}");
            }
        }
        let _ = writeln!(out, "# growth-exponent: {}", format_rational(&self.growth_exponent));
        let _ = writeln!(out, "# growth-constant: {}", format_rational(&self.growth_constant));
        let _ = writeln!(out, "# root-number: {}", self.root_number);
        let _ = writeln!(out, "# normalization: arithmetic");
        for (i, a) in self.coeffs.iter().enumerate() {
            let _ = writeln!(out, "{} {}", i + 1, format_rational(a));
        }
        out
    }
}

const METADATA_KEYS: &[&str] = &[
    "family",
    "weight",
    "level",
    "degree",
    "kappa",
    "discriminant",
    "growth-exponent",
    "growth-constant",
    "root-number",
    "normalization",
];

fn jacobi(a: i64, mut n: u64) -> i64 {
    debug_assert!(n % 2 == 1);
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut t = 1;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol `(d/n)`.
pub fn kronecker(d: i64, n: u64) -> i64 {
    if n == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut t = 1;
    while n.is_multiple_of(2) {
        if d % 2 == 0 {
            return 0;
        }
        n /= 2;
        if matches!(d.rem_euclid(8), 3 | 5) {
            t = -t;
        }
    }
    t * jacobi(d, n)
}

/// `τ(1..=nmax)` from the q-expansion of `Π (1 - q^n)^24`, via
/// `n c_n = -24 Σ_{j=1}^{n} σ(j) c_{n-j}`.
pub fn ramanujan_tau(nmax: usize) -> Vec<i128> {
    static CACHE: OnceLock<std::sync::Mutex<Vec<i128>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| std::sync::Mutex::new(Vec::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    if guard.len() < nmax {
        let mut sigma = vec![0i128; nmax + 1];
        for d in 1..=nmax {
            for m in (d..=nmax).step_by(d) {
                sigma[m] += d as i128;
            }
        }
        // c_j = coefficient of q^j in the eta product; τ(n) = c_{n-1}
        let mut c = vec![0i128; nmax];
        c[0] = 1;
        for n in 1..nmax {
            let mut acc = 0i128;
            for j in 1..=n {
                acc += sigma[j] * c[n - j];
            }
            c[n] = -24 * acc / n as i128;
        }
        *guard = c;
    }
    guard[..nmax].to_vec()
}

fn ints(v: impl IntoIterator<Item = i128>) -> Vec<BigRational> {
    v.into_iter().map(|x| BigRational::from_integer(BigInt::from(x))).collect()
}

fn int_rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Ramanujan's Δ (weight 12, level 1).
pub fn delta_series(nmax: usize) -> Result<CoefficientSeries> {
    CoefficientSeries::new(
        ints(ramanujan_tau(nmax)),
        FamilyDatum::ModularTwisted { k: int_rat(12), level: 1, disc: 1 },
        int_rat(6),
        int_rat(2),
        ExactComplex::real(BigRational::one()),
    )
}

/// Δ twisted by the quadratic character of the fundamental discriminant `disc`.
pub fn delta_twisted(disc: i64, nmax: usize) -> Result<CoefficientSeries> {
    let tau = ramanujan_tau(nmax);
    let a = tau.iter().enumerate().map(|(i, t)| t * kronecker(disc, i as u64 + 1) as i128);
    CoefficientSeries::new(
        ints(a),
        FamilyDatum::ModularTwisted { k: int_rat(12), level: 1, disc },
        int_rat(6),
        int_rat(2),
        // ε = ε(Δ)·χ_D(-1)
        ExactComplex::real(int_rat(disc.signum())),
    )
}

/// Real primitive character `n -> (disc/n)` as a degree-1 L-function.
pub fn real_character(disc: i64, nmax: usize) -> Result<CoefficientSeries> {
    let kappa = if disc > 0 { 0 } else { 1 };
    CoefficientSeries::new(
        ints((1..=nmax as u64).map(|n| kronecker(disc, n) as i128)),
        FamilyDatum::AutomorphicGLd { conductor: disc.unsigned_abs(), kappa: vec![ExactComplex::real(int_rat(kappa))] },
        BigRational::zero(),
        BigRational::one(),
        ExactComplex::real(BigRational::one()),
    )
}

/// Δ viewed as a Hilbert form over ℚ.
pub fn delta_hilbert(nmax: usize) -> Result<CoefficientSeries> {
    let d = delta_series(nmax)?;
    CoefficientSeries::new(
        d.coeffs,
        FamilyDatum::Hilbert { k: 12, n: 1, df: 1, norm_n: 1 },
        int_rat(6),
        int_rat(2),
        ExactComplex::real(BigRational::one()),
    )
}
