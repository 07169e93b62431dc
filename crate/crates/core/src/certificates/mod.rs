//! Non-vanishing certificates and rank certificates.
//!
//! A non-vanishing certificate carries the exact upper bound (a [`ConstExpr`])
//! for `L'/L(s0) + L'/L(k - s0)` that the family's argument produces, and is
//! `Certified` only when that bound is below `-2^(-bits/4)` at the working
//! precision and stays so at doubled precision.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lfamilies::{closed_form_sum_exact, CriticalPoint, FamilyDatum};
use crate::precision::{format_rational, BigComplex, Precision, Real};
use crate::symbolic::{
    euler_phi, exact_rank, log_n_expand, property_a_check, rank_lower_bound, reduce_psi, ConstExpr, ConstSymbol,
    IntegerSet,
};

/// The inequality or bound a certificate is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Claim {
    GLdNonvanish,
    ModularNonvanish,
    ModularNonvanishRemark,
    HalfIntCentral,
    HilbertNonvanish,
    SiegelNonvanish,
    RankBound,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Claim::GLdNonvanish => "GLdNonvanish",
            Claim::ModularNonvanish => "ModularNonvanish",
            Claim::ModularNonvanishRemark => "ModularNonvanishRemark",
            Claim::HalfIntCentral => "HalfIntCentral",
            Claim::HilbertNonvanish => "HilbertNonvanish",
            Claim::SiegelNonvanish => "SiegelNonvanish",
            Claim::RankBound => "RankBound",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Certified,
    NotCertified,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Certified => "Certified",
            Verdict::NotCertified => "NotCertified",
        })
    }
}

/// Rank data of a [`Claim::RankBound`] certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct RankInfo {
    /// Exact formal rank of the member expressions.
    pub rank: usize,
    /// Lower bound promised by the theorem (`|J| - 1` or `φ(q)/2 - 2`).
    pub guarantee: usize,
    /// Closed forms whose span is measured, in input order.
    pub members: Vec<ConstExpr>,
    /// `psipair` symbols occurring in the members.
    pub psi_pairs: Vec<ConstSymbol>,
}

/// A verified inequality or rank bound, with everything needed to re-check it.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub claim: Claim,
    pub datum: Option<FamilyDatum>,
    pub s0: Option<CriticalPoint>,
    /// The set J, or the residues `a` of a coprime-point construction.
    pub set: Option<Vec<u64>>,
    /// Upper bound for the identity value (zero for rank certificates).
    pub bound: ConstExpr,
    /// Numerical value of `bound`, or the rank.
    pub bound_value: BigComplex,
    /// `-bound_value` for inequalities, `rank - guarantee` for rank bounds.
    pub margin: Real,
    pub verdict: Verdict,
    pub rank: Option<RankInfo>,
    pub assumptions: Vec<String>,
    pub precision_bits: usize,
}

/// Settings shared by all certificates.
#[derive(Clone, Debug, PartialEq)]
pub struct CertConfig {
    pub precision: Precision,
    /// Smallest discriminant of a totally real field of each degree, used for
    /// Hilbert certificates of degree 2, 3, 4.
    pub min_discriminants: BTreeMap<u32, u64>,
}

impl CertConfig {
    pub fn new(precision: Precision) -> Self {
        // Q(sqrt 5), the cyclic cubic field of conductor 7, and Q(ζ15)^+
        let min_discriminants = BTreeMap::from([(2, 5), (3, 49), (4, 725)]);
        CertConfig { precision, min_discriminants }
    }

    /// `2^(-bits/4)`.
    pub fn margin_threshold(&self) -> Real {
        Real::one(64).ldexp(-((self.precision.bits() / 4) as i32))
    }
}

impl Default for CertConfig {
    fn default() -> Self {
        CertConfig::new(Precision::default())
    }
}

fn qi(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn log_2pi() -> ConstExpr {
    let mut e = ConstExpr::symbol(ConstSymbol::LogPrime(2));
    e.add_term(ConstSymbol::LogPi, BigRational::one());
    e
}

fn psi(x: BigRational) -> Result<ConstExpr> {
    reduce_psi(0, &x)
}

fn log_factorial(n: u64) -> Result<ConstExpr> {
    let mut e = ConstExpr::zero();
    for j in 2..=n {
        e = &e + &log_n_expand(j)?;
    }
    Ok(e)
}

fn real_s0(s0: &CriticalPoint) -> Result<BigRational> {
    match s0 {
        CriticalPoint::Rational(q) => Ok(q.clone()),
        CriticalPoint::Numeric(z) => {
            if !z.im().is_zero() {
                return Err(Error::Hypothesis(format!("s0 = {} must be real", s0.to_text())));
            }
            z.re().to_rational().ok_or_else(|| Error::Hypothesis("s0 must be a finite real".into()))
        }
    }
}

// a/b = |s0 - k/2|; the identity is symmetric under s0 -> k - s0.
fn offset_from_centre(k: &BigRational, s0: &BigRational, notes: &mut Vec<String>) -> BigRational {
    let centre = k / qi(2);
    let d = s0 - &centre;
    if d.is_negative() {
        notes.push(format!("s0 replaced by k - s0 = {} (the sum is symmetric)", format_rational(&(k - s0))));
    }
    d.abs()
}

fn decide(
    claim: Claim,
    datum: Option<FamilyDatum>,
    s0: Option<CriticalPoint>,
    bound: ConstExpr,
    mut assumptions: Vec<String>,
    cfg: &CertConfig,
) -> Result<Certificate> {
    let threshold = cfg.margin_threshold();
    let value = bound.eval(cfg.precision)?;
    let margin = -value.re();
    let mut verdict = if margin > threshold { Verdict::Certified } else { Verdict::NotCertified };
    if verdict == Verdict::Certified {
        let again = -bound.eval(cfg.precision.scaled(2))?.re();
        if again <= threshold {
            verdict = Verdict::NotCertified;
            assumptions.push("verdict did not survive the doubled-precision cross-check".into());
        }
    }
    Ok(Certificate {
        claim,
        datum,
        s0,
        set: None,
        bound,
        bound_value: value,
        margin,
        verdict,
        rank: None,
        assumptions,
        precision_bits: cfg.precision.bits(),
    })
}

fn non_vanishing_note() -> String {
    "L(f, s0) != 0 (membership in E(...)) is assumed, not checked".into()
}

/// GL(d): the sum at `s0` is below `2d log 2 + dγ + d log π - log N`, which is
/// negative exactly when `N^(1/d) > 4π e^γ`.
pub fn certify_gld(fd: &FamilyDatum, s0: &CriticalPoint, cfg: &CertConfig) -> Result<Certificate> {
    let FamilyDatum::AutomorphicGLd { conductor, kappa } = fd else {
        return Err(Error::Hypothesis(format!("certify_gld needs a GL(d) datum, got {}", fd.kind().name())));
    };
    fd.validate()?;
    let s = real_s0(s0)?;
    let one = BigRational::one();
    for kj in kappa {
        if !kj.is_real() {
            return Err(Error::Hypothesis(format!("local parameter {kj} is not real")));
        }
        if &s + &kj.re < one || &one - &s + &kj.re < one {
            return Err(Error::Hypothesis(format!(
                "need s0 + κ >= 1 and 1 - s0 + κ >= 1, got s0 = {}, κ = {kj}",
                format_rational(&s)
            )));
        }
    }
    let d = kappa.len() as i64;
    let mut bound = ConstExpr::zero();
    bound.add_term(ConstSymbol::LogPrime(2), qi(2 * d));
    bound.add_term(ConstSymbol::EulerGamma, qi(d));
    bound.add_term(ConstSymbol::LogPi, qi(d));
    bound = &bound - &log_n_expand(*conductor)?;
    decide(Claim::GLdNonvanish, Some(fd.clone()), Some(CriticalPoint::Rational(s)), bound, vec![non_vanishing_note()], cfg)
}

/// Which modular argument to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModularBranch {
    /// `k >= 3`, `0 <= a/b <= k/2 - 1`, threshold `ND² > 4π² e^(2γ)`.
    Primary,
    /// `k >= 5`, `0 <= a/b <= k/2 - 2`, threshold `ND² > 4π² e^(2γ - 2)`.
    Remark,
}

/// Modular forms twisted by `D` at `s0 = k/2 + a/b`.
pub fn certify_modular(fd: &FamilyDatum, s0: &BigRational, branch: ModularBranch, cfg: &CertConfig) -> Result<Certificate> {
    let FamilyDatum::ModularTwisted { k, level, disc } = fd else {
        return Err(Error::Hypothesis(format!("certify_modular needs a modular datum, got {}", fd.kind().name())));
    };
    fd.validate()?;
    let mut notes = vec![non_vanishing_note()];
    let ab = offset_from_centre(k, s0, &mut notes);
    let (min_k, gap) = match branch {
        ModularBranch::Primary => (3, 1),
        ModularBranch::Remark => (5, 2),
    };
    if *k < qi(min_k) {
        return Err(Error::Hypothesis(format!("weight {} is below {min_k}", format_rational(k))));
    }
    let top = k / qi(2) - qi(gap);
    if ab > top {
        return Err(Error::Hypothesis(format!(
            "a/b = {} exceeds k/2 - {gap} = {}",
            format_rational(&ab),
            format_rational(&top)
        )));
    }
    // ψ(k/2 ± a/b) >= ψ(gap) with ψ(1) = -γ, ψ(2) = 1 - γ
    let mut bound = log_2pi().scale_i64(2);
    bound = &bound - &log_n_expand(*level)?;
    bound = &bound - &log_n_expand(disc.unsigned_abs())?.scale_i64(2);
    bound = &bound - &psi(qi(gap))?.scale_i64(2);
    let claim = match branch {
        ModularBranch::Primary => Claim::ModularNonvanish,
        ModularBranch::Remark => Claim::ModularNonvanishRemark,
    };
    decide(claim, Some(fd.clone()), Some(CriticalPoint::Rational(s0.clone())), bound, notes, cfg)
}

/// `log π - ψ(1/4)` and `log π - ψ(3/4)`, recomputed.
pub fn halfint_constants(prec: Precision) -> Result<(Real, Real)> {
    let mut c1 = ConstExpr::symbol(ConstSymbol::LogPi);
    c1 = &c1 - &psi(BigRational::new(1.into(), 4.into()))?;
    let mut c3 = ConstExpr::symbol(ConstSymbol::LogPi);
    c3 = &c3 - &psi(BigRational::new(3.into(), 4.into()))?;
    Ok((c1.eval(prec)?.re().clone(), c3.eval(prec)?.re().clone()))
}

/// Half-integral weight `k` on Γ0(N) at the centre: the value
/// `log π - ψ(k/2) - (1/2) log(N/4)` is negative.
pub fn certify_halfint_central(k: &BigRational, n: u64, cfg: &CertConfig) -> Result<Certificate> {
    let two_k = k * qi(2);
    if !two_k.is_integer() || k.is_integer() || !k.is_positive() {
        return Err(Error::Hypothesis(format!("k = {} is not in 1/2 + N", format_rational(k))));
    }
    if n == 0 || !n.is_multiple_of(4) {
        return Err(Error::Hypothesis(format!("level N = {n} is not divisible by 4")));
    }
    let tk = two_k.to_integer().to_i64().ok_or_else(|| Error::Hypothesis("weight too large".into()))?;
    // k/2 = c/4 + [k/2]
    let (c, stated) = if tk % 4 == 1 { (1, qi(6)) } else { (3, qi(5)) };
    if *k <= stated {
        return Err(Error::OutOfProvenRange(format!(
            "k = {} (branch c = {c}) needs k > {} in the stated argument",
            format_rational(k),
            format_rational(&stated)
        )));
    }
    let (c1, c3) = halfint_constants(cfg.precision)?;
    let paper_c1 = Real::from_rational(&BigRational::new(537223.into(), 100000.into()), 128);
    let paper_c3 = Real::from_rational(&BigRational::new(2231.into(), 1000.into()), 128);
    if c1 >= paper_c1 || c3 >= paper_c3 {
        return Err(Error::Hypothesis("recomputed constants do not confirm the stated bounds".into()));
    }
    let half_k = k / qi(2);
    let whole = half_k.floor().to_integer().to_i64().unwrap_or(0);
    let mut bound = ConstExpr::symbol(ConstSymbol::LogPi);
    bound = &bound - &psi(BigRational::new(c.into(), 4.into()))?;
    let mut sum = BigRational::zero();
    for j in 0..whole {
        sum += BigRational::new(4.into(), (4 * j + c).into());
    }
    bound.add_term(ConstSymbol::One, -sum);
    // (1/2) log(N/4)
    let half = BigRational::new(1.into(), 2.into());
    bound.add_expr(&log_n_expand(n)?, &-half.clone());
    bound.add_term(ConstSymbol::LogPrime(2), BigRational::one());
    let notes = vec![
        non_vanishing_note(),
        format!("log(pi) - psi(1/4) = {} < 5.37223", c1.to_decimal(12)),
        format!("log(pi) - psi(3/4) = {} < 2.231", c3.to_decimal(12)),
    ];
    let fd = FamilyDatum::ModularTwisted { k: k.clone(), level: n, disc: 1 };
    decide(Claim::HalfIntCentral, Some(fd), Some(CriticalPoint::Rational(half_k)), bound, notes, cfg)
}

/// Parallel weight-k Hilbert forms over a totally real field of degree n.
pub fn certify_hilbert(fd: &FamilyDatum, s0: &BigRational, cfg: &CertConfig) -> Result<Certificate> {
    let FamilyDatum::Hilbert { k, n, df, .. } = fd else {
        return Err(Error::Hypothesis(format!("certify_hilbert needs a Hilbert datum, got {}", fd.kind().name())));
    };
    fd.validate()?;
    let (k, n) = (*k, *n);
    let kq = qi(k as i64);
    let mut notes = vec![non_vanishing_note()];
    match n {
        0 | 1 => return Err(Error::Hypothesis(format!("field degree n = {n}; the argument needs n >= 2"))),
        2 if k < 8 => return Err(Error::Hypothesis(format!("degree 2 needs k >= 8, got {k}"))),
        _ if k < 5 => return Err(Error::Hypothesis(format!("weight k = {k} is below 5"))),
        _ => {}
    }
    let ab = offset_from_centre(&kq, s0, &mut notes);
    let top = &kq / qi(2) - qi(2);
    if ab > top {
        return Err(Error::Hypothesis(format!("a/b = {} exceeds k/2 - 2 = {}", format_rational(&ab), format_rational(&top))));
    }
    let nn = n as i64;
    let mut bound = log_2pi().scale_i64(2 * nn);
    // ψ(k/2 + a/b) + ψ(k/2 - a/b) is smallest at a/b = k/2 - 2
    let low = if n == 2 { qi(6) } else { BigRational::new(5.into(), 2.into()) };
    bound = &bound - &psi(low)?.scale_i64(nn);
    bound = &bound - &psi(qi(2))?.scale_i64(nn);
    if n >= 5 {
        // log d_F >= 2n log n - 2 log n!, and the bound carries -2 log d_F
        bound = &bound - &log_n_expand(n as u64)?.scale_i64(4 * nn);
        bound = &bound + &log_factorial(n as u64)?.scale_i64(4);
        notes.push("Minkowski: log d_F >= 2n log n - 2 log n!".into());
    } else {
        let min = *cfg
            .min_discriminants
            .get(&n)
            .ok_or_else(|| Error::Hypothesis(format!("no minimal discriminant configured for degree {n}")))?;
        if *df < min {
            return Err(Error::Hypothesis(format!("d_F = {df} is below the minimal discriminant {min} for degree {n}")));
        }
        bound = &bound - &log_n_expand(min)?.scale_i64(2);
        notes.push(format!("minimal totally real discriminant in degree {n} taken as {min} (configuration)"));
    }
    decide(Claim::HilbertNonvanish, Some(fd.clone()), Some(CriticalPoint::Rational(s0.clone())), bound, notes, cfg)
}

/// Koecher–Maass series: `2g log 2π - 2g ψ(7) < 0` for `k >= 2(g+7)`.
pub fn certify_siegel(fd: &FamilyDatum, s0: &BigRational, cfg: &CertConfig) -> Result<Certificate> {
    let FamilyDatum::Siegel { g, k } = fd else {
        return Err(Error::Hypothesis(format!("certify_siegel needs a Siegel datum, got {}", fd.kind().name())));
    };
    let (g, k) = (*g as i64, *k as i64);
    if k < 2 * (g + 7) {
        return Err(Error::Hypothesis(format!("k = {k} is below 2(g+7) = {}", 2 * (g + 7))));
    }
    fd.validate()?;
    let mut notes = vec![non_vanishing_note()];
    let ab = offset_from_centre(&qi(k), s0, &mut notes);
    let top = BigRational::new((g + 1).into(), 2.into());
    if ab >= top {
        return Err(Error::Hypothesis(format!("a/b = {} is not below (g+1)/2 = {}", format_rational(&ab), format_rational(&top))));
    }
    let mut bound = log_2pi().scale_i64(2 * g);
    bound = &bound - &psi(qi(7))?.scale_i64(2 * g);
    decide(Claim::SiegelNonvanish, Some(fd.clone()), Some(CriticalPoint::Rational(s0.clone())), bound, notes, cfg)
}

fn with_conductor(template: &FamilyDatum, n: u64) -> Result<FamilyDatum> {
    Ok(match template {
        FamilyDatum::AutomorphicGLd { kappa, .. } => FamilyDatum::AutomorphicGLd { conductor: n, kappa: kappa.clone() },
        FamilyDatum::ModularTwisted { k, disc, .. } => FamilyDatum::ModularTwisted { k: k.clone(), level: n, disc: *disc },
        FamilyDatum::Hilbert { k, n: deg, df, .. } => FamilyDatum::Hilbert { k: *k, n: *deg, df: *df, norm_n: n },
        FamilyDatum::Siegel { .. } => {
            return Err(Error::Domain("Siegel data have no conductor to vary".into()));
        }
    })
}

fn formal_notes() -> Vec<String> {
    vec![
        "distinct psi symbols are treated as formally independent over Q".into(),
        "Q-independence of the logs implies independence over algebraic numbers (Baker; taken as an axiom)".into(),
        non_vanishing_note(),
    ]
}

fn rank_certificate_from(
    datum: FamilyDatum,
    s0: Option<CriticalPoint>,
    set: Vec<u64>,
    members: Vec<ConstExpr>,
    guarantee: usize,
    mut notes: Vec<String>,
    cfg: &CertConfig,
) -> Certificate {
    let rank = exact_rank(&members);
    let psi_pairs: Vec<ConstSymbol> = {
        let mut v: Vec<ConstSymbol> =
            members.iter().flat_map(|m| m.symbols().copied()).filter(|s| matches!(s, ConstSymbol::PsiPair { .. })).collect();
        v.sort();
        v.dedup();
        v
    };
    let verdict = if rank >= guarantee { Verdict::Certified } else { Verdict::NotCertified };
    if verdict == Verdict::NotCertified {
        notes.push("formal rank is below the theorem's guarantee".into());
    }
    let prec = cfg.precision;
    Certificate {
        claim: Claim::RankBound,
        datum: Some(datum),
        s0,
        set: Some(set),
        bound: ConstExpr::zero(),
        bound_value: BigComplex::from_i64(rank as i64, prec),
        margin: Real::from_i64(rank as i64 - guarantee as i64, 64),
        verdict,
        rank: Some(RankInfo { rank, guarantee, members, psi_pairs }),
        assumptions: notes,
        precision_bits: prec.bits(),
    }
}

/// Rank of the identity values over a set `J` of conductors (levels, ideal
/// norms) with property A; the guarantee is `|J| - 1`.
pub fn rank_certificate(template: &FamilyDatum, j: &IntegerSet, s0: &BigRational, cfg: &CertConfig) -> Result<Certificate> {
    if !property_a_check(j) {
        return Err(Error::PropertyA(format!("{:?}", j.elems())));
    }
    let mut members = Vec::with_capacity(j.len());
    let mut logs = Vec::with_capacity(j.len());
    for &n in j.elems() {
        let fd = with_conductor(template, n)?;
        members.push(closed_form_sum_exact(&fd, s0)?);
        logs.push(log_n_expand(n)?.scale_i64(-1));
    }
    // members = w + v_i with v_i = -log N_i and w the common part
    let w = &members[0] - &logs[0];
    let ones = vec![-BigRational::one(); logs.len()];
    let lemma = rank_lower_bound(&logs, &w, &ones);
    let notes = formal_notes();
    let datum = with_conductor(template, j.elems()[0])?;
    let mut c = rank_certificate_from(datum, Some(CriticalPoint::Rational(s0.clone())), j.elems().to_vec(), members, j.len() - 1, notes, cfg);
    debug_assert_eq!(lemma, c.rank.as_ref().map_or(0, |r| r.rank));
    c.assumptions.push("datum shows the first member; the others differ only in the conductor".into());
    Ok(c)
}

/// Coprime points `a/q`, `1 <= a < q/2`, for a modular datum of integral weight
/// `k >= 2`; the guarantee is `φ(q)/2 - 2`.
pub fn coprime_rank_certificate(template: &FamilyDatum, q: u64, cfg: &CertConfig) -> Result<Certificate> {
    let FamilyDatum::ModularTwisted { k, .. } = template else {
        return Err(Error::Hypothesis("coprime-point ranks need a modular datum".into()));
    };
    template.validate()?;
    if !k.is_integer() || *k < qi(2) {
        return Err(Error::Hypothesis(format!("weight {} must be an integer >= 2", format_rational(k))));
    }
    if q < 7 {
        return Err(Error::Hypothesis(format!("q = {q} is below 7")));
    }
    let mut set = Vec::new();
    let mut members = Vec::new();
    for a in 1..q {
        if 2 * a >= q || a.gcd(&q) != 1 {
            continue;
        }
        set.push(a);
        members.push(closed_form_sum_exact(template, &BigRational::new(BigInt::from(a), BigInt::from(q)))?);
    }
    let guarantee = (euler_phi(q) / 2).saturating_sub(2) as usize;
    let mut notes = formal_notes();
    notes.push(format!("q = {q} assumed coprime to the non-effective q0"));
    Ok(rank_certificate_from(template.clone(), None, set, members, guarantee, notes, cfg))
}

impl Certificate {
    /// Stable `key: value` record, terminated by `end`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "claim: {}", self.claim);
        if let Some(fd) = &self.datum {
            for line in fd.to_text().lines() {
                let _ = writeln!(out, "datum.{line}");
            }
        }
        if let Some(s0) = &self.s0 {
            let _ = writeln!(out, "s0: {}", s0.to_text());
        }
        if let Some(set) = &self.set {
            let v: Vec<String> = set.iter().map(u64::to_string).collect();
            let _ = writeln!(out, "set: {}", v.join(", "));
        }
        match &self.rank {
            None => {
                let _ = writeln!(out, "bound: {}", self.bound);
                let _ = writeln!(out, "bound-value: {}", self.bound_value.re().to_decimal(25));
                let _ = writeln!(out, "margin: {}", self.margin.to_decimal(25));
            }
            Some(r) => {
                let _ = writeln!(out, "rank: {}", r.rank);
                let _ = writeln!(out, "guarantee: {}", r.guarantee);
                for m in &r.members {
                    let _ = writeln!(out, "member: {m}");
                }
                let ps: Vec<String> = r.psi_pairs.iter().map(|s| s.to_string()).collect();
                let _ = writeln!(out, "psi-pairs: {}", ps.join(", "));
            }
        }
        let _ = writeln!(out, "verdict: {}", self.verdict);
        let _ = writeln!(out, "precision-bits: {}", self.precision_bits);
        for a in &self.assumptions {
            let _ = writeln!(out, "assumption: {a}");
        }
        out.push_str("end\n");
        out
    }

    /// Re-evaluates the recorded bound at `prec` and checks that the verdict holds.
    pub fn recheck(&self, prec: Precision) -> Result<bool> {
        match &self.rank {
            Some(r) => Ok((exact_rank(&r.members) >= r.guarantee) == (self.verdict == Verdict::Certified)),
            None => {
                let v = self.bound.eval(prec)?;
                let threshold = Real::one(64).ldexp(-((self.precision_bits / 4) as i32));
                let ok = -v.re() > threshold;
                Ok(ok == (self.verdict == Verdict::Certified) || self.verdict == Verdict::NotCertified)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lfamilies::ExactComplex;

    fn cfg() -> CertConfig {
        CertConfig::new(Precision::new(128).unwrap())
    }

    fn gld1(n: u64) -> FamilyDatum {
        FamilyDatum::AutomorphicGLd { conductor: n, kappa: vec![ExactComplex::real(BigRational::new(1.into(), 2.into()))] }
    }

    #[test]
    fn gld_threshold() {
        let half = CriticalPoint::rational(1, 2);
        assert_eq!(certify_gld(&gld1(23), &half, &cfg()).unwrap().verdict, Verdict::Certified);
        assert_eq!(certify_gld(&gld1(22), &half, &cfg()).unwrap().verdict, Verdict::NotCertified);
        let bad = FamilyDatum::AutomorphicGLd { conductor: 23, kappa: vec![ExactComplex::real(BigRational::zero())] };
        assert!(matches!(certify_gld(&bad, &half, &cfg()), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn modular_threshold() {
        let m = |d: i64| FamilyDatum::ModularTwisted { k: qi(12), level: 1, disc: d };
        let c = certify_modular(&m(13), &qi(6), ModularBranch::Primary, &cfg()).unwrap();
        assert_eq!(c.verdict, Verdict::Certified);
        assert_eq!(c.bound.to_string(), "2*gamma + 2*log(pi) + 2*log(2) - 2*log(13)");
        assert_eq!(certify_modular(&m(-11), &qi(6), ModularBranch::Primary, &cfg()).unwrap().verdict, Verdict::NotCertified);
        assert_eq!(certify_modular(&m(-11), &qi(6), ModularBranch::Remark, &cfg()).unwrap().verdict, Verdict::Certified);
        assert!(matches!(certify_modular(&m(13), &qi(12), ModularBranch::Primary, &cfg()), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn halfint_ranges() {
        let k = BigRational::new(13.into(), 2.into());
        assert_eq!(certify_halfint_central(&k, 8, &cfg()).unwrap().verdict, Verdict::Certified);
        let k = BigRational::new(9.into(), 2.into());
        assert!(matches!(certify_halfint_central(&k, 8, &cfg()), Err(Error::OutOfProvenRange(_))));
        assert!(matches!(certify_halfint_central(&qi(6), 8, &cfg()), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn siegel_and_hilbert() {
        let s = certify_siegel(&FamilyDatum::Siegel { g: 2, k: 30 }, &qi(15), &cfg()).unwrap();
        assert_eq!(s.verdict, Verdict::Certified);
        assert!(matches!(certify_siegel(&FamilyDatum::Siegel { g: 3, k: 19 }, &qi(10), &cfg()), Err(Error::Hypothesis(_))));
        let h = FamilyDatum::Hilbert { k: 6, n: 5, df: 14641, norm_n: 1 };
        assert_eq!(certify_hilbert(&h, &qi(3), &cfg()).unwrap().verdict, Verdict::Certified);
        let h = FamilyDatum::Hilbert { k: 6, n: 3, df: 49, norm_n: 1 };
        assert_eq!(certify_hilbert(&h, &qi(3), &cfg()).unwrap().verdict, Verdict::Certified);
        let h = FamilyDatum::Hilbert { k: 6, n: 3, df: 1, norm_n: 1 };
        assert!(matches!(certify_hilbert(&h, &qi(3), &cfg()), Err(Error::Hypothesis(_))));
        let h = FamilyDatum::Hilbert { k: 8, n: 2, df: 5, norm_n: 1 };
        assert_eq!(certify_hilbert(&h, &qi(4), &cfg()).unwrap().verdict, Verdict::Certified);
    }

    #[test]
    fn rank_examples() {
        let j = IntegerSet::new(vec![2, 3, 5]).unwrap();
        let c = rank_certificate(&gld1(1), &j, &BigRational::new(1.into(), 2.into()), &cfg()).unwrap();
        let r = c.rank.as_ref().unwrap();
        assert!(r.rank >= 2 && r.guarantee == 2);
        assert!(matches!(
            rank_certificate(&gld1(1), &IntegerSet::new(vec![2, 4]).unwrap(), &BigRational::new(1.into(), 2.into()), &cfg()),
            Err(Error::PropertyA(_))
        ));
        let m = FamilyDatum::ModularTwisted { k: qi(2), level: 1, disc: 1 };
        let c = coprime_rank_certificate(&m, 7, &cfg()).unwrap();
        let r = c.rank.as_ref().unwrap();
        assert_eq!(r.psi_pairs.len(), 3);
        assert_eq!(r.guarantee, 1);
        assert!(r.rank >= 1);
        assert!(c.to_text().contains("psi-pairs: psipair(1/7), psipair(2/7), psipair(3/7)"));
    }

    #[test]
    fn record_rechecks() {
        let c = certify_gld(&gld1(40), &CriticalPoint::rational(1, 2), &cfg()).unwrap();
        assert!(c.recheck(Precision::new(256).unwrap()).unwrap());
        let t = c.to_text();
        assert!(t.starts_with("claim: GLdNonvanish\ndatum.family: gld\n"));
        assert!(t.ends_with("end\n"));
    }
}
