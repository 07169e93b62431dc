//! Λ(s) = Q^s Γ(αs + μ) L(s) via the incomplete-gamma approximate functional
//! equation
//!
//! ```text
//! Λ(s) = Σ a(n) (Q/n)^s Γ(w1, λ_n x) + ε Σ ā(n) (Q/n)^(k-s) Γ(w2, λ_n / x)
//! ```
//!
//! with `λ_n = (n/Q)^(1/α)`, `w1 = αs + μ`, `w2 = α(k - s) + μ̄` and cutoff `x > 0`.

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::incgamma::upper_incomplete_gamma;
use super::series::CoefficientSeries;
use crate::error::{Error, Result};
use crate::lfamilies::{closed_form_higher, closed_form_sum, CriticalPoint, FamilyDatum};
use crate::precision::{ln_gamma, BigComplex, Precision, Real};

const MAX_PLANNED_TERMS: usize = 100_000_000;

pub const DEFAULT_CUTOFF: f64 = 1.2;

/// Evaluation settings.
#[derive(Clone, Debug, PartialEq)]
pub struct AFEConfig {
    pub precision: Precision,
    /// Cutoff `x` splitting the Mellin integral; any positive value gives the same Λ.
    /// At `x = 1` the formula is symmetric under `s -> k - s`, so the functional
    /// equation would hold by construction; the default is off that point.
    pub cutoff: f64,
    /// Forces this many terms per sum; must cover the truncation bound.
    pub terms: Option<usize>,
    /// Finite-difference step for [`log_derivative`]; default `2^(-bits/(2m+2))`.
    pub diff_step: Option<f64>,
    /// [`verify_identity`] passes when the residual is at most `2^-tolerance_bits`;
    /// default `bits/4`.
    pub tolerance_bits: Option<usize>,
}

impl AFEConfig {
    pub fn new(precision: Precision) -> Self {
        AFEConfig { precision, cutoff: DEFAULT_CUTOFF, terms: None, diff_step: None, tolerance_bits: None }
    }

    pub fn with_cutoff(mut self, x: f64) -> Result<Self> {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::Domain(format!("cutoff must be a positive real, got {x}")));
        }
        self.cutoff = x;
        Ok(self)
    }

    pub fn tolerance(&self) -> Real {
        let t = self.tolerance_bits.unwrap_or(self.precision.bits() / 4);
        Real::one(64).ldexp(-(t as i32))
    }

    fn check(&self) -> Result<()> {
        if !(self.cutoff.is_finite() && self.cutoff > 0.0) {
            return Err(Error::Domain(format!("cutoff must be a positive real, got {}", self.cutoff)));
        }
        if let Some(h) = self.diff_step {
            if !(h.is_finite() && h > 0.0) {
                return Err(Error::Domain(format!("diff_step must be a positive real, got {h}")));
            }
        }
        Ok(())
    }

    fn at_bits(&self, bits: usize) -> Self {
        let mut c = self.clone();
        c.precision = Precision::new(bits).expect("raised precision is valid");
        c
    }
}

/// Gamma-factor data of a numerically supported family.
#[derive(Clone, Debug)]
pub struct GammaData {
    /// `log Q`.
    pub log_q: Real,
    pub alpha: BigRational,
    pub mu: BigComplex,
    /// Reflection point of the functional equation.
    pub k: BigRational,
}

impl GammaData {
    /// Gamma data for `meta`, or `UnsupportedFamily`.
    pub fn for_family(meta: &FamilyDatum, prec: Precision) -> Result<Self> {
        let bits = prec.working_bits();
        let two_pi = Real::pi(bits).mul_i64(2);
        let ln = |n: u64| Real::from_u64(n, bits).ln();
        let half = BigRational::new(1.into(), 2.into());
        match meta {
            FamilyDatum::AutomorphicGLd { conductor, kappa } => match kappa.as_slice() {
                [k1] => Ok(GammaData {
                    log_q: (&ln(*conductor) - &Real::pi(bits).ln()).div_i64(2),
                    alpha: half,
                    mu: k1.to_complex(prec).div_i64(2),
                    k: BigRational::one(),
                }),
                [k1, k2] => {
                    let one = BigRational::one();
                    let lo = if k2.im == k1.im && &k2.re - &k1.re == one {
                        k1
                    } else if k1.im == k2.im && &k1.re - &k2.re == one {
                        k2
                    } else {
                        return Err(Error::UnsupportedFamily(format!(
                            "degree-2 data needs local parameters (κ, κ+1), got ({k1}, {k2})"
                        )));
                    };
                    Ok(GammaData {
                        log_q: &ln(*conductor).div_i64(2) - &two_pi.ln(),
                        alpha: one,
                        mu: lo.to_complex(prec),
                        k: BigRational::one(),
                    })
                }
                _ => Err(Error::UnsupportedFamily(format!("automorphic L-functions of degree {} > 2", kappa.len()))),
            },
            FamilyDatum::ModularTwisted { k, level, disc } => {
                if !k.is_integer() {
                    return Err(Error::UnsupportedFamily("half-integral weight (root number not computable)".into()));
                }
                Ok(GammaData {
                    log_q: &(&ln(*level).div_i64(2) + &ln(disc.unsigned_abs())) - &two_pi.ln(),
                    alpha: BigRational::one(),
                    mu: BigComplex::zero(prec),
                    k: k.clone(),
                })
            }
            FamilyDatum::Hilbert { k, n, df, norm_n } => {
                if *n != 1 {
                    return Err(Error::UnsupportedFamily(format!("Hilbert forms over fields of degree {n} > 1")));
                }
                Ok(GammaData {
                    log_q: &(&ln(*norm_n).div_i64(2) + &ln(*df)) - &two_pi.ln(),
                    alpha: BigRational::one(),
                    mu: BigComplex::zero(prec),
                    k: BigRational::from_integer((*k).into()),
                })
            }
            FamilyDatum::Siegel { .. } => Err(Error::UnsupportedFamily("Koecher-Maass series of Siegel forms".into())),
        }
    }

    fn alpha_real(&self, bits: usize) -> Real {
        Real::from_rational(&self.alpha, bits)
    }

    /// `w = α s + μ`.
    fn w(&self, s: &BigComplex) -> BigComplex {
        let prec = s.prec();
        &s.scale(&self.alpha_real(prec.working_bits())) + &self.mu.with_prec(prec)
    }

    /// `Q^s Γ(αs + μ)`.
    pub fn factor(&self, s: &BigComplex) -> Result<BigComplex> {
        let lg = ln_gamma(&self.w(s))?;
        let lq = BigComplex::from_real(self.log_q.clone(), s.prec());
        Ok((&(s * &lq) + &lg).exp())
    }
}

// Number of terms after which Σ_{n>T} |a(n)(Q/n)^σ Γ(a, λ_n y0)| < e^ln_target,
// using |a(n)| <= C n^θ and Γ(a, y) <= 2 y^(a-1) e^-y for y >= 2 max(a-1, 0) + 1.
#[allow(clippy::too_many_arguments)]
fn plan_terms(log_q: f64, alpha: f64, sigma: f64, re_w: f64, y0: f64, ln_c: f64, theta: f64, ln_target: f64) -> usize {
    let ln_term = |n: usize| -> f64 {
        let ln_n = (n as f64).ln();
        let y = ((ln_n - log_q) / alpha).exp() * y0;
        if y < 2.0 * (re_w - 1.0).max(0.0) + 1.0 {
            return f64::INFINITY;
        }
        ln_c + theta * ln_n + sigma * (log_q - ln_n) + std::f64::consts::LN_2 + (re_w - 1.0) * y.ln() - y
    };
    let mut n = 0;
    let mut next = ln_term(1);
    let mut after = ln_term(2);
    while n < MAX_PLANNED_TERMS {
        if next.is_finite() && after < next {
            // geometric tail estimate from the ratio of the next two bounds
            let ratio = (after - next).exp();
            if next - (1.0 - ratio).ln() < ln_target {
                return n;
            }
        }
        n += 1;
        next = after;
        after = ln_term(n + 2);
    }
    MAX_PLANNED_TERMS + 1
}

struct Plan {
    wp: Precision,
    first: usize,
    second: usize,
}

fn plan(cs: &CoefficientSeries, gd: &GammaData, s: &BigComplex, cfg: &AFEConfig) -> Result<Plan> {
    let prec = cfg.precision;
    let alpha = gd.alpha.to_f64().unwrap_or(1.0);
    let (sigma, t) = s.to_f64_pair();
    // cancellation between terms grows like e^(απ|t|/2)
    let extra = 40 + (alpha * std::f64::consts::PI * t.abs() / (2.0 * std::f64::consts::LN_2)).ceil() as usize;
    let wp = prec.elevated(extra);
    let k = gd.k.to_f64().unwrap_or(0.0);
    let (mu_re, _) = gd.mu.to_f64_pair();
    let re_w1 = alpha * sigma + mu_re;
    let re_w2 = alpha * (k - sigma) + mu_re;
    let scale = {
        let lg = ln_gamma(&gd.w(&s.with_prec(Precision::new(64)?)))?;
        (lg.re().to_f64() + sigma * gd.log_q.to_f64()).min(0.0)
    };
    let ln_target = scale - (prec.working_bits() as f64 + 8.0) * std::f64::consts::LN_2;
    let ln_c = cs.growth_constant().to_f64().unwrap_or(1.0).ln();
    let theta = cs.growth_exponent().to_f64().unwrap_or(0.0);
    let lq = gd.log_q.to_f64();
    let x = cfg.cutoff;
    let first = plan_terms(lq, alpha, sigma, re_w1, x, ln_c, theta, ln_target);
    let second = plan_terms(lq, alpha, k - sigma, re_w2, 1.0 / x, ln_c, theta, ln_target);
    let needed = first.max(second).max(1);
    let available = match cfg.terms {
        Some(t) => t.min(cs.nmax()),
        None => cs.nmax(),
    };
    if needed > available {
        return Err(Error::Truncation { needed, available });
    }
    match cfg.terms {
        Some(t) => Ok(Plan { wp, first: t, second: t }),
        None => Ok(Plan { wp, first: first.max(1), second: second.max(1) }),
    }
}

/// Terms used by each of the two AFE sums at `s`.
pub fn afe_terms(cs: &CoefficientSeries, s: &BigComplex, cfg: &AFEConfig) -> Result<(usize, usize)> {
    cfg.check()?;
    let gd = GammaData::for_family(cs.meta(), cfg.precision)?;
    let p = plan(cs, &gd, s, cfg)?;
    Ok((p.first, p.second))
}

fn root_number(cs: &CoefficientSeries, prec: Precision) -> BigComplex {
    cs.root_number().to_complex(prec)
}

fn afe_sum(cs: &CoefficientSeries, gd: &GammaData, s: &BigComplex, terms: usize, x: &Real, wp: Precision) -> Result<BigComplex> {
    let bits = wp.working_bits();
    let inv_alpha = Real::from_rational(&gd.alpha.recip(), bits);
    let w = gd.w(s);
    let mut acc = BigComplex::zero(wp);
    for n in 1..=terms {
        let a = cs.coeff(n).expect("planned terms are available");
        if a.is_zero() {
            continue;
        }
        let ln_n = Real::from_u64(n as u64, bits).ln();
        let d = &gd.log_q - &ln_n;
        let lambda = (&(-&d) * &inv_alpha).exp();
        let y = &lambda * x;
        let g = upper_incomplete_gamma(&w, &y)?;
        let pw = s.scale(&d).exp();
        let term = (&pw * &g).scale(&Real::from_rational(a, bits));
        acc = &acc + &term;
    }
    Ok(acc)
}

fn lambda_afe(cs: &CoefficientSeries, gd: &GammaData, s: &BigComplex, cfg: &AFEConfig) -> Result<(BigComplex, Precision)> {
    let p = plan(cs, gd, s, cfg)?;
    let wp = p.wp;
    let s = s.with_prec(wp);
    let bits = wp.working_bits();
    let x = Real::from_f64(cfg.cutoff, bits);
    let first = afe_sum(cs, gd, &s, p.first, &x, wp)?;
    let gd2 = GammaData { mu: gd.mu.conj(), ..gd.clone() };
    let s2 = (-&s).add_real(&Real::from_rational(&gd.k, bits));
    // coefficients are rational, so the dual series is the series itself
    let second = afe_sum(cs, &gd2, &s2, p.second, &x.recip(), wp)?;
    let v = &first + &(&root_number(cs, wp) * &second);
    Ok((v.ensure_finite("approximate functional equation")?, wp))
}

/// Λ(s) from the approximate functional equation.
pub fn afe_lambda(cs: &CoefficientSeries, s: &BigComplex, cfg: &AFEConfig) -> Result<BigComplex> {
    cfg.check()?;
    let gd = GammaData::for_family(cs.meta(), cfg.precision)?;
    let (v, _) = lambda_afe(cs, &gd, s, cfg)?;
    Ok(v.with_prec(cfg.precision))
}

/// L(s) from the approximate functional equation (valid anywhere away from Γ poles).
pub fn afe_l(cs: &CoefficientSeries, s: &BigComplex, cfg: &AFEConfig) -> Result<BigComplex> {
    cfg.check()?;
    let gd = GammaData::for_family(cs.meta(), cfg.precision)?;
    let (v, wp) = lambda_afe(cs, &gd, s, cfg)?;
    let f = gd.factor(&s.with_prec(wp))?;
    (&v / &f).with_prec(cfg.precision).ensure_finite("L(s)")
}

/// Truncated Dirichlet sum with a bound on the discarded tail.
#[derive(Clone, Debug)]
pub struct DirectValue {
    pub value: BigComplex,
    /// `C Nmax^(θ-σ+1) / (σ-θ-1)`.
    pub tail_bound: Real,
    pub terms: usize,
}

/// `Σ_{n <= Nmax} a(n) n^-s` for `Re s > θ + 1`.
pub fn direct_l(cs: &CoefficientSeries, s: &BigComplex, cfg: &AFEConfig) -> Result<DirectValue> {
    let prec = cfg.precision;
    let wp = prec.elevated(16);
    let bits = wp.working_bits();
    let theta = Real::from_rational(cs.growth_exponent(), bits);
    let excess = &(s.re() - &theta) - &Real::one(bits);
    if !excess.is_positive() {
        return Err(Error::Domain(format!(
            "direct evaluation needs Re s > θ + 1 = {}",
            (&theta + &Real::one(bits)).to_decimal(10)
        )));
    }
    let s = s.with_prec(wp);
    let mut acc = BigComplex::zero(wp);
    for (i, a) in cs.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let ln_n = Real::from_u64(i as u64 + 1, bits).ln();
        let t = (-&s).scale(&ln_n).exp().scale(&Real::from_rational(a, bits));
        acc = &acc + &t;
    }
    let n = Real::from_u64(cs.nmax() as u64, 64);
    let c = Real::from_rational(cs.growth_constant(), 64);
    let excess = excess.round_to(64);
    let tail_bound = &(&c * &(&(-&excess) * &n.ln()).exp()) / &excess;
    Ok(DirectValue { value: acc.with_prec(prec), tail_bound, terms: cs.nmax() })
}

/// Λ(s): the gamma factor times the Dirichlet sum when its certified tail is
/// below `2^(-bits/2)`, the approximate functional equation otherwise.
pub fn complete_l(cs: &CoefficientSeries, s: &BigComplex, cfg: &AFEConfig) -> Result<BigComplex> {
    cfg.check()?;
    let gd = GammaData::for_family(cs.meta(), cfg.precision)?;
    if let Ok(d) = direct_l(cs, s, cfg) {
        if d.tail_bound <= cfg.precision.half_tolerance() {
            let f = gd.factor(&s.with_prec(cfg.precision.elevated(16)))?;
            return Ok((&f * &d.value).with_prec(cfg.precision));
        }
    }
    let (v, _) = lambda_afe(cs, &gd, s, cfg)?;
    Ok(v.with_prec(cfg.precision))
}

fn binomial(m: u32, j: u32) -> i64 {
    (0..j).fold(1i64, |c, i| c * (m - i) as i64 / (i + 1) as i64)
}

/// `(L'/L)^(order-1)(s)`: the `order`-th derivative of `log L` by central
/// differences of `log(L(s+t)/L(s))`, with one Richardson step.
pub fn log_derivative(cs: &CoefficientSeries, s: &BigComplex, order: u32, cfg: &AFEConfig) -> Result<BigComplex> {
    cfg.check()?;
    if order == 0 {
        return Err(Error::Domain("log_derivative needs order >= 1".into()));
    }
    let bits = cfg.precision.bits();
    let m = order;
    let lost = (m as usize * bits).div_ceil(2 * m as usize + 2);
    let inner = cfg.at_bits(bits + lost + 16);
    let ip = inner.precision;
    let s = s.with_prec(ip);
    let l0 = afe_l(cs, &s, &inner)?;
    if l0.abs() < Real::one(64).ldexp(-((bits / 4) as i32)) {
        return Err(Error::ZeroValue(l0.abs().to_decimal(6)));
    }
    let h = match cfg.diff_step {
        Some(h) => Real::from_f64(h, ip.working_bits()),
        None => Real::one(ip.working_bits()).ldexp(-((bits / (2 * m as usize + 2)) as i32)),
    };
    let diff = |h: &Real| -> Result<BigComplex> {
        let mut acc = BigComplex::zero(ip);
        for j in 0..=m {
            // offset (m/2 - j) h
            let off = h.mul_i64(m as i64 - 2 * j as i64).div_i64(2);
            let g = if off.is_zero() {
                continue;
            } else {
                let v = afe_l(cs, &s.add_real(&off), &inner)?;
                (&v / &l0).ln()
            };
            let c = if j % 2 == 0 { binomial(m, j) } else { -binomial(m, j) };
            acc = &acc + &g.mul_i64(c);
        }
        Ok(acc.scale(&h.powi(m as i64).recip()))
    };
    let d1 = diff(&h)?;
    let d2 = diff(&h.div_i64(2))?;
    let r = (&d2.mul_i64(4) - &d1).div_i64(3);
    Ok(r.with_prec(cfg.precision))
}

/// Numeric left side, closed-form right side and residual of an identity check.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub s0: CriticalPoint,
    pub m: u32,
    /// `(L'/L)^(m)(s0) + (-1)^m (L'/L)^(m)(k - s0)` from the coefficients.
    pub lhs: BigComplex,
    /// The family's closed form.
    pub rhs: BigComplex,
    pub residual: Real,
    pub tolerance: Real,
    pub pass: bool,
}

/// Compares the numerically evaluated sum of logarithmic derivatives at `s0`
/// and `k - s0` with the closed form of the family in `cs`.
pub fn verify_identity(cs: &CoefficientSeries, s0: &CriticalPoint, m: u32, cfg: &AFEConfig) -> Result<IdentityReport> {
    cfg.check()?;
    let meta = cs.meta();
    let gd = GammaData::for_family(meta, cfg.precision)?;
    meta.check_strip(s0)?;
    let prec = cfg.precision;
    let rhs = if m == 0 { closed_form_sum(meta, s0, prec)? } else { closed_form_higher(meta, s0, m, prec)? };
    let s1 = s0.to_complex(prec.elevated(8));
    let s2 = (-&s1).add_real(&Real::from_rational(&gd.k, s1.prec().working_bits()));
    let a = log_derivative(cs, &s1, m + 1, cfg)?;
    let b = log_derivative(cs, &s2, m + 1, cfg)?;
    let lhs = if m.is_multiple_of(2) { &a + &b } else { &a - &b };
    let residual = lhs.dist(&rhs);
    let tolerance = cfg.tolerance();
    let pass = residual <= tolerance;
    Ok(IdentityReport { s0: s0.clone(), m, lhs, rhs, residual, tolerance, pass })
}
