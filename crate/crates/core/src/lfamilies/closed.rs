//! Right-hand sides of the logarithmic-derivative identities.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::datum::{CriticalPoint, ExactComplex, FamilyDatum};
use crate::error::{Error, Result};
use crate::precision::{format_rational, polygamma, BigComplex, PolygammaOrder, Precision, Real};
use crate::symbolic::{log_n_expand, reduce_psi, ConstExpr, ConstSymbol};

// coeff * ψ^(m)(alpha*s0 + beta)
#[derive(Clone, Debug)]
struct PsiTerm {
    coeff: BigRational,
    alpha: BigRational,
    beta: ExactComplex,
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn qi(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn log_2pi() -> ConstExpr {
    let mut e = ConstExpr::symbol(ConstSymbol::LogPrime(2));
    e.add_term(ConstSymbol::LogPi, BigRational::one());
    e
}

fn real_beta(b: BigRational) -> ExactComplex {
    ExactComplex::real(b)
}

// Constant part and ψ^(m) terms of the identity for the given derivative order.
// Terms are listed in pairs (s0 side, reflected side) so that exact cancellations
// at the centre survive floating-point summation.
fn identity_terms(fd: &FamilyDatum, m: u32) -> Result<(ConstExpr, Vec<PsiTerm>)> {
    fd.validate()?;
    let one = BigRational::one();
    let sgn = |e: u32| if e.is_multiple_of(2) { one.clone() } else { -one.clone() };
    let mut consts = ConstExpr::zero();
    let mut terms = Vec::new();
    let mut pair = |c1: BigRational, a1: BigRational, b1: ExactComplex, c2: BigRational, a2: BigRational, b2: ExactComplex| {
        terms.push(PsiTerm { coeff: c1, alpha: a1, beta: b1 });
        terms.push(PsiTerm { coeff: c2, alpha: a2, beta: b2 });
    };
    match fd {
        FamilyDatum::AutomorphicGLd { conductor, kappa } => {
            if m == 0 {
                consts.add_term(ConstSymbol::LogPi, qi(kappa.len() as i64));
                consts = &consts - &log_n_expand(*conductor)?;
            }
            // -2^(-m-1) [ψ^(m)((s+κ)/2) + (-1)^m ψ^(m)((1-s+κ)/2)]
            let c = -BigRational::new(BigInt::one(), BigInt::one() << (m as usize + 1));
            for k in kappa {
                let half_k = ExactComplex { re: &k.re / qi(2), im: &k.im / qi(2) };
                let shifted = ExactComplex { re: (&k.re + &one) / qi(2), im: &k.im / qi(2) };
                pair(c.clone(), q(1, 2), half_k, &c * sgn(m), q(-1, 2), shifted);
            }
        }
        FamilyDatum::ModularTwisted { k, level, disc } => {
            if m == 0 {
                consts = log_2pi().scale_i64(2);
                consts = &consts - &log_n_expand(*level)?;
                consts = &consts - &log_n_expand(disc.unsigned_abs())?.scale_i64(2);
            }
            let c2 = if m == 0 { -one.clone() } else { sgn(m + 1) };
            pair(-one.clone(), one.clone(), real_beta(BigRational::zero()), c2, -one.clone(), real_beta(k.clone()));
        }
        FamilyDatum::Hilbert { k, n, df, norm_n } => {
            let nn = qi(*n as i64);
            if m == 0 {
                consts = log_2pi().scale(&(&nn * qi(2)));
                consts = &consts - &log_n_expand(*norm_n)?;
                consts = &consts - &log_n_expand(*df)?.scale_i64(2);
            }
            let c2 = if m == 0 { -nn.clone() } else { -&nn * sgn(m) };
            pair(-nn.clone(), one.clone(), real_beta(BigRational::zero()), c2, -one.clone(), real_beta(qi(*k)));
        }
        FamilyDatum::Siegel { g, k } => {
            if m == 0 {
                consts = log_2pi().scale_i64(2 * *g as i64);
            }
            let c2 = if m == 0 { -one.clone() } else { sgn(m + 1) };
            for nu in 0..*g as i64 {
                let h = q(nu, 2);
                pair(-one.clone(), one.clone(), real_beta(-h.clone()), c2.clone(), -one.clone(), real_beta(qi(*k) - h));
            }
        }
    }
    Ok((consts, terms))
}

fn eval_terms(consts: &ConstExpr, terms: &[PsiTerm], m: u32, s0: &CriticalPoint, prec: Precision) -> Result<BigComplex> {
    let wp = prec.elevated(8);
    let s = s0.to_complex(wp);
    let mut acc = BigComplex::zero(wp);
    for pr in terms.chunks(2) {
        let mut part = BigComplex::zero(wp);
        for t in pr {
            let arg = match (s0.as_rational(), t.beta.is_real()) {
                (Some(r), true) => BigComplex::from_rational(&(&t.alpha * r + &t.beta.re), wp),
                _ => &s.scale(&Real::from_rational(&t.alpha, wp.bits())) + &t.beta.to_complex(wp),
            };
            let v = polygamma(PolygammaOrder::new(m), &arg)?;
            part = &part + &v.scale(&Real::from_rational(&t.coeff, wp.bits()));
        }
        acc = &acc + &part;
    }
    if !consts.is_zero() {
        acc = &acc + &consts.eval(wp)?;
    }
    Ok(acc.with_prec(prec))
}

fn exact_terms(consts: &ConstExpr, terms: &[PsiTerm], m: u32, s0: &BigRational) -> Result<ConstExpr> {
    let mut out = consts.clone();
    for t in terms {
        if !t.beta.is_real() {
            return Err(Error::Domain("exact closed form needs real rational local parameters".into()));
        }
        let arg = &t.alpha * s0 + &t.beta.re;
        if arg.is_integer() && !arg.is_positive() {
            return Err(Error::Pole(format_rational(&arg)));
        }
        out.add_expr(&reduce_psi(m, &arg)?, &t.coeff);
    }
    Ok(out)
}

/// Numerical right-hand side of the family's identity for `L'/L(s0) + L'/L(k - s0)`.
pub fn closed_form_sum(fd: &FamilyDatum, s0: &CriticalPoint, prec: Precision) -> Result<BigComplex> {
    fd.check_strip(s0)?;
    let (c, t) = identity_terms(fd, 0)?;
    eval_terms(&c, &t, 0, s0, prec)
}

/// Exact right-hand side over the constant basis, for rational `s0`.
pub fn closed_form_sum_exact(fd: &FamilyDatum, s0: &BigRational) -> Result<ConstExpr> {
    fd.check_strip(&CriticalPoint::Rational(s0.clone()))?;
    let (c, t) = identity_terms(fd, 0)?;
    exact_terms(&c, &t, 0, s0)
}

/// Right-hand side of the m-th derivative identity for
/// `(L'/L)^(m)(s0) + (-1)^m (L'/L)^(m)(k - s0)`.
pub fn closed_form_higher(fd: &FamilyDatum, s0: &CriticalPoint, m: u32, prec: Precision) -> Result<BigComplex> {
    if m == 0 {
        return closed_form_sum(fd, s0, prec);
    }
    fd.check_strip(s0)?;
    let (c, t) = identity_terms(fd, m)?;
    eval_terms(&c, &t, m, s0, prec)
}

/// Exact form of [`closed_form_higher`].
pub fn closed_form_higher_exact(fd: &FamilyDatum, s0: &BigRational, m: u32) -> Result<ConstExpr> {
    if m == 0 {
        return closed_form_sum_exact(fd, s0);
    }
    fd.check_strip(&CriticalPoint::Rational(s0.clone()))?;
    let (c, t) = identity_terms(fd, m)?;
    exact_terms(&c, &t, m, s0)
}

/// Direction for [`quotient_derivative_convert`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvertDirection {
    /// `[(L'/L), (L'/L)', ..., (L'/L)^(M-1)]` to `[L'/L, L''/L, ..., L^(M)/L]`.
    LogToRatios,
    /// The inverse map.
    RatiosToLog,
}

/// Converts between derivatives of `L'/L` and the ratios `L^(j)/L`, using
/// `R_{n+1} = Σ_{i=0}^{n} C(n, i) ℓ_i R_{n-i}` with `R_0 = 1`.
pub fn quotient_derivative_convert(seq: &[BigComplex], dir: ConvertDirection) -> Vec<BigComplex> {
    let Some(first) = seq.first() else {
        return Vec::new();
    };
    let prec = first.prec();
    let wp = prec.elevated(16);
    let n = seq.len();
    let binom = |a: usize, b: usize| -> Real {
        let mut c = BigInt::one();
        for j in 0..b {
            c = c * BigInt::from(a - j) / BigInt::from(j + 1);
        }
        Real::from_bigint(&c, wp.bits())
    };
    let input: Vec<BigComplex> = seq.iter().map(|z| z.with_prec(wp)).collect();
    // r[j] = L^(j)/L, ell[i] = (L'/L)^(i)
    let mut r = vec![BigComplex::one(wp)];
    let mut ell: Vec<BigComplex> = Vec::with_capacity(n);
    match dir {
        ConvertDirection::LogToRatios => {
            ell = input;
            for k in 0..n {
                let mut acc = BigComplex::zero(wp);
                for i in 0..=k {
                    acc = &acc + &(&ell[i] * &r[k - i]).scale(&binom(k, i));
                }
                r.push(acc);
            }
            r.into_iter().skip(1).map(|z| z.with_prec(prec)).collect()
        }
        ConvertDirection::RatiosToLog => {
            r.extend(input);
            for k in 0..n {
                let mut acc = r[k + 1].clone();
                for i in 0..k {
                    acc = &acc - &(&ell[i] * &r[k - i]).scale(&binom(k, i));
                }
                ell.push(acc);
            }
            ell.into_iter().map(|z| z.with_prec(prec)).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::euler_gamma;

    fn p() -> Precision {
        Precision::new(128).unwrap()
    }

    fn modular(k: i64, n: u64, d: i64) -> FamilyDatum {
        FamilyDatum::ModularTwisted { k: qi(k), level: n, disc: d }
    }

    #[test]
    fn delta_center_value() {
        let fd = modular(12, 1, 1);
        let v = closed_form_sum(&fd, &CriticalPoint::rational(6, 1), p()).unwrap();
        // 2 log 2π + 2γ - 137/30
        let two_pi = Real::pi(160).ldexp(1);
        let want = &(&two_pi.ln().mul_i64(2) + &euler_gamma(p()).re().mul_i64(2)) - &Real::from_rational(&q(137, 30), 160);
        assert!((v.re() - &want).abs().to_f64() < 1e-35);
        assert!((v.re().to_f64() - 0.26352).abs() < 1e-5);
        let e = closed_form_sum_exact(&fd, &qi(6)).unwrap();
        assert_eq!(e.to_string(), "2*gamma + 2*log(pi) + 2*log(2) - 137/30");
        let e5 = closed_form_sum_exact(&modular(12, 1, 5), &qi(6)).unwrap();
        assert_eq!((&e5 - &e).to_string(), "-2*log(5)");
    }

    #[test]
    fn coprime_point_example() {
        let e = closed_form_sum_exact(&modular(2, 1, 1), &q(1, 3)).unwrap();
        assert_eq!(e.to_string(), "2*log(pi) + 2*log(2) - psipair(1/3) - 3/2");
        let h = FamilyDatum::Hilbert { k: 2, n: 1, df: 1, norm_n: 1 };
        assert_eq!(closed_form_sum_exact(&h, &q(1, 3)).unwrap(), e);
    }

    #[test]
    fn higher_parity_and_value() {
        let fd = modular(2, 1, 1);
        let c = CriticalPoint::rational(1, 1);
        assert!(closed_form_higher(&fd, &c, 3, p()).unwrap().re().is_zero());
        let v = closed_form_higher(&fd, &c, 2, p()).unwrap();
        let z3 = crate::precision::zeta_odd(3, p()).unwrap();
        assert!(v.dist(&z3.mul_i64(4)).to_f64() < 1e-35);
        assert_eq!(closed_form_higher_exact(&fd, &qi(1), 2).unwrap().to_string(), "4*zeta(3)");
    }

    #[test]
    fn conversion_small_orders() {
        let a = BigComplex::from_f64(0.3, 0.1, p());
        let b = BigComplex::from_f64(-1.2, 0.5, p());
        let out = quotient_derivative_convert(&[a.clone(), b.clone()], ConvertDirection::LogToRatios);
        assert!(out[0].dist(&a).to_f64() < 1e-35);
        assert!(out[1].dist(&(&(&a * &a) + &b)).to_f64() < 1e-35);
        let back = quotient_derivative_convert(&out, ConvertDirection::RatiosToLog);
        assert!(back[1].dist(&b).to_f64() < 1e-35);
    }

    #[test]
    fn poles_and_strip() {
        let s = FamilyDatum::Siegel { g: 2, k: 20 };
        assert!(matches!(closed_form_sum(&s, &CriticalPoint::rational(1, 2), p()), Err(Error::Pole(_))));
        assert!(closed_form_sum(&s, &CriticalPoint::rational(21, 1), p()).is_err());
    }
}
