mod common;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use common::{cot_derivative, q};
use critstrip::afe::{delta_series, CoefficientSeries};
use critstrip::certificates::{certify_gld, coprime_rank_certificate, CertConfig, Verdict};
use critstrip::lfamilies::{
    closed_form_higher, closed_form_higher_exact, closed_form_sum, closed_form_sum_exact, quotient_derivative_convert,
    ConvertDirection, CriticalPoint, ExactComplex, FamilyDatum,
};
use critstrip::precision::{polygamma, BigComplex, PolygammaOrder, Precision, Real};
use critstrip::symbolic::{
    euler_phi, exact_rank, is_prime, psik2_expand, rank_lower_bound, reduce_polygamma, reduce_psi, ConstExpr, ConstSymbol,
    IntegerSet, property_a_check,
};

fn p(bits: usize) -> Precision {
    Precision::new(bits).unwrap()
}

fn psi_m(m: u32, z: &BigComplex) -> BigComplex {
    polygamma(PolygammaOrder::new(m), z).unwrap()
}

/// |a - b| scaled by max(1, |b|), compared with 2^-e.
fn close(a: &BigComplex, b: &BigComplex, e: usize) -> bool {
    let d = a.dist(b);
    let s = Real::max_of(&Real::one(64), &b.abs());
    (&d / &s) <= Real::one(64).ldexp(-(e as i32))
}

fn fd_modular(k: i64, n: u64, d: i64) -> FamilyDatum {
    FamilyDatum::ModularTwisted { k: q(k, 1), level: n, disc: d }
}

const DISCS: [i64; 8] = [1, 5, -3, -4, 8, -7, 13, -8];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn recurrence(re in -5.0f64..5.0, im in 0.05f64..5.0, sign in prop::bool::ANY) {
        let im = if sign { im } else { -im };
        let z = BigComplex::from_f64(re, im, p(128));
        let lhs = &(&psi_m(0, &z.add_i64(1)) - &psi_m(0, &z)) - &z.recip();
        prop_assert!(lhs.abs() <= p(128).half_tolerance());
    }

    #[test]
    fn integer_shift(m in 0u32..5, t in 1i64..21, re in 0.05f64..3.0, im in -2.0f64..2.0) {
        let prec = p(128);
        let z = BigComplex::from_f64(re, im, prec);
        let mut sum = BigComplex::zero(prec);
        for j in 0..t {
            sum = &sum + &z.add_i64(j).powi(-(m as i64) - 1);
        }
        let fact: i64 = (1..=m as i64).product();
        let sign = if m % 2 == 0 { 1 } else { -1 };
        let rhs = &psi_m(m, &z) + &sum.mul_i64(sign * fact);
        prop_assert!(close(&psi_m(m, &z.add_i64(t)), &rhs, 64));
    }

    #[test]
    fn reflection(m in 0u32..6, re in -3.0f64..3.0, im in 0.1f64..2.0) {
        let prec = p(128);
        let z = BigComplex::from_f64(re, im, prec);
        let one_minus = (-&z).add_i64(1);
        let sign = if m % 2 == 0 { -1 } else { 1 };
        let lhs = &psi_m(m, &one_minus) + &psi_m(m, &z).mul_i64(sign);
        let rhs = cot_derivative(m, &z).mul_i64(if m % 2 == 0 { 1 } else { -1 });
        let pi = BigComplex::from_real(Real::pi(160), prec);
        prop_assert!(close(&lhs, &(&rhs * &pi), 60));
    }

    #[test]
    fn duplication(m in 0u32..6, re in 0.05f64..6.0, im in -4.0f64..4.0) {
        let prec = p(128);
        let z = BigComplex::from_f64(re, im, prec);
        let half = BigComplex::from_f64(0.5, 0.0, prec);
        let mut rhs = &psi_m(m, &z) + &psi_m(m, &(&z + &half));
        if m == 0 {
            rhs = rhs.add_real(&Real::ln2(160).mul_i64(2));
        }
        let lhs = psi_m(m, &z.mul_i64(2)).mul_i64(1 << (m + 1));
        prop_assert!(close(&lhs, &rhs, 64));
    }

    #[test]
    fn digamma_is_increasing(a in 0.01f64..100.0, b in 0.01f64..100.0) {
        prop_assume!((a - b).abs() > 1e-9);
        let (x1, x2) = if a < b { (a, b) } else { (b, a) };
        let prec = p(128);
        let v1 = psi_m(0, &BigComplex::from_f64(x1, 0.0, prec));
        let v2 = psi_m(0, &BigComplex::from_f64(x2, 0.0, prec));
        prop_assert!(v1.re() < v2.re());
    }

    #[test]
    fn reduction_is_sound(m in 0u32..5, qq in 1i64..13, a in 1i64..13, shift in 0i64..11) {
        prop_assume!(a < qq && a.gcd(&qq) == 1);
        let prec = p(128);
        let e = reduce_polygamma(m, a, qq, shift).unwrap();
        let x = q(a, qq) + BigRational::from_integer(shift.into());
        let direct = psi_m(m, &BigComplex::from_rational(&x, prec));
        prop_assert!(close(&e.eval(prec).unwrap(), &direct, 64), "{e}");
    }

    #[test]
    fn reduction_is_canonical(m in 0u32..5, qq in 2i64..13, a in 1i64..13, shift in 0i64..8) {
        prop_assume!(a < qq && a.gcd(&qq) == 1);
        let x = q(a, qq);
        // shift first, then reduce; or reduce, then apply the recurrence exactly
        let direct = reduce_psi(m, &(&x + BigRational::from_integer(shift.into()))).unwrap();
        let mut stepped = reduce_psi(m, &x).unwrap();
        let fact: BigInt = (1..=m as u64).map(BigInt::from).product();
        let sign = if m % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        for j in 0..shift {
            let t = (&x + BigRational::from_integer(j.into())).recip();
            stepped.add_term(ConstSymbol::One, num_traits::pow(t, m as usize + 1) * BigRational::from_integer(&fact * &sign));
        }
        prop_assert_eq!(direct, stepped);
        prop_assert_eq!(reduce_polygamma(m, a, qq, shift).unwrap(), reduce_psi(m, &(&x + BigRational::from_integer(shift.into()))).unwrap());
    }

    #[test]
    fn lemma_li(primes in prop::sample::subsequence(vec![2u64, 3, 5, 7, 11, 13, 17, 19, 23], 1..7), w_seed in -5i64..6, r_seed in prop::collection::vec(-4i64..5, 9)) {
        let vs: Vec<ConstExpr> = primes.iter().map(|&p| ConstExpr::symbol(ConstSymbol::LogPrime(p))).collect();
        let mut w = ConstExpr::symbol(ConstSymbol::EulerGamma);
        w.add_term(ConstSymbol::LogPrime(2), q(w_seed, 1));
        let rs: Vec<BigRational> = r_seed.iter().take(vs.len()).map(|&r| q(r, 1)).collect();
        prop_assert!(rank_lower_bound(&vs, &w, &rs) + 1 >= exact_rank(&vs));
    }

    #[test]
    fn distinct_primes_have_property_a(primes in prop::sample::subsequence((2u64..200).filter(|n| is_prime(*n)).collect::<Vec<_>>(), 1..10), mult in prop::collection::vec(1u64..4, 10)) {
        let set: Vec<u64> = primes.iter().zip(&mult).map(|(p, e)| p.pow(*e as u32)).collect();
        prop_assert!(property_a_check(&IntegerSet::new(set).unwrap()));
    }

    #[test]
    fn closed_form_symmetry_and_coherence(k in 1i64..30, n in 1u64..200, di in 0usize..8, num in 1i64..400, den in 1i64..40) {
        let fd = fd_modular(k, n, DISCS[di]);
        prop_assume!(fd.validate().is_ok());
        let s0 = q(num, den);
        prop_assume!(s0 > BigRational::zero() && s0 < q(k, 1));
        let prec = p(128);
        let a = closed_form_sum(&fd, &CriticalPoint::Rational(s0.clone()), prec).unwrap();
        let b = closed_form_sum(&fd, &CriticalPoint::Rational(q(k, 1) - &s0), prec).unwrap();
        prop_assert!(close(&a, &b, 64));
        let e = closed_form_sum_exact(&fd, &s0).unwrap();
        prop_assert!(close(&e.eval(prec).unwrap(), &a, 64));
    }

    #[test]
    fn gld_symmetry(n in 1u64..1000, kap in prop::collection::vec(0i64..6, 1..4), num in 1i64..40) {
        let fd = FamilyDatum::AutomorphicGLd { conductor: n, kappa: kap.iter().map(|&k| ExactComplex::real(q(k, 2))).collect() };
        let s0 = q(num, 41);
        let prec = p(128);
        let a = closed_form_sum(&fd, &CriticalPoint::Rational(s0.clone()), prec).unwrap();
        let b = closed_form_sum(&fd, &CriticalPoint::Rational(BigRational::one() - &s0), prec).unwrap();
        prop_assert!(close(&a, &b, 64));
    }

    #[test]
    fn odd_order_vanishes_at_centre(m in 0u32..4, k in 1u64..20, n in 1u64..50, g in 2u32..4) {
        let m = 2 * m + 1;
        let fds = [
            fd_modular(k as i64, n, 1),
            FamilyDatum::Hilbert { k, n: 1, df: 1, norm_n: n },
            FamilyDatum::Siegel { g, k: 2 * (g as u64 + 2) + 2 * k },
        ];
        for fd in fds {
            let c = fd.reflection_point() / BigRational::from_integer(2.into());
            prop_assert!(closed_form_higher_exact(&fd, &c, m).unwrap().is_zero(), "{fd:?}");
            prop_assert!(closed_form_higher(&fd, &CriticalPoint::Rational(c), m, p(128)).unwrap().abs().is_zero());
        }
    }

    #[test]
    fn conversion_round_trip(vals in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 6)) {
        let prec = p(256);
        let seq: Vec<BigComplex> = vals.iter().map(|&(a, b)| BigComplex::from_f64(a, b, prec)).collect();
        let there = quotient_derivative_convert(&seq, ConvertDirection::LogToRatios);
        let back = quotient_derivative_convert(&there, ConvertDirection::RatiosToLog);
        for (x, y) in seq.iter().zip(&back) {
            prop_assert!(close(y, x, 256 - 64));
        }
    }

    #[test]
    fn gld_certificates_are_monotone(n in 2u64..60, extra in 1u64..40, kap in 0i64..3) {
        let cfg = CertConfig::new(p(128));
        let fd = |n| FamilyDatum::AutomorphicGLd { conductor: n, kappa: vec![ExactComplex::real(q(2 * kap + 1, 2))] };
        let s0 = CriticalPoint::rational(1, 2);
        let a = certify_gld(&fd(n), &s0, &cfg).unwrap();
        let b = certify_gld(&fd(n + extra), &s0, &cfg).unwrap();
        if a.verdict == Verdict::Certified {
            prop_assert_eq!(b.verdict, Verdict::Certified);
            prop_assert!(a.recheck(p(256)).unwrap());
            prop_assert!(-a.bound.eval(p(256)).unwrap().re() > cfg.margin_threshold());
        }
    }

    #[test]
    fn const_expr_text_round_trip(terms in prop::collection::vec((0usize..6, -50i64..50, 1i64..20), 0..6)) {
        let syms = [
            ConstSymbol::One,
            ConstSymbol::EulerGamma,
            ConstSymbol::LogPi,
            ConstSymbol::LogPrime(7),
            ConstSymbol::PsiPair { q: 7, a: 2 },
            ConstSymbol::ZetaOdd(5),
        ];
        let mut e = ConstExpr::zero();
        for (s, n, d) in terms {
            e.add_term(syms[s], q(n, d));
        }
        let back: ConstExpr = e.to_string().parse().unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn psik2_expansion_matches_polygamma(m in 1u32..4, two_k in 1i64..40) {
        let k = q(two_k, 2);
        let beta = match two_k.rem_euclid(4) { 0 => 4, r => r as u32 };
        let e = psik2_expand(m, &k, beta).unwrap();
        let prec = p(192);
        let direct = psi_m(2 * m, &BigComplex::from_rational(&(&k / BigRational::from_integer(2.into())), prec));
        prop_assert!(close(&e.eval(prec).unwrap(), &direct, 96));
    }
}

#[test]
fn coprime_psi_pairs_have_full_rank() {
    let fd = fd_modular(2, 1, 1);
    let cfg = CertConfig::default();
    for qq in 7u64..=40 {
        let c = coprime_rank_certificate(&fd, qq, &cfg).unwrap();
        let r = c.rank.unwrap();
        assert_eq!(r.psi_pairs.len() as u64, euler_phi(qq) / 2, "q = {qq}");
        let pairs: Vec<ConstExpr> = r.psi_pairs.iter().map(|s| ConstExpr::symbol(*s)).collect();
        assert_eq!(exact_rank(&pairs) as u64, euler_phi(qq) / 2);
        assert!(r.rank <= exact_rank(&r.members));
        assert!(r.rank >= r.guarantee, "q = {qq}");
    }
}

#[test]
fn datum_and_coefficient_files_round_trip() {
    let fds = [
        fd_modular(12, 11, -3),
        FamilyDatum::AutomorphicGLd { conductor: 23, kappa: vec![ExactComplex::real(q(1, 2)), "1+2i".parse().unwrap()] },
        FamilyDatum::Hilbert { k: 6, n: 3, df: 49, norm_n: 7 },
        FamilyDatum::Siegel { g: 2, k: 30 },
    ];
    for fd in fds {
        assert_eq!(FamilyDatum::parse_block(&fd.to_text()).unwrap(), fd);
    }
    let cs = delta_series(50).unwrap();
    let back = CoefficientSeries::parse(&cs.to_text()).unwrap();
    assert_eq!(back.coeffs(), cs.coeffs());
    assert_eq!(back.meta(), cs.meta());
}
