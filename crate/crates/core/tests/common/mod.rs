//! Independent reference computations shared by the oracle and acceptance tests.
//! None of these call the library's special-function code.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use critstrip::precision::{BigComplex, Precision, Real};

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// B_2, B_4, ..., B_30.
pub fn bernoulli_even() -> Vec<BigRational> {
    [
        (1i64, 6i64),
        (-1, 30),
        (1, 42),
        (-1, 30),
        (5, 66),
        (-691, 2730),
        (7, 6),
        (-3617, 510),
        (43867, 798),
        (-174611, 330),
        (854513, 138),
        (-236364091, 2730),
        (8553103, 6),
        (-23749461029, 870),
        (8615841276005, 14322),
    ]
    .iter()
    .map(|&(n, d)| q(n, d))
    .collect()
}

fn fact(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, j| a * BigInt::from(j))
}

fn r(x: &BigRational, bits: usize) -> Real {
    Real::from_rational(x, bits)
}

fn ri(n: i64, bits: usize) -> Real {
    Real::from_i64(n, bits)
}

/// γ = H_N - log N - 1/(2N) + Σ B_2j / (2j N^2j).
pub fn euler_gamma(bits: usize) -> Real {
    let wp = bits + 32;
    let n: i64 = 200;
    let mut h = BigRational::zero();
    for j in 1..=n {
        h += q(1, j);
    }
    let mut c = h - q(1, 2 * n);
    for (j, b) in bernoulli_even().iter().enumerate() {
        let j = j as i64 + 1;
        c += b / (BigRational::from_integer(BigInt::from(2 * j)) * num_traits::pow(q(n, 1), 2 * j as usize));
    }
    &r(&c, wp) - &ri(n, wp).ln()
}

/// ψ(x) for rational x > 0 from Gauss's series
/// ψ(x) = -γ + Σ_{n>=0} (1/(n+1) - 1/(n+x)), tail by Euler–Maclaurin.
pub fn digamma(x: &BigRational, bits: usize) -> Real {
    assert!(x.is_positive());
    let wp = bits + 32;
    let n: i64 = 200;
    let mut head = BigRational::zero();
    for j in 0..n {
        head += q(1, j + 1) - (BigRational::from_integer(j.into()) + x).recip();
    }
    let a = BigRational::from_integer(n.into()) + BigRational::one();
    let b = BigRational::from_integer(n.into()) + x;
    // ∫_N^∞ f = log((N+x)/(N+1)), f = 1/(t+1) - 1/(t+x)
    let integral = r(&(&b / &a), wp).ln();
    let mut tail = (a.recip() - b.recip()) / BigRational::from_integer(2.into());
    for (j, bj) in bernoulli_even().iter().enumerate() {
        // f^(2j-1)(N) = -(2j-1)! [(N+1)^-2j - (N+x)^-2j]
        let k = 2 * (j as u64 + 1);
        let d = -BigRational::from_integer(fact(k - 1)) * (num_traits::pow(a.recip(), k as usize) - num_traits::pow(b.recip(), k as usize));
        tail -= bj / BigRational::from_integer(fact(k)) * d;
    }
    &(&r(&(head + tail), wp) + &integral) - &euler_gamma(bits)
}

/// ζ(3) = (5/2) Σ (-1)^(n+1) / (n^3 C(2n, n)).
pub fn apery_zeta3(bits: usize) -> Real {
    let terms = bits / 2 + 10;
    let mut s = BigRational::zero();
    let mut binom = BigInt::one();
    for n in 1..=terms as u64 {
        binom = binom * BigInt::from(2 * (2 * n - 1)) / BigInt::from(n);
        let t = BigRational::new(BigInt::one(), BigInt::from(n).pow(3) * &binom);
        if n % 2 == 1 {
            s += t;
        } else {
            s -= t;
        }
    }
    r(&(s * q(5, 2)), bits + 32)
}

/// Γ(z) from Stirling's series at z + 40 and the recurrence.
pub fn gamma_stirling(z: &BigComplex) -> BigComplex {
    let prec = z.prec();
    let wp = Precision::new(prec.bits() + 64).unwrap();
    let z = z.with_prec(wp);
    let shift = 40;
    let w = z.add_i64(shift);
    let half = BigComplex::from_rational(&q(1, 2), wp);
    let two_pi = BigComplex::from_real(ri(2, wp.bits()) * Real::pi(wp.bits()), wp);
    let mut lg = &(&(&w - &half) * &w.ln()) - &w;
    lg = &lg + &(&two_pi.ln() * &half);
    let winv = w.recip();
    let winv2 = &winv * &winv;
    let mut pw = winv.clone();
    for (j, b) in bernoulli_even().iter().enumerate() {
        let k = 2 * (j as i64 + 1);
        let c = BigComplex::from_rational(&(b / BigRational::from_integer((k * (k - 1)).into())), wp);
        lg = &lg + &(&c * &pw);
        pw = &pw * &winv2;
    }
    let mut prod = BigComplex::one(wp);
    for j in 0..shift {
        prod = &prod * &z.add_i64(j);
    }
    (&lg.exp() / &prod).with_prec(prec)
}

fn chi5(n: i64) -> i64 {
    [0, 1, -1, -1, 1][n.rem_euclid(5) as usize]
}

/// L(s, (5/.)) for real rational s as 5^-s Σ_a χ(a) ζ(s, a/5),
/// each Hurwitz zeta by Euler–Maclaurin at N = 100.
pub fn l_chi5(s: &BigRational, bits: usize) -> Real {
    let wp = bits + 32;
    let sr = r(s, wp);
    let pow = |x: &Real, e: &Real| (e * &x.ln()).exp();
    let n: i64 = 100;
    let mut total = Real::zero(wp);
    for a in 1..5i64 {
        let av = q(a, 5);
        let mut z = Real::zero(wp);
        for j in 0..n {
            z = &z + &pow(&r(&(BigRational::from_integer(j.into()) + &av), wp), &-&sr);
        }
        let x = r(&(BigRational::from_integer(n.into()) + &av), wp);
        let one = Real::one(wp);
        z = &z + &(&pow(&x, &(&one - &sr)) / &(&sr - &one));
        z = &z + &pow(&x, &-&sr).div_i64(2);
        // B_2k/(2k)! s(s+1)...(s+2k-2) x^(-s-2k+1)
        let mut rising = sr.clone();
        for (j, b) in bernoulli_even().iter().enumerate() {
            let k = j as i64 + 1;
            if k > 1 {
                rising = &(&rising * &(&sr + &ri(2 * k - 3, wp))) * &(&sr + &ri(2 * k - 2, wp));
            }
            let c = r(&(b / BigRational::from_integer(fact(2 * k as u64))), wp);
            let e = -(&sr + &ri(2 * k - 1, wp));
            z = &z + &(&(&c * &rising) * &pow(&x, &e));
        }
        total = &total + &z.mul_i64(chi5(a));
    }
    &total * &pow(&ri(5, wp), &-&sr)
}

/// τ(1..=nmax) from q Π(1 - q^n)^24 = q (Σ_m (-1)^m (2m+1) q^(m(m+1)/2))^8.
pub fn tau_jacobi(nmax: usize) -> Vec<i128> {
    let mut cube: Vec<(usize, i128)> = Vec::new();
    let mut m = 0usize;
    while m * (m + 1) / 2 < nmax {
        let sign = if m.is_multiple_of(2) { 1 } else { -1 };
        cube.push((m * (m + 1) / 2, sign * (2 * m as i128 + 1)));
        m += 1;
    }
    let mut acc = vec![0i128; nmax];
    acc[0] = 1;
    for _ in 0..8 {
        let mut next = vec![0i128; nmax];
        for (i, &c) in acc.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &(e, t) in &cube {
                if i + e >= nmax {
                    break;
                }
                next[i + e] += c * t;
            }
        }
        acc = next;
    }
    acc
}

fn det(m: &[Vec<BigRational>]) -> BigRational {
    // cofactor expansion along the first row
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = BigRational::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigRational>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| v.clone()).collect()).collect();
        let t = &m[0][c] * det(&minor);
        if c % 2 == 0 {
            total += t;
        } else {
            total -= t;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Largest size of a non-vanishing minor.
pub fn brute_rank(a: &[Vec<BigInt>]) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    for k in (1..=rows.min(cols)).rev() {
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let m: Vec<Vec<BigRational>> =
                    rs.iter().map(|&i| cs.iter().map(|&j| BigRational::from_integer(a[i][j].clone())).collect()).collect();
                if !det(&m).is_zero() {
                    return k;
                }
            }
        }
    }
    0
}

/// d^m/dz^m cot(πz) = π^m P_m(cot πz), P_0 = c, P_{m+1} = -(1 + c²) P_m'.
pub fn cot_derivative(m: u32, z: &BigComplex) -> BigComplex {
    let prec = z.prec();
    let mut p: Vec<i128> = vec![0, 1];
    for _ in 0..m {
        let dp: Vec<i128> = (1..p.len()).map(|i| i as i128 * p[i]).collect();
        let mut next = vec![0i128; dp.len() + 2];
        for (i, &c) in dp.iter().enumerate() {
            next[i] -= c;
            next[i + 2] -= c;
        }
        p = next;
    }
    let pi = BigComplex::from_real(Real::pi(prec.bits() + 32), prec);
    let w = &pi * z;
    let c = &w.cos() / &w.sin();
    let mut v = BigComplex::zero(prec);
    for &coef in p.iter().rev() {
        v = &v * &c;
        v = &v + &BigComplex::from_i64(coef as i64, prec);
    }
    let mut pim = BigComplex::one(prec);
    for _ in 0..m {
        pim = &pim * &pi;
    }
    &v * &pim
}

pub fn rel_err(a: &BigComplex, b: &BigComplex) -> f64 {
    let d = a.dist(b).to_f64();
    let s = b.abs().to_f64();
    if s > 1.0 {
        d / s
    } else {
        d
    }
}
