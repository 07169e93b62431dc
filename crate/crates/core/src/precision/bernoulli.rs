use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

// B_0, B_2, B_4, ... computed on demand and kept for the life of the process.
static EVEN_BERNOULLI: RwLock<Vec<BigRational>> = RwLock::new(Vec::new());

/// Exact Bernoulli number `B_{2n}`.
pub fn bernoulli_b2n(n: usize) -> BigRational {
    if let Some(b) = EVEN_BERNOULLI.read().expect("bernoulli cache").get(n) {
        return b.clone();
    }
    let mut cache = EVEN_BERNOULLI.write().expect("bernoulli cache");
    if cache.is_empty() {
        cache.push(BigRational::one());
    }
    while cache.len() <= n {
        let m = cache.len();
        // sum_{k=0}^{2m} C(2m+1, k) B_k = 0, with B_1 = -1/2 and odd B_k = 0 beyond.
        let top = 2 * m + 1;
        let mut acc = BigRational::one() - BigRational::new(BigInt::from(top), BigInt::from(2));
        let mut binom = BigInt::one();
        for k in 1..=2 * m - 1 {
            binom = binom * BigInt::from(top - k + 1) / BigInt::from(k);
            if k % 2 == 0 {
                acc += &cache[k / 2] * BigRational::from_integer(binom.clone());
            }
        }
        let b = -acc / BigRational::from_integer(BigInt::from(top));
        cache.push(b);
    }
    cache[n].clone()
}

/// Exact `m!` as a big integer.
pub(crate) fn factorial(m: u64) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}
