use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::expr::{ConstExpr, ConstSymbol};

/// Integer coefficient matrix of `vs` over the union of their symbols
/// (columns in canonical symbol order); each row is scaled by the lcm of its denominators.
pub fn coefficient_matrix(vs: &[ConstExpr]) -> (Vec<ConstSymbol>, Vec<Vec<BigInt>>) {
    let cols: Vec<ConstSymbol> = vs.iter().flat_map(|v| v.symbols().copied()).collect::<BTreeSet<_>>().into_iter().collect();
    let rows = vs
        .iter()
        .map(|v| {
            let den = v.terms().fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()));
            cols.iter()
                .map(|s| {
                    let c = v.coeff(s) * BigRational::from_integer(den.clone());
                    c.to_integer()
                })
                .collect()
        })
        .collect();
    (cols, rows)
}

/// Rank over ℚ by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let nrows = a.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = a[0].len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(piv) = (rank..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let v = (&a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c]) / &prev;
                a[r][c] = v;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Rank over ℚ of `vs`, symbols treated as independent basis vectors.
pub fn exact_rank(vs: &[ConstExpr]) -> usize {
    let (_, m) = coefficient_matrix(vs);
    bareiss_rank(m)
}

/// Rank of `{v_i - r_i w}`; at least `rank(vs) - 1`.
pub fn rank_lower_bound(vs: &[ConstExpr], w: &ConstExpr, rs: &[BigRational]) -> usize {
    assert_eq!(vs.len(), rs.len(), "rank_lower_bound needs one rational per vector");
    let shifted: Vec<ConstExpr> = vs
        .iter()
        .zip(rs)
        .map(|(v, r)| {
            let mut e = v.clone();
            e.add_expr(w, &-r);
            e
        })
        .collect();
    exact_rank(&shifted)
}
