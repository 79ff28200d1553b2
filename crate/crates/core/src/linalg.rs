//! Small exact linear algebra helpers.

use num::{Signed, Zero};

use crate::scalar::{GaussianRational, Rational};

const PRIME: u64 = 2_305_843_009_213_693_951; // 2^61 - 1

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn to_mod(v: i64) -> u64 {
    v.rem_euclid(PRIME as i64) as u64
}

/// Rank of an integer matrix modulo a large prime. This is a lower bound for
/// the rank over the rationals.
pub(crate) fn rank_mod_p(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&v| to_mod(v)).collect()).collect();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][col] != 0) else { continue };
        a.swap(rank, piv);
        let inv = powmod(a[rank][col], PRIME - 2);
        for r in 0..a.len() {
            if r != rank && a[r][col] != 0 {
                let f = mulmod(a[r][col], inv);
                for c in col..ncols {
                    let sub = mulmod(f, a[rank][c]);
                    a[r][c] = (a[r][c] + PRIME - sub) % PRIME;
                }
            }
        }
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    rank
}

/// Exact rank over the rationals.
pub(crate) fn rank_rational(rows: &[Vec<Rational>]) -> usize {
    let (_, pivots) = rref(rows.to_vec());
    pivots.len()
}

fn rref(mut a: Vec<Vec<Rational>>) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        // smallest nonzero pivot keeps entries tame
        let piv = (rank..a.len())
            .filter(|&r| !a[r][col].is_zero())
            .min_by_key(|&r| a[r][col].numer().abs() + a[r][col].denom());
        let Some(piv) = piv else { continue };
        a.swap(rank, piv);
        let inv = a[rank][col].recip();
        for c in col..ncols {
            a[rank][c] = &a[rank][c] * &inv;
        }
        for r in 0..a.len() {
            if r != rank && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..ncols {
                    let sub = &f * &a[rank][c];
                    a[r][c] -= sub;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    (a, pivots)
}

/// Basis of the null space of a rational matrix with `ncols` columns.
pub(crate) fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    if rows.is_empty() {
        return (0..ncols)
            .map(|i| (0..ncols).map(|j| if i == j { Rational::from_integer(1.into()) } else { Rational::zero() }).collect())
            .collect();
    }
    let (a, pivots) = rref(rows.to_vec());
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::from_integer(1.into());
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

/// Indices of a maximal linearly independent subset, greedily in order.
pub(crate) fn independent_subset(vectors: &[Vec<GaussianRational>]) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<GaussianRational>)> = Vec::new();
    let mut chosen = Vec::new();
    for (idx, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        for (p, b) in &basis {
            if !w[*p].is_zero() {
                let f = &w[*p] / &b[*p];
                for (x, y) in w.iter_mut().zip(b) {
                    *x = &*x - &f * y;
                }
            }
        }
        if let Some(p) = w.iter().position(|x| !x.is_zero()) {
            basis.push((p, w));
            chosen.push(idx);
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn ranks_agree() {
        let rows = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(rank_mod_p(&rows), 2);
        let q: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect();
        assert_eq!(rank_rational(&q), 2);
        let ns = nullspace(&q, 3);
        assert_eq!(ns.len(), 1);
        for r in &q {
            let dot: Rational = r.iter().zip(&ns[0]).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }
}
