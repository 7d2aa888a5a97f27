//! Smith normal form of integer matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Nonzero invariant factors `d_1 | d_2 | ...` of an integer matrix (rows
/// of equal length). The cokernel of the matrix, viewed as a map
/// `Z^cols -> Z^rows`, is `Z^(rows - r) ⊕ ⊕ Z/d_i`.
pub fn invariant_factors(matrix: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = matrix.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest nonzero entry in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let v = &q * &a[t][j];
                    a[i][j] -= v;
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    changed = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let v = &q * &row[t];
                    row[j] -= v;
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // Enforce divisibility of the rest of the block by the pivot.
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&a[i][j] % &a[t][t]).is_zero());
            match bad {
                Some((i, _)) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Order of the torsion part of the cokernel (product of invariant factors).
pub fn torsion_order(matrix: &[Vec<BigInt>]) -> BigInt {
    invariant_factors(matrix).iter().fold(BigInt::one(), |acc, d| acc * d)
}

/// Rank over `Q`.
pub fn rank(matrix: &[Vec<BigInt>]) -> usize {
    invariant_factors(matrix).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn diagonal_examples() {
        assert_eq!(invariant_factors(&m(&[&[2, 0], &[0, 3]])), ints(&[1, 6]));
        assert_eq!(invariant_factors(&m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])), ints(&[2, 6, 12]));
        assert_eq!(invariant_factors(&m(&[&[0, 0], &[0, 0]])), ints(&[]));
    }

    #[test]
    fn cycle_graph_laplacian() {
        // Laplacian of a 4-cycle: critical group Z/4.
        let l = m(&[&[2, -1, 0, -1], &[-1, 2, -1, 0], &[0, -1, 2, -1], &[-1, 0, -1, 2]]);
        assert_eq!(invariant_factors(&l), ints(&[1, 1, 4]));
    }

    /// Oracle: gcd of all k x k minors equals d_1 ... d_k.
    fn det(a: &[Vec<BigInt>]) -> BigInt {
        let n = a.len();
        if n == 1 {
            return a[0][0].clone();
        }
        let mut total = BigInt::zero();
        for j in 0..n {
            let minor: Vec<Vec<BigInt>> = a[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &a[0][j] * det(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
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

    fn minor_gcd(a: &[Vec<BigInt>], k: usize) -> BigInt {
        let mut g = BigInt::zero();
        for rs in subsets(a.len(), k) {
            for cs in subsets(a[0].len(), k) {
                let sub: Vec<Vec<BigInt>> =
                    rs.iter().map(|&i| cs.iter().map(|&j| a[i][j].clone()).collect()).collect();
                g = g.gcd(&det(&sub));
            }
        }
        g
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn invariants_match_minor_gcds(
                rows in 1usize..=4,
                cols in 1usize..=4,
                entries in prop::collection::vec(-6i64..=6, 16),
            ) {
                let a: Vec<Vec<BigInt>> = (0..rows)
                    .map(|i| (0..cols).map(|j| BigInt::from(entries[i * 4 + j])).collect())
                    .collect();
                let d = invariant_factors(&a);
                for w in d.windows(2) {
                    prop_assert!((&w[1] % &w[0]).is_zero());
                }
                let mut prod = BigInt::one();
                for k in 1..=rows.min(cols) {
                    let g = minor_gcd(&a, k);
                    if k <= d.len() {
                        prod *= &d[k - 1];
                        prop_assert_eq!(&g, &prod);
                    } else {
                        prop_assert!(g.is_zero());
                    }
                }
            }
        }
    }
}
