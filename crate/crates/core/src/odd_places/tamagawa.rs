//! Component groups of Néron models from dual graphs.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use prym_algebra::smith::invariant_factors;
use serde::Serialize;

use super::dual_graph::DualGraphData;
use crate::error::{CoreError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TamagawaResult {
    pub value: u64,
    /// `cluster` or `override`.
    pub method: String,
    /// Invariant factors of the geometric component group, when computed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometric: Option<Vec<u64>>,
    /// Semistability sub-checks and the cluster picture they were run on.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<serde_json::Value>,
}

/// Fundamental cycles of a spanning forest, as vectors indexed by edge.
/// Also returns the non-tree edge carrying each cycle.
pub fn cycle_basis(g: &DualGraphData) -> (Vec<Vec<i64>>, Vec<usize>) {
    let nv = g.vertices.len();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    for (i, e) in g.edges.iter().enumerate() {
        adj[e.from].push((i, e.to));
        if e.from != e.to {
            adj[e.to].push((i, e.from));
        }
    }
    // parent[v] = (edge, parent vertex)
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; nv];
    let mut seen = vec![false; nv];
    let mut tree = vec![false; g.edges.len()];
    for root in 0..nv {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(ei, w) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    tree[ei] = true;
                    parent[w] = Some((ei, v));
                    queue.push_back(w);
                }
            }
        }
    }
    // Signed path from the root of the tree to v.
    let path = |v: usize| {
        let mut out = vec![0i64; g.edges.len()];
        let mut cur = v;
        while let Some((ei, u)) = parent[cur] {
            // Edge traversed from u to cur.
            out[ei] += if g.edges[ei].from == u && g.edges[ei].to == cur { 1 } else { -1 };
            cur = u;
        }
        out
    };
    let mut basis = Vec::new();
    let mut carriers = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        if tree[i] {
            continue;
        }
        // e followed by the tree path back: path(from) + e - path(to).
        let pf = path(e.from);
        let pt = path(e.to);
        let mut cyc: Vec<i64> = pf.iter().zip(&pt).map(|(a, b)| a - b).collect();
        cyc[i] += 1;
        basis.push(cyc);
        carriers.push(i);
    }
    (basis, carriers)
}

/// Length-weighted intersection matrix on `H_1` and the matrix of
/// Frobenius in the fundamental-cycle basis.
pub fn cycle_data(g: &DualGraphData) -> Result<(Vec<Vec<BigInt>>, Vec<Vec<BigInt>>)> {
    let (basis, carriers) = cycle_basis(g);
    let n = basis.len();
    let mut gram = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = BigRational::zero();
            for (k, e) in g.edges.iter().enumerate() {
                if basis[i][k] != 0 && basis[j][k] != 0 {
                    acc += &e.length * BigRational::from_integer((basis[i][k] * basis[j][k]).into());
                }
            }
            if !acc.is_integer() {
                return Err(CoreError::Undeterminable(format!("non-integral cycle pairing {acc}")));
            }
            gram[i][j] = acc.to_integer();
        }
    }
    // Frobenius image of cycle i, read off on the carrier edges.
    let mut frob = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        let mut img = vec![0i64; g.edges.len()];
        for (k, &c) in basis[i].iter().enumerate() {
            let (k2, sign) = g.frob_edges[k];
            img[k2] += sign as i64 * c;
        }
        for (j, &car) in carriers.iter().enumerate() {
            frob[j][i] = BigInt::from(img[car]);
        }
    }
    Ok((gram, frob))
}

/// `|Phi(k)|` and the invariant factors of `Phi(k̄)`, where
/// `Phi = coker(H_1 -> Hom(H_1, Z))` and `Phi(k)` is counted through the
/// Frobenius coinvariants.
pub fn component_group(g: &DualGraphData) -> Result<(u64, Vec<u64>)> {
    let (gram, frob) = cycle_data(g)?;
    let n = gram.len();
    if n == 0 {
        return Ok((1, Vec::new()));
    }
    let geometric = invariant_factors(&gram);
    if geometric.len() != n {
        return Err(CoreError::Undeterminable("degenerate cycle pairing".into()));
    }
    // Frobenius on Hom(H_1, Z) is the inverse transpose; A^T - I has the
    // same image as A^{-T} - I.
    let mut stacked = gram.clone();
    for (i, row) in stacked.iter_mut().enumerate() {
        for j in 0..n {
            let mut v = frob[j][i].clone();
            if i == j {
                v -= BigInt::one();
            }
            row.push(v);
        }
    }
    let inv = invariant_factors(&stacked);
    let order = inv.iter().fold(BigInt::one(), |a, d| a * d);
    let to_u64 = |x: &BigInt| x.to_u64().ok_or_else(|| CoreError::ResourceExhausted("component group too large".into()));
    Ok((to_u64(&order)?, geometric.iter().map(to_u64).collect::<Result<_>>()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::odd_places::dual_graph::{Edge, EdgeLabel, Vertex};
    use prym_algebra::rat;

    fn loop_graph(len: i64, sign: i32) -> DualGraphData {
        DualGraphData {
            vertices: vec![Vertex { cluster: 0, sheet: None }],
            edges: vec![Edge { from: 0, to: 0, length: rat(len), label: EdgeLabel::Twin(1) }],
            frob_vertices: vec![0],
            frob_edges: vec![(0, sign)],
        }
    }

    #[test]
    fn single_loop() {
        assert_eq!(component_group(&loop_graph(4, 1)).unwrap(), (4, vec![4]));
        assert_eq!(component_group(&loop_graph(4, -1)).unwrap(), (2, vec![4]));
        assert_eq!(component_group(&loop_graph(3, -1)).unwrap(), (1, vec![3]));
    }

    #[test]
    fn banana_graph() {
        // Two vertices joined by three edges of lengths 1, 2, 3: |Phi| = 1*2 + 2*3 + 1*3 = 11.
        let v = |c| Vertex { cluster: c, sheet: None };
        let e = |l, k| Edge { from: 0, to: 1, length: rat(l), label: EdgeLabel::Odd(k) };
        let g = DualGraphData {
            vertices: vec![v(0), v(1)],
            edges: vec![e(1, 2), e(2, 3), e(3, 4)],
            frob_vertices: vec![0, 1],
            frob_edges: vec![(0, 1), (1, 1), (2, 1)],
        };
        assert_eq!(component_group(&g).unwrap().0, 11);
    }

    #[test]
    fn swapped_loops() {
        // Two loops of length 2 at one vertex, exchanged by Frobenius: Phi = (Z/2)^2, Phi^F = Z/2.
        let g = DualGraphData {
            vertices: vec![Vertex { cluster: 0, sheet: None }],
            edges: vec![
                Edge { from: 0, to: 0, length: rat(2), label: EdgeLabel::Twin(1) },
                Edge { from: 0, to: 0, length: rat(2), label: EdgeLabel::Twin(2) },
            ],
            frob_vertices: vec![0],
            frob_edges: vec![(1, 1), (0, 1)],
        };
        assert_eq!(component_group(&g).unwrap(), (2, vec![2, 2]));
    }
}
