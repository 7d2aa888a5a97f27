//! Cluster pictures of `y^2 = F(x)` over `Q_p`, `p` odd.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use prym_algebra::padic::{padic_roots, rational_valuation, PAdicRoots, RootConfig};
use prym_algebra::AlgebraError;
use serde_json::{json, Value};

use crate::cover::HyperellipticCurve;
use crate::error::{CoreError, Result};

#[derive(Clone, Debug)]
pub struct Cluster {
    /// Bit `i` set when root `i` belongs to the cluster.
    pub mask: u32,
    /// `min v_p(r - r')` over pairs in the cluster; `None` for singletons.
    pub depth: Option<BigRational>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

impl Cluster {
    pub fn size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_even(&self) -> bool {
        self.size() % 2 == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask >> i & 1 == 1
    }

    /// Some root of the cluster, used as its centre.
    pub fn centre(&self) -> usize {
        self.mask.trailing_zeros() as usize
    }
}

#[derive(Clone, Debug)]
pub struct ClusterPicture {
    pub p: u64,
    pub genus: usize,
    /// `v_p` of the leading coefficient of `F`.
    pub leading_valuation: i64,
    pub leading: BigRational,
    /// Index 0 is the top cluster; parents precede children.
    pub clusters: Vec<Cluster>,
    pub frobenius: Vec<usize>,
    pub inertia: Vec<usize>,
    pub roots: PAdicRoots,
}

impl ClusterPicture {
    pub fn root_count(&self) -> usize {
        self.roots.len()
    }

    pub fn distance(&self, i: usize, j: usize) -> BigRational {
        self.roots.distance(i, j)
    }

    pub fn depth(&self, s: usize) -> BigRational {
        self.clusters[s].depth.clone().expect("proper cluster")
    }

    /// `delta_s = d_s - d_{parent}`.
    pub fn relative_depth(&self, s: usize) -> BigRational {
        let parent = self.clusters[s].parent.expect("not the top cluster");
        self.depth(s) - self.depth(parent)
    }

    /// Children that are themselves proper clusters or singletons.
    pub fn children(&self, s: usize) -> &[usize] {
        &self.clusters[s].children
    }

    pub fn is_ubereven(&self, s: usize) -> bool {
        let c = &self.clusters[s];
        c.size() >= 2 && c.is_even() && c.children.iter().all(|&k| self.clusters[k].is_even())
    }

    pub fn is_principal(&self, s: usize) -> bool {
        let c = &self.clusters[s];
        if c.size() < 3 {
            return false;
        }
        if s == 0 {
            let two_children = c.is_even() && c.children.len() == 2;
            let cotwin = c.children.iter().any(|&k| self.clusters[k].size() == 2 * self.genus);
            return !(two_children || cotwin);
        }
        true
    }

    /// `nu_s = v(c) + |s| d_s + sum_{r not in s} d_{r ∧ s}`.
    pub fn nu(&self, s: usize) -> BigRational {
        let c = &self.clusters[s];
        let z = c.centre();
        let mut nu = BigRational::from_integer(self.leading_valuation.into())
            + BigRational::from_integer(c.size().into()) * self.depth(s);
        for r in 0..self.root_count() {
            if !c.contains(r) {
                nu += self.distance(z, r);
            }
        }
        nu
    }

    /// Image of a cluster under a permutation of the roots.
    pub fn permute_cluster(&self, perm: &[usize], s: usize) -> Option<usize> {
        let mut mask = 0u32;
        for i in 0..self.root_count() {
            if self.clusters[s].contains(i) {
                mask |= 1 << perm[i];
            }
        }
        self.clusters.iter().position(|c| c.mask == mask)
    }

    /// Order of the inertia action on the roots.
    pub fn inertia_order(&self) -> usize {
        let mut k = 1;
        let mut cur = self.inertia.clone();
        while cur.iter().enumerate().any(|(i, &j)| i != j) {
            cur = cur.iter().map(|&j| self.inertia[j]).collect();
            k += 1;
        }
        k
    }

    pub fn is_trivial(&self) -> bool {
        self.clusters.iter().all(|c| c.size() == 1 || c.mask == self.clusters[0].mask)
    }

    pub fn summary(&self) -> Value {
        let clusters: Vec<Value> = self
            .clusters
            .iter()
            .enumerate()
            .filter(|(_, c)| c.size() >= 2)
            .map(|(i, c)| {
                let roots: Vec<usize> = (0..self.root_count()).filter(|&r| c.contains(r)).collect();
                json!({
                    "roots": roots,
                    "depth": c.depth.as_ref().map(|d| d.to_string()),
                    "relative_depth": c.parent.map(|_| self.relative_depth(i).to_string()),
                    "principal": self.is_principal(i),
                    "ubereven": self.is_ubereven(i),
                })
            })
            .collect();
        json!({ "p": self.p, "picture": self.to_string(), "clusters": clusters })
    }

    fn fmt_cluster(&self, s: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.clusters[s];
        if c.size() == 1 {
            return write!(f, "r{}", c.centre());
        }
        f.write_str("(")?;
        for (k, &ch) in c.children.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            self.fmt_cluster(ch, f)?;
        }
        let d = if s == 0 { self.depth(0) } else { self.relative_depth(s) };
        write!(f, ")_{d}")
    }
}

/// Nested parenthesised form, e.g. `((r0 r1)_1 r2 r3 r4 r5)_0`; the
/// subscript is the relative depth (absolute for the top cluster).
impl fmt::Display for ClusterPicture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_cluster(0, f)
    }
}

pub fn cluster_picture(c: &HyperellipticCurve, p: u64) -> Result<ClusterPicture> {
    if p == 2 || p == 0 {
        return Err(CoreError::Invalid(format!("cluster pictures need an odd prime, got {p}")));
    }
    let f = c.poly();
    let roots = padic_roots(p, f, &RootConfig::default())?;
    let n = roots.len();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut masks: BTreeSet<u32> = BTreeSet::new();
    masks.insert(full);
    let dist: Vec<Vec<BigRational>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigRational::zero() } else { roots.distance(i, j) }).collect()).collect();
    for i in 0..n {
        masks.insert(1 << i);
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = &dist[i][j];
            let mask = (0..n).filter(|&k| k == i || dist[i][k] >= *d).fold(0u32, |m, k| m | 1 << k);
            masks.insert(mask);
        }
    }
    let mut order: Vec<u32> = masks.into_iter().collect();
    order.sort_by_key(|&m| (std::cmp::Reverse(m.count_ones()), m));
    let mut clusters: Vec<Cluster> = order
        .iter()
        .map(|&mask| {
            let members: Vec<usize> = (0..n).filter(|&k| mask >> k & 1 == 1).collect();
            let depth = members
                .iter()
                .flat_map(|&a| members.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
                .map(|(a, b)| dist[a][b].clone())
                .min();
            Cluster { mask, depth, parent: None, children: Vec::new() }
        })
        .collect();
    for s in 1..clusters.len() {
        let mask = clusters[s].mask;
        // Smallest strictly larger cluster containing s; parents come first.
        let parent = (0..s).rev().find(|&t| clusters[t].mask & mask == mask && clusters[t].mask != mask);
        clusters[s].parent = parent;
        if let Some(t) = parent {
            clusters[t].children.push(s);
        }
    }
    let frobenius = roots.frobenius_permutation();
    let inertia = roots.inertia_permutation().unwrap_or_else(|| (0..n).collect());
    let leading = f.leading_coeff();
    Ok(ClusterPicture {
        p,
        genus: c.genus(),
        leading_valuation: rational_valuation(&leading, p),
        leading,
        clusters,
        frobenius,
        inertia,
        roots,
    })
}

/// Why a picture fails the semistability criterion, if it does.
pub fn semistability_obstruction(cp: &ClusterPicture) -> Option<String> {
    if cp.inertia_order() > 2 {
        return Some(format!("splitting field has ramification degree {} > 2", cp.inertia_order()));
    }
    for (s, c) in cp.clusters.iter().enumerate() {
        if c.size() >= 2 && cp.permute_cluster(&cp.inertia, s) != Some(s) {
            return Some("a proper cluster is not inertia invariant".into());
        }
    }
    for s in 0..cp.clusters.len() {
        if !cp.is_principal(s) {
            continue;
        }
        let d = cp.depth(s);
        if !d.is_integer() {
            return Some(format!("principal cluster of depth {d}"));
        }
        let nu = cp.nu(s);
        if !nu.is_integer() || nu.to_integer().is_odd() {
            return Some(format!("principal cluster with nu = {nu}"));
        }
    }
    None
}

pub fn is_semistable(cp: &ClusterPicture) -> bool {
    semistability_obstruction(cp).is_none()
}

/// Semistability of `c` at `p`, treating wild ramification as failure.
pub fn semistable_at(c: &HyperellipticCurve, p: u64) -> Result<bool> {
    match cluster_picture(c, p) {
        Ok(cp) => Ok(is_semistable(&cp)),
        Err(CoreError::Algebra(AlgebraError::WildRamification { .. })) => Ok(false),
        Err(e) => Err(e),
    }
}
