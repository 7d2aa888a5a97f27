//! Two-torsion of hyperelliptic Jacobians as even subsets of Weierstrass
//! roots modulo complementation, the kernel of the Prym isogeny, and the
//! bitangent bookkeeping for plane quartics.

use std::fmt;

use serde::Serialize;

use crate::cover::{epsilon_class, CaseTag, DoubleCoverDatum};
use crate::error::{CoreError, Result};

/// Largest supported number of roots (genus 5 covers have 12).
pub const MAX_ROOTS: usize = 16;

/// An element of `E_g`: an even subset of `{0, .., n-1}` modulo
/// complementation, stored as its canonical representative (the
/// lexicographically smaller of the subset and its complement, which is
/// the empty set or the side containing index 0).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TwoTorsionClass {
    n: u8,
    mask: u32,
}

fn full(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

impl TwoTorsionClass {
    pub fn from_mask(n: usize, mask: u32) -> Result<Self> {
        if n == 0 || n > MAX_ROOTS || n % 2 == 1 {
            return Err(CoreError::Invalid(format!("{n} roots do not carry an E_g structure")));
        }
        if mask & !full(n) != 0 {
            return Err(CoreError::Invalid(format!("subset mask {mask:#b} exceeds {n} roots")));
        }
        if mask.count_ones() % 2 == 1 {
            return Err(CoreError::Invalid("subset has odd cardinality".into()));
        }
        let comp = full(n) & !mask;
        let canonical = if mask == 0 || comp == 0 {
            0
        } else if mask & 1 == 1 {
            mask
        } else {
            comp
        };
        Ok(TwoTorsionClass { n: n as u8, mask: canonical })
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut mask = 0u32;
        for i in indices {
            if i >= n {
                return Err(CoreError::Invalid(format!("root index {i} out of range for {n} roots")));
            }
            mask ^= 1 << i;
        }
        Self::from_mask(n, mask)
    }

    pub fn zero(n: usize) -> Self {
        Self::from_mask(n, 0).expect("valid ambient size")
    }

    pub fn root_count(&self) -> usize {
        self.n as usize
    }

    /// Canonical representative as a bit mask.
    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn complement_mask(&self) -> u32 {
        full(self.n as usize) & !self.mask
    }

    pub fn is_zero(&self) -> bool {
        self.mask == 0
    }

    /// Indices of the canonical representative.
    pub fn indices(&self) -> Vec<usize> {
        (0..self.n as usize).filter(|i| self.mask >> i & 1 == 1).collect()
    }

    /// The representative of smaller cardinality (ties: canonical one).
    pub fn short_indices(&self) -> Vec<usize> {
        let comp = self.complement_mask();
        let m = if comp.count_ones() < self.mask.count_ones() { comp } else { self.mask };
        (0..self.n as usize).filter(|i| m >> i & 1 == 1).collect()
    }
}

impl fmt::Display for TwoTorsionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let names: Vec<String> = self.short_indices().iter().map(|i| format!("P{}", i + 1)).collect();
        write!(f, "[{}]", names.join(","))
    }
}

impl Serialize for TwoTorsionClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `I + J = (I ∪ J) ∖ (I ∩ J)`.
pub fn symmetric_sum(a: TwoTorsionClass, b: TwoTorsionClass) -> Result<TwoTorsionClass> {
    if a.n != b.n {
        return Err(CoreError::Invalid(format!("ambient sets of size {} and {} differ", a.n, b.n)));
    }
    TwoTorsionClass::from_mask(a.n as usize, a.mask ^ b.mask)
}

/// Whether two subsets (as masks) define the same class.
pub fn class_eq(n: usize, s: u32, t: u32) -> bool {
    s == t || s ^ t == full(n)
}

/// All `2^{2g}` classes for genus `g`, in increasing mask order.
pub fn enumerate_classes(genus: usize) -> Vec<TwoTorsionClass> {
    enumerate_classes_on(2 * genus + 2)
}

/// All classes on `n` roots.
pub fn enumerate_classes_on(n: usize) -> Vec<TwoTorsionClass> {
    let mut out = vec![TwoTorsionClass::zero(n)];
    // Canonical nonzero representatives contain index 0 and are proper.
    for mask in (1..full(n)).step_by(2) {
        if mask.count_ones() % 2 == 0 {
            out.push(TwoTorsionClass { n: n as u8, mask });
        }
    }
    out
}

/// A two-torsion point of the Prym variety.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum PrymTwoTorsion {
    /// Cases II and III.a: a class on the roots of `f`.
    Single(TwoTorsionClass),
    /// Case III.b: classes on the roots of `f` and of `g`.
    Pair(TwoTorsionClass, TwoTorsionClass),
}

impl fmt::Display for PrymTwoTorsion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrymTwoTorsion::Single(c) => write!(f, "{c}"),
            PrymTwoTorsion::Pair(a, b) => {
                let names: Vec<String> = b.short_indices().iter().map(|i| format!("P'{}", i + 1)).collect();
                let second = if b.is_zero() { "0".to_string() } else { format!("[{}]", names.join(",")) };
                write!(f, "({a}, {second})")
            }
        }
    }
}

/// An element `(alpha, beta)` of `ker(Jac C x Prym -> Jac D)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct KernelElement {
    pub alpha: TwoTorsionClass,
    pub beta: PrymTwoTorsion,
}

/// Classes of the Prym variety's two-torsion.
pub fn prym_classes(d: &DoubleCoverDatum) -> Result<Vec<PrymTwoTorsion>> {
    let nf = d.f.deg();
    match d.case {
        CaseTag::II | CaseTag::IIIa => Ok(enumerate_classes_on(nf).into_iter().map(PrymTwoTorsion::Single).collect()),
        CaseTag::IIIb => {
            let ng = d.g.deg();
            let mut out = Vec::new();
            for a in enumerate_classes_on(nf) {
                for b in enumerate_classes_on(ng) {
                    out.push(PrymTwoTorsion::Pair(a, b));
                }
            }
            Ok(out)
        }
        other => Err(CoreError::UnsupportedCase(format!("two-torsion labelling for case {other}"))),
    }
}

/// The two preimages `{alpha, alpha + epsilon}` of `beta` under `pi^*`.
pub fn pullback_preimage(beta: PrymTwoTorsion, d: &DoubleCoverDatum) -> Result<(TwoTorsionClass, TwoTorsionClass)> {
    let nf = d.f.deg();
    let n = d.root_count();
    let mask = match (beta, d.case) {
        (PrymTwoTorsion::Single(b), CaseTag::II | CaseTag::IIIa) => {
            if b.root_count() != nf {
                return Err(CoreError::Invalid(format!("{b} is not a class on the {nf} roots of f")));
            }
            b.mask()
        }
        (PrymTwoTorsion::Pair(a, b), CaseTag::IIIb) => {
            if a.root_count() != nf || b.root_count() != d.g.deg() {
                return Err(CoreError::Invalid("class pair does not match the roots of f and g".into()));
            }
            a.mask() | b.mask() << nf
        }
        (beta, case) => {
            return Err(CoreError::Invalid(format!("{beta} is not a two-torsion point of the Prym variety in case {case}")))
        }
    };
    let alpha = TwoTorsionClass::from_mask(n, mask)?;
    Ok((alpha, symmetric_sum(alpha, epsilon_class(d))?))
}

/// All `2^{2g-1}` elements of the kernel of the Prym isogeny.
pub fn kernel_of_phi(d: &DoubleCoverDatum) -> Result<Vec<KernelElement>> {
    let mut out = Vec::new();
    for beta in prym_classes(d)? {
        let (a0, a1) = pullback_preimage(beta, d)?;
        out.push(KernelElement { alpha: a0, beta });
        out.push(KernelElement { alpha: a1, beta });
    }
    Ok(out)
}

/// Componentwise sum of two kernel elements.
pub fn kernel_sum(x: &KernelElement, y: &KernelElement) -> Result<KernelElement> {
    let beta = match (x.beta, y.beta) {
        (PrymTwoTorsion::Single(a), PrymTwoTorsion::Single(b)) => PrymTwoTorsion::Single(symmetric_sum(a, b)?),
        (PrymTwoTorsion::Pair(a, b), PrymTwoTorsion::Pair(c, e)) => {
            PrymTwoTorsion::Pair(symmetric_sum(a, c)?, symmetric_sum(b, e)?)
        }
        _ => return Err(CoreError::Invalid("kernel elements of different shapes".into())),
    };
    Ok(KernelElement { alpha: symmetric_sum(x.alpha, y.alpha)?, beta })
}

/// Apply a permutation of root indices. `split` is the number of roots of
/// `f`; the permutation must preserve `{0..split}` (pass `n` when there is
/// no partition to respect).
pub fn galois_act(perm: &[usize], c: TwoTorsionClass, split: usize) -> Result<TwoTorsionClass> {
    let n = c.root_count();
    check_permutation(perm, n, split)?;
    let mut mask = 0u32;
    for i in c.indices() {
        mask |= 1 << perm[i];
    }
    TwoTorsionClass::from_mask(n, mask)
}

fn check_permutation(perm: &[usize], n: usize, split: usize) -> Result<()> {
    if perm.len() != n {
        return Err(CoreError::Invalid(format!("permutation of {} points acting on {n} roots", perm.len())));
    }
    let mut seen = vec![false; n];
    for (i, &j) in perm.iter().enumerate() {
        if j >= n || seen[j] {
            return Err(CoreError::Invalid("not a permutation".into()));
        }
        seen[j] = true;
        if (i < split) != (j < split) {
            return Err(CoreError::Invalid("permutation mixes roots of f and g".into()));
        }
    }
    Ok(())
}

/// Action on Prym classes.
pub fn galois_act_prym(perm: &[usize], beta: PrymTwoTorsion, d: &DoubleCoverDatum) -> Result<PrymTwoTorsion> {
    let nf = d.f.deg();
    check_permutation(perm, d.root_count(), nf)?;
    Ok(match beta {
        PrymTwoTorsion::Single(b) => PrymTwoTorsion::Single(galois_act(&perm[..nf], b, nf)?),
        PrymTwoTorsion::Pair(a, b) => {
            let tail: Vec<usize> = perm[nf..].iter().map(|&j| j - nf).collect();
            PrymTwoTorsion::Pair(galois_act(&perm[..nf], a, nf)?, galois_act(&tail, b, tail.len())?)
        }
    })
}

/// Bitangents of a plane quartic, indexed `1..=28`, correspond to the odd
/// theta characteristics `(a, b)` in `F_2^3 x F_2^3` with `a . b = 1`,
/// listed in lexicographic order. A pair of bitangents gives the
/// two-torsion point `a + b` (as a 6-bit vector).
pub fn odd_theta_characteristics() -> Vec<u8> {
    (0u8..64).filter(|&t| ((t >> 3) & t & 7).count_ones() % 2 == 1).collect()
}

fn theta(b: u8) -> Result<u8> {
    odd_theta_characteristics()
        .get((b as usize).wrapping_sub(1))
        .copied()
        .ok_or_else(|| CoreError::Invalid(format!("bitangent index {b} outside 1..=28")))
}

fn bitangent_of(t: u8) -> u8 {
    odd_theta_characteristics().iter().position(|&x| x == t).unwrap() as u8 + 1
}

/// Bitangent pairs determining one two-torsion point, with a flag
/// recording whether all pairs lie in one Steiner complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SteinerLabel {
    pub pairs: Vec<(u8, u8)>,
    pub same_complex: bool,
}

/// The two-torsion point (nonzero 6-bit vector) of a bitangent pair.
pub fn bitangent_pair_point(pair: (u8, u8)) -> Result<u8> {
    if pair.0 == pair.1 {
        return Err(CoreError::Invalid("a bitangent pair needs two distinct bitangents".into()));
    }
    Ok(theta(pair.0)? ^ theta(pair.1)?)
}

/// The six bitangent pairs of the Steiner complex of the nonzero point `v`.
pub fn steiner_complex(v: u8) -> Result<Vec<(u8, u8)>> {
    if v == 0 || v >= 64 {
        return Err(CoreError::Invalid(format!("{v} is not a nonzero two-torsion point")));
    }
    let odd = odd_theta_characteristics();
    let mut out = Vec::new();
    for &t in &odd {
        let u = t ^ v;
        if t < u && odd.contains(&u) {
            out.push((bitangent_of(t), bitangent_of(u)));
        }
    }
    Ok(out)
}

pub fn steiner_label(pairs: &[(u8, u8)]) -> Result<SteinerLabel> {
    let points: Vec<u8> = pairs.iter().map(|&p| bitangent_pair_point(p)).collect::<Result<_>>()?;
    Ok(SteinerLabel { pairs: pairs.to_vec(), same_complex: points.windows(2).all(|w| w[0] == w[1]) })
}

/// Preimages of `[{b1, b2}, {b3, b4}]` in the plane quartic case: the
/// Steiner complexes through `{b1, b3}, {b2, b4}` and `{b1, b4}, {b2, b3}`.
pub fn steiner_pullback(b: [u8; 4]) -> Result<(SteinerLabel, SteinerLabel)> {
    if bitangent_pair_point((b[0], b[1]))? != bitangent_pair_point((b[2], b[3]))? {
        return Err(CoreError::Invalid("the two bitangent pairs lie in different Steiner complexes".into()));
    }
    let complete = |first: (u8, u8), second: (u8, u8)| -> Result<SteinerLabel> {
        let v = bitangent_pair_point(first)?;
        let mut pairs = vec![first, second];
        for p in steiner_complex(v)? {
            let has = |q: &(u8, u8)| (q.0 == p.0 && q.1 == p.1) || (q.0 == p.1 && q.1 == p.0);
            if !pairs.iter().any(has) {
                pairs.push(p);
            }
        }
        steiner_label(&pairs)
    };
    Ok((complete((b[0], b[2]), (b[1], b[3]))?, complete((b[0], b[3]), (b[1], b[2]))?))
}
