//! The real place: ovals, component counts of real Jacobians, the
//! `d`-map and the archimedean local term.

use num_traits::Signed;
use prym_algebra::sturm::sign_at_root;
use prym_algebra::{sturm_isolate_real_roots, IsolatingInterval, UniPoly};
use serde::Serialize;
use serde_json::json;

use crate::cover::{build_cover_model, build_prym, CaseTag, DoubleCoverDatum, HyperellipticCurve};
use crate::error::{CoreError, Result};
use crate::local_solubility::{delta_term_with, mu_for_role, Place};
use crate::overrides::Overrides;
use crate::report::{override_keys, LocalTermReport};
use crate::two_torsion::{galois_act, kernel_of_phi, PrymTwoTorsion, TwoTorsionClass};

/// Position of a labelled Weierstrass root over the reals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RootPosition {
    /// A real root, with its rank among all real roots and its oval.
    Real { rank: usize, oval: usize },
    /// A non-real root; its conjugate is the adjacent label.
    Complex { conjugate: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct Oval {
    /// Ranks of the real roots on the oval.
    pub roots: Vec<usize>,
    pub through_infinity: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RealTopology {
    pub degree: usize,
    pub genus: usize,
    pub leading_sign: i32,
    #[serde(skip)]
    pub real_roots: Vec<IsolatingInterval>,
    pub ovals: Vec<Oval>,
    /// Labelled roots: the roots of each factor in turn, real ones in
    /// increasing order and then conjugate pairs in adjacent labels.
    pub labels: Vec<RootPosition>,
    /// Ovals of the two points at infinity `∞+`, `∞-` when they are real
    /// (even degree, positive leading coefficient).
    pub infinity: Option<(usize, usize)>,
}

impl RealTopology {
    pub fn oval_count(&self) -> usize {
        self.ovals.len()
    }

    pub fn has_real_points(&self) -> bool {
        !self.ovals.is_empty()
    }

    /// Complex conjugation as a permutation of labels.
    pub fn conjugation(&self) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, pos)| match pos {
                RootPosition::Real { .. } => i,
                RootPosition::Complex { conjugate } => *conjugate,
            })
            .collect()
    }
}

pub fn real_topology(c: &HyperellipticCurve) -> Result<RealTopology> {
    real_topology_with_factors(std::slice::from_ref(c.poly()))
}

/// Topology of `y^2 = prod factors`, labelling roots factor by factor.
pub fn real_topology_with_factors(factors: &[UniPoly]) -> Result<RealTopology> {
    let poly = factors.iter().fold(UniPoly::one(), |acc, f| &acc * f);
    let curve = HyperellipticCurve::new(poly.clone())?;
    let degree = curve.degree();
    let lc_sign = if poly.leading_coeff().is_positive() { 1 } else { -1 };
    let roots = sturm_isolate_real_roots(&poly)?;
    let k = roots.len();
    // Sign of F on the gap just left of root i (gap k is the right ray).
    let gap_sign = |i: usize| if (k - i) % 2 == 0 { lc_sign } else { -lc_sign };
    let mut ovals: Vec<Oval> = Vec::new();
    let mut root_oval = vec![usize::MAX; k];
    for i in 1..k {
        if gap_sign(i) > 0 {
            root_oval[i - 1] = ovals.len();
            root_oval[i] = ovals.len();
            ovals.push(Oval { roots: vec![i - 1, i], through_infinity: false });
        }
    }
    let mut infinity = None;
    let left = k > 0 && gap_sign(0) > 0;
    let right = k > 0 && gap_sign(k) > 0;
    if degree % 2 == 0 {
        if lc_sign > 0 {
            let idx = ovals.len();
            if k > 0 {
                // Both rays are positive and join through the points at infinity.
                root_oval[0] = idx;
                root_oval[k - 1] = idx;
                ovals.push(Oval { roots: vec![0, k - 1], through_infinity: true });
                infinity = Some((idx, idx));
            } else if curve.genus() % 2 == 1 {
                // y > 0 and y < 0 close up separately through ∞+ and ∞-.
                ovals.push(Oval { roots: vec![], through_infinity: true });
                ovals.push(Oval { roots: vec![], through_infinity: true });
                infinity = Some((idx, idx + 1));
            } else {
                ovals.push(Oval { roots: vec![], through_infinity: true });
                infinity = Some((idx, idx));
            }
        }
    } else if left || right {
        let r = if left { 0 } else { k - 1 };
        root_oval[r] = ovals.len();
        ovals.push(Oval { roots: vec![r], through_infinity: true });
    }
    // Label roots factor by factor.
    let mut labels = Vec::new();
    for f in factors {
        let mine: Vec<usize> = (0..k).filter(|&i| sign_at_root(f, &roots[i]) == 0).collect();
        for &i in &mine {
            labels.push(RootPosition::Real { rank: i, oval: root_oval[i] });
        }
        let complex = f.deg() - mine.len();
        let base = labels.len();
        for j in 0..complex {
            labels.push(RootPosition::Complex { conjugate: base + (j ^ 1) });
        }
    }
    Ok(RealTopology {
        degree,
        genus: curve.genus(),
        leading_sign: lc_sign,
        real_roots: roots,
        ovals,
        labels,
        infinity,
    })
}

/// `n_{Jac X / R}` from the number of real components of `X`.
pub fn jacobian_component_count(n_curve: usize, genus: usize) -> u64 {
    if n_curve > 0 {
        1u64 << (n_curve - 1)
    } else if genus % 2 == 1 {
        2
    } else {
        1
    }
}

/// A point of a divisor supported on Weierstrass points and infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DivisorPoint {
    Root(usize),
    InfinityPlus,
    InfinityMinus,
    /// A conjugate pair of non-real points.
    ConjugatePair,
}

/// Parities of a divisor on the ovals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DVector(pub Vec<u8>);

impl DVector {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }
}

pub fn d_map(divisor: &[(DivisorPoint, i64)], topo: &RealTopology) -> Result<DVector> {
    if !topo.has_real_points() {
        return Err(CoreError::Undeterminable("the d-map needs a curve with real points".into()));
    }
    let mut v = vec![0i64; topo.oval_count()];
    for &(pt, mult) in divisor {
        let oval = match pt {
            DivisorPoint::Root(i) => match topo.labels.get(i) {
                Some(RootPosition::Real { oval, .. }) => Some(*oval),
                Some(RootPosition::Complex { .. }) => None,
                None => return Err(CoreError::Invalid(format!("root label {i} out of range"))),
            },
            DivisorPoint::InfinityPlus => topo.infinity.map(|(a, _)| a),
            DivisorPoint::InfinityMinus => topo.infinity.map(|(_, b)| b),
            DivisorPoint::ConjugatePair => None,
        };
        if let Some(o) = oval {
            v[o] += mult;
        }
    }
    Ok(DVector(v.into_iter().map(|x| x.rem_euclid(2) as u8).collect()))
}

/// The divisor `sum_{i in S} P_i - (|S|/2)(∞+ + ∞-)` of a class. Non-real
/// roots contribute nothing to any oval.
pub fn class_divisor(class: &TwoTorsionClass) -> Vec<(DivisorPoint, i64)> {
    let idx = class.indices();
    let half = idx.len() as i64 / 2;
    let mut out: Vec<(DivisorPoint, i64)> = idx.into_iter().map(|i| (DivisorPoint::Root(i), 1)).collect();
    if half > 0 {
        out.push((DivisorPoint::InfinityPlus, -half));
        out.push((DivisorPoint::InfinityMinus, -half));
    }
    out
}

pub fn class_d_vector(class: &TwoTorsionClass, topo: &RealTopology) -> Result<DVector> {
    d_map(&class_divisor(class), topo)
}

/// Number of conjugation-fixed classes of `Jac X[2]`.
pub fn conjugation_fixed_count(topo: &RealTopology) -> Result<usize> {
    let conj = topo.conjugation();
    let n = topo.labels.len();
    let mut count = 0;
    for c in crate::two_torsion::enumerate_classes_on(n) {
        if galois_act(&conj, c, n)? == c {
            count += 1;
        }
    }
    Ok(count)
}

/// Whether a conjugation-fixed class lies on the identity component of
/// the real Jacobian. Without real points the test is only possible when
/// the real Jacobian is connected.
pub fn in_identity_component(class: &TwoTorsionClass, topo: &RealTopology) -> Result<bool> {
    if topo.has_real_points() {
        Ok(class_d_vector(class, topo)?.is_zero())
    } else if jacobian_component_count(0, topo.genus) == 1 {
        Ok(true)
    } else {
        Err(CoreError::Undeterminable(
            "identity component of a disconnected real Jacobian of a curve without real points".into(),
        ))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RealKernelReport {
    pub count: usize,
    pub fixed: usize,
    pub members: Vec<String>,
}

/// `|ker phi(R)^0|`: kernel elements fixed by conjugation whose components
/// lie on the identity components of `Jac C(R)` and `Prym(R)`.
pub fn real_kernel_identity_count(d: &DoubleCoverDatum) -> Result<RealKernelReport> {
    let topo_c = real_topology_with_factors(&[d.f.clone(), d.g.clone()])?;
    let nf = d.f.deg();
    let prym_topos: Vec<RealTopology> = match d.case {
        CaseTag::II | CaseTag::IIIa => vec![real_topology_with_factors(std::slice::from_ref(&d.f))?],
        CaseTag::IIIb => vec![
            real_topology_with_factors(std::slice::from_ref(&d.f))?,
            real_topology_with_factors(std::slice::from_ref(&d.g))?,
        ],
        other => return Err(CoreError::UnsupportedCase(format!("real kernel for case {other}"))),
    };
    let conj_c = topo_c.conjugation();
    let conj_p: Vec<Vec<usize>> = prym_topos.iter().map(|t| t.conjugation()).collect();
    let mut count = 0;
    let mut fixed = 0;
    let mut members = Vec::new();
    for k in kernel_of_phi(d)? {
        let parts: Vec<TwoTorsionClass> = match k.beta {
            PrymTwoTorsion::Single(b) => vec![b],
            PrymTwoTorsion::Pair(a, b) => vec![a, b],
        };
        let alpha_fixed = galois_act(&conj_c, k.alpha, nf)? == k.alpha;
        let mut beta_fixed = true;
        for (b, conj) in parts.iter().zip(&conj_p) {
            beta_fixed &= galois_act(conj, *b, conj.len())? == *b;
        }
        if !(alpha_fixed && beta_fixed) {
            continue;
        }
        fixed += 1;
        let mut ok = in_identity_component(&k.alpha, &topo_c)?;
        for (b, t) in parts.iter().zip(&prym_topos) {
            ok &= in_identity_component(b, t)?;
        }
        if ok {
            count += 1;
            members.push(format!("({}, {})", k.alpha, k.beta));
        }
    }
    Ok(RealKernelReport { count, fixed, members })
}

fn log2_exact(x: u64) -> i64 {
    debug_assert!(x.is_power_of_two());
    x.trailing_zeros() as i64
}

/// `lambda_inf = delta mu_C / mu_D (-1)^{ord_2(n_JacC n_Prym / n_JacD |ker phi(R)^0|)}`.
pub fn lambda_infinity(d: &DoubleCoverDatum) -> Result<LocalTermReport> {
    lambda_infinity_with(d, &Overrides::default())
}

pub fn lambda_infinity_with(d: &DoubleCoverDatum, ov: &Overrides) -> Result<LocalTermReport> {
    let c = d.curve();
    let prym = build_prym(d)?;
    let dm = build_cover_model(d)?;
    let topo_c = real_topology(&c)?;
    let topo_d = real_topology(&dm)?;
    let n_c = jacobian_component_count(topo_c.oval_count(), c.genus());
    let n_d = jacobian_component_count(topo_d.oval_count(), dm.genus());
    let mut n_p = 1u64;
    let mut prym_ovals = Vec::new();
    for comp in &prym.components {
        let t = real_topology(comp)?;
        prym_ovals.push(t.oval_count());
        n_p *= jacobian_component_count(t.oval_count(), comp.genus());
    }
    let kernel = real_kernel_identity_count(d)?;
    let exponent = log2_exact(n_c) + log2_exact(n_p) + log2_exact(kernel.count as u64) - log2_exact(n_d);
    let mu_c = mu_for_role("C", &c, &Place::Infinity, ov)?;
    let mu_d = mu_for_role("D", &dm, &Place::Infinity, ov)?;
    let delta = delta_term_with(&prym, &Place::Infinity, ov)?;
    let sign = if exponent.rem_euclid(2) == 0 { 1 } else { -1 };
    let lambda = delta.value * mu_c.value * mu_d.value * sign;
    Ok(LocalTermReport {
        place: "inf".into(),
        lambda,
        mu_c: mu_c.value,
        mu_d: mu_d.value,
        delta: delta.value,
        exponent,
        overrides: override_keys([&mu_c, &mu_d, &delta]),
        methods: vec!["real-topology".into(), mu_c.method, mu_d.method, delta.method],
        details: json!({
            "ovals": {"C": topo_c.oval_count(), "Prym": prym_ovals, "D": topo_d.oval_count()},
            "jacobian_components": {"C": n_c, "Prym": n_p, "D": n_d},
            "kernel_identity_count": kernel.count,
            "kernel_conjugation_fixed": kernel.fixed,
            "kernel_identity_members": kernel.members,
        }),
    })
}
