//! Local points, the deficiency sign `mu` and the Prym sign `delta`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use prym_algebra::ff::{is_qr_mod, Gf};
use prym_algebra::{sturm_isolate_real_roots, UniPoly};
use serde::Serialize;

use crate::cover::{CaseTag, HyperellipticCurve, PrymDescriptor};
use crate::error::{CoreError, Result};
use crate::overrides::{key, Overrides};
use crate::report::Sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => f.write_str("inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    PointFound,
    NoPoint,
    Undetermined,
}

/// How a witness certifies a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    /// `F(x)` is a nonzero rational square.
    RationalSquare,
    /// `F(x)` is a nonzero square in `Q_p` (or positive at the real place).
    LocalSquare,
    /// `F(x) = 0`.
    Root,
    /// `x` is a Hensel approximation to a root of `F`.
    HenselRoot,
    /// A point at infinity.
    AtInfinity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub kind: WitnessKind,
    /// `None` for points at infinity.
    #[serde(serialize_with = "ser_opt_rat")]
    pub x: Option<BigRational>,
}

fn ser_opt_rat<S: serde::Serializer>(x: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_str("infinity"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolubilityCertificate {
    pub place: Place,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub method: String,
}

/// Search bounds for the rational point pre-scan and the disk descent.
#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub integer_bound: i64,
    pub fraction_height: i64,
    pub max_depth: u32,
    /// Residues tried per disk when `p` is too large to enumerate.
    pub residue_sample: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { integer_bound: 10_000, fraction_height: 100, max_depth: 40, residue_sample: 2_000 }
    }
}

/// Integer model `G` with `y^2 = F(x)` isomorphic to `Y^2 = G(x)`, and the
/// even degree `2g + 2` used to homogenise it.
fn integer_model(c: &HyperellipticCurve) -> (Vec<BigInt>, usize) {
    let (content, prim) = c.poly().primitive_part();
    let scale = content.numer() * content.denom();
    let coeffs = prim.into_iter().map(|a| a * &scale).collect();
    (coeffs, 2 * c.genus() + 2)
}

fn eval_hom(g: &[BigInt], d: usize, a: &BigInt, b: &BigInt) -> BigInt {
    // sum g_i a^i b^(d-i)
    let mut acc = BigInt::zero();
    let mut bpow = BigInt::one();
    let mut terms = vec![BigInt::zero(); d + 1];
    for (i, t) in terms.iter_mut().enumerate().rev() {
        if i < g.len() {
            *t = &g[i] * &bpow;
        }
        bpow *= b;
    }
    for t in terms.iter().rev() {
        acc = acc * a + t;
    }
    acc
}

fn is_square(n: &BigInt) -> bool {
    !n.is_negative() && {
        let r = n.sqrt();
        &(&r * &r) == n
    }
}

fn prescan_cache() -> &'static Mutex<HashMap<Vec<BigInt>, Option<Witness>>> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<BigInt>, Option<Witness>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Bounded search for a global rational point: points at infinity, then
/// integers up to `integer_bound`, then fractions of height up to
/// `fraction_height`.
pub fn rational_point_prescan(c: &HyperellipticCurve, cfg: &SearchConfig) -> Option<Witness> {
    let (g, d) = integer_model(c);
    if let Some(hit) = prescan_cache().lock().unwrap().get(&g) {
        return hit.clone();
    }
    let found = prescan_uncached(&g, d, cfg);
    prescan_cache().lock().unwrap().insert(g, found.clone());
    found
}

fn prescan_uncached(g: &[BigInt], d: usize, cfg: &SearchConfig) -> Option<Witness> {
    if is_square(&eval_hom(g, d, &BigInt::one(), &BigInt::zero())) {
        return Some(Witness { kind: WitnessKind::AtInfinity, x: None });
    }
    let check = |a: i64, b: i64| {
        let v = eval_hom(g, d, &BigInt::from(a), &BigInt::from(b));
        is_square(&v).then(|| Witness {
            kind: if v.is_zero() { WitnessKind::Root } else { WitnessKind::RationalSquare },
            x: Some(BigRational::new(a.into(), b.into())),
        })
    };
    for n in 0..=cfg.integer_bound {
        for a in [n, -n] {
            if let Some(w) = check(a, 1) {
                return Some(w);
            }
        }
    }
    for b in 2..=cfg.fraction_height {
        for n in 1..=cfg.fraction_height {
            if n.gcd(&b) != 1 {
                continue;
            }
            for a in [n, -n] {
                if let Some(w) = check(a, b) {
                    return Some(w);
                }
            }
        }
    }
    None
}

fn vp(n: &BigInt, p: &BigInt) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// Coefficients of `h(r + s t)` as a polynomial in `t`.
fn taylor(h: &[BigInt], r: &BigInt, s: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); h.len()];
    // Horner: out = out * (r + s t) + h_i
    for c in h.iter().rev() {
        let mut next = vec![BigInt::zero(); h.len()];
        for (i, o) in out.iter().enumerate() {
            if o.is_zero() {
                continue;
            }
            next[i] += o * r;
            if i + 1 < next.len() {
                next[i + 1] += o * s;
            }
        }
        next[0] += c;
        out = next;
    }
    out
}

/// Is the `p`-adic unit `u` a square?
fn unit_is_square(u: &BigInt, p: u64) -> bool {
    if p == 2 {
        u.mod_floor(&BigInt::from(8)) == BigInt::one()
    } else {
        is_qr_mod(u, p)
    }
}

enum Disk {
    Found(Witness),
    Empty,
    Unknown,
}

struct Descent<'a> {
    p: u64,
    pb: BigInt,
    cfg: &'a SearchConfig,
    /// Maps the chart coordinate to `x`; `None` means the point at infinity.
    to_x: &'a dyn Fn(&BigInt, &BigInt) -> Option<BigRational>,
}

impl Descent<'_> {
    /// Searches `{center + scale t : t in Z_p}` where `h(t)` is the model in
    /// the local coordinate.
    fn search(&self, h: &[BigInt], center: &BigInt, scale: &BigInt, depth: u32) -> Disk {
        let witness = |kind| Witness { kind, x: (self.to_x)(center, &BigInt::one()) };
        let Some(v0) = vp(&h[0], &self.pb) else {
            return Disk::Found(witness(WitnessKind::Root));
        };
        let m = h[1..].iter().filter_map(|c| vp(c, &self.pb)).min();
        if m.is_none_or(|m| v0 < m) {
            let room = m.map_or(u32::MAX, |m| m - v0);
            if v0 % 2 == 1 {
                return Disk::Empty;
            }
            let unit = &h[0] / self.pb.pow(v0);
            if self.p != 2 || room >= 3 {
                return if unit_is_square(&unit, self.p) { Disk::Found(witness(WitnessKind::LocalSquare)) } else { Disk::Empty };
            }
        }
        if let Some(v1) = h.get(1).and_then(|c| vp(c, &self.pb)) {
            if v0 > 2 * v1 {
                return Disk::Found(witness(WitnessKind::HenselRoot));
            }
        }
        if depth >= self.cfg.max_depth {
            return Disk::Unknown;
        }
        let (residues, complete) = self.residues(h);
        let mut unknown = !complete;
        for r in residues {
            let rb = BigInt::from(r);
            let child = taylor(h, &rb, &self.pb);
            match self.search(&child, &(center + scale * &rb), &(scale * &self.pb), depth + 1) {
                Disk::Found(w) => return Disk::Found(w),
                Disk::Empty => {}
                Disk::Unknown => unknown = true,
            }
        }
        if unknown {
            Disk::Unknown
        } else {
            Disk::Empty
        }
    }

    /// Residues to descend into. Small primes are enumerated; for large
    /// primes a prefix is sampled together with the roots of `h mod p`.
    fn residues(&self, h: &[BigInt]) -> (Vec<u64>, bool) {
        if self.p <= self.cfg.residue_sample {
            return ((0..self.p).collect(), true);
        }
        let mut out: Vec<u64> = (0..self.cfg.residue_sample).collect();
        if let Ok(gf) = Gf::prime(self.p) {
            let hp = gf.poly_from_bigints(h);
            if gf.poly_deg(&hp).is_some() {
                for r in gf.roots(&hp) {
                    out.push(gf.index(&r));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        (out, false)
    }
}

/// Local solubility of `c` at `place`.
pub fn has_local_point(c: &HyperellipticCurve, place: &Place) -> SolubilityCertificate {
    has_local_point_with(c, place, &SearchConfig::default())
}

pub fn has_local_point_with(c: &HyperellipticCurve, place: &Place, cfg: &SearchConfig) -> SolubilityCertificate {
    match place {
        Place::Infinity => real_point(c),
        Place::Prime(p) => padic_point(c, *p, cfg),
    }
}

fn real_point(c: &HyperellipticCurve) -> SolubilityCertificate {
    let f = c.poly();
    let cert = |verdict, witness, method: &str| SolubilityCertificate {
        place: Place::Infinity,
        verdict,
        witness,
        method: method.into(),
    };
    if f.deg() % 2 == 1 || f.leading_coeff().is_positive() {
        return cert(Verdict::PointFound, Some(Witness { kind: WitnessKind::AtInfinity, x: None }), "real-infinity");
    }
    match sturm_isolate_real_roots(f) {
        Ok(roots) if !roots.is_empty() => {
            // F changes sign across an isolating interval, so one endpoint works.
            let iv = &roots[0];
            let (x, kind) = if f.eval(&iv.lower).is_zero() {
                (iv.lower.clone(), WitnessKind::Root)
            } else if f.eval(&iv.upper).is_zero() {
                (iv.upper.clone(), WitnessKind::Root)
            } else if f.sign_at(&iv.lower) > 0 {
                (iv.lower.clone(), WitnessKind::LocalSquare)
            } else {
                (iv.upper.clone(), WitnessKind::LocalSquare)
            };
            cert(Verdict::PointFound, Some(Witness { kind, x: Some(x) }), "real-sign")
        }
        Ok(_) => cert(Verdict::NoPoint, None, "real-sign"),
        Err(_) => cert(Verdict::Undetermined, None, "real-sign"),
    }
}

fn padic_point(c: &HyperellipticCurve, p: u64, cfg: &SearchConfig) -> SolubilityCertificate {
    let (g, d) = integer_model(c);
    let place = Place::Prime(p);
    let pb = BigInt::from(p);
    let affine = |center: &BigInt, _: &BigInt| Some(BigRational::from_integer(center.clone()));
    let desc = Descent { p, pb: pb.clone(), cfg, to_x: &affine };
    let out = desc.search(&g, &BigInt::zero(), &BigInt::one(), 0);
    let mut unknown = false;
    match out {
        Disk::Found(w) => {
            return SolubilityCertificate { place, verdict: Verdict::PointFound, witness: Some(w), method: "disk-descent".into() }
        }
        Disk::Unknown => unknown = true,
        Disk::Empty => {}
    }
    // Infinity chart: u = 1/x with u in pZ_p, model u^(2g+2) F(1/u).
    let mut rev = vec![BigInt::zero(); d + 1];
    for (i, a) in g.iter().enumerate() {
        rev[d - i] = a.clone();
    }
    let inf = |center: &BigInt, _: &BigInt| (!center.is_zero()).then(|| BigRational::new(BigInt::one(), center.clone()));
    let desc = Descent { p, pb: pb.clone(), cfg, to_x: &inf };
    let h = taylor(&rev, &BigInt::zero(), &pb);
    match desc.search(&h, &BigInt::zero(), &pb, 0) {
        Disk::Found(mut w) => {
            if w.x.is_none() && w.kind != WitnessKind::Root {
                w.kind = WitnessKind::AtInfinity;
            }
            SolubilityCertificate { place, verdict: Verdict::PointFound, witness: Some(w), method: "disk-descent".into() }
        }
        Disk::Unknown => SolubilityCertificate { place, verdict: Verdict::Undetermined, witness: None, method: "disk-descent".into() },
        Disk::Empty => SolubilityCertificate {
            place,
            verdict: if unknown { Verdict::Undetermined } else { Verdict::NoPoint },
            witness: None,
            method: "disk-descent".into(),
        },
    }
}

/// Re-checks a witness against the original model.
pub fn verify_witness(c: &HyperellipticCurve, place: &Place, w: &Witness) -> bool {
    let f = c.poly();
    let Some(x) = &w.x else {
        // Point at infinity: odd degree or square leading coefficient (locally).
        if f.deg() % 2 == 1 {
            return true;
        }
        return value_is_local_square(&f.leading_coeff(), place) || w.kind == WitnessKind::Root;
    };
    let fx = f.eval(x);
    match w.kind {
        WitnessKind::Root => fx.is_zero(),
        WitnessKind::RationalSquare => {
            !fx.is_negative() && is_square(&(fx.numer() * fx.denom()))
        }
        WitnessKind::LocalSquare | WitnessKind::AtInfinity => !fx.is_zero() && value_is_local_square(&fx, place),
        WitnessKind::HenselRoot => match place {
            Place::Infinity => false,
            Place::Prime(p) => {
                let (g, d) = integer_model(c);
                let g = UniPoly::from_bigints(&g);
                let hensel = |q: &UniPoly, t: &BigRational| match (rat_val(&q.eval(t), *p), rat_val(&q.derivative().eval(t), *p)) {
                    (None, _) => true,
                    (Some(a), Some(b)) => a > 2 * b,
                    _ => false,
                };
                // The witness may come from either chart.
                hensel(&g, x) || (!x.is_zero() && hensel(&g.reverse(d), &(BigRational::one() / x)))
            }
        },
    }
}

fn rat_val(x: &BigRational, p: u64) -> Option<i64> {
    (!x.is_zero()).then(|| prym_algebra::padic::rational_valuation(x, p))
}

fn value_is_local_square(x: &BigRational, place: &Place) -> bool {
    match place {
        Place::Infinity => x.is_positive(),
        Place::Prime(p) => {
            let Some(v) = rat_val(x, *p) else { return true };
            if v % 2 != 0 {
                return false;
            }
            let pb = BigInt::from(*p);
            let strip = |n: &BigInt| {
                let mut n = n.clone();
                while (&n % &pb).is_zero() {
                    n /= &pb;
                }
                n
            };
            // u = a/b with both units; a/b square iff a b square.
            unit_is_square(&(strip(x.numer()) * strip(x.denom())), *p)
        }
    }
}

/// `mu` computed natively: `+1` when a point exists; the even-genus rule at
/// the real place when there is none.
pub fn mu_term(c: &HyperellipticCurve, place: &Place) -> Result<Sign> {
    if rational_point_prescan(c, &SearchConfig::default()).is_some() {
        return Ok(Sign::native(1, "rational-point"));
    }
    let cert = has_local_point(c, place);
    match (cert.verdict, place) {
        (Verdict::PointFound, _) => Ok(Sign::native(1, "local-point")),
        (Verdict::NoPoint, Place::Infinity) => {
            Ok(Sign::native(if c.genus() % 2 == 0 { -1 } else { 1 }, "empty-real-locus"))
        }
        (Verdict::NoPoint, Place::Prime(p)) => Err(CoreError::OverrideRequired {
            key: format!("mu ?@{p}"),
            reason: format!("no {p}-adic point on {c}: deficiency undetermined"),
        }),
        (Verdict::Undetermined, _) => Err(CoreError::OverrideRequired {
            key: format!("mu ?@{place}"),
            reason: format!("local solubility of {c} at {place} undetermined"),
        }),
    }
}

/// `mu` for the curve with the given role, falling back to an override.
pub fn mu_for_role(role: &str, c: &HyperellipticCurve, place: &Place, ov: &Overrides) -> Result<Sign> {
    let k = key(role, &place.to_string());
    match mu_term(c, place) {
        Ok(s) => Ok(s),
        Err(CoreError::OverrideRequired { reason, .. }) => match ov.mu.get(&k) {
            Some(v) => Ok(Sign::overridden(*v, &format!("mu:{k}"))),
            None => Err(CoreError::OverrideRequired { key: format!("mu[\"{k}\"]"), reason }),
        },
        Err(e) => Err(e),
    }
}

/// `delta`: `mu` of the Prym when it is a Jacobian, the product of the two
/// `mu` when it is a product of elliptic curves.
pub fn delta_term(pr: &PrymDescriptor, place: &Place) -> Result<Sign> {
    delta_term_with(pr, place, &Overrides::default())
}

pub fn delta_term_with(pr: &PrymDescriptor, place: &Place, ov: &Overrides) -> Result<Sign> {
    if pr.case == CaseTag::IIIc {
        return Err(CoreError::UnsupportedCase("delta for case III.c".into()));
    }
    let mut value = 1;
    let mut methods = Vec::new();
    let mut keys = Vec::new();
    for (i, comp) in pr.components.iter().enumerate() {
        let s = mu_for_role(&format!("Prym{}", i + 1), comp, place, ov)?;
        value *= s.value;
        methods.push(s.method);
        keys.extend(s.override_key);
    }
    Ok(Sign {
        value,
        method: methods.join("*"),
        override_key: (!keys.is_empty()).then(|| keys.join(",")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use prym_algebra::rat;

    fn curve(c: &[i64]) -> HyperellipticCurve {
        HyperellipticCurve::new(UniPoly::from_ints(c)).unwrap()
    }

    #[test]
    fn empty_real_locus() {
        let c = curve(&[-1, 0, -1, 0, 0, 0, -1]);
        let cert = has_local_point(&c, &Place::Infinity);
        assert_eq!(cert.verdict, Verdict::NoPoint);
        assert_eq!(mu_term(&c, &Place::Infinity).unwrap().value, -1);
        let c3 = curve(&[-1, 0, 0, 0, 0, 0, 0, 0, -1]);
        assert_eq!(mu_term(&c3, &Place::Infinity).unwrap().value, 1);
    }

    #[test]
    fn quartic_plus_five_at_five() {
        let c = curve(&[5, 0, 0, 0, 1]);
        let cert = has_local_point(&c, &Place::Prime(5));
        assert_eq!(cert.verdict, Verdict::PointFound);
        assert!(verify_witness(&c, &Place::Prime(5), cert.witness.as_ref().unwrap()));
    }

    #[test]
    fn no_points_at_three() {
        let c = curve(&[3, 0, 3, 0, 0, 0, 3]);
        let cert = has_local_point(&c, &Place::Prime(3));
        assert_eq!(cert.verdict, brute_force(&c, 3, 6));
    }

    /// Oracle: look for `x` in `Z/p^k` or `1/x` in `pZ/p^k` with `F(x)`
    /// visibly a square at precision `k`.
    fn brute_force(c: &HyperellipticCurve, p: u64, k: u32) -> Verdict {
        let pk = p.pow(k) as i64;
        let place = Place::Prime(p);
        let ok = |x: BigRational| {
            let v = c.poly().eval(&x);
            v.is_zero() || value_is_local_square(&v, &place)
        };
        for a in 0..pk {
            if ok(rat(a)) {
                return Verdict::PointFound;
            }
        }
        let d = 2 * c.genus() + 2;
        let rev = c.poly().reverse(d);
        for a in 0..pk / p as i64 {
            let u = rat(a * p as i64);
            let v = rev.eval(&u);
            if v.is_zero() || value_is_local_square(&v, &place) {
                return Verdict::PointFound;
            }
        }
        Verdict::NoPoint
    }

    #[test]
    fn prescan_finds_points_at_infinity() {
        let c = curve(&[-295, -236, 60, 54, 48, -12, 1]);
        assert_eq!(rational_point_prescan(&c, &SearchConfig::default()).unwrap().kind, WitnessKind::AtInfinity);
    }

    #[test]
    fn weil_bound_primes_always_soluble() {
        // Genus 2, good reduction away from a few primes; p > 16.
        let c = curve(&[1, 3, 0, -2, 5, 0, 7]);
        for p in [17u64, 19, 23, 29, 31] {
            let cert = has_local_point_with(&c, &Place::Prime(p), &SearchConfig::default());
            assert_eq!(cert.verdict, Verdict::PointFound, "p = {p}");
            assert!(verify_witness(&c, &Place::Prime(p), cert.witness.as_ref().unwrap()));
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn descent_agrees_with_brute_force(
                coeffs in prop::collection::vec(-12i64..=12, 5),
                lead in prop::sample::select(vec![-3i64, -1, 2, 3, 5, 6]),
                p in prop::sample::select(vec![3u64, 5, 7]),
            ) {
                let mut c = coeffs.clone();
                c.push(lead);
                let poly = UniPoly::from_ints(&c);
                prop_assume!(poly.is_squarefree());
                let curve = HyperellipticCurve::new(poly).unwrap();
                let cert = has_local_point(&curve, &Place::Prime(p));
                if let Some(w) = &cert.witness {
                    prop_assert!(verify_witness(&curve, &Place::Prime(p), w));
                }
                if cert.verdict == Verdict::NoPoint {
                    prop_assert_eq!(brute_force(&curve, p, 4), Verdict::NoPoint);
                }
                if brute_force(&curve, p, 3) == Verdict::PointFound {
                    prop_assert_eq!(cert.verdict, Verdict::PointFound);
                }
            }
        }
    }
}
