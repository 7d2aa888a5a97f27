//! The place 2: good ordinary reduction of `C` and the Prym, the kernel of
//! reduction on two-torsion, and `lambda_2`.

pub mod cantor;
pub mod model;

use prym_algebra::ff::{Gf, GfElem, GfPoly};
use serde_json::json;

use crate::cover::{build_cover_model, build_prym, CaseTag, DoubleCoverDatum, HyperellipticCurve};
use crate::error::{CoreError, Result};
use crate::local_solubility::{delta_term_with, mu_for_role, Place};
use crate::overrides::Overrides;
use crate::report::{override_keys, LocalTermReport};
use crate::two_torsion::{kernel_of_phi, pullback_preimage, PrymTwoTorsion, TwoTorsionClass};

use self::cantor::ImaginaryModel;
pub use self::model::{
    count_points, find_good_model_at2, infinity_chart, is_ordinary, is_smooth, l_polynomial, reduce, IntegralModelAt2,
    LPolynomial, ReducedCurve,
};

/// Largest extension of `F_2` used for Weierstrass points.
pub const MAX_RESIDUE_DEGREE: usize = 6;

/// A curve with good ordinary reduction at 2 and a labelling of its roots by
/// the Weierstrass points they reduce to.
#[derive(Clone, Debug)]
pub struct ReductionData {
    pub model: IntegralModelAt2,
    pub reduced: ReducedCurve,
    pub l_poly: LPolynomial,
    pub gf: Gf,
    /// Residue of each root label; `None` is the point at infinity.
    pub residues: Vec<Option<GfElem>>,
}

fn need_override(reason: String) -> CoreError {
    CoreError::OverrideRequired { key: "lambda2".into(), reason }
}

/// Model, reduction and zeta function, requiring good ordinary reduction.
pub fn good_ordinary_reduction(c: &HyperellipticCurve) -> Result<(IntegralModelAt2, ReducedCurve, LPolynomial)> {
    let m = find_good_model_at2(c)?;
    let r = reduce(&m);
    let l = l_polynomial(&r)?;
    if !is_ordinary(&l, c.genus()) {
        return Err(need_override(format!("reduction of {c} at 2 is not ordinary (L = {l})")));
    }
    Ok((m, r, l))
}

fn field_for(r: &ReducedCurve) -> Result<Gf> {
    let m = model::splitting_degree(r)?;
    if m > MAX_RESIDUE_DEGREE {
        return Err(need_override(format!("Weierstrass points at 2 need F_(2^{m})")));
    }
    Ok(Gf::new(2, m)?)
}

fn distinct(w: &[Option<GfElem>]) -> bool {
    w.windows(2).all(|p| p[0] != p[1])
}

fn in_pairs(w: &[Option<GfElem>]) -> Vec<Option<GfElem>> {
    w.iter().flat_map(|x| [x.clone(), x.clone()]).collect()
}

/// Residue data for a single curve, labelling its roots in pairs by the
/// Weierstrass points of the reduction.
pub fn curve_reduction_data(c: &HyperellipticCurve) -> Result<ReductionData> {
    if c.degree() % 2 == 1 {
        return Err(CoreError::UnsupportedCase("kernel of reduction for odd degree models".into()));
    }
    let (model, reduced, l_poly) = good_ordinary_reduction(c)?;
    let gf = field_for(&reduced)?;
    let w = model::weierstrass_residues(&gf, &reduced);
    if !distinct(&w) {
        return Err(need_override("reduction at 2 has repeated Weierstrass points".into()));
    }
    Ok(ReductionData { model, reduced, l_poly, gf, residues: in_pairs(&w) })
}

/// Residue data for `C` and for the Prym curve `y^2 = f`. Roots of `f` are
/// labelled in pairs by the Weierstrass points of the Prym's reduction;
/// roots of `g` by the remaining Weierstrass points of `C`.
pub fn reduction_data(d: &DoubleCoverDatum) -> Result<(ReductionData, ReductionData)> {
    if !matches!(d.case, CaseTag::II | CaseTag::IIIa) {
        return Err(CoreError::UnsupportedCase(format!("case {}: lambda_2 needs a single Prym component", d.case)));
    }
    let c = d.curve();
    let prym = HyperellipticCurve::new(d.f.clone())?;
    let (mc, rc, lc) = good_ordinary_reduction(&c)?;
    let rf = curve_reduction_data(&prym)?;
    let gf = field_for(&rc)?;
    let wc = model::weierstrass_residues(&gf, &rc);
    let wf = model::weierstrass_residues(&gf, &rf.reduced);
    if !distinct(&wc) {
        return Err(need_override("reduction at 2 has repeated Weierstrass points".into()));
    }
    let mut rest = wc.clone();
    for w in &wf {
        let i = rest
            .iter()
            .position(|x| x == w)
            .ok_or_else(|| CoreError::Undeterminable("Weierstrass points of the Prym do not lie on C".into()))?;
        rest.remove(i);
    }
    let res_f = in_pairs(&wf);
    let mut res_c = res_f.clone();
    res_c.extend(in_pairs(&rest));
    if res_c.len() != d.root_count() {
        return Err(CoreError::Undeterminable("root labels at 2 do not match the degrees".into()));
    }
    Ok((
        ReductionData { model: mc, reduced: rc, l_poly: lc, gf: gf.clone(), residues: res_c },
        ReductionData { gf, residues: res_f, ..rf },
    ))
}

/// Residue rule: `[S]` reduces to zero iff `S` meets every residue class an
/// even number of times.
pub fn reduces_by_residues(class: &TwoTorsionClass, rd: &ReductionData) -> bool {
    let idx = class.indices();
    let mut seen: Vec<&Option<GfElem>> = idx.iter().map(|&i| &rd.residues[i]).collect();
    seen.sort();
    seen.chunk_by(|a, b| a == b).all(|c| c.len() % 2 == 0)
}

/// Cantor route: sum the reduced points in the Jacobian of the reduction.
pub fn reduces_by_cantor(class: &TwoTorsionClass, rd: &ReductionData) -> Result<bool> {
    let gf = &rd.gf;
    let g = rd.reduced.genus;
    let h: GfPoly = model::embed_bits(gf, &rd.reduced.h);
    let k: GfPoly = model::embed_bits(gf, &rd.reduced.k);
    let base = rd.residues.iter().find(|r| r.is_none()).cloned().unwrap_or_else(|| rd.residues[0].clone());
    let im = ImaginaryModel::new(gf, g, &h, &k, base.as_ref());
    let mut acc = im.curve.identity();
    for i in class.indices() {
        let Some(x) = &rd.residues[i] else { continue };
        if Some(x) == base.as_ref() {
            continue;
        }
        let y = gf.sqrt(&gf.poly_eval(&k, x)).expect("characteristic 2");
        let (u, w) = im
            .map_point(x, &y)
            .ok_or_else(|| CoreError::Undeterminable("Weierstrass point collides with the base point".into()))?;
        acc = im.curve.add(&acc, &im.curve.point(&u, &w));
    }
    Ok(im.curve.is_identity(&acc))
}

/// Both routes, which must agree.
pub fn reduces_to_identity(class: &TwoTorsionClass, rd: &ReductionData) -> Result<bool> {
    let a = reduces_by_residues(class, rd);
    let b = reduces_by_cantor(class, rd)?;
    if a != b {
        return Err(CoreError::Undeterminable(format!("kernel of reduction disagrees on {class}")));
    }
    Ok(a)
}

pub fn kernel_of_reduction(rd: &ReductionData) -> Result<Vec<TwoTorsionClass>> {
    let n = rd.residues.len();
    let mut out = Vec::new();
    for cls in crate::two_torsion::enumerate_classes_on(n) {
        if reduces_to_identity(&cls, rd)? {
            out.push(cls);
        }
    }
    Ok(out)
}

fn single(beta: &PrymTwoTorsion) -> Result<TwoTorsionClass> {
    match beta {
        PrymTwoTorsion::Single(b) => Ok(*b),
        PrymTwoTorsion::Pair(..) => Err(CoreError::UnsupportedCase("two Prym components".into())),
    }
}

/// `log_2` of the number of `(alpha, beta)` in `ker phi` with both
/// coordinates in the kernel of reduction.
pub fn kernel_dimension_by_pairs(d: &DoubleCoverDatum, rc: &ReductionData, rf: &ReductionData) -> Result<u32> {
    let mut count = 0u64;
    for e in kernel_of_phi(d)? {
        if reduces_to_identity(&single(&e.beta)?, rf)? && reduces_to_identity(&e.alpha, rc)? {
            count += 1;
        }
    }
    if !count.is_power_of_two() {
        return Err(CoreError::Undeterminable(format!("{count} kernel pairs reduce to zero")));
    }
    Ok(count.trailing_zeros())
}

/// Parity vector of a subset against the residue classes.
fn residue_parity(mask: u32, classes: &[Option<GfElem>], rd: &ReductionData) -> u64 {
    let mut v = 0u64;
    for (j, c) in classes.iter().enumerate() {
        let hits = (0..rd.residues.len()).filter(|&i| mask >> i & 1 == 1 && &rd.residues[i] == c).count();
        v |= ((hits % 2) as u64) << j;
    }
    v
}

fn rank_gf2(mut rows: Vec<u64>) -> usize {
    let mut rank = 0;
    for bit in 0..64 {
        if let Some(i) = (rank..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) {
            rows.swap(rank, i);
            let pivot = rows[rank];
            for (j, r) in rows.iter_mut().enumerate() {
                if j != rank && *r >> bit & 1 == 1 {
                    *r ^= pivot;
                }
            }
            rank += 1;
        }
    }
    rank
}

/// The same dimension by linear algebra: with a basis `b_i` of the Prym's
/// kernel of reduction (pairs of roots sharing a residue), lifts `a_i` and
/// the class `epsilon`, the answer is `(#basis + 1) - rank` of the residue
/// parity map on `span(a_i, epsilon)`.
pub fn kernel_dimension_by_subgroups(d: &DoubleCoverDatum, rc: &ReductionData, rf: &ReductionData) -> Result<u32> {
    let mut classes: Vec<Option<GfElem>> = rc.residues.clone();
    classes.dedup();
    let mut f_classes: Vec<Option<GfElem>> = rf.residues.clone();
    f_classes.dedup();
    let nf = rf.residues.len();
    let mut cols = Vec::new();
    for c in f_classes.iter().skip(1) {
        let b = TwoTorsionClass::from_indices(nf, (0..nf).filter(|&i| &rf.residues[i] == c))?;
        let (a, _) = pullback_preimage(PrymTwoTorsion::Single(b), d)?;
        cols.push(residue_parity(a.mask(), &classes, rc));
    }
    let eps = crate::cover::epsilon_class(d);
    cols.push(residue_parity(eps.mask(), &classes, rc));
    Ok((cols.len() - rank_gf2(cols)) as u32)
}

/// `lambda_2` from good ordinary reduction, falling back to the override.
pub fn lambda_two_with(d: &DoubleCoverDatum, ov: &Overrides) -> Result<LocalTermReport> {
    let place = Place::Prime(2);
    let c = d.curve();
    let prym = build_prym(d)?;
    let dm = build_cover_model(d)?;
    let mu_c = mu_for_role("C", &c, &place, ov)?;
    let mu_d = mu_for_role("D", &dm, &place, ov)?;
    let delta = delta_term_with(&prym, &place, ov)?;
    let mut overrides = override_keys([&mu_c, &mu_d, &delta]);
    let native = reduction_data(d).and_then(|(rc, rf)| {
        let by_pairs = kernel_dimension_by_pairs(d, &rc, &rf)?;
        let by_groups = kernel_dimension_by_subgroups(d, &rc, &rf)?;
        if by_pairs != by_groups {
            return Err(CoreError::Undeterminable(format!(
                "kernel dimension at 2: {by_pairs} by pair counting, {by_groups} by subgroups"
            )));
        }
        Ok((rc, rf, by_pairs))
    });
    let (lambda, exponent, methods, details) = match native {
        Ok((rc, rf, dim)) => {
            let sign = if dim % 2 == 0 { 1 } else { -1 };
            let kc = kernel_of_reduction(&rc)?;
            let kf = kernel_of_reduction(&rf)?;
            let details = json!({
                "h_C": rc.model.h.to_string(),
                "h_Prym": rf.model.h.to_string(),
                "model_C": rc.model.to_string(),
                "model_Prym": rf.model.to_string(),
                "L_C": rc.l_poly.to_string(),
                "L_Prym": rf.l_poly.to_string(),
                "kernel_of_reduction_C": kc,
                "kernel_of_reduction_Prym": kf,
                "kernel_pairs_dimension": dim,
            });
            let lambda = delta.value * mu_c.value * mu_d.value * sign;
            (lambda, dim as i64, vec!["good ordinary reduction".to_string(), mu_c.method.clone()], details)
        }
        Err(e @ CoreError::OverrideRequired { .. }) => match ov.lambda2 {
            Some(v) => {
                overrides.push("lambda2".into());
                (v, 0, vec!["override".to_string()], json!({ "native_failure": e.to_string() }))
            }
            None => return Err(e),
        },
        Err(e) => return Err(e),
    };
    Ok(LocalTermReport {
        place: "2".into(),
        lambda,
        mu_c: mu_c.value,
        mu_d: mu_d.value,
        delta: delta.value,
        exponent,
        methods,
        overrides,
        details,
    })
}

pub fn lambda_two(d: &DoubleCoverDatum) -> Result<LocalTermReport> {
    lambda_two_with(d, &Overrides::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::classify_cover;
    use prym_algebra::UniPoly;

    fn paper() -> DoubleCoverDatum {
        classify_cover(&UniPoly::from_ints(&[-295, -236, 60, 54, 48, -12, 1]), &UniPoly::from_ints(&[12, 8, 1])).unwrap()
    }

    #[test]
    fn worked_example_kernels() {
        let d = paper();
        let (rc, rf) = reduction_data(&d).unwrap();
        assert_eq!(kernel_of_reduction(&rf).unwrap().len(), 4);
        assert_eq!(kernel_of_reduction(&rc).unwrap().len(), 8);
        assert_eq!(kernel_dimension_by_pairs(&d, &rc, &rf).unwrap(), 3);
        assert_eq!(kernel_dimension_by_subgroups(&d, &rc, &rf).unwrap(), 3);
    }

    #[test]
    fn worked_example_lambda() {
        let r = lambda_two(&paper()).unwrap();
        assert_eq!((r.lambda, r.exponent), (-1, 3));
        assert!(r.overrides.is_empty());
    }

    #[test]
    fn override_when_not_ordinary() {
        // F ≡ (x + 1)^6 (mod 2): every candidate h has h̄ = (x + 1)^3.
        let d = classify_cover(&UniPoly::from_ints(&[3, 0, 0, 0, 1]), &UniPoly::from_ints(&[1, 0, 1])).unwrap();
        let err = lambda_two(&d).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let ov = Overrides { lambda2: Some(-1), ..Default::default() };
        let r = lambda_two_with(&d, &ov).unwrap();
        assert_eq!(r.lambda, -1);
        assert_eq!(r.overrides, vec!["lambda2".to_string()]);
    }
}
