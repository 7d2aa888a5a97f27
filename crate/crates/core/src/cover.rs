//! Curves, double covers and their Prym varieties.
//!
//! A double cover datum is a factorisation `F = f g` of the sextic or
//! octic defining `C: y^2 = F(x)`. The cover is `D = {u^2 = f, v^2 = g}`
//! and, for the cases with `deg g = 2`, the Prym variety is the Jacobian of
//! `y^2 = f(x)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use prym_algebra::{factor_integer, FactorConfig, UniPoly};
use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::two_torsion::TwoTorsionClass;

/// Rows of the classification table for genus 2 and 3 double covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CaseTag {
    #[serde(rename = "II")]
    II,
    #[serde(rename = "III.a")]
    IIIa,
    #[serde(rename = "III.b")]
    IIIb,
    #[serde(rename = "III.c")]
    IIIc,
    #[serde(rename = "III.d")]
    IIId,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::II => "II",
            CaseTag::IIIa => "III.a",
            CaseTag::IIIb => "III.b",
            CaseTag::IIIc => "III.c",
            CaseTag::IIId => "III.d",
        })
    }
}

/// `y^2 = F(x)` with `F` squarefree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperellipticCurve {
    poly: UniPoly,
    genus: usize,
}

impl HyperellipticCurve {
    pub fn new(poly: UniPoly) -> Result<Self> {
        let d = poly.degree().ok_or(CoreError::Invalid("zero polynomial".into()))?;
        if d < 3 {
            return Err(CoreError::Invalid(format!("degree {d} does not define a curve of positive genus")));
        }
        if !poly.is_squarefree() {
            return Err(CoreError::Invalid(format!("{poly} is not squarefree")));
        }
        Ok(HyperellipticCurve { genus: (d - 1) / 2, poly })
    }

    pub fn poly(&self) -> &UniPoly {
        &self.poly
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn degree(&self) -> usize {
        self.poly.deg()
    }

    /// Number of Weierstrass points, counting those at infinity.
    pub fn weierstrass_count(&self) -> usize {
        2 * self.genus + 2
    }
}

impl fmt::Display for HyperellipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = {}", self.poly)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCoverDatum {
    pub f: UniPoly,
    pub g: UniPoly,
    pub case: CaseTag,
}

impl DoubleCoverDatum {
    /// The product `F = f g`.
    pub fn product(&self) -> UniPoly {
        &self.f * &self.g
    }

    pub fn curve(&self) -> HyperellipticCurve {
        HyperellipticCurve::new(self.product()).expect("validated at classification")
    }

    pub fn genus(&self) -> usize {
        (self.f.deg() + self.g.deg() - 2) / 2
    }

    /// Total number of roots of `F`; roots of `f` come first.
    pub fn root_count(&self) -> usize {
        self.f.deg() + self.g.deg()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrymDescriptor {
    pub case: CaseTag,
    pub components: Vec<HyperellipticCurve>,
}

impl PrymDescriptor {
    pub fn dimension(&self) -> usize {
        self.components.iter().map(|c| c.genus()).sum()
    }
}

/// A rational parametrisation `t -> (x(t), v(t))` of `v^2 = g(x)` from a
/// point at infinity. Both coordinates share the denominator `den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicParametrization {
    pub x_num: UniPoly,
    pub v_num: UniPoly,
    pub den: UniPoly,
}

pub fn classify_cover(f: &UniPoly, g: &UniPoly) -> Result<DoubleCoverDatum> {
    let case = match (f.degree(), g.degree()) {
        (Some(4), Some(2)) => CaseTag::II,
        (Some(6), Some(2)) => CaseTag::IIIa,
        (Some(4), Some(4)) => CaseTag::IIIb,
        (a, b) => {
            return Err(CoreError::UnsupportedCase(format!(
                "degree pattern ({}, {}) is not one of (4,2), (6,2), (4,4)",
                a.map_or("-inf".into(), |d| d.to_string()),
                b.map_or("-inf".into(), |d| d.to_string())
            )))
        }
    };
    if !(f * g).is_squarefree() {
        return Err(CoreError::Invalid("f g is not squarefree".into()));
    }
    Ok(DoubleCoverDatum { f: f.clone(), g: g.clone(), case })
}

pub fn build_prym(d: &DoubleCoverDatum) -> Result<PrymDescriptor> {
    let components = match d.case {
        CaseTag::II | CaseTag::IIIa => vec![HyperellipticCurve::new(d.f.clone())?],
        CaseTag::IIIb => vec![HyperellipticCurve::new(d.f.clone())?, HyperellipticCurve::new(d.g.clone())?],
        other => return Err(CoreError::UnsupportedCase(format!("Prym construction for case {other}"))),
    };
    Ok(PrymDescriptor { case: d.case, components })
}

fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| BigRational::new(n, d))
}

/// Parametrise `v^2 = g(x)`, `g = a x^2 + b x + c` with `a = s^2`, through
/// `w = s (x + b / 2a)`, `v = t + kappa / 4t`, `w = -t + kappa / 4t` where
/// `kappa = -(b^2 - 4ac) / 4a`.
pub fn conic_parametrization(g: &UniPoly) -> Result<ConicParametrization> {
    if g.degree() != Some(2) {
        return Err(CoreError::Invalid("conic parametrisation needs a quadratic".into()));
    }
    let (c, b, a) = (g.coeff(0), g.coeff(1), g.coeff(2));
    let s = rational_sqrt(&a).ok_or_else(|| {
        CoreError::Invalid(format!(
            "leading coefficient {a} of g is not a rational square; apply an x-coordinate change moving a rational point of v^2 = g(x) to infinity"
        ))
    })?;
    let four = BigRational::from_integer(BigInt::from(4));
    let kappa = -(&b * &b - &four * &a * &c) / (&four * &a);
    let t = UniPoly::x();
    let t2 = UniPoly::monomial(four.clone(), 2);
    let kappa_c = UniPoly::constant(kappa);
    // x = w / s - b / 2a with w = (kappa - 4 t^2) / 4t.
    let w_num = &kappa_c - &t2;
    let shift = &b / (BigRational::from_integer(BigInt::from(2)) * &a);
    let x_num = &w_num.scale(&(BigRational::one() / &s)) - &t.scale(&(&four * &shift));
    let v_num = &t2 + &kappa_c;
    Ok(ConicParametrization { x_num, v_num, den: t.scale(&four) })
}

/// Divide out the largest rational square from the content of `p`,
/// keeping its sign. The result has integer coefficients.
pub fn square_free_content(p: &UniPoly) -> Result<UniPoly> {
    let (content, prim) = p.primitive_part();
    // p = content * prim, content = n / d; rescale by d^2 to n d prim.
    let mut nd = content.numer() * content.denom();
    let sign = if nd.is_negative() { -BigInt::one() } else { BigInt::one() };
    nd = nd.abs();
    let mut core = BigInt::one();
    for (q, e) in factor_integer(&nd, &FactorConfig::default())?.factors {
        if e.is_odd() {
            core *= q;
        }
    }
    let scale = sign * core;
    Ok(UniPoly::from_bigints(&prim.iter().map(|c| c * &scale).collect::<Vec<_>>()))
}

/// The hyperelliptic model `Y^2 = Q(t)^{deg f} f(x(t))` of `D`, made
/// integral with square-free content.
pub fn build_cover_model(d: &DoubleCoverDatum) -> Result<HyperellipticCurve> {
    match d.case {
        CaseTag::II | CaseTag::IIIa => {}
        other => {
            return Err(CoreError::UnsupportedCase(format!(
                "case {other}: the cover is not given by a hyperelliptic model"
            )))
        }
    }
    let par = conic_parametrization(&d.g)?;
    let model = d.f.substitute_rational(&par.x_num, &par.den, d.f.deg());
    HyperellipticCurve::new(square_free_content(&model)?)
}

/// The class of the roots of `g` among the roots of `F = f g`.
pub fn epsilon_class(d: &DoubleCoverDatum) -> TwoTorsionClass {
    let n = d.root_count();
    TwoTorsionClass::from_indices(n, d.f.deg()..n).expect("g has even degree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use prym_algebra::rat;

    fn paper_f() -> UniPoly {
        UniPoly::from_ints(&[-295, -236, 60, 54, 48, -12, 1])
    }

    #[test]
    fn conic_identity() {
        for g in [UniPoly::from_ints(&[12, 8, 1]), UniPoly::from_ints(&[-3, 5, 9]), UniPoly::from_ints(&[7, 0, 4])] {
            let par = conic_parametrization(&g).unwrap();
            // v^2 = g(x) as rational functions: v_num^2 = den^2 g(x_num / den).
            let lhs = &par.v_num * &par.v_num;
            let rhs = g.substitute_rational(&par.x_num, &par.den, 2);
            assert_eq!(lhs, rhs, "g = {g}");
        }
    }

    #[test]
    fn paper_conic_parametrization() {
        let par = conic_parametrization(&UniPoly::from_ints(&[12, 8, 1])).unwrap();
        // x(t) = -(t^2 + 4t + 1) / t.
        let x = UniPoly::from_ints(&[-1, -4, -1]);
        assert_eq!(&par.x_num * &UniPoly::x(), &x * &par.den);
    }

    #[test]
    fn non_square_leading_coefficient() {
        let f = UniPoly::from_ints(&[1, 0, 0, 0, 1]);
        let d = classify_cover(&f, &UniPoly::from_ints(&[-1, 0, 2])).unwrap();
        let err = build_cover_model(&d).unwrap_err();
        assert!(err.to_string().contains("not a rational square"));
    }

    #[test]
    fn content_keeps_sign() {
        let p = UniPoly::from_ints(&[-12, 0, -48]);
        assert_eq!(square_free_content(&p).unwrap(), UniPoly::from_ints(&[-3, 0, -12]));
        let q = UniPoly::from_coeffs(vec![rat(1), prym_algebra::ratio(1, 2)]);
        assert_eq!(square_free_content(&q).unwrap(), UniPoly::from_ints(&[4, 2]));
    }

    #[test]
    fn prym_dimension() {
        let d = classify_cover(&paper_f(), &UniPoly::from_ints(&[12, 8, 1])).unwrap();
        assert_eq!(build_prym(&d).unwrap().dimension(), 2);
        let d = classify_cover(&UniPoly::from_ints(&[-1, 0, 0, 0, 1]), &UniPoly::from_ints(&[1, 3, 0, 0, 1])).unwrap();
        assert_eq!(d.case, CaseTag::IIIb);
        assert_eq!(build_prym(&d).unwrap().dimension(), 2);
    }
}
