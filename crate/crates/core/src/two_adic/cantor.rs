//! Mumford representatives and Cantor's algorithm on `y^2 + h y = f` with
//! `deg f = 2g + 1`, `deg h <= g`, over a finite field.

use prym_algebra::ff::{Gf, GfElem, GfPoly};

/// `(a, b)` with `a` monic, `deg b < deg a` and `b^2 + h b ≡ f (mod a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mumford {
    pub a: GfPoly,
    pub b: GfPoly,
}

#[derive(Clone, Debug)]
pub struct ImaginaryCurve {
    pub gf: Gf,
    pub genus: usize,
    pub h: GfPoly,
    pub f: GfPoly,
}

/// `(d, s, t)` with `d = s a + t b` monic.
fn xgcd(gf: &Gf, a: &GfPoly, b: &GfPoly) -> (GfPoly, GfPoly, GfPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![gf.one()], GfPoly::new());
    let (mut t0, mut t1) = (GfPoly::new(), vec![gf.one()]);
    while !r1.is_empty() {
        let (q, r) = gf.poly_divrem(&r0, &r1);
        let s2 = gf.poly_sub(&s0, &gf.poly_mul(&q, &s1));
        let t2 = gf.poly_sub(&t0, &gf.poly_mul(&q, &t1));
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s2);
        (t0, t1) = (t1, t2);
    }
    if r0.is_empty() {
        return (r0, s0, t0);
    }
    let inv = gf.inv(r0.last().unwrap()).expect("nonzero leading coefficient");
    (gf.poly_scale(&r0, &inv), gf.poly_scale(&s0, &inv), gf.poly_scale(&t0, &inv))
}

impl ImaginaryCurve {
    pub fn identity(&self) -> Mumford {
        Mumford { a: vec![self.gf.one()], b: GfPoly::new() }
    }

    pub fn is_identity(&self, d: &Mumford) -> bool {
        d.a.len() == 1 && d.b.is_empty()
    }

    /// The divisor `P - ∞` for an affine point `P = (x, y)`.
    pub fn point(&self, x: &GfElem, y: &GfElem) -> Mumford {
        let gf = &self.gf;
        debug_assert!({
            let lhs = gf.add(&gf.square(y), &gf.mul(&gf.poly_eval(&self.h, x), y));
            lhs == gf.poly_eval(&self.f, x)
        });
        Mumford { a: vec![gf.neg(x), gf.one()], b: gf.poly_trim(vec![y.clone()]) }
    }

    pub fn add(&self, d1: &Mumford, d2: &Mumford) -> Mumford {
        let gf = &self.gf;
        let (d1g, e1, e2) = xgcd(gf, &d1.a, &d2.a);
        let sum_b = gf.poly_add(&gf.poly_add(&d1.b, &d2.b), &self.h);
        let (d, c1, c2) = xgcd(gf, &d1g, &sum_b);
        let s1 = gf.poly_mul(&c1, &e1);
        let s2 = gf.poly_mul(&c1, &e2);
        let s3 = c2;
        let dd = gf.poly_mul(&d, &d);
        let (a, r) = gf.poly_divrem(&gf.poly_mul(&d1.a, &d2.a), &dd);
        debug_assert!(r.is_empty());
        let num = gf.poly_add(
            &gf.poly_add(&gf.poly_mul(&gf.poly_mul(&s1, &d1.a), &d2.b), &gf.poly_mul(&gf.poly_mul(&s2, &d2.a), &d1.b)),
            &gf.poly_mul(&s3, &gf.poly_add(&gf.poly_mul(&d1.b, &d2.b), &self.f)),
        );
        let (q, r) = gf.poly_divrem(&num, &d);
        debug_assert!(r.is_empty());
        let b = gf.poly_rem(&q, &a);
        self.reduce(Mumford { a, b })
    }

    fn reduce(&self, mut m: Mumford) -> Mumford {
        let gf = &self.gf;
        while m.a.len() > self.genus + 1 {
            let num = gf.poly_sub(&gf.poly_sub(&self.f, &gf.poly_mul(&m.b, &self.h)), &gf.poly_mul(&m.b, &m.b));
            let (a2, r) = gf.poly_divrem(&num, &m.a);
            debug_assert!(r.is_empty());
            let b2 = gf.poly_rem(&gf.poly_neg(&gf.poly_add(&self.h, &m.b)), &a2);
            m = Mumford { a: a2, b: b2 };
        }
        let a = gf.poly_monic(&m.a);
        let b = gf.poly_rem(&m.b, &a);
        Mumford { a, b }
    }
}

trait PolyNeg {
    fn poly_neg(&self, a: &GfPoly) -> GfPoly;
}

impl PolyNeg for Gf {
    fn poly_neg(&self, a: &GfPoly) -> GfPoly {
        self.poly_sub(&GfPoly::new(), a)
    }
}

/// `p(x0 + t)` as a polynomial in `t`.
fn taylor_shift(gf: &Gf, p: &GfPoly, x0: &GfElem) -> GfPoly {
    let lin = vec![x0.clone(), gf.one()];
    let mut acc = GfPoly::new();
    for c in p.iter().rev() {
        acc = gf.poly_add(&gf.poly_mul(&acc, &lin), &vec![c.clone()]);
        acc = gf.poly_trim(acc);
    }
    acc
}

/// `t^d p(1/t)`.
fn reversed(gf: &Gf, p: &GfPoly, d: usize) -> GfPoly {
    let mut v = p.clone();
    v.resize(d + 1, gf.zero());
    v.reverse();
    gf.poly_trim(v)
}

/// A change of coordinates on `y^2 + h y = k` (characteristic 2, `deg h <= g + 1`,
/// `deg k <= 2g + 2`) sending a Weierstrass point to the unique point at
/// infinity of an imaginary model.
pub struct ImaginaryModel {
    pub curve: ImaginaryCurve,
    /// `None` when the chosen Weierstrass point already lay at infinity.
    pub base_x: Option<GfElem>,
    shift: GfElem,
}

impl ImaginaryModel {
    /// `h(base) = 0` is required; `base = None` requires `deg h <= g`.
    pub fn new(gf: &Gf, genus: usize, h: &GfPoly, k: &GfPoly, base: Option<&GfElem>) -> Self {
        let (hh, kk) = match base {
            None => (h.clone(), k.clone()),
            Some(x0) => (
                reversed(gf, &taylor_shift(gf, h, x0), genus + 1),
                reversed(gf, &taylor_shift(gf, k, x0), 2 * genus + 2),
            ),
        };
        assert!(hh.len() <= genus + 1, "base point is not a Weierstrass point");
        // y -> y + c x^{g+1} removes the x^{2g+2} term of k.
        let top = kk.get(2 * genus + 2).cloned().unwrap_or_else(|| gf.zero());
        let c = gf.sqrt(&top).expect("squares are surjective in characteristic 2");
        let mut x_g1 = vec![gf.zero(); genus + 1];
        x_g1.push(c.clone());
        let x_g1 = gf.poly_trim(x_g1);
        let f = gf.poly_add(&gf.poly_add(&kk, &gf.poly_mul(&x_g1, &x_g1)), &gf.poly_mul(&x_g1, &hh));
        ImaginaryModel {
            curve: ImaginaryCurve { gf: gf.clone(), genus, h: hh, f },
            base_x: base.cloned(),
            shift: c,
        }
    }

    /// Image of an affine point of the original model, `None` if it is the
    /// base point itself.
    pub fn map_point(&self, x: &GfElem, y: &GfElem) -> Option<(GfElem, GfElem)> {
        let gf = &self.curve.gf;
        let g1 = self.curve.genus as u64 + 1;
        let (u, w) = match &self.base_x {
            None => (x.clone(), y.clone()),
            Some(x0) => {
                let u = gf.inv(&gf.sub(x, x0))?;
                (u.clone(), gf.mul(y, &gf.pow_u64(&u, g1)))
            }
        };
        let w = gf.add(&w, &gf.mul(&self.shift, &gf.pow_u64(&u, g1)));
        Some((u, w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn on_curve(c: &ImaginaryCurve, x: &GfElem, y: &GfElem) -> bool {
        let gf = &c.gf;
        gf.add(&gf.square(y), &gf.mul(&gf.poly_eval(&c.h, x), y)) == gf.poly_eval(&c.f, x)
    }

    fn affine_points(c: &ImaginaryCurve) -> Vec<(GfElem, GfElem)> {
        let gf = &c.gf;
        let mut out = Vec::new();
        for x in gf.elements() {
            for y in gf.elements() {
                if on_curve(c, &x, &y) {
                    out.push((x.clone(), y));
                }
            }
        }
        out
    }

    fn genus2() -> ImaginaryCurve {
        // y^2 + (x^2 + x) y = x^5 + x^3 + 1 over F_16.
        let gf = Gf::new(2, 4).unwrap();
        let h = gf.poly_from_ints(&[0, 1, 1]);
        let f = gf.poly_from_ints(&[1, 0, 0, 1, 0, 1]);
        ImaginaryCurve { gf, genus: 2, h, f }
    }

    #[test]
    fn group_laws_on_points() {
        let c = genus2();
        let pts = affine_points(&c);
        assert!(pts.len() >= 3);
        let gf = &c.gf;
        for (x, y) in &pts {
            let p = c.point(x, y);
            // -P = (x, y + h(x)).
            let neg = c.point(x, &gf.add(y, &gf.poly_eval(&c.h, x)));
            assert!(c.is_identity(&c.add(&p, &neg)));
            assert_eq!(c.add(&p, &c.identity()), p);
        }
        let (p, q, r) = (c.point(&pts[0].0, &pts[0].1), c.point(&pts[1].0, &pts[1].1), c.point(&pts[2].0, &pts[2].1));
        assert_eq!(c.add(&p, &q), c.add(&q, &p));
        assert_eq!(c.add(&c.add(&p, &q), &r), c.add(&p, &c.add(&q, &r)));
    }

    #[test]
    fn group_order_matches_l_polynomial() {
        // #J(F_2) = L(1) for y^2 + (x^2 + x) y = x^5 + x^3 + 1 over F_2.
        use crate::two_adic::model::{l_polynomial, ReducedCurve};
        let r = ReducedCurve { genus: 2, h: vec![0, 1, 1], k: vec![1, 0, 0, 1, 0, 1] };
        let l = l_polynomial(&r).unwrap();
        let order: i64 = l.coeffs.iter().sum();
        let gf = Gf::prime(2).unwrap();
        let c = ImaginaryCurve { gf: gf.clone(), genus: 2, h: gf.poly_from_ints(&[0, 1, 1]), f: gf.poly_from_ints(&[1, 0, 0, 1, 0, 1]) };
        // Enumerate all reduced divisors of degree <= 2 by brute force over F_2.
        let mut elems = std::collections::BTreeSet::new();
        let pts = affine_points(&c);
        let mut divs = vec![c.identity()];
        divs.extend(pts.iter().map(|(x, y)| c.point(x, y)));
        for a in &divs {
            for b in &divs {
                let s = c.add(a, b);
                elems.insert((s.a.clone(), s.b.clone()));
            }
        }
        // Degree-2 divisors supported on a conjugate pair over F_4.
        let gf4 = Gf::new(2, 2).unwrap();
        let c4 = ImaginaryCurve { gf: gf4.clone(), genus: 2, h: gf4.poly_from_ints(&[0, 1, 1]), f: gf4.poly_from_ints(&[1, 0, 0, 1, 0, 1]) };
        for (x, y) in affine_points(&c4) {
            if gf4.as_prime(&x).is_some() {
                continue;
            }
            let s = c4.add(&c4.point(&x, &y), &c4.point(&gf4.frobenius(&x), &gf4.frobenius(&y)));
            if s.a.iter().chain(s.b.iter()).all(|e| gf4.as_prime(e).is_some()) {
                let down = |v: &GfPoly| gf.poly_trim(v.iter().map(|e| gf.from_u64(gf4.as_prime(e).unwrap())).collect());
                elems.insert((down(&s.a), down(&s.b)));
            }
        }
        assert_eq!(elems.len() as i64, order);
    }

    #[test]
    fn change_of_model_preserves_points() {
        let gf = Gf::new(2, 2).unwrap();
        // y^2 + (x^3 + x) y = x^6 + x + 1, base at the root x = 1 of h.
        let h = gf.poly_from_ints(&[0, 1, 0, 1]);
        let k = gf.poly_from_ints(&[1, 1, 0, 0, 0, 0, 1]);
        let m = ImaginaryModel::new(&gf, 2, &h, &k, Some(&gf.one()));
        assert!(m.curve.h.len() <= 3 && m.curve.f.len() == 6);
        for x in gf.elements() {
            for y in gf.elements() {
                let lhs = gf.add(&gf.square(&y), &gf.mul(&gf.poly_eval(&h, &x), &y));
                if lhs == gf.poly_eval(&k, &x) {
                    if let Some((u, w)) = m.map_point(&x, &y) {
                        assert!(on_curve(&m.curve, &u, &w));
                    }
                }
            }
        }
    }
}
