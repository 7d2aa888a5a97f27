use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::AlgebraError;
use crate::ff::{Gf, GfElem, GfPoly};

/// `L = Q_{p^m}(π)` with `π^e = p`, elements stored modulo `p^N`.
///
/// The unramified part is `Z_p[X]/(M)` with `M` the integer lift of the
/// residue field modulus. An element is `Σ_{i<e} a_i π^i` with each `a_i`
/// a vector of `m` coordinates in `[0, p^N)`.
#[derive(Clone, Debug)]
pub struct LocalField {
    p: u64,
    pb: BigInt,
    m: usize,
    e: usize,
    prec: u32,
    pn: BigInt,
    modulus: Vec<BigInt>,
    residue: Gf,
    frob_x: Vec<BigInt>,
    zeta: Option<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LElem(Vec<Vec<BigInt>>);

impl LElem {
    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.0
    }
}

type RElem = Vec<BigInt>;

fn vp(x: &BigInt, p: &BigInt) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    let mut v = 0;
    let mut y = x.clone();
    loop {
        let (q, r) = y.div_rem(p);
        if !r.is_zero() {
            return Some(v);
        }
        y = q;
        v += 1;
    }
}

impl LocalField {
    pub fn new(p: u64, m: usize, e: usize, prec: u32) -> Result<LocalField, AlgebraError> {
        if e == 0 || prec == 0 {
            return Err(AlgebraError::Invalid("ramification and precision must be positive".into()));
        }
        let residue = Gf::new(p, m)?;
        let pb = BigInt::from(p);
        let pn = num_traits::pow(pb.clone(), prec as usize);
        let modulus = residue.modulus().iter().map(|&c| BigInt::from(c)).collect();
        let mut field = LocalField {
            p,
            pb,
            m,
            e,
            prec,
            pn,
            modulus,
            residue,
            frob_x: Vec::new(),
            zeta: None,
        };
        field.frob_x = field.lift_frobenius_of_x();
        field.zeta = field.teichmuller_root_of_unity(e);
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn residue_degree(&self) -> usize {
        self.m
    }

    pub fn ramification_index(&self) -> usize {
        self.e
    }

    /// Working precision `N`: coordinates are kept modulo `p^N`.
    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Precision in units of `v_π`.
    pub fn pi_precision(&self) -> u64 {
        self.prec as u64 * self.e as u64
    }

    pub fn residue_field(&self) -> &Gf {
        &self.residue
    }

    // ---- unramified ring Z_p[X]/(M) modulo p^N ----

    fn r_zero(&self) -> RElem {
        vec![BigInt::zero(); self.m]
    }

    fn r_reduce(&self, mut a: RElem) -> RElem {
        for c in a.iter_mut() {
            *c = c.mod_floor(&self.pn);
        }
        a
    }

    fn r_add(&self, a: &RElem, b: &RElem) -> RElem {
        self.r_reduce(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    fn r_sub(&self, a: &RElem, b: &RElem) -> RElem {
        self.r_reduce(a.iter().zip(b).map(|(x, y)| x - y).collect())
    }

    fn r_scale(&self, a: &RElem, c: &BigInt) -> RElem {
        self.r_reduce(a.iter().map(|x| x * c).collect())
    }

    fn r_mul(&self, a: &RElem, b: &RElem) -> RElem {
        let m = self.m;
        if m == 1 {
            return vec![(&a[0] * &b[0]).mod_floor(&self.pn)];
        }
        let mut prod = vec![BigInt::zero(); 2 * m - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        for d in (m..prod.len()).rev() {
            let c = std::mem::take(&mut prod[d]);
            if c.is_zero() {
                continue;
            }
            for j in 0..m {
                let t = &c * &self.modulus[j];
                prod[d - m + j] -= t;
            }
        }
        prod.truncate(m);
        self.r_reduce(prod)
    }

    fn r_val(&self, a: &RElem) -> Option<u64> {
        a.iter().filter_map(|c| vp(c, &self.pb)).min()
    }

    fn r_residue(&self, a: &RElem) -> GfElem {
        let coords: Vec<u64> = a
            .iter()
            .map(|c| {
                let r = c.mod_floor(&self.pb);
                r.try_into().unwrap()
            })
            .collect();
        self.residue.from_coords(&coords)
    }

    fn r_lift(&self, a: &GfElem) -> RElem {
        a.coeffs().iter().map(|&c| BigInt::from(c)).collect()
    }

    fn r_inv_unit(&self, a: &RElem) -> Option<RElem> {
        let r0 = self.residue.inv(&self.r_residue(a))?;
        let mut b = self.r_lift(&r0);
        let two = {
            let mut t = self.r_zero();
            t[0] = BigInt::from(2);
            t
        };
        // Newton: b <- b (2 - a b) doubles the correct digits.
        let mut digits = 1u32;
        while digits < self.prec {
            b = self.r_mul(&b, &self.r_sub(&two, &self.r_mul(a, &b)));
            digits *= 2;
        }
        Some(b)
    }

    fn r_eval_poly(&self, poly: &[BigInt], y: &RElem) -> RElem {
        let mut acc = self.r_zero();
        for c in poly.iter().rev() {
            acc = self.r_mul(&acc, y);
            acc[0] = (&acc[0] + c).mod_floor(&self.pn);
        }
        acc
    }

    fn r_pow(&self, a: &RElem, mut e: u64) -> RElem {
        let mut base = a.clone();
        let mut r = self.r_zero();
        r[0] = BigInt::one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.r_mul(&r, &base);
            }
            base = self.r_mul(&base, &base);
            e >>= 1;
        }
        r
    }

    /// Hensel lift of a simple residue root of an integer polynomial.
    fn r_hensel(&self, poly: &[BigInt], start: RElem) -> RElem {
        let deriv: Vec<BigInt> = poly
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        let mut y = start;
        let mut digits = 1u32;
        while digits < self.prec {
            let fy = self.r_eval_poly(poly, &y);
            let dy = self.r_eval_poly(&deriv, &y);
            let inv = self.r_inv_unit(&dy).expect("simple residue root");
            y = self.r_sub(&y, &self.r_mul(&fy, &inv));
            digits *= 2;
        }
        // One extra step absorbs rounding of the doubling schedule.
        let fy = self.r_eval_poly(poly, &y);
        let dy = self.r_eval_poly(&deriv, &y);
        let inv = self.r_inv_unit(&dy).expect("simple residue root");
        self.r_sub(&y, &self.r_mul(&fy, &inv))
    }

    fn lift_frobenius_of_x(&self) -> RElem {
        if self.m == 1 {
            return vec![BigInt::zero()];
        }
        let mut x = self.r_zero();
        x[0] = BigInt::zero();
        x[1] = BigInt::one();
        let xp = self.r_pow(&x, self.p);
        let start = self.r_lift(&self.r_residue(&xp));
        self.r_hensel(&self.modulus.clone(), start)
    }

    fn teichmuller_root_of_unity(&self, e: usize) -> Option<RElem> {
        if e == 1 {
            return Some({
                let mut one = self.r_zero();
                one[0] = BigInt::one();
                one
            });
        }
        let k = &self.residue;
        let mut poly: GfPoly = vec![k.neg(&k.one())];
        poly.extend((1..e).map(|_| k.zero()));
        poly.push(k.one());
        let roots = k.roots(&poly);
        let primitive = roots.into_iter().find(|z| (1..e).all(|d| !k.is_one(&k.pow_u64(z, d as u64))))?;
        let mut int_poly = vec![BigInt::from(-1)];
        int_poly.extend((1..e).map(|_| BigInt::zero()));
        int_poly.push(BigInt::one());
        Some(self.r_hensel(&int_poly, self.r_lift(&primitive)))
    }

    fn r_frobenius(&self, a: &RElem) -> RElem {
        if self.m == 1 {
            return a.clone();
        }
        let mut acc = self.r_zero();
        let mut pw = self.r_zero();
        pw[0] = BigInt::one();
        for c in a {
            acc = self.r_add(&acc, &self.r_scale(&pw, c));
            pw = self.r_mul(&pw, &self.frob_x);
        }
        acc
    }

    // ---- the field L ----

    pub fn zero(&self) -> LElem {
        LElem(vec![self.r_zero(); self.e])
    }

    pub fn one(&self) -> LElem {
        self.from_bigint(&BigInt::one())
    }

    pub fn pi(&self) -> LElem {
        self.pi_pow(1)
    }

    /// `π^k`.
    pub fn pi_pow(&self, k: u64) -> LElem {
        self.mul_pi_pow(&self.one(), k)
    }

    pub fn from_bigint(&self, c: &BigInt) -> LElem {
        let mut z = self.zero();
        z.0[0][0] = c.mod_floor(&self.pn);
        z
    }

    /// Image of a `p`-integral rational; `None` if the denominator is
    /// divisible by `p`.
    pub fn from_rational(&self, c: &BigRational) -> Option<LElem> {
        if (c.denom() % &self.pb).is_zero() {
            return None;
        }
        let inv = c.denom().extended_gcd(&self.pn).x;
        Some(self.from_bigint(&(c.numer() * inv)))
    }

    /// Lift of a residue field element (coordinates in `[0, p)`).
    pub fn lift_residue(&self, a: &GfElem) -> LElem {
        let mut z = self.zero();
        z.0[0] = self.r_lift(a);
        z
    }

    /// Residue of an integral element.
    pub fn residue(&self, a: &LElem) -> GfElem {
        self.r_residue(&a.0[0])
    }

    pub fn is_zero(&self, a: &LElem) -> bool {
        a.0.iter().all(|r| r.iter().all(|c| c.is_zero()))
    }

    pub fn add(&self, a: &LElem, b: &LElem) -> LElem {
        LElem(a.0.iter().zip(&b.0).map(|(x, y)| self.r_add(x, y)).collect())
    }

    pub fn sub(&self, a: &LElem, b: &LElem) -> LElem {
        LElem(a.0.iter().zip(&b.0).map(|(x, y)| self.r_sub(x, y)).collect())
    }

    pub fn neg(&self, a: &LElem) -> LElem {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &LElem, b: &LElem) -> LElem {
        let e = self.e;
        let mut out = vec![self.r_zero(); e];
        for (i, x) in a.0.iter().enumerate() {
            if x.iter().all(|c| c.is_zero()) {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if y.iter().all(|c| c.is_zero()) {
                    continue;
                }
                let mut prod = self.r_mul(x, y);
                let mut idx = i + j;
                if idx >= e {
                    idx -= e;
                    prod = self.r_scale(&prod, &self.pb);
                }
                out[idx] = self.r_add(&out[idx], &prod);
            }
        }
        LElem(out)
    }

    pub fn pow(&self, a: &LElem, mut k: u64) -> LElem {
        let mut base = a.clone();
        let mut r = self.one();
        while k > 0 {
            if k & 1 == 1 {
                r = self.mul(&r, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        r
    }

    /// `v_π(a)`, or `None` if `a` vanishes to the working precision.
    pub fn valuation(&self, a: &LElem) -> Option<u64> {
        a.0.iter()
            .enumerate()
            .filter_map(|(i, r)| self.r_val(r).map(|v| v * self.e as u64 + i as u64))
            .min()
    }

    /// `v_p(a)` as a rational with denominator dividing `e`.
    pub fn valuation_p(&self, a: &LElem) -> Option<BigRational> {
        self.valuation(a)
            .map(|v| BigRational::new(BigInt::from(v), BigInt::from(self.e)))
    }

    /// `a π^k`.
    pub fn mul_pi_pow(&self, a: &LElem, k: u64) -> LElem {
        let mut rows = a.0.clone();
        for _ in 0..k {
            let last = rows.pop().unwrap();
            rows.insert(0, self.r_scale(&last, &self.pb));
        }
        LElem(rows)
    }

    /// `a / π^k`; the caller guarantees `v_π(a) >= k`. The top `p`-adic
    /// digit of shifted coordinates is lost.
    pub fn div_pi_pow(&self, a: &LElem, k: u64) -> LElem {
        let mut rows = a.0.clone();
        for _ in 0..k {
            let first = rows.remove(0);
            let shifted: RElem = first
                .iter()
                .map(|c| {
                    debug_assert!((c % &self.pb).is_zero(), "division by π of a non-multiple");
                    c / &self.pb
                })
                .collect();
            rows.push(shifted);
        }
        LElem(rows)
    }

    /// Inverse of a unit (valuation zero).
    pub fn inv_unit(&self, a: &LElem) -> Option<LElem> {
        if self.valuation(a) != Some(0) {
            return None;
        }
        let a0inv = self.r_inv_unit(&a.0[0])?;
        let mut b = LElem({
            let mut rows = vec![self.r_zero(); self.e];
            rows[0] = a0inv;
            rows
        });
        let two = self.from_bigint(&BigInt::from(2));
        // Each Newton step doubles the π-adic precision of the inverse.
        let mut digits = 1u64;
        while digits < self.pi_precision() + 1 {
            b = self.mul(&b, &self.sub(&two, &self.mul(a, &b)));
            digits *= 2;
        }
        Some(b)
    }

    /// The Frobenius lift: Frobenius on `Q_{p^m}`, identity on `π`.
    pub fn frobenius(&self, a: &LElem) -> LElem {
        LElem(a.0.iter().map(|r| self.r_frobenius(r)).collect())
    }

    /// The inertia generator `π -> ζ_e π`, when `Q_{p^m}` contains the
    /// `e`-th roots of unity.
    pub fn inertia(&self, a: &LElem) -> Option<LElem> {
        let zeta = self.zeta.as_ref()?;
        let mut pw = {
            let mut one = self.r_zero();
            one[0] = BigInt::one();
            one
        };
        let mut rows = Vec::with_capacity(self.e);
        for r in &a.0 {
            rows.push(self.r_mul(r, &pw));
            pw = self.r_mul(&pw, zeta);
        }
        Some(LElem(rows))
    }

    pub fn has_inertia(&self) -> bool {
        self.zeta.is_some()
    }

    pub fn eval_poly(&self, poly: &[LElem], x: &LElem) -> LElem {
        poly.iter().rev().fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), c))
    }

    /// Coefficients of `q(c + z)`.
    pub fn taylor_shift(&self, q: &[LElem], c: &LElem) -> Vec<LElem> {
        let mut a = q.to_vec();
        let n = a.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = self.mul(c, &a[j + 1]);
                a[j] = self.add(&a[j], &t);
            }
        }
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    #[test]
    fn arithmetic_in_ramified_quadratic() {
        let l = LocalField::new(5, 1, 2, 20).unwrap();
        let pi = l.pi();
        assert_eq!(l.mul(&pi, &pi), l.from_bigint(&BigInt::from(5)));
        assert_eq!(l.valuation(&pi), Some(1));
        assert_eq!(l.valuation(&l.from_bigint(&BigInt::from(50))), Some(4));
        let x = l.add(&l.one(), &pi);
        let inv = l.inv_unit(&x).unwrap();
        assert_eq!(l.mul(&x, &inv), l.one());
        assert_eq!(l.div_pi_pow(&l.mul_pi_pow(&x, 3), 3), x);
    }

    #[test]
    fn rational_embedding() {
        let l = LocalField::new(7, 1, 1, 10).unwrap();
        let a = l.from_rational(&ratio(3, 4)).unwrap();
        assert_eq!(l.mul(&a, &l.from_bigint(&BigInt::from(4))), l.from_bigint(&BigInt::from(3)));
        assert!(l.from_rational(&ratio(1, 7)).is_none());
    }

    #[test]
    fn frobenius_is_a_ring_automorphism_of_order_m() {
        let l = LocalField::new(3, 2, 2, 15).unwrap();
        let mut x = l.zero();
        x.0[0][1] = BigInt::one();
        let y = l.add(&l.mul(&x, &x), &l.mul_pi_pow(&x, 1));
        let fy = l.frobenius(&y);
        assert_eq!(fy, l.add(&l.mul(&l.frobenius(&x), &l.frobenius(&x)), &l.mul_pi_pow(&l.frobenius(&x), 1)));
        assert_eq!(l.frobenius(&fy), y);
        assert_ne!(fy, y);
    }

    #[test]
    fn inertia_negates_pi_for_e_two() {
        let l = LocalField::new(7, 1, 2, 10).unwrap();
        assert_eq!(l.inertia(&l.pi()).unwrap(), l.neg(&l.pi()));
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let l = LocalField::new(5, 2, 1, 12).unwrap();
        let q: Vec<LElem> = [3i64, -1, 4, 1].iter().map(|&c| l.from_bigint(&BigInt::from(c))).collect();
        let mut c = l.zero();
        c.0[0][1] = BigInt::from(2);
        let shifted = l.taylor_shift(&q, &c);
        let z = l.from_bigint(&BigInt::from(7));
        assert_eq!(l.eval_poly(&shifted, &z), l.eval_poly(&q, &l.add(&c, &z)));
    }
}
