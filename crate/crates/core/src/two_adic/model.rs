//! Integral models `y^2 + h y = k` at 2, their reductions, and zeta data.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use prym_algebra::ff::{Gf, GfElem, GfPoly};
use prym_algebra::UniPoly;
use serde::Serialize;

use crate::cover::HyperellipticCurve;
use crate::error::{CoreError, Result};

/// `Y^2 + h(x) Y = k(x)` with `k = (F - h^2) / 4`, obtained from
/// `y^2 = F(x)` through `y = 2Y + h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralModelAt2 {
    pub h: UniPoly,
    pub k: UniPoly,
    pub genus: usize,
}

impl fmt::Display for IntegralModelAt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 + ({})y = {}", self.h, self.k)
    }
}

/// The reduction of an integral model over `F_2`. Coefficient vectors are
/// lowest degree first with entries in `{0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedCurve {
    pub genus: usize,
    pub h: Vec<u64>,
    pub k: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LPolynomial {
    /// `1 + a_1 T + ... + a_{2g} T^{2g}`, starting with the constant 1.
    pub coeffs: Vec<i64>,
}

impl fmt::Display for LPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, &a) in self.coeffs.iter().enumerate().filter(|(_, a)| **a != 0) {
            let term = match (i, a.abs()) {
                (0, m) => m.to_string(),
                (1, 1) => "T".into(),
                (1, m) => format!("{m}T"),
                (i, 1) => format!("T^{i}"),
                (i, m) => format!("{m}T^{i}"),
            };
            match (out.is_empty(), a < 0) {
                (true, false) => out.push_str(&term),
                (true, true) => out.push_str(&format!("-{term}")),
                (false, neg) => out.push_str(&format!(" {} {term}", if neg { '-' } else { '+' })),
            }
        }
        f.write_str(&out)
    }
}

fn mod_n(c: &BigInt, n: u32) -> u64 {
    c.mod_floor(&BigInt::from(n)).try_into().unwrap()
}

fn int_coeffs(p: &UniPoly) -> Vec<BigInt> {
    p.coeffs().iter().map(|c| c.to_integer()).collect()
}

/// `F` scaled by an odd square so that its coefficients are integers.
fn two_integral(c: &HyperellipticCurve) -> Result<Vec<BigInt>> {
    let d = c.poly().denominator_lcm();
    if d.is_even() {
        return Err(CoreError::Invalid(format!("{c} does not have 2-integral coefficients")));
    }
    Ok(int_coeffs(&c.poly().scale(&BigRational::from_integer(&d * &d))))
}

/// Candidate `h`: lifts of `sqrt(F mod 2)` with coefficients in `{0, 1}`,
/// then in `{-1, 0, 1}`.
fn candidates(h_bar: &[u64]) -> Vec<Vec<i64>> {
    let base: Vec<i64> = h_bar.iter().map(|&c| c as i64).collect();
    let support: Vec<usize> = (0..base.len()).filter(|&i| base[i] != 0).collect();
    let mut out = vec![base.clone()];
    for signs in 1u32..(1 << support.len()) {
        let mut h = base.clone();
        for (b, &i) in support.iter().enumerate() {
            if signs >> b & 1 == 1 {
                h[i] = -1;
            }
        }
        out.push(h);
    }
    out
}

pub fn reduce(m: &IntegralModelAt2) -> ReducedCurve {
    let bits = |p: &UniPoly| {
        let mut v: Vec<u64> = int_coeffs(p).iter().map(|c| mod_n(c, 2)).collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    };
    ReducedCurve { genus: m.genus, h: bits(&m.h), k: bits(&m.k) }
}

fn gf2_poly(gf: &Gf, v: &[u64]) -> GfPoly {
    gf.poly_trim(v.iter().map(|&c| gf.from_u64(c)).collect())
}

fn padded(v: &[u64], len: usize) -> Vec<u64> {
    let mut out = v.to_vec();
    out.resize(len, 0);
    out
}

/// `(H, K)` of the chart at infinity, `u = 1/x`, `w = y u^{g+1}`.
pub fn infinity_chart(r: &ReducedCurve) -> (Vec<u64>, Vec<u64>) {
    let g = r.genus;
    let mut hh = padded(&r.h, g + 2);
    hh.reverse();
    let mut kk = padded(&r.k, 2 * g + 3);
    kk.reverse();
    (hh, kk)
}

/// Smoothness of the reduction, including the chart at infinity.
pub fn is_smooth(r: &ReducedCurve) -> bool {
    let gf = Gf::prime(2).expect("2 is prime");
    let affine_ok = |h: &[u64], k: &[u64]| {
        let h = gf2_poly(&gf, h);
        if h.is_empty() {
            return false;
        }
        let k = gf2_poly(&gf, k);
        let dh = gf.poly_derivative(&h);
        let dk = gf.poly_derivative(&k);
        let test = gf.poly_add(&gf.poly_mul(&gf.poly_mul(&dh, &dh), &k), &gf.poly_mul(&dk, &dk));
        gf.poly_deg(&gf.poly_gcd(&h, &test)) == Some(0)
    };
    if !affine_ok(&r.h, &r.k) {
        return false;
    }
    let (hh, kk) = infinity_chart(r);
    let c = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
    // At u = 0: smooth unless H(0) = 0 and H'(0)^2 K(0) + K'(0)^2 = 0.
    c(&hh, 0) == 1 || (c(&hh, 1) * c(&kk, 0) + c(&kk, 1)) % 2 == 1
}

/// Searches for `h` with `F ≡ h^2 (mod 4)` and smooth reduction.
pub fn find_good_model_at2(c: &HyperellipticCurve) -> Result<IntegralModelAt2> {
    let f = two_integral(c)?;
    let g = c.genus();
    // h mod 2 is the unique square root of F mod 2.
    let fbar: Vec<u64> = f.iter().map(|x| mod_n(x, 2)).collect();
    let mut h_bar = vec![0u64; g + 2];
    for (i, &b) in fbar.iter().enumerate() {
        if b == 1 {
            if i % 2 == 1 || i / 2 > g + 1 {
                return Err(no_model(c, "F is not a square modulo 2"));
            }
            h_bar[i / 2] = 1;
        }
    }
    while h_bar.last() == Some(&0) {
        h_bar.pop();
    }
    for cand in candidates(&h_bar) {
        let h = UniPoly::from_ints(&cand);
        let diff = int_coeffs(&(&UniPoly::from_bigints(&f) - &(&h * &h)));
        if diff.iter().any(|x| mod_n(x, 4) != 0) {
            continue;
        }
        let k = UniPoly::from_bigints(&diff.iter().map(|x| x / 4).collect::<Vec<_>>());
        let model = IntegralModelAt2 { h, k, genus: g };
        if is_smooth(&reduce(&model)) {
            return Ok(model);
        }
    }
    Err(no_model(c, "no candidate h gives a smooth reduction"))
}

fn no_model(c: &HyperellipticCurve, why: &str) -> CoreError {
    CoreError::OverrideRequired {
        key: "lambda2".into(),
        reason: format!("good reduction at 2 not established for {c} ({why})"),
    }
}

/// Number of solutions `y` in `F_q` of `y^2 + a y = b`.
fn artin_schreier_count(gf: &Gf, a: &GfElem, b: &GfElem) -> u64 {
    if gf.is_zero(a) {
        return 1;
    }
    let a2 = gf.mul(a, a);
    let t = gf.div(b, &a2).expect("a is nonzero");
    if gf.trace(&t) == 0 {
        2
    } else {
        0
    }
}

/// Projective points of the smooth model over `F_{2^n}`.
pub fn count_points(r: &ReducedCurve, n: usize) -> Result<u64> {
    let gf = Gf::new(2, n)?;
    let h = gf2_poly(&gf, &r.h);
    let k = gf2_poly(&gf, &r.k);
    let mut total = 0;
    for x in gf.elements() {
        total += artin_schreier_count(&gf, &gf.poly_eval(&h, &x), &gf.poly_eval(&k, &x));
    }
    let (hh, kk) = infinity_chart(r);
    total += artin_schreier_count(&gf, &gf.from_u64(hh[0]), &gf.from_u64(kk[0]));
    Ok(total)
}

/// L-polynomial from point counts over `F_{2^1}, ..., F_{2^{2g}}`; the
/// upper half is checked against the functional equation.
pub fn l_polynomial(r: &ReducedCurve) -> Result<LPolynomial> {
    let g = r.genus;
    let n = 2 * g;
    // s_j = sum of alpha_i^j = 2^j + 1 - N_j.
    let mut s = vec![0i64; n + 1];
    for (j, sj) in s.iter_mut().enumerate().skip(1) {
        *sj = (1i64 << j) + 1 - count_points(r, j)? as i64;
    }
    // Newton: j e_j = sum_{i=1}^{j} (-1)^{i-1} e_{j-i} s_i.
    let mut e = vec![0i64; n + 1];
    e[0] = 1;
    for j in 1..=n {
        let mut acc = 0i64;
        for i in 1..=j {
            let term = e[j - i] * s[i];
            acc += if i % 2 == 1 { term } else { -term };
        }
        if acc % j as i64 != 0 {
            return Err(CoreError::Invalid("point counts are not those of a curve".into()));
        }
        e[j] = acc / j as i64;
    }
    let coeffs: Vec<i64> = e.iter().enumerate().map(|(j, &x)| if j % 2 == 0 { x } else { -x }).collect();
    for i in 0..g {
        if coeffs[n - i] != (1i64 << (g - i)) * coeffs[i] {
            return Err(CoreError::Invalid(format!("L-polynomial {coeffs:?} violates the functional equation")));
        }
    }
    Ok(LPolynomial { coeffs })
}

pub fn is_ordinary(l: &LPolynomial, g: usize) -> bool {
    l.coeffs[g] % 2 != 0
}

/// Degree of the splitting field of `h̄` over `F_2`.
pub fn splitting_degree(r: &ReducedCurve) -> Result<usize> {
    let gf2 = Gf::prime(2)?;
    let mut m = 1usize;
    for (fac, _) in gf2.factor(&gf2_poly(&gf2, &r.h)) {
        m = m.lcm(&(fac.len() - 1));
    }
    Ok(m)
}

/// Roots of `h̄` as a binary form of degree `g + 1`, with multiplicity,
/// sorted; `None` stands for the point at infinity. `gf` must contain them.
pub fn weierstrass_residues(gf: &Gf, r: &ReducedCurve) -> Vec<Option<GfElem>> {
    let mut h = gf2_poly(gf, &r.h);
    let mut out = Vec::new();
    for x in gf.elements() {
        let lin = vec![gf.neg(&x), gf.one()];
        loop {
            let (q, rem) = gf.poly_divrem(&h, &lin);
            if !rem.is_empty() || h.is_empty() {
                break;
            }
            out.push(Some(x.clone()));
            h = q;
        }
    }
    out.sort();
    let deg = gf.poly_deg(&gf2_poly(gf, &r.h)).unwrap_or(0);
    out.extend((deg..r.genus + 1).map(|_| None));
    out
}

pub(crate) fn embed_bits(gf: &Gf, v: &[u64]) -> GfPoly {
    gf2_poly(gf, v)
}
