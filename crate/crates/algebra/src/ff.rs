//! Finite fields `GF(p^k)` for word-sized `p`, and polynomials over them.
//!
//! Elements are coefficient vectors (length `k`, lowest first) modulo the
//! lexicographically least monic irreducible of degree `k`. Polynomials over
//! the field are `Vec<GfElem>`, lowest degree first, without trailing zeros.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::AlgebraError;
use crate::intfactor::is_probable_prime;

/// Largest supported characteristic (products must fit in `u128`).
pub const MAX_CHAR: u64 = 1 << 62;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GfElem(Vec<u64>);

impl GfElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }
}

pub type GfPoly = Vec<GfElem>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf {
    p: u64,
    k: usize,
    /// Monic, lowest degree first, length `k + 1`.
    modulus: Vec<u64>,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

/// Whether some `x^k - a` is irreducible over `F_p`: every prime factor of
/// `k` must divide `p - 1`, and `p ≡ 1 (mod 4)` when `4 | k`.
fn binomials_can_be_irreducible(p: u64, k: usize) -> bool {
    let k = k as u64;
    if k % 4 == 0 && p % 4 != 1 {
        return false;
    }
    let mut m = k;
    let mut r = 2;
    while m > 1 {
        if m % r == 0 {
            if (p - 1) % r != 0 {
                return false;
            }
            while m % r == 0 {
                m /= r;
            }
        }
        r += 1;
    }
    true
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

impl Gf {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Gf, AlgebraError> {
        Self::new(p, 1)
    }

    /// `GF(p^k)` with the lexicographically least monic irreducible modulus:
    /// candidates `x^k + c_{k-1} x^{k-1} + ... + c_0` are ordered by the
    /// integer `sum c_i p^i`.
    pub fn new(p: u64, k: usize) -> Result<Gf, AlgebraError> {
        if p >= MAX_CHAR {
            return Err(AlgebraError::PrimeTooLarge(BigInt::from(p)));
        }
        if !is_probable_prime(&BigInt::from(p)) {
            return Err(AlgebraError::NotPrime(BigInt::from(p)));
        }
        if k == 0 {
            return Err(AlgebraError::Invalid("extension degree must be positive".into()));
        }
        let base = Gf { p, k: 1, modulus: vec![0, 1] };
        if k == 1 {
            return Ok(base);
        }
        let mut digits = vec![0u64; k];
        if !binomials_can_be_irreducible(p, k) {
            // Every x^k + c is reducible, so the least irreducible has a
            // nonzero linear term.
            digits[1] = 1;
        }
        loop {
            let mut cand: GfPoly = digits.iter().map(|&c| base.from_u64(c)).collect();
            cand.push(base.one());
            if base.is_irreducible(&cand) {
                let mut modulus = digits.clone();
                modulus.push(1);
                return Ok(Gf { p, k, modulus });
            }
            // Increment the base-p counter; the constant term is least significant.
            let mut i = 0;
            loop {
                digits[i] += 1;
                if digits[i] < p {
                    break;
                }
                digits[i] = 0;
                i += 1;
                if i == k {
                    return Err(AlgebraError::Invalid("no irreducible found".into()));
                }
            }
        }
    }

    /// `GF(p^k)` for an explicitly supplied monic irreducible modulus.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Gf, AlgebraError> {
        let k = modulus.len().saturating_sub(1);
        if k == 0 || *modulus.last().unwrap() != 1 {
            return Err(AlgebraError::Invalid("modulus must be monic of positive degree".into()));
        }
        let base = Gf::prime(p)?;
        let poly: GfPoly = modulus.iter().map(|&c| base.from_u64(c)).collect();
        if !base.is_irreducible(&poly) {
            return Err(AlgebraError::Invalid("modulus is reducible".into()));
        }
        Ok(Gf { p, k, modulus })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.p), self.k)
    }

    pub fn zero(&self) -> GfElem {
        GfElem(vec![0; self.k])
    }

    pub fn one(&self) -> GfElem {
        self.from_u64(1)
    }

    pub fn from_u64(&self, c: u64) -> GfElem {
        let mut v = vec![0; self.k];
        v[0] = c % self.p;
        GfElem(v)
    }

    pub fn from_i64(&self, c: i64) -> GfElem {
        let r = (c as i128).rem_euclid(self.p as i128) as u64;
        self.from_u64(r)
    }

    pub fn from_bigint(&self, c: &BigInt) -> GfElem {
        let r = c.mod_floor(&BigInt::from(self.p));
        self.from_u64(r.to_u64().unwrap())
    }

    /// Element with the given polynomial-basis coordinates (reduced mod p).
    pub fn from_coords(&self, coords: &[u64]) -> GfElem {
        assert!(coords.len() <= self.k);
        let mut v = vec![0; self.k];
        for (i, &c) in coords.iter().enumerate() {
            v[i] = c % self.p;
        }
        GfElem(v)
    }

    /// The class of `X` (zero in the prime field, whose modulus is `X`).
    pub fn generator(&self) -> GfElem {
        if self.k == 1 {
            return self.zero();
        }
        self.from_coords(&[0, 1])
    }

    /// Enumerates elements in order of the base-`p` index of their coordinates.
    pub fn elements(&self) -> impl Iterator<Item = GfElem> + '_ {
        let total = self.p.checked_pow(self.k as u32).expect("field too large to enumerate");
        (0..total).map(move |mut i| {
            let mut v = vec![0; self.k];
            for c in v.iter_mut() {
                *c = i % self.p;
                i /= self.p;
            }
            GfElem(v)
        })
    }

    /// Inverse of `elements`: the index of an element.
    pub fn index(&self, a: &GfElem) -> u64 {
        a.0.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn is_zero(&self, a: &GfElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self, a: &GfElem) -> bool {
        a.0[0] == 1 % self.p && a.0[1..].iter().all(|&c| c == 0)
    }

    /// The element as an element of `F_p`, if it lies there.
    pub fn as_prime(&self, a: &GfElem) -> Option<u64> {
        a.0[1..].iter().all(|&c| c == 0).then_some(a.0[0])
    }

    pub fn add(&self, a: &GfElem, b: &GfElem) -> GfElem {
        GfElem(a.0.iter().zip(&b.0).map(|(&x, &y)| addmod(x, y, self.p)).collect())
    }

    pub fn sub(&self, a: &GfElem, b: &GfElem) -> GfElem {
        GfElem(a.0.iter().zip(&b.0).map(|(&x, &y)| submod(x, y, self.p)).collect())
    }

    pub fn neg(&self, a: &GfElem) -> GfElem {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &GfElem, b: &GfElem) -> GfElem {
        let p = self.p;
        if self.k == 1 {
            return GfElem(vec![mulmod(a.0[0], b.0[0], p)]);
        }
        let k = self.k;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = addmod(prod[i + j], mulmod(x, y, p), p);
            }
        }
        for d in (k..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (j, &m) in self.modulus[..k].iter().enumerate() {
                prod[d - k + j] = submod(prod[d - k + j], mulmod(c, m, p), p);
            }
        }
        prod.truncate(k);
        GfElem(prod)
    }

    pub fn square(&self, a: &GfElem) -> GfElem {
        self.mul(a, a)
    }

    pub fn scalar(&self, c: u64, a: &GfElem) -> GfElem {
        GfElem(a.0.iter().map(|&x| mulmod(x, c % self.p, self.p)).collect())
    }

    pub fn pow(&self, a: &GfElem, e: &BigUint) -> GfElem {
        let mut r = self.one();
        for i in (0..e.bits()).rev() {
            r = self.square(&r);
            if e.bit(i) {
                r = self.mul(&r, a);
            }
        }
        r
    }

    pub fn pow_u64(&self, a: &GfElem, e: u64) -> GfElem {
        self.pow(a, &BigUint::from(e))
    }

    pub fn inv(&self, a: &GfElem) -> Option<GfElem> {
        if self.is_zero(a) {
            return None;
        }
        if self.k == 1 {
            return Some(GfElem(vec![invmod(a.0[0], self.p)]));
        }
        Some(self.pow(a, &(self.order() - 2u32)))
    }

    pub fn div(&self, a: &GfElem, b: &GfElem) -> Option<GfElem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// The Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: &GfElem) -> GfElem {
        self.pow_u64(a, self.p)
    }

    /// Absolute trace to `F_p`.
    pub fn trace(&self, a: &GfElem) -> u64 {
        let mut t = a.clone();
        let mut acc = a.clone();
        for _ in 1..self.k {
            t = self.frobenius(&t);
            acc = self.add(&acc, &t);
        }
        self.as_prime(&acc).expect("trace lies in the prime field")
    }

    /// Quadratic character: 1, -1, or 0 for zero. Characteristic 2 has
    /// every element a square.
    pub fn legendre(&self, a: &GfElem) -> i32 {
        if self.is_zero(a) {
            return 0;
        }
        if self.p == 2 {
            return 1;
        }
        let e = (self.order() - 1u32) / 2u32;
        if self.is_one(&self.pow(a, &e)) {
            1
        } else {
            -1
        }
    }

    /// A square root, if one exists.
    pub fn sqrt(&self, a: &GfElem) -> Option<GfElem> {
        if self.is_zero(a) {
            return Some(self.zero());
        }
        if self.p == 2 {
            // Squaring is bijective: sqrt(a) = a^(q/2).
            return Some(self.pow(a, &(self.order() >> 1u32)));
        }
        if self.legendre(a) != 1 {
            return None;
        }
        let poly = vec![self.neg(a), self.zero(), self.one()];
        self.roots(&poly).into_iter().min()
    }

    pub fn random(&self, rng: &mut ChaCha8Rng) -> GfElem {
        GfElem((0..self.k).map(|_| rng.gen_range(0..self.p)).collect())
    }

    // ---- polynomials over the field ----

    pub fn poly_trim(&self, mut a: GfPoly) -> GfPoly {
        while a.last().is_some_and(|c| self.is_zero(c)) {
            a.pop();
        }
        a
    }

    pub fn poly_from_ints(&self, coeffs: &[i64]) -> GfPoly {
        self.poly_trim(coeffs.iter().map(|&c| self.from_i64(c)).collect())
    }

    pub fn poly_from_bigints(&self, coeffs: &[BigInt]) -> GfPoly {
        self.poly_trim(coeffs.iter().map(|c| self.from_bigint(c)).collect())
    }

    pub fn poly_deg(&self, a: &GfPoly) -> Option<usize> {
        a.len().checked_sub(1)
    }

    pub fn poly_add(&self, a: &GfPoly, b: &GfPoly) -> GfPoly {
        let n = a.len().max(b.len());
        let z = self.zero();
        self.poly_trim(
            (0..n)
                .map(|i| self.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    pub fn poly_sub(&self, a: &GfPoly, b: &GfPoly) -> GfPoly {
        let n = a.len().max(b.len());
        let z = self.zero();
        self.poly_trim(
            (0..n)
                .map(|i| self.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    pub fn poly_scale(&self, a: &GfPoly, c: &GfElem) -> GfPoly {
        self.poly_trim(a.iter().map(|x| self.mul(x, c)).collect())
    }

    pub fn poly_mul(&self, a: &GfPoly, b: &GfPoly) -> GfPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.add(&out[i + j], &self.mul(x, y));
            }
        }
        self.poly_trim(out)
    }

    pub fn poly_eval(&self, a: &GfPoly, x: &GfElem) -> GfElem {
        a.iter().rev().fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), c))
    }

    pub fn poly_derivative(&self, a: &GfPoly) -> GfPoly {
        self.poly_trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| self.scalar(i as u64 % self.p, c))
                .collect(),
        )
    }

    pub fn poly_monic(&self, a: &GfPoly) -> GfPoly {
        match a.last() {
            None => Vec::new(),
            Some(lc) => {
                let inv = self.inv(lc).unwrap();
                self.poly_scale(a, &inv)
            }
        }
    }

    pub fn poly_divrem(&self, a: &GfPoly, b: &GfPoly) -> (GfPoly, GfPoly) {
        assert!(!b.is_empty(), "division by zero polynomial");
        if a.len() < b.len() {
            return (Vec::new(), a.clone());
        }
        let db = b.len() - 1;
        let inv = self.inv(b.last().unwrap()).unwrap();
        let mut r = a.clone();
        let mut q = vec![self.zero(); a.len() - db];
        for i in (0..q.len()).rev() {
            let c = self.mul(&r[i + db], &inv);
            if !self.is_zero(&c) {
                for (j, bj) in b.iter().enumerate() {
                    r[i + j] = self.sub(&r[i + j], &self.mul(&c, bj));
                }
            }
            q[i] = c;
        }
        r.truncate(db);
        (self.poly_trim(q), self.poly_trim(r))
    }

    pub fn poly_rem(&self, a: &GfPoly, b: &GfPoly) -> GfPoly {
        self.poly_divrem(a, b).1
    }

    /// Monic gcd.
    pub fn poly_gcd(&self, a: &GfPoly, b: &GfPoly) -> GfPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = self.poly_rem(&a, &b);
            a = b;
            b = r;
        }
        self.poly_monic(&a)
    }

    pub fn poly_powmod(&self, base: &GfPoly, e: &BigUint, m: &GfPoly) -> GfPoly {
        let mut r = self.poly_rem(&vec![self.one()], m);
        let base = self.poly_rem(base, m);
        for i in (0..e.bits()).rev() {
            r = self.poly_rem(&self.poly_mul(&r, &r), m);
            if e.bit(i) {
                r = self.poly_rem(&self.poly_mul(&r, &base), m);
            }
        }
        r
    }

    fn x_poly(&self) -> GfPoly {
        vec![self.zero(), self.one()]
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self, f: &GfPoly) -> bool {
        let Some(n) = self.poly_deg(f) else {
            return false;
        };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.poly_monic(f);
        let q = self.order();
        let x = self.x_poly();
        let frob_pow = |j: usize| self.poly_powmod(&x, &num_traits::pow(q.clone(), j), &f);
        if self.poly_sub(&frob_pow(n), &x) != Vec::<GfElem>::new() {
            return false;
        }
        let mut m = n;
        let mut r = 2;
        let mut prime_divs = Vec::new();
        while r * r <= m {
            if m % r == 0 {
                prime_divs.push(r);
                while m % r == 0 {
                    m /= r;
                }
            }
            r += 1;
        }
        if m > 1 {
            prime_divs.push(m);
        }
        prime_divs.into_iter().all(|r| {
            let h = self.poly_sub(&frob_pow(n / r), &x);
            self.poly_deg(&self.poly_gcd(&h, &f)) == Some(0)
        })
    }

    /// `p`-th root of every coefficient (inverse Frobenius).
    fn poly_pth_root(&self, a: &GfPoly) -> GfPoly {
        let p = self.p as usize;
        let e = num_traits::pow(BigUint::from(self.p), self.k - 1);
        a.iter().step_by(p).map(|c| self.pow(c, &e)).collect()
    }

    /// Squarefree decomposition: pairs `(g, m)` with `f = lc · prod g^m`,
    /// each `g` monic squarefree and pairwise coprime.
    pub fn squarefree_decomposition(&self, f: &GfPoly) -> Vec<(GfPoly, usize)> {
        let mut out = Vec::new();
        let f = self.poly_monic(f);
        if self.poly_deg(&f).unwrap_or(0) == 0 {
            return out;
        }
        let d = self.poly_derivative(&f);
        if d.is_empty() {
            for (g, m) in self.squarefree_decomposition(&self.poly_pth_root(&f)) {
                out.push((g, m * self.p as usize));
            }
            return out;
        }
        let mut c = self.poly_gcd(&f, &d);
        let mut w = self.poly_divrem(&f, &c).0;
        let mut i = 1;
        while self.poly_deg(&w).unwrap_or(0) > 0 {
            let y = self.poly_gcd(&w, &c);
            let z = self.poly_divrem(&w, &y).0;
            if self.poly_deg(&z).unwrap_or(0) > 0 {
                out.push((z, i));
            }
            i += 1;
            w = y;
            c = self.poly_divrem(&c, &w).0;
        }
        if self.poly_deg(&c).unwrap_or(0) > 0 {
            for (g, m) in self.squarefree_decomposition(&self.poly_pth_root(&c)) {
                out.push((g, m * self.p as usize));
            }
        }
        out
    }

    /// Distinct-degree factorisation of a monic squarefree polynomial.
    fn distinct_degree(&self, f: &GfPoly) -> Vec<(GfPoly, usize)> {
        let q = self.order();
        let x = self.x_poly();
        let mut out = Vec::new();
        let mut rest = f.clone();
        let mut h = x.clone();
        let mut d = 0;
        while self.poly_deg(&rest).unwrap_or(0) >= 2 * (d + 1) {
            d += 1;
            h = self.poly_powmod(&h, &q, &rest);
            let g = self.poly_gcd(&self.poly_sub(&h, &x), &rest);
            if self.poly_deg(&g).unwrap_or(0) > 0 {
                out.push((g.clone(), d));
                rest = self.poly_divrem(&rest, &g).0;
                h = self.poly_rem(&h, &rest);
            }
        }
        if let Some(n) = self.poly_deg(&rest) {
            if n > 0 {
                out.push((rest, n));
            }
        }
        out
    }

    /// Cantor–Zassenhaus splitting of a product of irreducibles of degree `d`.
    fn equal_degree(&self, f: &GfPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<GfPoly> {
        let n = self.poly_deg(f).unwrap();
        if n == d {
            return vec![f.clone()];
        }
        let q = self.order();
        loop {
            let r: GfPoly = self.poly_trim((0..n).map(|_| self.random(rng)).collect());
            if self.poly_deg(&r).unwrap_or(0) == 0 {
                continue;
            }
            let t = if self.p == 2 {
                // Trace map r + r^2 + ... + r^(2^(k d - 1)).
                let mut acc = r.clone();
                let mut cur = r.clone();
                for _ in 1..self.k * d {
                    cur = self.poly_rem(&self.poly_mul(&cur, &cur), f);
                    acc = self.poly_add(&acc, &cur);
                }
                acc
            } else {
                let e = (num_traits::pow(q.clone(), d) - 1u32) / 2u32;
                self.poly_sub(&self.poly_powmod(&r, &e, f), &vec![self.one()])
            };
            let g = self.poly_gcd(&t, f);
            let dg = self.poly_deg(&g).unwrap_or(0);
            if dg > 0 && dg < n {
                let h = self.poly_divrem(f, &g).0;
                let mut out = self.equal_degree(&g, d, rng);
                out.extend(self.equal_degree(&self.poly_monic(&h), d, rng));
                return out;
            }
        }
    }

    /// Complete factorisation into monic irreducibles with multiplicities,
    /// sorted by (degree, coefficients). Deterministic.
    pub fn factor(&self, f: &GfPoly) -> Vec<(GfPoly, usize)> {
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0ffee);
        let mut out = Vec::new();
        for (g, m) in self.squarefree_decomposition(f) {
            for (h, d) in self.distinct_degree(&g) {
                for irr in self.equal_degree(&h, d, &mut rng) {
                    out.push((irr, m));
                }
            }
        }
        out.sort_by(|a, b| {
            (a.0.len(), a.0.iter().rev().collect::<Vec<_>>())
                .cmp(&(b.0.len(), b.0.iter().rev().collect::<Vec<_>>()))
        });
        out
    }

    /// Distinct roots in the field, sorted.
    pub fn roots(&self, f: &GfPoly) -> Vec<GfElem> {
        let mut out: Vec<GfElem> = self
            .factor(f)
            .into_iter()
            .filter(|(g, _)| g.len() == 2)
            .map(|(g, _)| self.neg(&g[0]))
            .collect();
        out.sort();
        out
    }

    /// Extension of this field of relative degree `d`, as an absolute
    /// `GF(p^(k d))` together with the embedding of the generator of `self`.
    pub fn extend(&self, d: usize) -> Result<(Gf, GfElem), AlgebraError> {
        let big = Gf::new(self.p, self.k * d)?;
        let img = big.embed_root_of(&self.modulus)?;
        Ok((big, img))
    }

    /// A root in `self` of an `F_p`-polynomial, chosen as the least one.
    pub fn embed_root_of(&self, modulus: &[u64]) -> Result<GfElem, AlgebraError> {
        let poly: GfPoly = modulus.iter().map(|&c| self.from_u64(c)).collect();
        self.roots(&poly)
            .into_iter()
            .next()
            .ok_or_else(|| AlgebraError::Invalid("subfield does not embed".into()))
    }
}

/// Reduce an integer modulo `p` as `u64`.
pub fn reduce_mod(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Whether `a` is a nonzero square modulo the odd prime `p`.
pub fn is_qr_mod(a: &BigInt, p: u64) -> bool {
    let r = reduce_mod(a, p);
    r != 0 && (p == 2 || powmod(r, (p - 1) / 2, p) == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIELDS: [(u64, usize); 5] = [(2, 1), (2, 2), (2, 3), (3, 2), (5, 1)];

    #[test]
    fn least_irreducible_moduli() {
        assert_eq!(Gf::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(Gf::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(Gf::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(Gf::new(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn rejects_bad_characteristic() {
        assert!(matches!(Gf::new(4, 1), Err(AlgebraError::NotPrime(_))));
        assert!(matches!(Gf::new(MAX_CHAR + 1, 1), Err(AlgebraError::PrimeTooLarge(_))));
    }

    #[test]
    fn field_axioms_exhaustive() {
        for (p, k) in FIELDS {
            let f = Gf::new(p, k).unwrap();
            let els: Vec<_> = f.elements().collect();
            assert_eq!(els.len() as u64, p.pow(k as u32));
            for a in &els {
                assert_eq!(f.add(a, &f.neg(a)), f.zero());
                if !f.is_zero(a) {
                    assert!(f.is_one(&f.mul(a, &f.inv(a).unwrap())));
                }
                for b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    let fa = f.frobenius(&f.add(a, b));
                    assert_eq!(fa, f.add(&f.frobenius(a), &f.frobenius(b)));
                    assert_eq!(
                        f.frobenius(&f.mul(a, b)),
                        f.mul(&f.frobenius(a), &f.frobenius(b))
                    );
                    for c in &els {
                        assert_eq!(f.mul(a, &f.add(b, c)), f.add(&f.mul(a, b), &f.mul(a, c)));
                        assert_eq!(f.mul(&f.mul(a, b), c), f.mul(a, &f.mul(b, c)));
                    }
                }
            }
            // Frobenius is a bijection fixing exactly F_p.
            let mut images: Vec<_> = els.iter().map(|a| f.frobenius(a)).collect();
            images.sort();
            let mut sorted = els.clone();
            sorted.sort();
            assert_eq!(images, sorted);
            let fixed = els.iter().filter(|a| f.frobenius(a) == **a).count();
            assert_eq!(fixed as u64, p);
        }
    }

    #[test]
    fn factor_and_roots_mod_p() {
        let f = Gf::prime(7).unwrap();
        // x^2 - 2 splits mod 7 (3^2 = 2); x^2 + 1 does not.
        assert_eq!(f.roots(&f.poly_from_ints(&[-2, 0, 1])).len(), 2);
        assert!(f.roots(&f.poly_from_ints(&[1, 0, 1])).is_empty());
        // (x - 1)^3 (x^2 + 1) over F_7.
        let p = f.poly_mul(
            &f.poly_from_ints(&[-1, 3, -3, 1]),
            &f.poly_from_ints(&[1, 0, 1]),
        );
        let fac = f.factor(&p);
        assert_eq!(fac.len(), 2);
        assert_eq!(fac[0], (f.poly_from_ints(&[-1, 1]), 3));
        assert_eq!(fac[1], (f.poly_from_ints(&[1, 0, 1]), 1));
    }

    #[test]
    fn factor_in_characteristic_two_with_pth_powers() {
        let f = Gf::new(2, 2).unwrap();
        // (x^2 + x + 1)^2 (x + 1)^3 over F_4 splits completely.
        let a = f.poly_from_ints(&[1, 1, 1]);
        let b = f.poly_from_ints(&[1, 1]);
        let p = f.poly_mul(&f.poly_mul(&a, &a), &f.poly_mul(&b, &f.poly_mul(&b, &b)));
        let fac = f.factor(&p);
        let total: usize = fac.iter().map(|(g, m)| (g.len() - 1) * m).sum();
        assert_eq!(total, 7);
        assert!(fac.iter().all(|(g, _)| g.len() == 2));
        assert!(fac.iter().any(|(_, m)| *m == 3));
    }

    #[test]
    fn factor_products_match_input() {
        let f = Gf::prime(193793).unwrap();
        let p = f.poly_from_ints(&[-295, -236, 60, 54, 48, -12, 1]);
        let fac = f.factor(&p);
        let prod = fac.iter().fold(vec![f.one()], |acc, (g, m)| {
            (0..*m).fold(acc, |a, _| f.poly_mul(&a, g))
        });
        assert_eq!(prod, p);
    }

    #[test]
    fn sqrt_and_legendre() {
        let f = Gf::new(3, 2).unwrap();
        for a in f.elements() {
            let s = f.square(&a);
            let r = f.sqrt(&s).unwrap();
            assert_eq!(f.square(&r), s);
        }
        // Every element of F_9 is a square of something in F_81 but half of
        // F_9^* are non-squares in F_9.
        let nonsq = f.elements().filter(|a| f.legendre(a) == -1).count();
        assert_eq!(nonsq, 4);
        let g = Gf::new(2, 3).unwrap();
        for a in g.elements() {
            assert_eq!(g.square(&g.sqrt(&a).unwrap()), a);
        }
    }

    #[test]
    fn extension_embeds_subfield() {
        let f4 = Gf::new(2, 2).unwrap();
        let (f16, img) = f4.extend(2).unwrap();
        // img is a root of x^2 + x + 1 in F_16.
        let m = f16.add(&f16.add(&f16.square(&img), &img), &f16.one());
        assert!(f16.is_zero(&m));
    }

    #[test]
    fn modulus_is_least_irreducible() {
        // Oracle: plain lexicographic scan with no family skipped.
        for p in [2u64, 3, 5, 7, 11] {
            for k in 2..=4usize {
                let base = Gf::prime(p).unwrap();
                let total = p.pow(k as u32);
                let least = (0..total)
                    .map(|mut i| {
                        let mut d: Vec<u64> = (0..k).map(|_| { let c = i % p; i /= p; c }).collect();
                        d.push(1);
                        d
                    })
                    .find(|d| base.is_irreducible(&d.iter().map(|&c| base.from_u64(c)).collect()))
                    .unwrap();
                assert_eq!(Gf::new(p, k).unwrap().modulus(), &least[..], "p = {p}, k = {k}");
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn factorisation_recombines(
                coeffs in prop::collection::vec(0u64..11, 2..9),
                k in 1usize..=2,
            ) {
                let f = Gf::new(11, k).unwrap();
                let mut p = f.poly_trim(coeffs.iter().map(|&c| f.from_u64(c)).collect());
                prop_assume!(f.poly_deg(&p).unwrap_or(0) > 0);
                p = f.poly_monic(&p);
                let fac = f.factor(&p);
                let prod = fac.iter().fold(vec![f.one()], |acc, (g, m)| {
                    (0..*m).fold(acc, |a, _| f.poly_mul(&a, g))
                });
                prop_assert_eq!(prod, p);
                for (g, _) in &fac {
                    prop_assert!(f.is_irreducible(g));
                }
            }
        }
    }
}
