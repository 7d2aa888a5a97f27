//! Dense univariate polynomials over `Q`, plus resultants and discriminants.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::AlgebraError;

/// A polynomial with rational coefficients, stored lowest degree first.
///
/// The coefficient vector never carries trailing zeros, so the zero
/// polynomial is the empty vector and equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: BigRational, degree: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::from_coeffs(
            coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    /// Product of `(x - r)` over the given rational roots.
    pub fn from_roots(roots: &[BigRational]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| {
            &acc * &Self::from_coeffs(vec![-r.clone(), BigRational::one()])
        })
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0; only for callers that
    /// have already excluded zero.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Sign (-1, 0, 1) of the value at `x`.
    pub fn sign_at(&self, x: &BigRational) -> i32 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading_coeff().recip())
    }

    /// Euclidean division over `Q`. Panics on division by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.deg();
        let lc_inv = divisor.leading_coeff().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lc_inv;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * d;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `p(x + c)`.
    pub fn shift(&self, c: &BigRational) -> Self {
        let lin = Self::from_coeffs(vec![c.clone(), BigRational::one()]);
        self.compose(&lin)
    }

    /// `p(q(x))` by Horner's rule.
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &Self::constant(c.clone());
        }
        acc
    }

    /// `x^d p(1/x)`; `d` must be at least the degree.
    pub fn reverse(&self, d: usize) -> Self {
        assert!(self.coeffs.len() <= d + 1);
        let mut coeffs = vec![BigRational::zero(); d + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[d - i] = c.clone();
        }
        Self::from_coeffs(coeffs)
    }

    /// Homogenised substitution `Q(t)^d · p(N(t)/Q(t))` for a rational map
    /// `x = N/Q`, where `d >= deg p`.
    pub fn substitute_rational(&self, num: &Self, den: &Self, d: usize) -> Self {
        assert!(self.coeffs.len() <= d + 1);
        let mut acc = Self::zero();
        let mut num_pow = Self::one();
        let den_pows: Vec<Self> = {
            let mut v = vec![Self::one()];
            for i in 0..d {
                let next = &v[i] * den;
                v.push(next);
            }
            v
        };
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &(&num_pow * &den_pows[d - i]).scale(c);
            }
            num_pow = &num_pow * num;
        }
        acc
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Splits `self = content · primitive` with `primitive` an integer
    /// polynomial of content 1 and positive leading coefficient.
    pub fn primitive_part(&self) -> (BigRational, Vec<BigInt>) {
        if self.is_zero() {
            return (BigRational::zero(), Vec::new());
        }
        let den = self.denominator_lcm();
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        let prim: Vec<BigInt> = ints.iter().map(|c| c / &g).collect();
        (BigRational::new(g, den), prim)
    }

    /// Integer coefficients, if the polynomial is integral.
    pub fn to_integer_coeffs(&self) -> Option<Vec<BigInt>> {
        if !self.is_integral() {
            return None;
        }
        Some(self.coeffs.iter().map(|c| c.to_integer()).collect())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !abs.is_one();
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 if show_coeff => write!(f, "*x")?,
                1 => write!(f, "x")?,
                _ if show_coeff => write!(f, "*x^{i}")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

// --- integer polynomial helpers used by the subresultant algorithm ---

fn int_deg(p: &[BigInt]) -> usize {
    p.len() - 1
}

fn int_trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn int_content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

/// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) a mod b`.
fn int_prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = int_deg(b);
    let lc = b[db].clone();
    let mut r = a.to_vec();
    let mut steps = a.len() - b.len() + 1;
    while r.len() >= b.len() {
        let dr = r.len() - 1;
        let c = r[dr].clone();
        for x in r.iter_mut() {
            *x *= &lc;
        }
        for (j, bj) in b.iter().enumerate() {
            r[dr - db + j] -= &c * bj;
        }
        r = int_trim(r);
        steps -= 1;
        if r.is_empty() {
            break;
        }
    }
    let scale = num_traits::pow(lc, steps);
    r.into_iter().map(|x| x * &scale).collect()
}

fn int_resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    // Collins/Brown subresultant PRS on primitive integer polynomials.
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    let ca = int_content(&a);
    let cb = int_content(&b);
    a.iter_mut().for_each(|x| *x /= &ca);
    b.iter_mut().for_each(|x| *x /= &cb);
    let t = num_traits::pow(ca, int_deg(&b)) * num_traits::pow(cb, int_deg(&a));
    let mut s = BigInt::one();
    if int_deg(&a) < int_deg(&b) {
        if int_deg(&a) % 2 == 1 && int_deg(&b) % 2 == 1 {
            s = -s;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if int_deg(&b) == 0 {
        return s * t * num_traits::pow(b[0].clone(), int_deg(&a));
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = int_deg(&a);
        let db = int_deg(&b);
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = int_prem(&a, &b);
        a = b;
        if r.is_empty() {
            return BigInt::zero();
        }
        let divisor = &g * num_traits::pow(h.clone(), delta);
        b = r.into_iter().map(|x| x / &divisor).collect();
        g = a[int_deg(&a)].clone();
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(g.clone(), delta) / num_traits::pow(h.clone(), delta - 1)
        };
        if int_deg(&b) == 0 {
            break;
        }
    }
    let da = int_deg(&a);
    let hh = num_traits::pow(b[0].clone(), da) / num_traits::pow(h, da - 1);
    s * t * hh
}

/// Resultant of two nonzero polynomials, computed exactly by the
/// subresultant pseudo-remainder sequence on their primitive parts.
pub fn poly_resultant(a: &UniPoly, b: &UniPoly) -> Result<BigRational, AlgebraError> {
    if a.is_zero() || b.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let (ca, pa) = a.primitive_part();
    let (cb, pb) = b.primitive_part();
    let (da, db) = (a.deg(), b.deg());
    let scale = num_traits::pow(ca, db) * num_traits::pow(cb, da);
    if da == 0 && db == 0 {
        return Ok(BigRational::one());
    }
    let r = int_resultant(&pa, &pb);
    Ok(scale * BigRational::from_integer(r))
}

/// `disc(f) = (-1)^(n(n-1)/2) res(f, f') / lc(f)`.
pub fn discriminant(f: &UniPoly) -> Result<BigRational, AlgebraError> {
    let n = f.degree().ok_or(AlgebraError::ZeroPolynomial)?;
    if n == 0 {
        return Ok(BigRational::one());
    }
    let r = poly_resultant(f, &f.derivative())?;
    let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
    Ok(r * BigRational::from_integer(BigInt::from(sign)) / f.leading_coeff())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio};

    fn sylvester_det(a: &UniPoly, b: &UniPoly) -> BigRational {
        // Oracle: Bareiss-free Gaussian elimination on the Sylvester matrix over Q.
        let (m, n) = (a.deg(), b.deg());
        let size = m + n;
        let mut mat = vec![vec![BigRational::zero(); size]; size];
        for i in 0..n {
            for j in 0..=m {
                mat[i][i + j] = a.coeff(m - j);
            }
        }
        for i in 0..m {
            for j in 0..=n {
                mat[n + i][i + j] = b.coeff(n - j);
            }
        }
        let mut det = BigRational::one();
        for col in 0..size {
            let Some(piv) = (col..size).find(|&r| !mat[r][col].is_zero()) else {
                return BigRational::zero();
            };
            if piv != col {
                mat.swap(piv, col);
                det = -det;
            }
            let p = mat[col][col].clone();
            det *= &p;
            for r in col + 1..size {
                let factor = &mat[r][col] / &p;
                if factor.is_zero() {
                    continue;
                }
                for c in col..size {
                    let sub = &factor * &mat[col][c];
                    mat[r][c] -= sub;
                }
            }
        }
        det
    }

    #[test]
    fn resultant_of_linear_forms() {
        let a = UniPoly::from_ints(&[-1, 1]);
        let b = UniPoly::from_ints(&[1, 1]);
        assert_eq!(poly_resultant(&a, &b).unwrap(), rat(2));
    }

    #[test]
    fn resultant_matches_sylvester_on_fixed_inputs() {
        let cases = [
            (vec![-295, -236, 60, 54, 48, -12, 1], vec![12, 8, 1]),
            (vec![3, 0, -2, 5], vec![1, -1, 0, 0, 7]),
            (vec![0, 1, 1], vec![0, 2]),
            (vec![5], vec![1, 2, 3]),
        ];
        for (a, b) in cases {
            let (a, b) = (UniPoly::from_ints(&a), UniPoly::from_ints(&b));
            assert_eq!(poly_resultant(&a, &b).unwrap(), sylvester_det(&a, &b), "{a} / {b}");
        }
    }

    #[test]
    fn resultant_with_rational_coefficients() {
        let a = UniPoly::from_coeffs(vec![ratio(1, 2), rat(0), ratio(3, 4)]);
        let b = UniPoly::from_coeffs(vec![ratio(-2, 3), rat(1)]);
        assert_eq!(poly_resultant(&a, &b).unwrap(), sylvester_det(&a, &b));
    }

    #[test]
    fn zero_input_is_rejected() {
        assert_eq!(
            poly_resultant(&UniPoly::zero(), &UniPoly::x()),
            Err(AlgebraError::ZeroPolynomial)
        );
    }

    #[test]
    fn discriminant_of_quadratic() {
        // b^2 - 4ac for x^2 + 8x + 12
        let g = UniPoly::from_ints(&[12, 8, 1]);
        assert_eq!(discriminant(&g).unwrap(), rat(16));
        let cubic = UniPoly::from_ints(&[1, -1, 0, 1]); // x^3 - x + 1: -4(-1)^3 - 27 = -23
        assert_eq!(discriminant(&cubic).unwrap(), rat(-23));
    }

    #[test]
    fn rational_substitution_homogenises() {
        // f(x) = x^2 - 1 at x = (t^2 + 1)/t  ->  (t^2+1)^2 - t^2
        let f = UniPoly::from_ints(&[-1, 0, 1]);
        let num = UniPoly::from_ints(&[1, 0, 1]);
        let den = UniPoly::from_ints(&[0, 1]);
        assert_eq!(
            f.substitute_rational(&num, &den, 2),
            UniPoly::from_ints(&[1, 0, 1, 0, 1])
        );
    }

    #[test]
    fn display_is_readable() {
        let g = UniPoly::from_ints(&[12, -8, 1]);
        assert_eq!(g.to_string(), "x^2 - 8*x + 12");
    }

    #[test]
    fn primitive_part_normalises_sign() {
        let p = UniPoly::from_coeffs(vec![ratio(1, 2), ratio(-3, 4)]);
        let (c, prim) = p.primitive_part();
        assert_eq!(prim, vec![BigInt::from(-2), BigInt::from(3)]);
        assert_eq!(c, ratio(-1, 4));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_poly(max_deg: usize) -> impl Strategy<Value = UniPoly> {
            prop::collection::vec(-9i64..=9, 1..=max_deg + 1)
                .prop_map(|c| UniPoly::from_ints(&c))
                .prop_filter("nonzero", |p| !p.is_zero())
        }

        proptest! {
            #[test]
            fn resultant_antisymmetry(a in small_poly(4), b in small_poly(4)) {
                let ab = poly_resultant(&a, &b).unwrap();
                let ba = poly_resultant(&b, &a).unwrap();
                let sign = if (a.deg() * b.deg()) % 2 == 0 { rat(1) } else { rat(-1) };
                prop_assert_eq!(ab, sign * ba);
            }

            #[test]
            fn resultant_matches_sylvester(a in small_poly(5), b in small_poly(4)) {
                prop_assume!(a.deg() + b.deg() > 0);
                prop_assert_eq!(poly_resultant(&a, &b).unwrap(), sylvester_det(&a, &b));
            }

            #[test]
            fn resultant_vanishes_iff_common_factor(
                common in -5i64..=5,
                a in small_poly(3),
                b in small_poly(3),
                share in any::<bool>(),
            ) {
                let lin = UniPoly::from_ints(&[-common, 1]);
                let (a, b) = if share { (&a * &lin, &b * &lin) } else { (a, b) };
                let r = poly_resultant(&a, &b).unwrap();
                prop_assert_eq!(r.is_zero(), !a.gcd(&b).is_constant());
            }
        }
    }
}
