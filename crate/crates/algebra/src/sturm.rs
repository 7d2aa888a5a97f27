//! Real root isolation with Sturm sequences and dyadic bisection.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::AlgebraError;
use crate::poly::UniPoly;

/// A closed interval with dyadic endpoints containing exactly one real root
/// of `polynomial`; neither endpoint is a root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatingInterval {
    pub lower: BigRational,
    pub upper: BigRational,
    pub polynomial: UniPoly,
}

impl IsolatingInterval {
    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lower + &self.upper) / BigRational::from_integer(BigInt::from(2))
    }

    /// Floating approximation, for display only.
    pub fn approx(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    /// Halve the interval once by the sign of the polynomial.
    pub fn bisect(&self) -> IsolatingInterval {
        let sl = self.polynomial.sign_at(&self.lower);
        let m = self.midpoint();
        let sm = self.polynomial.sign_at(&m);
        if sm == 0 {
            // The root is the midpoint itself, and the only root in the interval.
            let q = self.width() / BigRational::from_integer(BigInt::from(4));
            return IsolatingInterval { lower: &m - &q, upper: &m + &q, polynomial: self.polynomial.clone() };
        }
        if sm == sl {
            IsolatingInterval { lower: m, upper: self.upper.clone(), polynomial: self.polynomial.clone() }
        } else {
            IsolatingInterval { lower: self.lower.clone(), upper: m, polynomial: self.polynomial.clone() }
        }
    }

    pub fn refine_to_width(&self, width: &BigRational) -> IsolatingInterval {
        let mut iv = self.clone();
        while iv.width() > *width {
            iv = iv.bisect();
        }
        iv
    }

    /// The isolated root, if it is rational.
    pub fn rational_root(&self) -> Option<BigRational> {
        let p = &self.polynomial;
        let (_, prim) = p.primitive_part();
        let lc = prim.last()?.clone();
        // A rational root has the form k/lc; once the interval is narrower
        // than 1/(2 lc) rounding recovers k.
        let bound = BigRational::new(BigInt::one(), &lc * BigInt::from(4));
        let iv = self.refine_to_width(&bound);
        let lc_r = BigRational::from_integer(lc.abs());
        let guess = (iv.midpoint() * &lc_r).round() / lc_r;
        (p.sign_at(&guess) == 0 && iv.lower < guess && guess < iv.upper).then_some(guess)
    }
}

/// Compare the roots isolated by two intervals. The roots must be distinct
/// unless the intervals belong to the same polynomial and coincide.
pub fn compare_roots(a: &IsolatingInterval, b: &IsolatingInterval) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    loop {
        if a.upper < b.lower {
            return Ordering::Less;
        }
        if b.upper < a.lower {
            return Ordering::Greater;
        }
        if a.width() >= b.width() {
            a = a.bisect();
        } else {
            b = b.bisect();
        }
    }
}

/// Sign of `q` at the root isolated by `iv`; `q` must not vanish there
/// unless it shares that root, in which case 0 is returned when `q` and the
/// interval polynomial have a common factor vanishing there.
pub fn sign_at_root(q: &UniPoly, iv: &IsolatingInterval) -> i32 {
    let g = q.gcd(&iv.polynomial);
    if !g.is_constant() {
        let roots = sturm_count(&sturm_sequence(&g), &iv.lower, &iv.upper);
        if roots > 0 {
            return 0;
        }
    }
    let seq = sturm_sequence(q);
    let mut iv = iv.clone();
    while sturm_count(&seq, &iv.lower, &iv.upper) > 0 || q.sign_at(&iv.lower) == 0 {
        iv = iv.bisect();
    }
    q.sign_at(&iv.lower)
}

pub fn sturm_sequence(p: &UniPoly) -> Vec<UniPoly> {
    let mut seq = vec![p.clone(), p.derivative()];
    while !seq.last().unwrap().is_zero() {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        // Positive rescaling keeps signs and tames coefficient growth.
        let (c, prim) = r.primitive_part();
        let q = UniPoly::from_bigints(&prim);
        seq.push(if c.is_positive() { -&q } else { q });
    }
    seq.retain(|s| !s.is_zero());
    seq
}

fn sign_changes(seq: &[UniPoly], x: &BigRational) -> usize {
    let signs: Vec<i32> = seq.iter().map(|s| s.sign_at(x)).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct roots in `(a, b]`.
pub fn sturm_count(seq: &[UniPoly], a: &BigRational, b: &BigRational) -> usize {
    sign_changes(seq, a).saturating_sub(sign_changes(seq, b))
}

/// A power of two strictly exceeding the absolute value of every root.
pub fn root_bound(p: &UniPoly) -> BigRational {
    let lc = p.leading_coeff().abs();
    let m = p.coeffs()[..p.deg()]
        .iter()
        .map(|c| c.abs() / &lc)
        .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
    let bound = m + BigRational::one();
    let mut b = BigRational::one();
    while b <= bound {
        b *= BigRational::from_integer(BigInt::from(2));
    }
    b
}

/// Isolate the distinct real roots of a squarefree polynomial.
pub fn sturm_isolate_real_roots(p: &UniPoly) -> Result<Vec<IsolatingInterval>, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    if !p.is_squarefree() {
        return Err(AlgebraError::NotSquarefree);
    }
    if p.deg() == 0 {
        return Ok(Vec::new());
    }
    let seq = sturm_sequence(p);
    let b = root_bound(p);
    let two = BigRational::from_integer(BigInt::from(2));
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = sturm_count(&seq, &lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            let iv = IsolatingInterval { lower: lo, upper: hi, polynomial: p.clone() };
            out.push(iv);
            continue;
        }
        let mid = (&lo + &hi) / &two;
        if p.sign_at(&mid) == 0 {
            // Split off a small dyadic neighbourhood of the rational root.
            let mut eps = (&hi - &lo) / BigRational::from_integer(BigInt::from(8));
            loop {
                let (l, u) = (&mid - &eps, &mid + &eps);
                if p.sign_at(&l) != 0 && p.sign_at(&u) != 0 && sturm_count(&seq, &l, &u) == 1 {
                    stack.push((lo, l.clone()));
                    stack.push((u.clone(), hi));
                    out.push(IsolatingInterval { lower: l, upper: u, polynomial: p.clone() });
                    break;
                }
                eps /= &two;
            }
            continue;
        }
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| a.lower.cmp(&b.lower));
    Ok(out)
}
