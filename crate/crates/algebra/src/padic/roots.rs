//! Certified `p`-adic root finding by residual-polynomial descent.
//!
//! Roots of a monic integral polynomial are located segment by segment on
//! the Newton polygon of `Q(c + z)`: each segment with integral slope `λ`
//! gives a residual polynomial whose roots `b` refine the centre to
//! `c + π^λ b`. Simple residual roots are finished by Newton iteration.
//! Fractional slopes or irreducible residual factors of degree > 1 restart
//! the search in a larger field. The final approximations are certified
//! from the Newton polygon of `Q(r + z)` at each approximation `r`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use super::local_field::{LElem, LocalField};
use super::{integrality_shift, lower_hull};
use crate::error::AlgebraError;
use crate::ff::GfPoly;
use crate::poly::UniPoly;

#[derive(Clone, Debug)]
pub struct RootConfig {
    /// Initial `p`-adic precision in digits.
    pub precision: u32,
    /// Precision is doubled on demand up to this cap.
    pub precision_cap: u32,
    /// Largest allowed absolute degree `e · m` of the working field.
    pub max_degree: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig { precision: 50, precision_cap: 800, max_degree: 48 }
    }
}

/// All roots of a squarefree polynomial in one finite extension `L` of
/// `Q_p`. The root `x_i` of the input is `roots[i] / p^shift`.
#[derive(Clone, Debug)]
pub struct PAdicRoots {
    pub field: LocalField,
    pub roots: Vec<LElem>,
    /// Certified `v_π` precision of each approximation.
    pub precision: Vec<u64>,
    pub shift: u32,
}

/// A root together with the invariants of the field it generates.
#[derive(Clone, Debug)]
pub struct LiftedRoot {
    pub value: LElem,
    pub ramification_index: usize,
    pub residue_degree: usize,
}

impl PAdicRoots {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// `v_π(x_i - x_j)` for the unscaled roots, as a rational in `v_p` units.
    pub fn distance(&self, i: usize, j: usize) -> BigRational {
        let d = self.field.sub(&self.roots[i], &self.roots[j]);
        let v = self.field.valuation(&d).expect("distinct roots are separated");
        BigRational::new(BigInt::from(v), BigInt::from(self.field.ramification_index()))
            - BigRational::from_integer(BigInt::from(self.shift))
    }

    /// `v_p` of the unscaled root `x_i` (None for the root zero).
    pub fn root_valuation(&self, i: usize) -> Option<BigRational> {
        let v = self.field.valuation(&self.roots[i])?;
        if v >= self.precision[i] {
            return None;
        }
        Some(
            BigRational::new(BigInt::from(v), BigInt::from(self.field.ramification_index()))
                - BigRational::from_integer(BigInt::from(self.shift)),
        )
    }

    fn match_image(&self, img: &LElem, i: usize) -> usize {
        let f = &self.field;
        (0..self.roots.len())
            .find(|&j| {
                let d = f.sub(img, &self.roots[j]);
                f.valuation(&d).is_none_or(|v| v >= self.precision[i].min(self.precision[j]))
            })
            .expect("Galois image of a root is a root")
    }

    /// The permutation of roots induced by the Frobenius lift of `L`.
    pub fn frobenius_permutation(&self) -> Vec<usize> {
        (0..self.roots.len())
            .map(|i| self.match_image(&self.field.frobenius(&self.roots[i]), i))
            .collect()
    }

    /// The permutation induced by a generator of inertia, `π -> ζ_e π`.
    pub fn inertia_permutation(&self) -> Option<Vec<usize>> {
        if !self.field.has_inertia() {
            return None;
        }
        Some(
            (0..self.roots.len())
                .map(|i| self.match_image(&self.field.inertia(&self.roots[i]).unwrap(), i))
                .collect(),
        )
    }

    /// `(e, f)` of `Q_p(x_i)`, from orbit sizes under inertia and the full
    /// Galois group generated by Frobenius and inertia.
    pub fn local_degrees(&self) -> Option<Vec<(usize, usize)>> {
        let frob = self.frobenius_permutation();
        let inertia = self.inertia_permutation()?;
        let orbit = |start: usize, gens: &[&Vec<usize>]| {
            let mut seen = vec![start];
            let mut idx = 0;
            while idx < seen.len() {
                let x = seen[idx];
                for g in gens {
                    if !seen.contains(&g[x]) {
                        seen.push(g[x]);
                    }
                }
                idx += 1;
            }
            seen.len()
        };
        Some(
            (0..self.roots.len())
                .map(|i| {
                    let e = orbit(i, &[&inertia]);
                    let full = orbit(i, &[&frob, &inertia]);
                    (e, full / e)
                })
                .collect(),
        )
    }
}

enum Need {
    Residue(usize),
    Ramification(usize),
    Precision,
}

struct Search<'a> {
    l: &'a LocalField,
    out: Vec<LElem>,
}

impl Search<'_> {
    /// Find the `mu` roots `x` with `v_π(x - c) > t` (or `>= t` when not
    /// `strict`), where `poly` is the input polynomial in `z = x - c`.
    fn roots_near(&mut self, poly: Vec<LElem>, c: &LElem, t: u64, strict: bool, mu: usize) -> Result<(), Need> {
        let l = self.l;
        if t > l.pi_precision() / 2 {
            return Err(Need::Precision);
        }
        let mut poly = poly;
        let mut mu = mu;
        if l.valuation(&poly[0]).is_none() {
            // The centre is a root to working precision; deflate.
            self.out.push(c.clone());
            poly.remove(0);
            mu -= 1;
            if mu == 0 {
                return Ok(());
            }
            if l.valuation(&poly[0]).is_none() {
                return Err(Need::Precision);
            }
        }
        let vals: Vec<Option<u64>> = poly.iter().map(|a| l.valuation(a)).collect();
        let pts: Vec<Option<BigRational>> = vals
            .iter()
            .map(|v| v.map(|v| BigRational::from_integer(BigInt::from(v))))
            .collect();
        let hull = lower_hull(&pts);
        let t_r = BigRational::from_integer(BigInt::from(t));
        for (a, b, lambda) in hull {
            if a >= mu {
                break;
            }
            if b > mu || lambda < t_r || (strict && lambda == t_r) {
                return Err(Need::Precision);
            }
            if !lambda.is_integer() {
                let den: usize = lambda.denom().try_into().unwrap();
                return Err(Need::Ramification(l.ramification_index() * den));
            }
            let lam: u64 = lambda.to_integer().try_into().unwrap();
            let s = vals[a].unwrap() + a as u64 * lam;
            let k = l.residue_field();
            let residual: GfPoly = k.poly_trim(
                (a..=b)
                    .map(|i| match vals[i] {
                        Some(v) if v + i as u64 * lam == s => l.residue(&l.div_pi_pow(&poly[i], v)),
                        _ => k.zero(),
                    })
                    .collect(),
            );
            for (phi, mult) in k.factor(&residual) {
                if phi.len() > 2 {
                    return Err(Need::Residue(l.residue_degree() * (phi.len() - 1)));
                }
                let step = l.mul_pi_pow(&l.lift_residue(&k.neg(&phi[0])), lam);
                if mult == 1 {
                    let w = self.newton(&poly, lam, s, l.lift_residue(&k.neg(&phi[0])))?;
                    self.out.push(l.add(c, &l.mul_pi_pow(&w, lam)));
                } else {
                    let shifted = l.taylor_shift(&poly, &step);
                    self.roots_near(shifted, &l.add(c, &step), lam, true, mult)?;
                }
            }
        }
        Ok(())
    }

    /// Newton iteration on `Q̃(w) = Q_c(π^λ w) / π^s`, whose reduction has
    /// the starting point as a simple root.
    fn newton(&self, qc: &[LElem], lam: u64, s: u64, start: LElem) -> Result<LElem, Need> {
        let l = self.l;
        let qt: Vec<LElem> = qc
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let up = i as u64 * lam;
                match l.valuation(a) {
                    None => l.zero(),
                    Some(_) if up >= s => l.mul_pi_pow(a, up - s),
                    Some(_) => l.div_pi_pow(a, s - up),
                }
            })
            .collect();
        let deriv: Vec<LElem> = qt
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| l.mul(a, &l.from_bigint(&BigInt::from(i))))
            .collect();
        let mut w = start;
        let mut steps = 0;
        let max_steps = 2 * (64 - l.pi_precision().leading_zeros()) + 4;
        loop {
            let f = l.eval_poly(&qt, &w);
            if l.valuation(&f).is_none_or(|v| v + s >= l.pi_precision()) {
                return Ok(w);
            }
            let d = l.eval_poly(&deriv, &w);
            let inv = l.inv_unit(&d).ok_or(Need::Precision)?;
            w = l.sub(&w, &l.mul(&f, &inv));
            steps += 1;
            if steps > max_steps {
                return Ok(w);
            }
        }
    }
}

/// Certified precision of an approximate root `r`: the top segment of the
/// Newton polygon of `Q(r + z)` must have length one.
fn certify(l: &LocalField, q: &[LElem], r: &LElem) -> Option<u64> {
    let t = l.taylor_shift(q, r);
    let v1 = l.valuation(&t[1])?;
    match l.valuation(&t[0]) {
        None => {
            // Q(r) vanishes to working precision: the nearest root is within
            // N·e - v(Q'(r)), which must beat the distance to the next one.
            let pts: Vec<Option<BigRational>> = t
                .iter()
                .skip(1)
                .map(|a| l.valuation(a).map(|v| BigRational::from_integer(BigInt::from(v))))
                .collect();
            let prec = l.pi_precision().checked_sub(v1)?;
            match lower_hull(&pts).first() {
                Some((_, _, next)) if BigRational::from_integer(BigInt::from(prec)) <= *next => None,
                _ => Some(prec),
            }
        }
        Some(v0) => {
            let pts: Vec<Option<BigRational>> = t
                .iter()
                .map(|a| l.valuation(a).map(|v| BigRational::from_integer(BigInt::from(v))))
                .collect();
            let hull = lower_hull(&pts);
            let (a, b, _) = hull.first()?;
            if *a != 0 || *b != 1 {
                return None;
            }
            Some(v0 - v1)
        }
    }
}

fn multiplicative_order(p: u64, e: usize) -> usize {
    if e == 1 {
        return 1;
    }
    let e = e as u64;
    let mut x = p % e;
    let mut k = 1;
    while x != 1 {
        x = (x as u128 * p as u128 % e as u128) as u64;
        k += 1;
    }
    k
}

/// Roots of a squarefree polynomial in a finite extension of `Q_p`.
///
/// Ramification is restricted to tame (`p ∤ e`); the residue degree is
/// kept a multiple of the order of `p` modulo `e` so that `L` contains the
/// `e`-th roots of unity and is Galois over `Q_p`.
pub fn padic_roots(p: u64, q: &UniPoly, cfg: &RootConfig) -> Result<PAdicRoots, AlgebraError> {
    if q.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    if !q.is_squarefree() {
        return Err(AlgebraError::NotSquarefree);
    }
    let n = q.deg();
    let shift = integrality_shift(p, q)?;
    // Roots of q(y / p^shift) are p^shift times the roots of q.
    let pk = BigRational::from_integer(num_traits::pow(BigInt::from(p), shift as usize));
    let scaled = UniPoly::from_coeffs(
        q.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c * num_traits::pow(pk.clone(), n - i))
            .collect(),
    );
    let monic = scaled.monic();
    let (mut m, mut e, mut prec) = (1usize, 1usize, cfg.precision);
    loop {
        if e * m > cfg.max_degree {
            return Err(AlgebraError::ExtensionTooLarge(e * m));
        }
        let l = LocalField::new(p, m, e, prec)?;
        let coeffs: Option<Vec<LElem>> = monic.coeffs().iter().map(|c| l.from_rational(c)).collect();
        let coeffs = coeffs.ok_or_else(|| AlgebraError::Invalid("roots not integral after scaling".into()))?;
        let mut search = Search { l: &l, out: Vec::new() };
        let outcome = if n == 0 { Ok(()) } else { search.roots_near(coeffs.clone(), &l.zero(), 0, false, n) };
        let need = match outcome {
            Ok(()) => {
                let roots = search.out;
                match certify_all(&l, &coeffs, &roots) {
                    Some(precision) => {
                        return Ok(PAdicRoots { field: l, roots, precision, shift });
                    }
                    None => Need::Precision,
                }
            }
            Err(need) => need,
        };
        match need {
            Need::Precision => {
                prec *= 2;
                if prec > cfg.precision_cap {
                    return Err(AlgebraError::PrecisionExhausted { factor: q.to_string() });
                }
            }
            Need::Residue(m2) => m = m.lcm(&m2),
            Need::Ramification(e2) => {
                if e2 as u64 % p == 0 {
                    return Err(AlgebraError::WildRamification { p, e: e2 as u64 });
                }
                e = e.lcm(&e2);
                m = m.lcm(&multiplicative_order(p, e));
            }
        }
    }
}

fn certify_all(l: &LocalField, q: &[LElem], roots: &[LElem]) -> Option<Vec<u64>> {
    if roots.len() + 1 != q.len() {
        return None;
    }
    let precision: Vec<u64> = roots.iter().map(|r| certify(l, q, r)).collect::<Option<_>>()?;
    let min_prec = *precision.iter().min().unwrap_or(&u64::MAX);
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            match l.valuation(&l.sub(&roots[i], &roots[j])) {
                Some(v) if v < min_prec => {}
                _ => return None,
            }
        }
    }
    Some(precision)
}

/// Roots of `q` to at least `precision` `p`-adic digits (in the scaled
/// coordinates `p^shift x`), each tagged with the ramification index and
/// residue degree of the field it generates over `Q_p`.
pub fn padic_lift_roots(p: u64, q: &UniPoly, precision: u32) -> Result<(PAdicRoots, Vec<LiftedRoot>), AlgebraError> {
    let cfg = RootConfig { precision: precision.max(8) * 2, ..RootConfig::default() };
    let cfg = RootConfig { precision_cap: cfg.precision_cap.max(cfg.precision * 4), ..cfg };
    let roots = padic_roots(p, q, &cfg)?;
    let e = roots.field.ramification_index() as u64;
    if roots.precision.iter().any(|&v| v < precision as u64 * e) {
        return Err(AlgebraError::PrecisionExhausted { factor: q.to_string() });
    }
    let degrees = roots.local_degrees().unwrap_or_else(|| vec![(0, 0); roots.len()]);
    let lifted = roots
        .roots
        .iter()
        .zip(degrees)
        .map(|(r, (e, f))| LiftedRoot { value: r.clone(), ramification_index: e, residue_degree: f })
        .collect();
    Ok((roots, lifted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio};

    fn roots(p: u64, c: &[i64]) -> PAdicRoots {
        padic_roots(p, &UniPoly::from_ints(c), &RootConfig::default()).unwrap()
    }

    #[test]
    fn nonresidue_needs_unramified_quadratic() {
        let r = roots(7, &[-2, 0, 1]);
        assert_eq!(r.len(), 2);
        // 2 is a square mod 7, so the roots are in Q_7 itself.
        assert_eq!(r.field.residue_degree(), 1);
        let r = roots(7, &[-3, 0, 1]);
        assert_eq!(r.field.residue_degree(), 2);
        assert_eq!(r.frobenius_permutation(), vec![1, 0]);
        assert_eq!(r.local_degrees().unwrap(), vec![(1, 2), (1, 2)]);
    }

    #[test]
    fn rational_root_is_exact_to_precision() {
        let r = roots(5, &[-3, 1]);
        let l = &r.field;
        let d = l.sub(&r.roots[0], &l.from_bigint(&BigInt::from(3)));
        assert!(l.valuation(&d).is_none_or(|v| v >= r.precision[0]));
    }

    #[test]
    fn two_adic_roots_of_g() {
        let r = roots(2, &[12, 8, 1]);
        assert_eq!(r.field.ramification_index(), 1);
        assert_eq!(r.distance(0, 1), rat(2));
    }

    #[test]
    fn ramified_roots_and_inertia() {
        let r = roots(5, &[-5, 0, 1]);
        assert_eq!(r.field.ramification_index(), 2);
        assert_eq!(r.inertia_permutation().unwrap(), vec![1, 0]);
        assert_eq!(r.distance(0, 1), ratio(1, 2));
        assert_eq!(r.local_degrees().unwrap(), vec![(2, 1), (2, 1)]);
        // x^2 - 10 at 5: nonsquare unit times 5, still e = 2, f = 1.
        let r = roots(5, &[-10, 0, 1]);
        assert_eq!(r.local_degrees().unwrap(), vec![(2, 1), (2, 1)]);
    }

    #[test]
    fn clustered_roots_are_separated() {
        // (x - 1)(x - 1 - 7^3)(x - 8)(x^2 - 7): depths 3, 1, 1/2.
        let q = &(&UniPoly::from_roots(&[rat(1), rat(1 + 343), rat(8)]) * &UniPoly::from_ints(&[-7, 0, 1]));
        let r = padic_roots(7, q, &RootConfig::default()).unwrap();
        assert_eq!(r.len(), 5);
        let mut dists: Vec<BigRational> = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                dists.push(r.distance(i, j));
            }
        }
        dists.sort();
        assert_eq!(dists.last().unwrap(), &rat(3));
        assert!(dists.contains(&ratio(1, 2)));
    }

    #[test]
    fn negative_valuation_roots_are_scaled() {
        let q = UniPoly::from_roots(&[ratio(1, 9), rat(2)]);
        let r = padic_roots(3, &q, &RootConfig::default()).unwrap();
        assert_eq!(r.shift, 2);
        let mut vals: Vec<_> = (0..2).map(|i| r.root_valuation(i).unwrap()).collect();
        vals.sort();
        assert_eq!(vals, vec![rat(-2), rat(0)]);
    }

    #[test]
    fn wild_ramification_is_reported() {
        let q = UniPoly::from_ints(&[-3, 0, 0, 1]);
        assert!(matches!(
            padic_roots(3, &q, &RootConfig::default()),
            Err(AlgebraError::WildRamification { p: 3, .. })
        ));
    }

    #[test]
    fn lift_roots_reports_degrees() {
        let (r, lifted) = padic_lift_roots(7, &UniPoly::from_ints(&[-3, 0, 1]), 20).unwrap();
        assert!(r.precision.iter().all(|&v| v >= 20));
        assert!(lifted.iter().all(|x| x.residue_degree == 2 && x.ramification_index == 1));
    }

    #[test]
    fn worked_example_sextic_at_five_matches_newton_polygon() {
        // Oracle: root valuations from the rational Newton polygon.
        let f = UniPoly::from_ints(&[-295, -236, 60, 54, 48, -12, 1]);
        let r = padic_roots(5, &f, &RootConfig { precision: 30, ..RootConfig::default() }).unwrap();
        let mut vals: Vec<BigRational> = (0..6).map(|i| r.root_valuation(i).unwrap()).collect();
        vals.sort();
        let mut expected: Vec<BigRational> = super::super::padic_newton_polygon(5, &f)
            .unwrap()
            .into_iter()
            .flat_map(|s| std::iter::repeat_n(s.slope, s.multiplicity))
            .collect();
        expected.sort();
        assert_eq!(vals, expected);
    }
}
