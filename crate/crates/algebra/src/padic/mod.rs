//! `p`-adic tools: Newton polygons over `Q`, finite extensions of `Q_p`
//! at fixed precision, and certified root finding.

mod local_field;
mod roots;

pub use local_field::{LElem, LocalField};
pub use roots::{padic_lift_roots, padic_roots, LiftedRoot, PAdicRoots, RootConfig};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::AlgebraError;
use crate::intfactor::valuation;
use crate::poly::UniPoly;

/// One segment of a Newton polygon. `slope` is the common `p`-adic
/// valuation of the `multiplicity` roots the segment accounts for (the
/// negative of the geometric slope of the segment).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdicFactorSlope {
    pub p: u64,
    pub slope: BigRational,
    pub multiplicity: usize,
}

/// `v_p` of a nonzero rational.
pub fn rational_valuation(x: &BigRational, p: u64) -> i64 {
    let pb = BigInt::from(p);
    valuation(x.numer(), &pb) as i64 - valuation(x.denom(), &pb) as i64
}

/// Lower convex hull of the points `(i, v_i)`; `None` entries are skipped.
/// Returns segments `(i_start, i_end, slope)` with slope the root valuation
/// `(v_start - v_end) / (i_end - i_start)`, ordered left to right
/// (decreasing root valuation).
pub fn lower_hull(points: &[Option<BigRational>]) -> Vec<(usize, usize, BigRational)> {
    let pts: Vec<(usize, &BigRational)> = points
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.as_ref().map(|v| (i, v)))
        .collect();
    let mut hull: Vec<(usize, &BigRational)> = Vec::new();
    for pt in pts {
        while hull.len() >= 2 {
            let (i1, v1) = hull[hull.len() - 2];
            let (i2, v2) = hull[hull.len() - 1];
            // Drop the middle point if it lies on or above the chord.
            let lhs = (v2 - v1) * BigRational::from_integer(BigInt::from(pt.0 - i1));
            let rhs = (pt.1 - v1) * BigRational::from_integer(BigInt::from(i2 - i1));
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull.windows(2)
        .map(|w| {
            let (i1, v1) = w[0];
            let (i2, v2) = w[1];
            (i1, i2, (v1 - v2) / BigRational::from_integer(BigInt::from(i2 - i1)))
        })
        .collect()
}

/// Newton polygon of `q` at `p`. Roots at zero (if `q(0) = 0`) are not
/// represented, so multiplicities sum to `deg q - ord_x q`.
pub fn padic_newton_polygon(p: u64, q: &UniPoly) -> Result<Vec<PAdicFactorSlope>, AlgebraError> {
    if q.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let pts: Vec<Option<BigRational>> = q
        .coeffs()
        .iter()
        .map(|c| (!c.is_zero()).then(|| BigRational::from_integer(BigInt::from(rational_valuation(c, p)))))
        .collect();
    let mut out: Vec<PAdicFactorSlope> = Vec::new();
    for (a, b, slope) in lower_hull(&pts) {
        match out.last_mut() {
            Some(last) if last.slope == slope => last.multiplicity += b - a,
            _ => out.push(PAdicFactorSlope { p, slope, multiplicity: b - a }),
        }
    }
    Ok(out)
}

/// Smallest `p`-adic valuation of a root of `q` (ignoring roots at zero).
pub fn min_root_valuation(p: u64, q: &UniPoly) -> Result<Option<BigRational>, AlgebraError> {
    Ok(padic_newton_polygon(p, q)?.into_iter().map(|s| s.slope).min())
}

/// Smallest `k >= 0` such that all roots of `q` times `p^k` are integral.
pub fn integrality_shift(p: u64, q: &UniPoly) -> Result<u32, AlgebraError> {
    Ok(match min_root_valuation(p, q)? {
        Some(v) if v.is_negative() => (-v).ceil().to_integer().try_into().unwrap_or(u32::MAX),
        _ => 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio};

    fn np(p: u64, c: &[i64]) -> Vec<(BigRational, usize)> {
        padic_newton_polygon(p, &UniPoly::from_ints(c))
            .unwrap()
            .into_iter()
            .map(|s| (s.slope, s.multiplicity))
            .collect()
    }

    #[test]
    fn eisenstein_and_pure_power() {
        assert_eq!(np(2, &[-2, 0, 1]), vec![(ratio(1, 2), 2)]);
        assert_eq!(np(5, &[-25, 0, 1]), vec![(rat(1), 2)]);
    }

    #[test]
    fn mixed_segments() {
        // (x - 5)(x - 1/25)(x - 7): valuations 1, -2, 0.
        let q = UniPoly::from_roots(&[rat(5), ratio(1, 25), rat(7)]);
        let segs: Vec<_> = padic_newton_polygon(5, &q).unwrap().into_iter().map(|s| (s.slope, s.multiplicity)).collect();
        assert_eq!(segs, vec![(rat(1), 1), (rat(0), 1), (rat(-2), 1)]);
        assert_eq!(integrality_shift(5, &q).unwrap(), 2);
    }

    #[test]
    fn zero_root_omitted() {
        assert_eq!(np(3, &[0, -9, 1]), vec![(rat(2), 1)]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn unit_scaling_invariance(coeffs in prop::collection::vec(-50i64..=50, 2..8), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
                let q = UniPoly::from_ints(&coeffs);
                prop_assume!(q.deg() >= 1 && !q.coeff(0).is_zero());
                let u = rat(1 + p as i64);
                let scaled = q.compose(&UniPoly::from_coeffs(vec![rat(0), u]));
                prop_assert_eq!(padic_newton_polygon(p, &q).unwrap(), padic_newton_polygon(p, &scaled).unwrap());
                let total: usize = padic_newton_polygon(p, &q).unwrap().iter().map(|s| s.multiplicity).sum();
                prop_assert_eq!(total, q.deg());
            }
        }
    }
}
