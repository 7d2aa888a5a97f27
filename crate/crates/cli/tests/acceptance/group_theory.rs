use std::collections::HashSet;

use prym_algebra::{rat, UniPoly};
use prym_core::cover::{classify_cover, epsilon_class};
use prym_core::two_torsion::{
    enumerate_classes, enumerate_classes_on, galois_act, galois_act_prym, kernel_of_phi, kernel_sum, prym_classes,
    pullback_preimage, symmetric_sum, KernelElement, TwoTorsionClass,
};
use prym_core::DoubleCoverDatum;
use proptest::prelude::*;
use proptest::sample::subsequence;
use proptest::test_runner::{Config, TestRunner};

const CASES: u32 = 1000;

fn axioms_exhaustive() {
    for g in 1..=3 {
        let n = 2 * g + 2;
        let all = enumerate_classes(g);
        assert_eq!(all.len(), 1 << (2 * g));
        let set: HashSet<_> = all.iter().copied().collect();
        let zero = TwoTorsionClass::zero(n);
        for &a in &all {
            assert_eq!(symmetric_sum(a, zero).unwrap(), a);
            assert_eq!(symmetric_sum(a, a).unwrap(), zero);
            for &b in &all {
                let ab = symmetric_sum(a, b).unwrap();
                assert!(set.contains(&ab));
                assert_eq!(ab, symmetric_sum(b, a).unwrap());
                for &c in &all {
                    assert_eq!(symmetric_sum(ab, c).unwrap(), symmetric_sum(a, symmetric_sum(b, c).unwrap()).unwrap());
                }
            }
        }
    }
}

fn datum(roots: &[i64], nf: usize) -> DoubleCoverDatum {
    let f = UniPoly::from_roots(&roots[..nf].iter().map(|&r| rat(r)).collect::<Vec<_>>());
    let g = UniPoly::from_roots(&roots[nf..].iter().map(|&r| rat(r)).collect::<Vec<_>>());
    classify_cover(&f, &g).unwrap()
}

/// Covers of all three supported degree patterns with a random
/// permutation of the roots preserving those of `f`.
fn cover_with_perm() -> impl Strategy<Value = (DoubleCoverDatum, Vec<usize>)> {
    prop_oneof![Just((4usize, 2usize)), Just((6, 2)), Just((4, 4))].prop_flat_map(|(nf, ng)| {
        (
            subsequence((-40i64..40).collect::<Vec<_>>(), nf + ng).prop_shuffle(),
            Just((0..nf).collect::<Vec<_>>()).prop_shuffle(),
            Just((nf..nf + ng).collect::<Vec<_>>()).prop_shuffle(),
        )
            .prop_map(move |(roots, pf, pg)| (datum(&roots, nf), pf.into_iter().chain(pg).collect()))
    })
}

fn kernel_order(d: &DoubleCoverDatum) -> std::result::Result<(), TestCaseError> {
    let k = kernel_of_phi(d).unwrap();
    prop_assert_eq!(k.len(), 1 << (2 * d.genus() - 1));
    let set: HashSet<_> = k.iter().copied().collect();
    prop_assert_eq!(set.len(), k.len());
    for x in &k {
        for y in &k {
            prop_assert!(set.contains(&kernel_sum(x, y).unwrap()));
        }
    }
    Ok(())
}

fn preimages(d: &DoubleCoverDatum) -> std::result::Result<(), TestCaseError> {
    let eps = epsilon_class(d);
    prop_assert!(!eps.is_zero());
    for beta in prym_classes(d).unwrap() {
        let (a0, a1) = pullback_preimage(beta, d).unwrap();
        prop_assert_eq!(symmetric_sum(a0, a1).unwrap(), eps);
    }
    Ok(())
}

fn equivariance(d: &DoubleCoverDatum, perm: &[usize]) -> std::result::Result<(), TestCaseError> {
    let nf = d.f.deg();
    prop_assert_eq!(galois_act(perm, epsilon_class(d), nf).unwrap(), epsilon_class(d));
    for beta in prym_classes(d).unwrap() {
        let (a0, a1) = pullback_preimage(beta, d).unwrap();
        let moved = pullback_preimage(galois_act_prym(perm, beta, d).unwrap(), d).unwrap();
        let image = (galois_act(perm, a0, nf).unwrap(), galois_act(perm, a1, nf).unwrap());
        prop_assert!(image == moved || (image.1, image.0) == moved);
    }
    let all = enumerate_classes_on(d.root_count());
    for &a in all.iter().step_by(7) {
        for &b in all.iter().step_by(5) {
            let lhs = galois_act(perm, symmetric_sum(a, b).unwrap(), nf).unwrap();
            let rhs = symmetric_sum(galois_act(perm, a, nf).unwrap(), galois_act(perm, b, nf).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
    let k: HashSet<_> = kernel_of_phi(d).unwrap().into_iter().collect();
    for x in &k {
        let moved = KernelElement {
            alpha: galois_act(perm, x.alpha, nf).unwrap(),
            beta: galois_act_prym(perm, x.beta, d).unwrap(),
        };
        prop_assert!(k.contains(&moved));
    }
    Ok(())
}

pub fn check() {
    axioms_exhaustive();
    let mut runner = TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() });
    runner
        .run(&cover_with_perm(), |(d, perm)| {
            kernel_order(&d)?;
            preimages(&d)?;
            equivariance(&d, &perm)
        })
        .unwrap();
}
