//! Fixtures from PARI's `genus2red`, regenerated by
//! `fixtures/generate_tamagawa.py`.

use num_bigint::BigInt;
use prym_algebra::UniPoly;
use prym_core::odd_places::tamagawa_number;
use prym_core::HyperellipticCurve;
use serde::Deserialize;

#[derive(Deserialize)]
struct Case {
    f: Vec<String>,
    p: u64,
    tamagawa: u64,
    geometric: Vec<u64>,
    source: String,
}

pub fn check() {
    let cases: Vec<Case> = serde_json::from_str(include_str!("../fixtures/tamagawa_oracle.json")).unwrap();
    assert_eq!(cases.len(), 10);
    for c in cases {
        let coeffs: Vec<BigInt> = c.f.iter().map(|s| s.parse().unwrap()).collect();
        let curve = HyperellipticCurve::new(UniPoly::from_bigints(&coeffs)).unwrap();
        let t = tamagawa_number(&curve, c.p).unwrap();
        assert_eq!(t.value, c.tamagawa, "{} at {}", c.source, c.p);
        let ours: Vec<u64> = t.geometric.unwrap().into_iter().filter(|&d| d != 1).collect();
        assert_eq!(ours, c.geometric, "{} at {}", c.source, c.p);
    }
}
