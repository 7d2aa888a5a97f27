//! `lambda_p` at odd primes from Tamagawa numbers of semistable models.

pub mod cluster;
pub mod dual_graph;
pub mod tamagawa;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use prym_algebra::poly::discriminant;
use prym_algebra::{factor_integer, AlgebraError, FactorConfig, UniPoly};
use serde_json::json;

pub use cluster::{cluster_picture, is_semistable, semistability_obstruction, semistable_at, Cluster, ClusterPicture};
pub use dual_graph::{dual_graph, DualGraphData};
pub use tamagawa::{component_group, TamagawaResult};

use crate::cover::{build_cover_model, build_prym, DoubleCoverDatum, HyperellipticCurve};
use crate::error::{CoreError, Result};
use crate::local_solubility::{delta_term_with, mu_for_role, Place};
use crate::overrides::{key, Overrides};
use crate::report::{override_keys, LocalTermReport};

fn add_prime_factors(n: &BigInt, cfg: &FactorConfig, out: &mut BTreeSet<BigInt>) -> Result<()> {
    if n.is_zero() {
        return Ok(());
    }
    for (q, _) in factor_integer(&n.abs(), cfg)?.factors {
        out.insert(q);
    }
    Ok(())
}

fn add_poly_primes(f: &UniPoly, cfg: &FactorConfig, out: &mut BTreeSet<BigInt>) -> Result<()> {
    let disc = discriminant(f)?;
    add_prime_factors(disc.numer(), cfg, out)?;
    add_prime_factors(disc.denom(), cfg, out)?;
    let lc = f.leading_coeff();
    add_prime_factors(lc.numer(), cfg, out)?;
    add_prime_factors(lc.denom(), cfg, out)
}

/// Odd primes dividing the discriminants of `f g`, `f`, `g` and the model
/// of `D`, or any of their leading coefficients.
pub fn bad_primes(d: &DoubleCoverDatum) -> Result<Vec<u64>> {
    bad_primes_with(d, &FactorConfig::default())
}

pub fn bad_primes_with(d: &DoubleCoverDatum, cfg: &FactorConfig) -> Result<Vec<u64>> {
    let mut primes = BTreeSet::new();
    add_poly_primes(&d.product(), cfg, &mut primes)?;
    add_poly_primes(&d.f, cfg, &mut primes)?;
    add_poly_primes(&d.g, cfg, &mut primes)?;
    if let Ok(dm) = build_cover_model(d) {
        add_poly_primes(dm.poly(), cfg, &mut primes)?;
    }
    primes
        .into_iter()
        .filter(|q| q != &BigInt::from(2))
        .map(|q| {
            q.to_u64()
                .filter(|&p| p < prym_algebra::ff::MAX_CHAR)
                .ok_or_else(|| CoreError::ResourceExhausted(format!("bad prime {q} exceeds the supported size")))
        })
        .collect()
}

/// Tamagawa number of `Jac C` at an odd prime, computed from the cluster
/// picture when `C` is semistable there.
pub fn tamagawa_number(c: &HyperellipticCurve, p: u64) -> Result<TamagawaResult> {
    let cp = match cluster_picture(c, p) {
        Ok(cp) => cp,
        Err(CoreError::Algebra(AlgebraError::WildRamification { .. })) => {
            return Err(not_semistable(c, p, "wild ramification in the splitting field"))
        }
        Err(e) => return Err(e),
    };
    if let Some(why) = semistability_obstruction(&cp) {
        return Err(not_semistable(c, p, &why));
    }
    let checks = semistability_checks(&cp);
    let g = dual_graph(&cp)?;
    let (value, geometric) = component_group(&g)?;
    Ok(TamagawaResult { value, method: "cluster".into(), geometric: Some(geometric), checks: Some(checks) })
}

/// Record of the semistability criterion, one entry per principal cluster.
fn semistability_checks(cp: &ClusterPicture) -> serde_json::Value {
    let principal: Vec<_> = (0..cp.clusters.len())
        .filter(|&s| cp.is_principal(s))
        .map(|s| json!({"depth": cp.depth(s).to_string(), "nu": cp.nu(s).to_string()}))
        .collect();
    json!({
        "inertia_order": cp.inertia_order(),
        "proper_clusters_inertia_invariant": true,
        "principal_clusters": principal,
        "picture": cp.to_string(),
    })
}

fn not_semistable(c: &HyperellipticCurve, p: u64, why: &str) -> CoreError {
    CoreError::OverrideRequired {
        key: format!("tamagawa ?@{p}"),
        reason: format!("{c} is not semistable at p = {p} ({why})"),
    }
}

/// Tamagawa number for the curve with the given role, falling back to the
/// override file when the native computation is out of scope.
pub fn tamagawa_for_role(role: &str, c: &HyperellipticCurve, p: u64, ov: &Overrides) -> Result<TamagawaResult> {
    let k = key(role, &p.to_string());
    match tamagawa_number(c, p) {
        Ok(t) => Ok(t),
        Err(err @ (CoreError::OverrideRequired { .. } | CoreError::Undeterminable(_))) => match ov.tamagawa.get(&k) {
            Some(&v) => Ok(TamagawaResult { value: v, method: "override".into(), geometric: None, checks: None }),
            None => {
                let reason = match err {
                    CoreError::OverrideRequired { reason, .. } => reason,
                    other => other.to_string(),
                };
                Err(CoreError::OverrideRequired { key: format!("tamagawa[\"{k}\"]"), reason })
            }
        },
        Err(e) => Err(e),
    }
}

fn ord2(n: u64) -> i64 {
    n.trailing_zeros() as i64
}

/// `lambda_p = delta mu_C / mu_D (-1)^{ord_2(c_C c_Prym / c_D)}`.
pub fn lambda_odd(d: &DoubleCoverDatum, p: u64) -> Result<LocalTermReport> {
    lambda_odd_with(d, p, &Overrides::default())
}

pub fn lambda_odd_with(d: &DoubleCoverDatum, p: u64, ov: &Overrides) -> Result<LocalTermReport> {
    let c = d.curve();
    let prym = build_prym(d)?;
    let dm = build_cover_model(d)?;
    let place = Place::Prime(p);
    let t_c = tamagawa_for_role("C", &c, p, ov)?;
    let t_p: Vec<TamagawaResult> = prym
        .components
        .iter()
        .enumerate()
        .map(|(i, comp)| tamagawa_for_role(&format!("Prym{}", i + 1), comp, p, ov))
        .collect::<Result<_>>()?;
    let t_d = tamagawa_for_role("D", &dm, p, ov)?;
    let exponent = ord2(t_c.value) + t_p.iter().map(|t| ord2(t.value)).sum::<i64>() - ord2(t_d.value);
    let mu_c = mu_for_role("C", &c, &place, ov)?;
    let mu_d = mu_for_role("D", &dm, &place, ov)?;
    let delta = delta_term_with(&prym, &place, ov)?;
    let sign = if exponent.rem_euclid(2) == 0 { 1 } else { -1 };
    let mut overrides = override_keys([&mu_c, &mu_d, &delta]);
    let roles = std::iter::once(("C".to_string(), &t_c))
        .chain(t_p.iter().enumerate().map(|(i, t)| (format!("Prym{}", i + 1), t)))
        .chain(std::iter::once(("D".to_string(), &t_d)));
    for (role, t) in roles {
        if t.method == "override" {
            overrides.push(format!("tamagawa:{}", key(&role, &p.to_string())));
        }
    }
    let methods = vec![t_c.method.clone(), mu_c.method.clone(), mu_d.method.clone(), delta.method.clone()];
    Ok(LocalTermReport {
        place: p.to_string(),
        lambda: delta.value * mu_c.value * mu_d.value * sign,
        mu_c: mu_c.value,
        mu_d: mu_d.value,
        delta: delta.value,
        exponent,
        methods,
        overrides,
        details: json!({
            "tamagawa": {
                "C": t_c,
                "Prym": t_p,
                "D": t_d,
            },
        }),
    })
}
