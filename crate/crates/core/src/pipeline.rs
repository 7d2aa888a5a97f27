//! End-to-end evaluation of the local formula over all places.

use std::str::FromStr;

use num_rational::BigRational;
use prym_algebra::UniPoly;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cover::{classify_cover, CaseTag, DoubleCoverDatum};
use crate::error::{CoreError, Result};
use crate::local_solubility::Place;
use crate::odd_places::{bad_primes, lambda_odd_with};
use crate::overrides::Overrides;
use crate::real_place::lambda_infinity_with;
use crate::report::LocalTermReport;
use crate::two_adic::lambda_two_with;
use crate::two_torsion::kernel_of_phi;

/// Coefficients of `f` and `g`, lowest degree first, as decimal strings.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CurveInput {
    pub f: Vec<String>,
    pub g: Vec<String>,
}

fn parse_poly(name: &str, coeffs: &[String]) -> Result<UniPoly> {
    let parsed = coeffs
        .iter()
        .map(|s| {
            BigRational::from_str(s.trim())
                .map_err(|_| CoreError::Invalid(format!("coefficient {s:?} of {name} is not a rational number")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(UniPoly::from_coeffs(parsed))
}

impl CurveInput {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CoreError::Invalid(format!("curve file: {e}")))
    }

    pub fn datum(&self) -> Result<DoubleCoverDatum> {
        classify_cover(&parse_poly("f", &self.f)?, &parse_poly("g", &self.g)?)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum PlaceSelection {
    #[default]
    All,
    Only(Vec<Place>),
}

impl FromStr for PlaceSelection {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "all" {
            return Ok(PlaceSelection::All);
        }
        let mut places = Vec::new();
        for item in s.split(',').map(str::trim) {
            let place = match item {
                "inf" | "infinity" => Place::Infinity,
                p => match p.parse::<u64>() {
                    Ok(p) if prym_algebra::intfactor::is_probable_prime(&p.into()) => Place::Prime(p),
                    _ => return Err(CoreError::Invalid(format!("{item:?} is not a place"))),
                },
            };
            places.push(place);
        }
        places.sort();
        places.dedup();
        Ok(PlaceSelection::Only(places))
    }
}

#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    pub overrides: Overrides,
    pub places: PlaceSelection,
    /// Number of smallest odd good primes at which to evaluate `lambda_p`.
    pub spot_check_good_primes: usize,
}

const GOOD_PRIME_POLICY: &str =
    "odd primes of good reduction for C, the Prym and D are not evaluated: all Tamagawa numbers are 1 and all curves have local points, so lambda_p = +1";

#[derive(Clone, Debug, Serialize)]
pub struct GlobalParityReport {
    pub case: CaseTag,
    pub f: String,
    pub g: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bad_primes: Option<Vec<u64>>,
    pub places: Vec<LocalTermReport>,
    /// Product of the reported `lambda_v`; absent for partial reports.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub global_product: Option<i32>,
    /// Whether every place was evaluated.
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parity_statement: Option<String>,
    pub good_primes: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub spot_checks: Vec<LocalTermReport>,
    pub overrides_used: Vec<String>,
    pub fully_native: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unsupported: Option<serde_json::Value>,
}

impl GlobalParityReport {
    /// Exit status for the command-line driver.
    pub fn exit_code(&self) -> i32 {
        if self.unsupported.is_some() {
            3
        } else {
            0
        }
    }
}

fn at_place(place: &Place, e: CoreError) -> CoreError {
    match e {
        CoreError::OverrideRequired { key, reason } => {
            CoreError::OverrideRequired { key, reason: format!("at place {place}: {reason}") }
        }
        CoreError::Undeterminable(m) => CoreError::Undeterminable(format!("at place {place}: {m}")),
        CoreError::UnsupportedCase(m) => CoreError::UnsupportedCase(format!("at place {place}: {m}")),
        CoreError::ResourceExhausted(m) => CoreError::ResourceExhausted(format!("at place {place}: {m}")),
        CoreError::Invalid(m) => CoreError::Invalid(format!("at place {place}: {m}")),
        other => {
            log::error!("at place {place}: {other}");
            other
        }
    }
}

fn evaluate(d: &DoubleCoverDatum, place: &Place, ov: &Overrides) -> Result<LocalTermReport> {
    log::info!("evaluating place {place}");
    let r = match place {
        Place::Infinity => lambda_infinity_with(d, ov),
        Place::Prime(2) => lambda_two_with(d, ov),
        Place::Prime(p) => lambda_odd_with(d, *p, ov),
    };
    r.map_err(|e| at_place(place, e))
}

fn evaluate_all(d: &DoubleCoverDatum, places: &[Place], ov: &Overrides) -> Result<Vec<LocalTermReport>> {
    let results: Vec<Result<LocalTermReport>> = places.par_iter().map(|p| evaluate(d, p, ov)).collect();
    let mut reports = Vec::new();
    let mut missing: Vec<(String, String)> = Vec::new();
    let mut other = None;
    for r in results {
        match r {
            Ok(rep) => reports.push(rep),
            Err(CoreError::OverrideRequired { key, reason }) => missing.push((key, reason)),
            Err(e) => {
                other.get_or_insert(e);
            }
        }
    }
    if let Some(e) = other {
        return Err(e);
    }
    if !missing.is_empty() {
        let keys: Vec<String> = missing.iter().map(|(k, _)| k.clone()).collect();
        let reasons: Vec<String> = missing.into_iter().map(|(_, r)| r).collect();
        return Err(CoreError::OverrideRequired { key: keys.join(", "), reason: reasons.join("; ") });
    }
    Ok(reports)
}

fn smallest_good_primes(bad: &[u64], n: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 3u64;
    while out.len() < n {
        if prym_algebra::intfactor::is_probable_prime(&p.into()) && !bad.contains(&p) {
            out.push(p);
        }
        p += 2;
    }
    out
}

fn partial_report(d: &DoubleCoverDatum) -> Result<GlobalParityReport> {
    let kernel = kernel_of_phi(d)?;
    let members: Vec<String> = kernel.iter().map(|k| format!("({}, {})", k.alpha, k.beta)).collect();
    Ok(GlobalParityReport {
        case: d.case,
        f: d.f.to_string(),
        g: d.g.to_string(),
        bad_primes: None,
        places: Vec::new(),
        global_product: None,
        complete: false,
        parity_statement: None,
        good_primes: GOOD_PRIME_POLICY.into(),
        spot_checks: Vec::new(),
        overrides_used: Vec::new(),
        fully_native: true,
        unsupported: Some(json!({
            "reason": format!("case {}: the local terms are not implemented for a Prym isogenous to a product of elliptic curves", d.case),
            "kernel_of_phi_size": kernel.len(),
            "kernel_of_phi": members,
        })),
    })
}

pub fn run_pipeline(input: &CurveInput, opts: &PipelineOptions) -> Result<GlobalParityReport> {
    let d = input.datum()?;
    run_pipeline_on(&d, opts)
}

pub fn run_pipeline_on(d: &DoubleCoverDatum, opts: &PipelineOptions) -> Result<GlobalParityReport> {
    if !matches!(d.case, CaseTag::II | CaseTag::IIIa) {
        return partial_report(d);
    }
    let (places, bad) = match &opts.places {
        PlaceSelection::All => {
            let bad = bad_primes(d)?;
            let mut places = vec![Place::Infinity, Place::Prime(2)];
            places.extend(bad.iter().map(|&p| Place::Prime(p)));
            (places, Some(bad))
        }
        PlaceSelection::Only(ps) => (ps.clone(), None),
    };
    let reports = evaluate_all(d, &places, &opts.overrides)?;
    let spot_checks = if opts.spot_check_good_primes > 0 {
        let bad = match &bad {
            Some(b) => b.clone(),
            None => bad_primes(d)?,
        };
        let ps: Vec<Place> = smallest_good_primes(&bad, opts.spot_check_good_primes).into_iter().map(Place::Prime).collect();
        evaluate_all(d, &ps, &opts.overrides)?
    } else {
        Vec::new()
    };
    let product: i32 = reports.iter().map(|r| r.lambda).product();
    let mut overrides_used: Vec<String> = reports.iter().chain(&spot_checks).flat_map(|r| r.overrides.clone()).collect();
    overrides_used.sort();
    overrides_used.dedup();
    let complete = opts.places == PlaceSelection::All;
    let parity_statement = complete.then(|| {
        let parity = if product == 1 { "even" } else { "odd" };
        format!("(-1)^(rk2 Jac C + rk2 Prym) = {product}: rk2 Jac C + rk2 Prym is {parity}")
    });
    Ok(GlobalParityReport {
        case: d.case,
        f: d.f.to_string(),
        g: d.g.to_string(),
        bad_primes: bad,
        places: reports,
        global_product: Some(product),
        complete,
        parity_statement,
        good_primes: GOOD_PRIME_POLICY.into(),
        spot_checks,
        fully_native: overrides_used.is_empty(),
        overrides_used,
        unsupported: None,
    })
}

/// `(-1)^{rk_2 Jac C}` from the global product and a known Prym parity.
pub fn combine_with_known_prym_parity(r: &GlobalParityReport, prym_sign: i32) -> Result<i32> {
    let product = r
        .global_product
        .ok_or_else(|| CoreError::UnsupportedCase("partial report has no global product".into()))?;
    if !r.complete {
        return Err(CoreError::Invalid("global product over a restricted set of places".into()));
    }
    if prym_sign != 1 && prym_sign != -1 {
        return Err(CoreError::Invalid(format!("prym sign must be 1 or -1, got {prym_sign}")));
    }
    Ok(product * prym_sign)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(product: i32) -> GlobalParityReport {
        GlobalParityReport {
            case: CaseTag::IIIa,
            f: String::new(),
            g: String::new(),
            bad_primes: None,
            places: Vec::new(),
            global_product: Some(product),
            complete: true,
            parity_statement: None,
            good_primes: String::new(),
            spot_checks: Vec::new(),
            overrides_used: Vec::new(),
            fully_native: true,
            unsupported: None,
        }
    }

    #[test]
    fn combine_signs() {
        assert_eq!(combine_with_known_prym_parity(&report(-1), -1).unwrap(), 1);
        assert_eq!(combine_with_known_prym_parity(&report(1), 1).unwrap(), 1);
        for p in [1, -1] {
            for s in [1, -1] {
                assert_eq!(
                    combine_with_known_prym_parity(&report(p), s).unwrap(),
                    -combine_with_known_prym_parity(&report(p), -s).unwrap()
                );
            }
        }
        assert!(combine_with_known_prym_parity(&report(1), 0).is_err());
    }

    #[test]
    fn place_selection() {
        assert_eq!("all".parse::<PlaceSelection>().unwrap(), PlaceSelection::All);
        assert_eq!(
            "7, inf,2".parse::<PlaceSelection>().unwrap(),
            PlaceSelection::Only(vec![Place::Infinity, Place::Prime(2), Place::Prime(7)])
        );
        assert!("9".parse::<PlaceSelection>().is_err());
        assert!("moon".parse::<PlaceSelection>().is_err());
    }

    #[test]
    fn curve_input_parsing() {
        let c = CurveInput::from_json(r#"{"f": ["-1", "0", "0", "0", "1"], "g": ["2", "0", "1"]}"#).unwrap();
        assert_eq!(c.datum().unwrap().case, CaseTag::II);
        assert!(CurveInput::from_json(r#"{"f": ["x"], "g": []}"#).unwrap().datum().is_err());
        assert!(CurveInput::from_json(r#"{"f": [], "g": [], "h": []}"#).is_err());
    }

    #[test]
    fn good_primes_skip_bad() {
        assert_eq!(smallest_good_primes(&[5, 7], 3), vec![3, 11, 13]);
    }
}
