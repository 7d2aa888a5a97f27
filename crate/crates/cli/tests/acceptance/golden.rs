use std::path::PathBuf;
use std::process::Command;
use std::sync::OnceLock;

use prym_algebra::{rat, UniPoly};
use prym_core::pipeline::{run_pipeline, CurveInput, PipelineOptions};
use prym_core::two_adic::{kernel_of_reduction, reduction_data};
use prym_core::two_torsion::symmetric_sum;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_prym-parity")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn worked_report() -> &'static Value {
    static REPORT: OnceLock<Value> = OnceLock::new();
    REPORT.get_or_init(|| {
        let input = fixture("worked_example.json");
        let (code, out, err) =
            run(&["compute", "--input", input.to_str().unwrap(), "--prym-sign", "-1", "--spot-check-good-primes", "3"]);
        assert_eq!(code, 0, "{err}");
        serde_json::from_str(&out).unwrap()
    })
}

fn place<'a>(r: &'a Value, name: &str) -> &'a Value {
    r["places"].as_array().unwrap().iter().find(|p| p["place"] == name).unwrap_or_else(|| panic!("no place {name}"))
}

fn tamagawa(p: &Value) -> (u64, u64, u64) {
    let t = &p["details"]["tamagawa"];
    (t["C"]["value"].as_u64().unwrap(), t["Prym"][0]["value"].as_u64().unwrap(), t["D"]["value"].as_u64().unwrap())
}

pub fn worked_example() {
    let r = worked_report();
    let bad: Vec<u64> = r["bad_primes"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    for p in [5, 7, 59, 653, 1201, 193793, 17283342701] {
        assert!(bad.contains(&p), "{p} not among {bad:?}");
    }
    let inf = place(r, "inf");
    assert_eq!(inf["details"]["ovals"], serde_json::json!({"C": 2, "Prym": [1], "D": 2}));
    assert_eq!(inf["details"]["jacobian_components"], serde_json::json!({"C": 2, "Prym": 1, "D": 2}));
    assert_eq!(inf["details"]["kernel_identity_count"], 4);
    assert_eq!(inf["lambda"], 1);
    for &p in &bad {
        let want = if p == 1201 || p == 193793 { (2, 1, 1) } else { (1, 1, 1) };
        let term = place(r, &p.to_string());
        assert_eq!(tamagawa(term), want, "p = {p}");
        assert_eq!(term["lambda"], if want.0 == 2 { -1 } else { 1 }, "p = {p}");
    }
    let two = place(r, "2");
    assert_eq!(two["details"]["h_Prym"], "x^3 + 1");
    assert_eq!(two["details"]["h_C"], "x^4 + x");
    assert_eq!(two["details"]["L_Prym"], "1 + 2T + 3T^2 + 4T^3 + 4T^4");
    assert_eq!(two["details"]["L_C"], "1 + T + T^2 + 3T^3 + 2T^4 + 4T^5 + 8T^6");
    assert_eq!(two["details"]["kernel_of_reduction_Prym"].as_array().unwrap().len(), 4);
    assert_eq!(two["details"]["kernel_of_reduction_C"].as_array().unwrap().len(), 8);
    assert_eq!(two["lambda"], -1);
    assert_eq!(r["global_product"], -1);
    assert_eq!(r["jac_c_sign"], 1);
    assert_eq!(r["fully_native"], true);
}

fn shifted(c: i64) -> CurveInput {
    let base = CurveInput::from_json(&std::fs::read_to_string(fixture("worked_example.json")).unwrap()).unwrap();
    let d = base.datum().unwrap();
    let strings = |p: &UniPoly| p.shift(&rat(c)).coeffs().iter().map(|x| x.to_string()).collect();
    CurveInput { f: strings(&d.f), g: strings(&d.g) }
}

pub fn model_independence() {
    for c in [1, -3, 2, 0] {
        let r = run_pipeline(&shifted(c), &PipelineOptions::default()).unwrap();
        assert_eq!(r.global_product, Some(-1), "x -> x + {c}");
        assert!(r.fully_native, "x -> x + {c}");
    }
}

pub fn reduction_kernel() {
    let d = shifted(0).datum().unwrap();
    let (rc, rf) = reduction_data(&d).unwrap();
    for (rd, g) in [(&rc, 3u32), (&rf, 2)] {
        let k = kernel_of_reduction(rd).unwrap();
        assert_eq!(k.len(), 1 << g);
        for a in &k {
            for b in &k {
                assert!(k.contains(&symmetric_sum(*a, *b).unwrap()));
            }
        }
    }
}

pub fn good_primes() {
    let checks = worked_report()["spot_checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    for t in checks {
        assert_eq!(t["lambda"], 1);
        assert_eq!(tamagawa(t), (1, 1, 1));
        assert_eq!((&t["mu_c"], &t["mu_d"], &t["delta"]), (&Value::from(1), &Value::from(1), &Value::from(1)));
    }
}

pub fn scope_honesty() {
    let input = fixture("case_iii_b.json");
    let (code, out, _) = run(&["compute", "--input", input.to_str().unwrap()]);
    assert_eq!(code, 3);
    let r: Value = serde_json::from_str(&out).unwrap();
    assert!(r.get("global_product").is_none());
    assert_eq!(r["unsupported"]["kernel_of_phi_size"], 32);
    assert_eq!(r["unsupported"]["kernel_of_phi"].as_array().unwrap().len(), 32);

    let input = fixture("not_semistable.json");
    let (code, _, err) = run(&["compute", "--input", input.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("not semistable at p = 7"), "{err}");
    assert!(err.contains("C@7"), "{err}");
}
