//! One line per acceptance criterion; exits nonzero if any fails.

mod golden;
mod group_theory;
mod real_topology;
mod tamagawa;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

fn main() -> ExitCode {
    let criteria: [(&str, fn()); 8] = [
        ("worked example end to end", golden::worked_example),
        ("model independence", golden::model_independence),
        ("two-torsion group theory", group_theory::check),
        ("real topology against grid oracle", real_topology::check),
        ("reduction kernel is a subgroup of dimension g", golden::reduction_kernel),
        ("Tamagawa numbers against PARI", tamagawa::check),
        ("good-prime triviality", golden::good_primes),
        ("scope honesty", golden::scope_honesty),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let ok = catch_unwind(AssertUnwindSafe(check)).is_ok();
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {}: {} ({name}, {:.1}s)",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
