use uq_core::verify::{run_verification, VerifyOptions, ALL_CHECKS};

fn main() {
    let l: i64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    for name in ALL_CHECKS {
        let t0 = std::time::Instant::now();
        let opts = VerifyOptions {
            checks: Some(vec![name.to_string()]),
            ..Default::default()
        };
        let report = run_verification(l, &opts).expect("run");
        println!(
            "{:>28}  {:>8.2?}  {}",
            name,
            t0.elapsed(),
            if report.pass() { "pass" } else { "FAIL" }
        );
    }
}
