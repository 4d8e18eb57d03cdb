//! One pass/fail line per acceptance criterion. Run with
//! `cargo test --release --test acceptance -- --nocapture`.

use hyperlap::verify::{run, SuiteReport, SUITES};

#[test]
fn acceptance() {
    let mut failed = vec![];
    for criterion in 1..=10u8 {
        let reports: Vec<SuiteReport> = SUITES.iter().filter(|s| s.criterion == criterion).map(run).collect();
        let ok = reports.iter().all(|r| r.passed);
        let names: Vec<String> = reports
            .iter()
            .map(|r| match r.time_limit {
                Some(l) => format!("{} {:.1}s/<{l}s", r.suite, r.seconds),
                None => format!("{} {:.1}s", r.suite, r.seconds),
            })
            .collect();
        println!("criterion {criterion:>2}: {} [{}]", if ok { "PASS" } else { "FAIL" }, names.join(", "));
        for r in &reports {
            if let Some(e) = &r.error {
                println!("    {}: error: {e}", r.suite);
            }
            for c in r.checks.iter().filter(|c| !c.passed) {
                println!("    {}: {} = {:.3e} (tol {:.1e})", r.suite, c.name, c.value, c.tol);
            }
        }
        if !ok {
            failed.push(criterion);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
