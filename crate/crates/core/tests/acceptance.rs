//! Acceptance criteria, one line per criterion, at full resolution.
//!
//! Runs without the libtest harness so the lines show up in plain
//! `cargo test` output.

use std::process::ExitCode;

use gaussent::validation::{run_suite, SuiteConfig, SUITES};

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let mut failures = Vec::new();
    println!("\nrunning {} acceptance criteria", SUITES.len());
    for suite in SUITES {
        let out = run_suite(suite, &cfg);
        let status = match (out.passed, out.within_budget()) {
            (true, true) => "PASS",
            (true, false) => "FAIL (over budget)",
            (false, _) => "FAIL",
        };
        println!(
            "criterion {} [{}] {status} in {:.2?} (budget {:?}): {}",
            suite.id, suite.name, out.elapsed, suite.budget, out.detail
        );
        if status != "PASS" {
            failures.push(suite.id);
        }
    }
    if failures.is_empty() {
        println!("acceptance: all {} criteria passed\n", SUITES.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failures:?}\n");
        ExitCode::FAILURE
    }
}
