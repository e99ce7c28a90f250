//! The acceptance gate: runs every verification suite at its pinned
//! tolerance and prints one pass/fail line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion lines.

use gowers_lab::suites;

#[test]
fn acceptance_criteria() {
    let report = suites::run_all().expect("suites must run to completion");
    let mut all = true;
    for (i, s) in report.suites.iter().enumerate() {
        let status = if s.passed { "PASS" } else { "FAIL" };
        println!("[{status}] criterion {:2}: {} - {}", i + 1, s.suite, s.criterion);
        if !s.passed {
            all = false;
            for c in &s.checks {
                if !c.passed {
                    println!("       failed check: {} ({})", c.name, c.detail);
                }
            }
        }
    }
    assert!(all, "some acceptance criteria failed");
}

/// The report itself must be stable across worker counts: this is the
/// externally visible face of criterion 11.
#[test]
fn report_bytes_stable_across_worker_caps() {
    gowers_lab::parallel::set_worker_cap(1);
    let one = serde_json::to_string(&suites::run_suite("gowers-oracle").unwrap()).unwrap();
    gowers_lab::parallel::set_worker_cap(8);
    let eight = serde_json::to_string(&suites::run_suite("gowers-oracle").unwrap()).unwrap();
    gowers_lab::parallel::set_worker_cap(0);
    assert_eq!(one, eight);
}
