//! The ten acceptance criteria, one line each. Runs without the libtest
//! harness so the lines are always printed; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use conifold_cli::suite::{run_criterion, Goldens, CRITERIA};

fn main() -> ExitCode {
    let goldens = Goldens::default();
    let mut failed = 0;
    for id in 1..=CRITERIA.len() {
        let start = Instant::now();
        let r = run_criterion(id, 0, &goldens);
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        println!("[{verdict}] {:>2}. {} ({} ms): {}", r.id, r.name, start.elapsed().as_millis(), r.detail);
        failed += usize::from(!r.passed);
    }
    println!("acceptance: {} passed, {failed} failed", CRITERIA.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
