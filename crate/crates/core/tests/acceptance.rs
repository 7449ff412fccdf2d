//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use laxcat::selftest::{run_all, Config};

fn main() -> ExitCode {
    let start = Instant::now();
    let outcomes = run_all(&Config::default());
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!(
        "acceptance: {} of {} criteria passed in {:.1}s",
        outcomes.len() - failed,
        outcomes.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
