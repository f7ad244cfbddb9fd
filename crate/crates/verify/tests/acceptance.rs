//! Runs every acceptance check at full budgets with seed 42 and prints one
//! PASS/FAIL/UNKNOWN line per check. Exits nonzero if any check fails.
//!
//! Arguments that are check numbers (`cargo test --test acceptance -- 5 8`)
//! restrict the run; other arguments from the test runner are ignored.

use std::process::ExitCode;

use stsdisc_cli::checks::{self, Settings};
use stsdisc_core::DEFAULT_SEED;

fn main() -> ExitCode {
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let settings = Settings::full(DEFAULT_SEED);
    let mut failed = Vec::new();
    let mut ran = 0;
    for (i, check) in checks::ALL.iter().enumerate() {
        let id = i + 1;
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let result = check(&settings);
        println!("{result}");
        ran += 1;
        if result.failed() {
            failed.push(id);
        }
    }
    println!("\nacceptance: {} of {ran} checks passed or inconclusive", ran - failed.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed checks {failed:?}");
        ExitCode::FAILURE
    }
}
