//! Runs the whole verification suite and prints one line per check.

use gatecalc::verify::{run_all, VerifyOptions};

fn main() {
    let report = run_all(&VerifyOptions::default());
    for c in &report.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        println!("{status} {:>2} {:<58} {:>8.3}s  {}", c.id, c.title, c.seconds, c.detail);
    }
    std::process::exit(if report.all_passed() { 0 } else { 1 });
}
