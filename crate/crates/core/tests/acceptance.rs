//! Runs every acceptance criterion and prints one line per criterion.
//!
//! `FKBURGER_ONLY=3,7` restricts the run; `FKBURGER_SEED` overrides the seed.

use fkburger::verify::{run_criterion, CRITERIA, DEFAULT_SEED};

fn main() {
    let seed = std::env::var("FKBURGER_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED);
    let only: Option<Vec<u32>> = std::env::var("FKBURGER_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect());
    let mut failed = 0;
    let mut ran = 0;
    for (id, _) in CRITERIA {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let r = run_criterion(id, seed).expect("known criterion");
        println!("{}", r.line());
        ran += 1;
        if !r.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed (seed {seed})", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
