//! Acceptance suite: every criterion at full size, one verdict line each.
//!
//! `BORDERLINE_SEED` picks the seed (default 20240901) and
//! `BORDERLINE_QUICK=1` runs the reduced-trial variant.

use std::process::ExitCode;

use borderline::validate::{tally, Suite};

fn main() -> ExitCode {
    let seed = std::env::var("BORDERLINE_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(20_240_901);
    let mut suite = Suite::new(seed);
    if std::env::var("BORDERLINE_QUICK").is_ok_and(|v| v == "1") {
        suite = suite.quick();
    }
    let outcomes = suite.run_all();
    for o in &outcomes {
        println!("{}", o.summary());
        for c in o.failures().take(10) {
            println!("       {}: {}", c.name, c.detail);
        }
    }
    let (ok, total) = tally(&outcomes);
    println!("acceptance: {ok}/{total} criteria passed (seed {seed})");
    if ok == total {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
