//! Runs every reproducibility criterion, prints one line each and enforces
//! the per-criterion time budget.

use std::time::Instant;

use k3evenset::verify::{self, Options};

#[test]
fn acceptance() {
    let opts = Options::default();
    let mut failed = Vec::new();
    for id in 1..=8u8 {
        let start = Instant::now();
        let outcome = verify::run_criterion(id, &opts);
        let elapsed = start.elapsed();
        let in_budget = elapsed <= outcome.budget;
        let ok = outcome.passed && in_budget;
        println!(
            "{} criterion {id}: {} ({:.2}s of {}s)",
            if ok { "PASS" } else { "FAIL" },
            outcome.title,
            elapsed.as_secs_f64(),
            outcome.budget.as_secs()
        );
        if !ok {
            for (got, want) in outcome.computed.iter().zip(&outcome.expected).filter(|(g, w)| g != w) {
                println!("    computed {got}\n    expected {want}");
            }
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
