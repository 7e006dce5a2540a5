//! Acceptance gate: runs the full built-in verification suite, prints one
//! line per check, and enforces the per-criterion wall-clock budgets.

use std::collections::BTreeMap;

use fraccalc::selftest::{criterion_budget_ms, run_all};

#[test]
fn acceptance_suite() {
    let outcomes = run_all();
    let mut failed = Vec::new();
    let mut per_criterion: BTreeMap<u8, u128> = BTreeMap::new();

    println!("\n=== acceptance suite ===");
    for o in &outcomes {
        println!(
            "[{}] criterion {:>2}  {:<28} {:>7} ms  {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.criterion,
            o.id,
            o.millis,
            o.detail
        );
        *per_criterion.entry(o.criterion).or_insert(0) += o.millis;
        if !o.passed {
            failed.push(o.id);
        }
    }

    println!("--- per-criterion wall clock ---");
    let mut total = 0u128;
    for (criterion, ms) in &per_criterion {
        let budget = criterion_budget_ms(*criterion);
        println!(
            "criterion {criterion:>2}: {ms:>7} ms (budget {budget} ms){}",
            if *ms > budget { "  OVER BUDGET" } else { "" }
        );
        assert!(
            *ms <= budget,
            "criterion {criterion} exceeded its budget: {ms} ms > {budget} ms"
        );
        total += ms;
    }
    println!("total: {total} ms");
    // the whole suite must stay comfortably inside ten minutes
    assert!(total <= 600_000, "suite exceeded ten minutes: {total} ms");

    assert!(failed.is_empty(), "failed checks: {failed:?}");
}
