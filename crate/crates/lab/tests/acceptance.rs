//! One line per acceptance criterion, at the tolerances the criteria state.

use obdd_lab::suite::{criteria, run_criterion};

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for (id, _) in criteria() {
        let r = run_criterion(id, true).unwrap();
        let ms = r.duration_ms.unwrap_or(0);
        println!("{id} {} ({ms} ms) {}", if r.pass { "PASS" } else { "FAIL" }, r.claim);
        for c in r.checks.iter().filter(|c| !c.pass) {
            println!("    {}: measured {} expected {}", c.name, c.measured, c.bound);
        }
        if !r.pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
