//! Acceptance battery: one pass/fail line per criterion.

use critlocus::battery::{run_all, Config};

#[test]
fn acceptance() {
    let scratch = tempfile::tempdir().unwrap();
    let cfg = Config {
        seed: 42,
        stretch: false,
        jobs: 1,
        scratch: scratch.path().join("suite-scratch"),
    };
    let outcomes = run_all(&cfg);
    let mut failed = 0;
    for outcome in &outcomes {
        println!("{}", outcome.line());
        if !outcome.passed {
            failed += 1;
        }
    }
    assert_eq!(outcomes.len(), 12);
    assert_eq!(failed, 0, "{failed} criteria failed");
}
