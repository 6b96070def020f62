//! Acceptance gate: runs every release criterion and prints one line per
//! criterion. Set `ACCEPTANCE_SUITE=fast` to skip the criteria that need
//! resonance eigensolves (4, 9, 10).

use anharm::acceptance;

#[test]
fn acceptance_gate() {
    let fast_only = std::env::var("ACCEPTANCE_SUITE").as_deref() == Ok("fast");
    let outcomes = acceptance::run_suite(fast_only);
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.line())
        .collect();
    assert!(
        failed.is_empty(),
        "{} of {} acceptance criteria failed:\n{}",
        failed.len(),
        outcomes.len(),
        failed.join("\n")
    );
}
