//! The eight acceptance criteria, one line each.

use spinlift::selftest::{run_suite, ExtraCatalog, SUITE_GROUP_ORDER};

#[test]
fn acceptance() {
    let report = run_suite(0, SUITE_GROUP_ORDER, &ExtraCatalog::default()).expect("suite runs");
    for c in &report.criteria {
        println!("{}", c.line());
    }
    println!(
        "{}/{} criteria pass",
        report.passed_count,
        report.criteria.len()
    );
    let failed: Vec<String> = report
        .criteria
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} {}", c.id, c.name))
        .collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
