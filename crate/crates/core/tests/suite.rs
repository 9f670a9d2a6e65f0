use ffzeta::identities::{run_suite, SuiteConfig};

#[test]
fn default_suite_holds() {
    let reports = run_suite(&SuiteConfig::default()).unwrap();
    let failures: Vec<_> = reports.iter().filter(|r| !r.holds).collect();
    let mut counts = std::collections::BTreeMap::new();
    for r in &reports {
        *counts.entry(r.identity.as_str()).or_insert(0usize) += 1;
    }
    eprintln!("{counts:?}");
    assert!(failures.is_empty(), "{} failures, first: {}", failures.len(), serde_json::to_string(failures[0]).unwrap());
}
