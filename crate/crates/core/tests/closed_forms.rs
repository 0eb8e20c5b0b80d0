use hybridlight::entangle::{compare_closed_forms, LedgerDepth};

#[test]
fn derived_forms_match_engine_everywhere() {
    let report = compare_closed_forms(LedgerDepth::Full).unwrap();
    for f in report.derived_failures.iter().take(20) {
        eprintln!("{f}");
    }
    assert!(report.derived_failures.is_empty(), "{} derived failures", report.derived_failures.len());
    assert!(report.derived_max_deviation < 1e-8);
    assert!(report.comparisons > 5000);
}

#[test]
fn ledger_flags_known_families_only() {
    let ledger = compare_closed_forms(LedgerDepth::Quick).unwrap().ledger;
    for clean in [
        "beam-splitter/vacuum-input",
        "cat/even-source/psi-leading",
        "cat/odd-source/psi-leading",
        "cat/odd-source/phi-leading",
    ] {
        assert!(!ledger.contains(clean), "{clean} unexpectedly in ledger");
    }
    // the printed single-photon form drops a factorial
    assert!(ledger.contains("beam-splitter/single-photon-input"));
    for e in &ledger.entries {
        assert!(e.occurrences > 0);
        assert!(!e.worst_config.is_empty());
    }
}
