use enriqueslab::fixtures::{fixture_names, run_all, run_fixture};

#[test]
fn every_fixture_passes() {
    let reports = run_all().unwrap();
    assert!(reports.len() >= 30);
    let failed: Vec<_> = reports.iter().filter(|r| !r.passed()).map(|r| (r.name.clone(), r.checks.clone())).collect();
    assert!(failed.is_empty(), "{failed:#?}");
}

#[test]
fn coverage() {
    let names = fixture_names().unwrap();
    for want in [
        "enriques-invariant",
        "enriques-quotient",
        "hilb-n3-invariant",
        "hilb-n3-quotient",
        "hilb-n5-invariant",
        "hilb-n5-quotient",
        "kummer-d2-n1-invariant",
        "kummer-d2-n3-invariant",
        "kummer-d3-n2-invariant",
        "kummer-d4-n3-invariant",
        "weight-enriques",
        "weight-kummer-d3-n2",
        "weight-kummer-d4-n3",
        "dehn-twist-nonrealizable",
        "trivial-group-realizable",
    ] {
        assert!(names.iter().any(|n| n == want), "missing fixture {want}");
    }
    assert!(names.iter().filter(|n| n.starts_with("transfer-")).count() >= 7);
}

#[test]
fn fixture_directory_override() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let from_dir = enriqueslab::fixtures::load_dir(&dir).unwrap();
    assert_eq!(from_dir.len(), fixture_names().unwrap().len());
    assert!(run_fixture("hilb-n3-quotient").unwrap().passed());
}
