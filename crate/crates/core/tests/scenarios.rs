use rickit::diagram::{parse_diagram, FamilyParams};
use rickit::scenarios::{self, run_obstruction, run_obstruction_diagram, RunOptions, ScenarioError};

#[test]
fn dispatch_rejects_bad_options() {
    let err = |name: &str, opts: RunOptions| scenarios::run(name, &opts).unwrap_err();
    assert!(matches!(err("nope", RunOptions::default()), ScenarioError::UnknownScenario(_)));
    assert!(matches!(
        err("cheeger-s3s3", RunOptions { l: Some(0.0), ..Default::default() }),
        ScenarioError::InvalidOption(_)
    ));
    assert!(matches!(
        err("s2xcp2", RunOptions { samples: Some(3), ..Default::default() }),
        ScenarioError::InvalidOption(_)
    ));
    let params: FamilyParams = [("d".to_string(), 2)].into_iter().collect();
    assert!(matches!(err("obstruction", RunOptions { params, ..Default::default() }), ScenarioError::InvalidOption(_)));
    assert!(matches!(
        err("obstruction", RunOptions { family: Some("X_9".into()), ..Default::default() }),
        ScenarioError::Diagram(_)
    ));
}

#[test]
fn s2s2_example_reaches_d_two() {
    let r = run_obstruction("S2S2_example", &FamilyParams::new(), 50, 3).unwrap();
    assert!(r.passed(), "{:#?}", r.criteria);
    assert_eq!(r.criterion("S2S2_example: max d").unwrap().observed, 2);
    assert_eq!(r.criterion("S2S2_example: verdict").unwrap().observed, 1);
}

#[test]
fn families_off_the_table_are_reported_without_expectations() {
    let params: FamilyParams = [("n".to_string(), 2)].into_iter().collect();
    let r = run_obstruction("Q_A5", &params, 20, 1).unwrap();
    assert_eq!(r.params["n"], 2);
    let d = r.criterion("Q_A5: d").unwrap();
    assert!(d.expected.is_null());
}

#[test]
fn dsl_diagram_matches_the_family() {
    let text = "G = S3 x S3; H = trivial; Kminus = block[1]; Kplus = block[1]; n = 7";
    let parsed = parse_diagram(text).unwrap();
    let r = run_obstruction_diagram(&parsed.diagram, 20, 5).unwrap();
    assert!(r.passed());
    assert_eq!(r.criterion("d").unwrap().observed, 3);
    assert_eq!(r.criterion("verdict").unwrap().observed, 3);
}

#[test]
fn jacobi_audit_under_the_deformed_metric() {
    let r = scenarios::run("jacobi", &RunOptions { l: Some(0.8), ..Default::default() }).unwrap();
    assert!(r.passed(), "{:#?}", r.criteria);
    assert_eq!(r.params["metric"], 0.8);
}
