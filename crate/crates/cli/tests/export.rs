use num_complex::Complex64;

use residue_cli::report::{RunCheck, RunReport, Sample, Stamp, CSV_HEADER};
use residue_core::scenarios::Check;

fn stamp() -> Stamp {
    Stamp::new(7, None, None)
}

fn csv(r: &RunReport) -> String {
    String::from_utf8(r.to_csv().unwrap()).unwrap()
}

#[test]
fn empty_report_is_header_only() {
    let r = RunReport::new("empty", stamp());
    assert_eq!(csv(&r), format!("{}\n", CSV_HEADER.join(",")));
    assert!(r.passed());
}

#[test]
fn three_checks_give_three_rows() {
    let mut r = RunReport::new("three", stamp());
    let one = Complex64::new(1.0, 0.0);
    r.checks.push(RunCheck::from(&Check::relative("a", one, one, 1e-12, 1e-6)));
    r.checks.push(RunCheck::from(&Check::relative("b", one, Complex64::new(1.1, 0.0), 1e-12, 1e-6)));
    r.checks.push(RunCheck::symbolic("c", true, None));
    let text = csv(&r);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[1], "three,a,,1e0,0e0,1e-12,pass");
    assert!(rows[2].ends_with(",fail"));
    assert!(!r.passed());
}

#[test]
fn every_failed_check_has_a_witness() {
    let bad = RunCheck::from(&Check::relative("x", Complex64::new(2.0, 0.0), Complex64::new(3.0, 0.0), 0.0, 1e-3));
    assert!(bad.witness.as_deref().unwrap().contains("|diff| = 1e0"));
    assert!(RunCheck::symbolic("y", false, None).witness.is_some());
    assert!(RunCheck::symbolic("z", true, None).witness.is_none());
    let err = residue_core::Error::NonConvergent("stalled".into());
    let failed = RunCheck::from(&Check::failed("w", &err));
    assert!(failed.witness.is_some() && failed.name.contains("stalled"));
}

#[test]
fn fields_with_commas_are_quoted() {
    let mut r = RunReport::new("q", stamp());
    r.samples.push(Sample { check: "a,b".into(), point: "lambda=(1e0;2e0)".into(), value: Complex64::new(0.5, -0.25), err: 0.0 });
    assert_eq!(csv(&r).lines().nth(1).unwrap(), "q,\"a,b\",lambda=(1e0;2e0),5e-1,-2.5e-1,0e0,sample");
}

#[test]
fn toml_report_round_trips_and_carries_the_stamp() {
    let mut r = RunReport::new("t", stamp());
    r.notes.push(("pole-factor".into(), "λ2/(λ2+λ3)".into()));
    r.checks.push(RunCheck::symbolic("c", false, Some("residual z1".into())));
    let text = r.to_toml(false);
    let v: toml::Value = toml::from_str(&text).unwrap();
    assert_eq!(v["schema"].as_integer(), Some(1));
    assert_eq!(v["passed"].as_bool(), Some(false));
    assert_eq!(v["stamp"]["seed"].as_integer(), Some(7));
    assert_eq!(v["checks"][0]["witness"].as_str(), Some("residual z1"));
    assert_eq!(v["notes"][0]["value"].as_str(), Some("λ2/(λ2+λ3)"));
    assert!(!text.contains("seconds"));
}
