use std::f64::consts::PI;

use num_complex::Complex64;
use residue_core::integrate::QuadratureSpec;
use residue_core::mellin::{continue_eval, reduce_chart, LambdaPoint};
use residue_core::scenarios::*;
use residue_core::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn direct_value_at_the_origin() {
    let v = section3_direct(&LambdaPoint::real(&[0.0; 3]), &QuadratureSpec::default()).unwrap();
    // -(2πi)³ · ϕ(0) φ₂(0) φ₃(0) with values 1, 1, 2
    let exact = c(0.0, 16.0 * PI.powi(3));
    assert!((v.value - exact).norm() <= 1e-5 * exact.norm(), "{}", v.value);
    assert!((section3_expected() - exact).norm() < 1e-9);
}

#[test]
fn direct_value_is_linear_in_the_form() {
    let chart = section3_identity_chart();
    let t = section3_form();
    let spec = scenario_spec();
    let lam = LambdaPoint::real(&[0.2, 0.1, 0.3]);
    let base = continue_eval(&reduce_chart(&chart, &t).unwrap(), &lam, &spec).unwrap().value().unwrap();
    let k = c(1.5, -2.0);
    let scaled = continue_eval(&reduce_chart(&chart, &t.scale(k)).unwrap(), &lam, &spec).unwrap().value().unwrap();
    assert!((scaled - k * base).norm() <= 1e-12 * scaled.norm());
    // the identity chart reproduces the separable representation
    let direct = section3_direct(&lam, &QuadratureSpec::default()).unwrap().value;
    assert!((base - direct).norm() <= 1e-6 * direct.norm(), "{base} vs {direct}");
}

#[test]
fn direct_rejects_the_non_convergent_range() {
    let spec = QuadratureSpec::default();
    assert!(matches!(section3_direct(&LambdaPoint::real(&[0.0, -0.6, 0.0]), &spec), Err(Error::NonConvergent(_))));
    assert!(matches!(section3_direct(&LambdaPoint::real(&[0.0; 2]), &spec), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn chart_pieces_carry_jacobian_and_partition() {
    let [z, zeta] = section3_pieces().unwrap();
    // π*(dx) = z₂ dz, and -ζ₂ dζ in the second chart
    assert_eq!(z.form.summands.len(), 1);
    assert_eq!(z.form.summands[0].zpow, vec![0, 1, 0]);
    assert_eq!(zeta.form.summands[0].zpow, vec![0, 1, 0]);
    assert!((zeta.form.summands[0].coef + 1.0).norm() < 1e-15);
    let pts: Vec<Complex64> = (1..500).map(|k| Complex64::from_polar(0.01 * k as f64, 1.3 * k as f64)).collect();
    assert!(partition_defect(&pts) <= 1e-10);
}

#[test]
fn chart_sum_at_one_tenth() {
    let lam = LambdaPoint::real(&[0.1, 0.1, 0.1]);
    let (a, b) = section3_charts(&lam, &scenario_spec()).unwrap();
    assert_eq!(a.factor.to_string(), "λ2/(λ2+λ3)");
    let direct = section3_direct(&lam, &QuadratureSpec::default()).unwrap().value;
    let sum = a.value().unwrap() + b.value().unwrap();
    assert!((sum - direct).norm() <= 1e-4 * direct.norm(), "{sum} vs {direct}");
    let on = section3_charts(&LambdaPoint::real(&[0.1, 0.1, -0.1]), &scenario_spec()).unwrap().0;
    assert!(matches!(on.value(), Err(Error::OnPole { .. })));
}

#[test]
fn diagonal_demo_passes_every_check() {
    let rep = complete_intersection_demo(Instance::Diagonal, &DemoPlan::default());
    let failed: Vec<_> = rep.checks.iter().filter(|c| !c.pass).collect();
    assert!(failed.is_empty(), "{failed:#?}");
    assert!(rep.records.len() > 50);
}

#[test]
fn weighted_demo_sees_derivative_jets() {
    let d = demo(Instance::Weighted);
    // ∂ϕ(0) = 2, ∂²φ₂(0)/2 = 3, φ₃(0) = 2
    let expected = -c(0.0, 2.0 * PI).powu(3) * 12.0;
    assert!((d.expected - expected).norm() < 1e-9);
    let v = continue_eval(&reduce_chart(&d.chart, &d.form).unwrap(), &LambdaPoint::real(&[0.0; 3]), &d.spec).unwrap();
    assert!((v.value().unwrap() - expected).norm() <= 1e-6 * expected.norm());
}

#[test]
fn resonance_report_passes() {
    let rep = resonance_report();
    assert!(rep.passed(), "{:#?}", rep.checks);
}

#[test]
fn instance_names_round_trip() {
    for i in Instance::ALL {
        assert_eq!(Instance::from_name(i.name()).unwrap(), i);
    }
    assert!(matches!(Instance::from_name("nope"), Err(Error::UnknownScenario(_))));
}
