use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use residue_core::integrate::{cauchy_pompeiu, QuadratureSpec};
use residue_core::mellin::{
    check_hypothesis, continue_eval, mellin_direct, reduce_chart, ChartSpec, LambdaPoint,
};
use residue_core::testforms::{Profile, ProfileFactor, TestForm};
use residue_core::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn g(center: Complex64, r: f64) -> Arc<Profile> {
    Arc::new(Profile::gaussian(center, r, c(1.0, 0.0)))
}

fn product(n: usize, profiles: &[Arc<Profile>], anti: Vec<usize>) -> TestForm {
    let factors = profiles.iter().enumerate().map(|(i, p)| ProfileFactor::in_var(p.clone(), n, i)).collect();
    TestForm::product(n, c(1.0, 0.0), factors, anti).unwrap()
}

#[test]
fn one_variable_limit_is_cauchy_pompeiu() {
    let psi = Profile::gaussian(c(0.2, -0.1), 0.7, c(1.5, 0.5));
    let chart = ChartSpec::new(vec![vec![1]], vec![true]).unwrap();
    let t = product(1, &[Arc::new(psi.clone())], vec![]);
    let terms = reduce_chart(&chart, &t).unwrap();
    let spec = QuadratureSpec::default();
    let v = continue_eval(&terms, &LambdaPoint::real(&[0.0]), &spec).unwrap();
    assert!(v.factor.is_one());
    let oracle = cauchy_pompeiu(&psi, &spec).unwrap().value;
    assert!((v.value().unwrap() - oracle).norm() < 1e-8 * oracle.norm());
}

#[test]
fn disk_moment_below_zero() {
    // |z|^{2λ} z^{-1} · z dz∧dz̄ on the unit disk = -2i π/(λ+1)
    let chart = ChartSpec::new(vec![vec![1]], vec![false]).unwrap();
    let disk = Profile { poly: vec![(1, 0, c(1.0, 0.0))], ..Profile::constant(c(1.0, 0.0)) };
    let t = product(1, &[Arc::new(disk)], vec![0]);
    let terms = reduce_chart(&chart, &t).unwrap();
    let spec = QuadratureSpec::default().with_truncation(vec![Some(1.0)]);
    let v = continue_eval(&terms, &LambdaPoint::real(&[-0.5]), &spec).unwrap();
    let exact = c(0.0, -2.0) * 2.0 * PI;
    assert!((v.value().unwrap() - exact).norm() < 1e-8 * exact.norm(), "{:?}", v);
}

fn charts() -> Vec<(ChartSpec, TestForm)> {
    let p = [g(c(0.1, 0.0), 0.6), g(c(0.0, 0.2), 0.5), g(c(-0.1, 0.1), 0.7)];
    // z̄2 makes the z-chart test form satisfy the smoothness hypothesis
    let mut zt = product(3, &p, vec![0]);
    zt.summands[0].zbar[1] = 1;
    zt.summands[0].zpow[2] = 1;
    vec![
        (ChartSpec::new(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], vec![false, true, true]).unwrap(), product(3, &p, vec![0])),
        (ChartSpec::new(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 1, 1]], vec![false, true, true]).unwrap(), zt),
        (ChartSpec::new(vec![vec![1, 0], vec![0, 1], vec![1, 1]], vec![false, true, true]).unwrap(), product(2, &p[..2], vec![])),
        (ChartSpec::new(vec![vec![2, 1]], vec![true]).unwrap(), product(2, &p[..2], vec![1])),
    ]
}

#[test]
fn reduced_and_direct_paths_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let spec = QuadratureSpec::default();
    for (chart, t) in charts() {
        let terms = reduce_chart(&chart, &t).unwrap();
        for _ in 0..5 {
            let lam = LambdaPoint((0..chart.m()).map(|_| c(rng.gen_range(1.0..3.0), rng.gen_range(-0.5..0.5))).collect());
            let direct = mellin_direct(&chart, &t, &lam, &spec).unwrap().value;
            let cont = continue_eval(&terms, &lam, &spec).unwrap().value().unwrap();
            assert!(
                (direct - cont).norm() <= 1e-5 * direct.norm(),
                "{:?} at {:?}: {direct} vs {cont}",
                chart.exponents,
                lam.0
            );
        }
    }
}

#[test]
fn pole_factor_has_unit_slope() {
    // Jacobian-like z2 and no z̄2: the pole through the origin survives
    let (chart, mut t) = charts().swap_remove(1);
    t.summands[0].zbar[1] = 0;
    t.summands[0].zpow[1] = 1;
    let terms = reduce_chart(&chart, &t).unwrap();
    let spec = QuadratureSpec::default();
    let v0 = continue_eval(&terms, &LambdaPoint::real(&[0.1, 0.2, 0.3]), &spec).unwrap();
    assert!(v0.factor.hyperplanes().iter().any(|h| h.to_string() == "λ2+λ3"), "{}", v0.factor);
    // approach λ2 + λ3 = 0 from (0.1, 0.2, -0.2) along (0.3, 0.7, 0.4)
    let at = |d: f64| {
        let lam = LambdaPoint::real(&[0.1 + 0.3 * d, 0.2 + 0.7 * d, -0.2 + 0.4 * d]);
        continue_eval(&terms, &lam, &spec).unwrap().value().unwrap().norm()
    };
    let (d1, d2) = (1e-3, 1e-5);
    let slope = (at(d2).ln() - at(d1).ln()) / (d2.ln() - d1.ln());
    assert!((slope + 1.0).abs() < 0.05, "slope {slope}");
    let on = continue_eval(&terms, &LambdaPoint::real(&[0.1, 0.2, -0.2]), &spec).unwrap();
    assert!(matches!(on.value(), Err(Error::OnPole { .. })));
    assert!(on.entire.is_finite());
}

#[test]
fn hypothesis_names_the_non_simple_factor() {
    let chart = ChartSpec::new(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 1, 1]], vec![false, true, true]).unwrap();
    let p = [g(c(0.0, 0.0), 1.0), g(c(0.0, 0.0), 1.0), g(c(0.0, 0.0), 1.0)];
    let t = product(3, &p, vec![0]);
    match check_hypothesis(&chart, &t) {
        Err(Error::Hypothesis { index, .. }) => assert_eq!(index, 1),
        other => panic!("{other:?}"),
    }
    let (chart, t) = charts().swap_remove(1);
    check_hypothesis(&chart, &t).unwrap();
}

#[test]
fn zero_form_and_bad_inputs() {
    let chart = ChartSpec::new(vec![vec![1, 0], vec![0, 1]], vec![true, false]).unwrap();
    let spec = QuadratureSpec::default();
    let z = TestForm::zero(2, 1);
    let v = mellin_direct(&chart, &z, &LambdaPoint::real(&[1.0, 1.0]), &spec).unwrap();
    assert_eq!(v.value, c(0.0, 0.0));
    let wrong = TestForm::zero(2, 0);
    assert!(matches!(reduce_chart(&chart, &wrong), Err(Error::Bidegree(_))));
    let t = product(2, &[g(c(0.0, 0.0), 1.0), g(c(0.0, 0.0), 1.0)], vec![1]);
    assert!(matches!(
        mellin_direct(&chart, &t, &LambdaPoint::real(&[0.0, 0.0]), &spec),
        Err(Error::NonConvergent(_))
    ));
}
