use std::sync::Arc;

use num_complex::Complex64;
use residue_core::integrate::{cauchy_pompeiu, quad_nested, EpsPoint, QuadratureSpec};
use residue_core::mellin::ChartSpec;
use residue_core::regularize::{
    extrapolate, holder_estimate, make_cutoff, reg_integral, sweep, CutoffKind, CutoffSpec, EpsPath, PathKind,
};
use residue_core::testforms::{Profile, ProfileFactor, TestForm};
use residue_core::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rational() -> CutoffSpec {
    make_cutoff(CutoffKind::Rational).unwrap()
}

fn product(n: usize, profiles: &[Profile], anti: Vec<usize>) -> TestForm {
    let factors = profiles.iter().enumerate().map(|(i, p)| ProfileFactor::in_var(Arc::new(p.clone()), n, i)).collect();
    TestForm::product(n, c(1.0, 0.0), factors, anti).unwrap()
}

fn one_variable() -> (ChartSpec, TestForm, Profile) {
    let psi = Profile::gaussian(c(0.15, -0.1), 0.6, c(1.0, 0.5));
    let chart = ChartSpec::new(vec![vec![1]], vec![true]).unwrap();
    let t = product(1, std::slice::from_ref(&psi), vec![]);
    (chart, t, psi)
}

#[test]
fn one_variable_limit_is_cauchy_pompeiu() {
    let (chart, t, psi) = one_variable();
    let spec = QuadratureSpec::default();
    let oracle = cauchy_pompeiu(&psi, &spec).unwrap().value;
    let at0 = reg_integral(&chart, &t, &[rational()], &EpsPoint::new(vec![0.0]).unwrap(), &spec).unwrap();
    assert!((at0.value - oracle).norm() < 1e-8 * oracle.norm());
    let path = EpsPath::new(PathKind::Parabolic(vec![1.0]), EpsPath::geometric(1e-2, 0.1, 6)).unwrap();
    let s = sweep(&chart, &t, &[rational()], &path, &spec).unwrap();
    let lim = s.limit.unwrap();
    assert!((lim.limit - oracle).norm() < 1e-6 * oracle.norm(), "{} vs {oracle}", lim.limit);
}

#[test]
fn steep_and_rational_cutoffs_share_the_limit() {
    let (chart, t, psi) = one_variable();
    let spec = QuadratureSpec::default();
    let oracle = cauchy_pompeiu(&psi, &spec).unwrap().value;
    let steep = make_cutoff(CutoffKind::Smoothstep { t0: 0.9, t1: 1.1 }).unwrap();
    let path = EpsPath::new(PathKind::Parabolic(vec![1.0]), EpsPath::geometric(1e-2, 0.1, 6)).unwrap();
    let a = sweep(&chart, &t, &[steep], &path, &spec).unwrap().limit.unwrap().limit;
    let b = sweep(&chart, &t, &[rational()], &path, &spec).unwrap().limit.unwrap().limit;
    assert!((a - b).norm() < 1e-3 * b.norm(), "{a} vs {b}");
    assert!((a - oracle).norm() < 1e-3 * oracle.norm());
}

fn trivial() -> (ChartSpec, TestForm, [Profile; 3]) {
    let p = [
        Profile::gaussian(c(0.1, 0.05), 0.5, c(1.0, 0.0)),
        Profile::gaussian(c(-0.1, 0.1), 0.6, c(1.0, 0.0)),
        Profile::gaussian(c(0.05, -0.1), 0.4, c(2.0, 0.0)),
    ];
    let chart = ChartSpec::new(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], vec![false, true, true]).unwrap();
    let t = product(3, &p, vec![0]);
    (chart, t, p)
}

#[test]
fn interior_point_matches_direct_quadrature() {
    let (chart, t, p) = trivial();
    let cut = rational();
    let cuts = [cut.clone(), cut.clone(), cut.clone()];
    let spec = QuadratureSpec::default();
    let v = reg_integral(&chart, &t, &cuts, &EpsPoint::new(vec![1.0, 1.0, 1.0]).unwrap(), &spec).unwrap();

    // -8i χ(|z1|²) χ̃(|z2|²) χ̃(|z3|²) g1 g2 g3 / (z1 |z2|² |z3|²) dV
    let f = |z: &[Complex64]| -> Complex64 {
        let (r1, r2, r3) = (z[0].norm_sqr(), z[1].norm_sqr(), z[2].norm_sqr());
        if r1 == 0.0 || r2 == 0.0 || r3 == 0.0 {
            return c(0.0, 0.0);
        }
        c(0.0, -8.0) * cut.chi(r1) * cut.chi_tilde(r2) * cut.chi_tilde(r3) / (z[0] * r2 * r3)
            * p[0].value(z[0])
            * p[1].value(z[1])
            * p[2].value(z[2])
    };
    let nested = QuadratureSpec { nodes_per_panel: 10, outer_panels: 3, graded_panels: 0, angular: 8, ..spec }
        .with_truncation(p.iter().map(|q| Some(q.center.norm() + 5.0 * q.radius)).collect());
    let direct = quad_nested(3, &f, &nested).unwrap().value;
    assert!((v.value - direct).norm() <= 1e-6 * direct.norm(), "{} vs {direct}", v.value);
}

#[test]
fn parabolic_paths_agree_on_the_trivial_chart() {
    let (chart, t, _) = trivial();
    let cuts = vec![rational(); 3];
    let spec = QuadratureSpec::default();
    let deltas = EpsPath::geometric(1e-1, 0.1, 6);
    let a = sweep(&chart, &t, &cuts, &EpsPath::new(PathKind::Parabolic(vec![1.0, 1.0, 1.0]), deltas.clone()).unwrap(), &spec)
        .unwrap();
    let b = sweep(&chart, &t, &cuts, &EpsPath::new(PathKind::Parabolic(vec![1.0, 2.0, 3.0]), deltas).unwrap(), &spec).unwrap();
    let (la, lb) = (a.limit.unwrap().limit, b.limit.unwrap().limit);
    assert!((la - lb).norm() <= 1e-4 * la.norm(), "{la} vs {lb}");
    let at0 = reg_integral(&chart, &t, &cuts, &EpsPoint::new(vec![0.0; 3]).unwrap(), &spec).unwrap().value;
    assert!((la - at0).norm() <= 1e-4 * at0.norm(), "{la} vs {at0}");
}

#[test]
fn constant_sequences_extrapolate_exactly() {
    let v = vec![c(1.25, -0.5); 5];
    let e = extrapolate(&v, &[0.0; 5]).unwrap();
    assert_eq!(e.limit, c(1.25, -0.5));
    assert_eq!(e.err, 0.0);
    // L + C q^i is exact for Aitken
    let v: Vec<Complex64> = (0..5).map(|i| c(2.0, 1.0) + c(0.3, -0.1) * 0.1f64.powi(i)).collect();
    let e = extrapolate(&v, &[0.0; 5]).unwrap();
    assert!((e.limit - c(2.0, 1.0)).norm() < 1e-12);
    let diverging: Vec<Complex64> = (0..5).map(|i| c(2f64.powi(i), 0.0)).collect();
    assert!(extrapolate(&diverging, &[0.0; 5]).is_none());
}

#[test]
fn holder_fit_on_synthetic_data() {
    let eps: Vec<f64> = (0..12).map(|i| 10f64.powf(-1.0 - 0.5 * i as f64)).collect();
    let sqrt: Vec<Complex64> = eps.iter().map(|e| c(1.0 + e.sqrt(), 0.0)).collect();
    let fit = holder_estimate(&eps, &sqrt, c(1.0, 0.0), None).unwrap();
    assert!((fit.gamma - 0.5).abs() < 0.02);
    assert!(!fit.log_warning);
    // the local slope is 1 + 1/ln ε, so sample well below ε = 1
    let deep: Vec<f64> = eps.iter().map(|e| e * 1e-3).collect();
    let elog: Vec<Complex64> = deep.iter().map(|e| c(e * e.ln(), 0.0)).collect();
    let fit = holder_estimate(&deep, &elog, c(0.0, 0.0), None).unwrap();
    assert!(fit.gamma > 0.9 && fit.gamma < 1.0, "{fit:?}");
    assert!(fit.log_warning);
    let short: Vec<f64> = (0..10).map(|i| 1e-2 * (1.0 + i as f64)).collect();
    assert!(matches!(
        holder_estimate(&short, &sqrt[..10], c(1.0, 0.0), None),
        Err(Error::NonConvergent(_))
    ));
}

#[test]
fn cutoff_product_on_resonant_chart_is_holder() {
    let p = [
        Profile::gaussian(c(0.2, 0.1), 0.5, c(1.0, 0.0)),
        Profile::gaussian(c(-0.1, 0.2), 0.5, c(1.0, 0.0)),
    ];
    let chart = ChartSpec::new(vec![vec![1, 0], vec![0, 1], vec![1, 1]], vec![false; 3]).unwrap();
    let t = product(2, &p, vec![0, 1]);
    let cuts = vec![rational(); 3];
    let spec = QuadratureSpec::coarse();
    let i0 = reg_integral(&chart, &t, &cuts, &EpsPoint::new(vec![0.0; 3]).unwrap(), &spec).unwrap();
    let deltas = EpsPath::geometric(1e-1, 10f64.powf(-0.5), 9);
    let path = EpsPath::new(PathKind::Parabolic(vec![1.0, 1.0, 1.0]), deltas).unwrap();
    let s = sweep(&chart, &t, &cuts, &path, &spec).unwrap();
    assert_eq!(s.resonance, Some(vec![1, 1, -1]));
    let dist: Vec<f64> = s.points.iter().map(|p| p.eps.iter().map(|e| e * e).sum::<f64>().sqrt()).collect();
    let vals: Vec<Complex64> = s.points.iter().map(|p| p.value).collect();
    let errs: Vec<f64> = s.points.iter().map(|p| p.err + i0.err).collect();
    let fit = holder_estimate(&dist, &vals, i0.value, Some(&errs)).unwrap();
    assert!(fit.gamma > 0.05 && fit.residual < 0.5, "{fit:?}");
}

#[test]
fn bad_paths_are_rejected() {
    assert!(EpsPath::new(PathKind::Parabolic(vec![1.0]), vec![1e-1, 1e-2]).is_err());
    assert!(EpsPath::new(PathKind::Parabolic(vec![0.0]), EpsPath::geometric(0.1, 0.1, 4)).is_err());
    assert!(EpsPath::new(PathKind::Parabolic(vec![1.0]), vec![1e-1, 1e-1, 1e-2]).is_err());
}
